#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "snft/counting.hpp"
#include "snft/distinguishability.hpp"
#include "snft/scattering.hpp"

using namespace snft;
using Catch::Approx;

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

std::vector<int> digits(std::int64_t idx, int n, int base) {
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int a = n - 1; a >= 0; --a) {
        d[static_cast<std::size_t>(a)] = static_cast<int>(idx % base);
        idx /= base;
    }
    return d;
}

std::int64_t from_digits(const std::vector<int>& d, int base) {
    std::int64_t idx = 0;
    for (int v : d) idx = idx * base + v;
    return idx;
}

// Factor permutation on (C^base)^(x n): factor a of the image carries what
// factor sigma^{-1}(a) carried before.
Eigen::VectorXcd permute_factors(const Eigen::VectorXcd& v, const Permutation& sigma, int base) {
    const int n = sigma.size();
    Eigen::VectorXcd out(v.size());
    for (std::int64_t y = 0; y < v.size(); ++y) {
        const std::vector<int> yd = digits(y, n, base);
        std::vector<int> xd(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) xd[static_cast<std::size_t>(a)] = yd[static_cast<std::size_t>(sigma(a))];
        out[y] = v[from_digits(xd, base)];
    }
    return out;
}

Eigen::MatrixXcd tensor_perm_matrix(const Permutation& sigma, int base) {
    const std::int64_t dim = static_cast<std::int64_t>(std::pow(base, sigma.size()));
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::int64_t x = 0; x < dim; ++x) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
        e[x] = 1.0;
        const Eigen::VectorXcd img = permute_factors(e, sigma, base);
        for (std::int64_t y = 0; y < dim; ++y)
            if (img[y] != 0.0) p(y, x) = img[y];
    }
    return p;
}

std::vector<Eigen::VectorXcd> random_internal_states(int n, int k, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Eigen::VectorXcd> phis;
    for (int a = 0; a < n; ++a) {
        Eigen::VectorXcd v(k);
        for (int s = 0; s < k; ++s) v[s] = cplx(g(rng), g(rng));
        phis.push_back(v.normalized());
    }
    return phis;
}

Eigen::MatrixXcd gram_of(const std::vector<Eigen::VectorXcd>& phis) {
    const int n = static_cast<int>(phis.size());
    Eigen::MatrixXcd s(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s(a, b) = phis[static_cast<std::size_t>(a)].dot(phis[static_cast<std::size_t>(b)]);
    return s;
}

// First-quantized reference: N particles with mode labels in_modes and
// internal vectors phis, (anti)symmetrized over mode and internal factors
// jointly, sent through u on the mode factor, detected by mode occupation.
std::vector<double> dense_event_probabilities(const Eigen::MatrixXcd& u,
                                              const std::vector<int>& in_modes,
                                              const std::vector<Eigen::VectorXcd>& phis,
                                              Statistics st) {
    const int n = static_cast<int>(in_modes.size());
    const int m = static_cast<int>(u.rows());
    const int k = static_cast<int>(phis.front().size());
    const int base = m * k;
    const std::int64_t dim = static_cast<std::int64_t>(std::pow(base, n));

    std::vector<Eigen::VectorXcd> parts;
    for (int a = 0; a < n; ++a) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(base);
        v.segment(in_modes[static_cast<std::size_t>(a)] * k, k) = phis[static_cast<std::size_t>(a)];
        parts.push_back(v);
    }
    Eigen::VectorXcd chi(dim);
    for (std::int64_t x = 0; x < dim; ++x) {
        const std::vector<int> xd = digits(x, n, base);
        cplx v = 1.0;
        for (int a = 0; a < n; ++a) v *= parts[static_cast<std::size_t>(a)][xd[static_cast<std::size_t>(a)]];
        chi[x] = v;
    }

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    for (std::uint64_t r = 0; r < factorial(n); ++r) {
        const Permutation sigma = unrank(r, n);
        const double w = st == Statistics::fermions ? static_cast<double>(sign(sigma)) : 1.0;
        psi += w * permute_factors(chi, sigma, base);
    }
    psi /= static_cast<double>(factorial(n));
    const double nrm = psi.norm();
    if (nrm < 1e-12) throw std::invalid_argument("dense oracle: state is annihilated");
    psi /= nrm;

    const Eigen::MatrixXcd single = kron(u, Eigen::MatrixXcd::Identity(k, k));
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Identity(1, 1);
    for (int a = 0; a < n; ++a) full = kron(full, single).eval();
    const Eigen::VectorXcd out = full * psi;

    const auto events = enumerate_events(n, m);
    std::vector<double> probs(events.size(), 0.0);
    for (std::int64_t y = 0; y < dim; ++y) {
        const std::vector<int> yd = digits(y, n, base);
        std::vector<int> occ(static_cast<std::size_t>(m), 0);
        for (int a = 0; a < n; ++a) ++occ[static_cast<std::size_t>(yd[static_cast<std::size_t>(a)] / k)];
        for (std::size_t e = 0; e < events.size(); ++e)
            if (events[e].occupations == occ) {
                probs[e] += std::norm(out[y]);
                break;
            }
    }
    return probs;
}

}  // namespace

TEST_CASE("tensor factor permutation is a homomorphism", "[distinguishability]") {
    std::mt19937_64 rng(31);
    const int base = 2;
    for (int trial = 0; trial < 10; ++trial) {
        const Permutation a = unrank(rng() % factorial(3), 3);
        const Permutation b = unrank(rng() % factorial(3), 3);
        const Eigen::MatrixXcd lhs = tensor_perm_matrix(a, base) * tensor_perm_matrix(b, base);
        const Eigen::MatrixXcd rhs = tensor_perm_matrix(compose(a, b), base);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("gram validation rejects malformed inputs", "[distinguishability]") {
    Eigen::MatrixXcd bad(2, 2);
    bad << 1.0, cplx(0.0, 1.0), cplx(0.0, 1.0), 1.0;
    CHECK_THROWS_AS(validate_gram(bad), std::invalid_argument);

    bad << 2.0, 0.0, 0.0, 1.0;
    CHECK_THROWS_AS(validate_gram(bad), std::invalid_argument);

    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(validate_gram(bad), std::invalid_argument);

    Eigen::MatrixXcd good(2, 2);
    good << 1.0, cplx(0.3, 0.4), cplx(0.3, -0.4), 1.0;
    CHECK_NOTHROW(validate_gram(good));

    CHECK_THROWS_AS(validate_gram(Eigen::MatrixXcd::Identity(2, 3)), std::invalid_argument);
}

TEST_CASE("overlap function from explicit internal states", "[distinguishability]") {
    std::mt19937_64 rng(32);
    const int n = 3, k = 3;
    const auto phis = random_internal_states(n, k, rng);
    const Eigen::MatrixXcd s = gram_of(phis);
    CHECK_NOTHROW(validate_gram(s));

    const GroupFunction bigj = gram_overlap_function(s, Statistics::bosons);
    CHECK(std::abs(bigj(Permutation(n)) - 1.0) < 1e-12);

    // J(sigma) must equal the overlap of the product state with its permuted copy.
    for (std::uint64_t r = 0; r < factorial(n); ++r) {
        const Permutation sigma = unrank(r, n);
        Eigen::VectorXcd phi(static_cast<std::int64_t>(std::pow(k, n)));
        Eigen::VectorXcd prod(phi.size());
        for (std::int64_t x = 0; x < phi.size(); ++x) {
            const std::vector<int> xd = digits(x, n, k);
            cplx v = 1.0;
            for (int a = 0; a < n; ++a) v *= phis[static_cast<std::size_t>(a)][xd[static_cast<std::size_t>(a)]];
            prod[x] = v;
        }
        const Eigen::VectorXcd permuted = permute_factors(prod, sigma, k);
        const cplx overlap = prod.dot(permuted);
        CHECK(std::abs(bigj(sigma) - overlap) < 1e-12);
    }

    // The star symmetry j(sigma^{-1}) = conj(j(sigma)) holds for any overlap function.
    for (std::uint64_t r = 0; r < factorial(n); ++r) {
        const Permutation sigma = unrank(r, n);
        CHECK(std::abs(bigj(inverse(sigma)) - std::conj(bigj(sigma))) < 1e-12);
    }
}

TEST_CASE("model projection normalizes at the identity", "[distinguishability]") {
    std::mt19937_64 rng(33);
    const int n = 3;
    const auto phis = random_internal_states(n, 3, rng);
    const Eigen::MatrixXcd s = gram_of(phis);
    for (const std::vector<int>& in : {std::vector<int>{0, 1, 2}, std::vector<int>{0, 0, 1}}) {
        for (Statistics st : {Statistics::bosons, Statistics::fermions}) {
            const GroupFunction j = j_from_model(DistinguishabilityModel::from_gram(s), st, in);
            CHECK(std::abs(j(Permutation(n)) - 1.0) < 1e-12);
            // Projected j is constant on the mode stabilizer.
            for (const Permutation& e : stabilizer(in).elements)
                CHECK(std::abs(j(e) - j(Permutation(n))) < 1e-12);
        }
    }

    GroupFunction scaled(3);
    scaled.values().setConstant(2.5);
    const GroupFunction jn = j_from_model(DistinguishabilityModel::from_j(scaled),
                                          Statistics::bosons, {0, 1, 2});
    CHECK(std::abs(jn(Permutation(3)) - 1.0) < 1e-14);

    GroupFunction zero_id(3);
    zero_id.set(transposition(0, 1, 3), 1.0);
    CHECK_THROWS_AS(j_from_model(DistinguishabilityModel::from_j(zero_id), Statistics::bosons,
                                 {0, 1, 2}),
                    std::invalid_argument);
}

TEST_CASE("sector weights of the three-particle reference states", "[distinguishability]") {
    const IrrepTable t = build_irrep_table(3);
    const std::vector<int> in{0, 1, 2};

    SECTION("fully distinguishable labels") {
        const GroupFunction j =
            j_from_model(DistinguishabilityModel::from_labels({0, 1, 2}), Statistics::bosons, in);
        const auto w = sector_weights(j, t);
        REQUIRE(w.size() == 3);
        CHECK(w[0] == Approx(1.0 / 6.0).margin(1e-12));
        CHECK(w[1] == Approx(4.0 / 6.0).margin(1e-12));
        CHECK(w[2] == Approx(1.0 / 6.0).margin(1e-12));
        CHECK(state_purity(j, t) == Approx(1.0 / 6.0).margin(1e-12));
    }

    SECTION("fully indistinguishable") {
        Eigen::MatrixXcd s = Eigen::MatrixXcd::Ones(3, 3);
        const GroupFunction j =
            j_from_model(DistinguishabilityModel::from_gram(s), Statistics::bosons, in);
        const auto w = sector_weights(j, t);
        CHECK(w[0] == Approx(1.0).margin(1e-12));
        CHECK(std::abs(w[1]) < 1e-12);
        CHECK(std::abs(w[2]) < 1e-12);
        CHECK(state_purity(j, t) == Approx(1.0).margin(1e-12));
    }

    SECTION("two equal labels") {
        const GroupFunction j =
            j_from_model(DistinguishabilityModel::from_labels({5, 5, 9}), Statistics::bosons, in);
        const auto w = sector_weights(j, t);
        CHECK(w[0] == Approx(1.0 / 3.0).margin(1e-12));
        CHECK(w[1] == Approx(2.0 / 3.0).margin(1e-12));
        CHECK(std::abs(w[2]) < 1e-12);
    }

    SECTION("weights sum to one for random states") {
        std::mt19937_64 rng(34);
        for (int trial = 0; trial < 5; ++trial) {
            const auto phis = random_internal_states(3, 2 + trial % 3, rng);
            const GroupFunction j = j_from_model(DistinguishabilityModel::from_gram(gram_of(phis)),
                                                 Statistics::bosons, in);
            const auto w = sector_weights(j, t);
            double total = 0.0;
            for (double v : w) {
                CHECK(v > -1e-12);
                total += v;
            }
            CHECK(total == Approx(1.0).margin(1e-10));
            const double p = state_purity(j, t);
            CHECK(p > 1.0 / 6.0 - 1e-12);
            CHECK(p < 1.0 + 1e-12);
        }
    }
}

TEST_CASE("pair overlap interpolates the two-particle weights", "[distinguishability]") {
    const IrrepTable t = build_irrep_table(2);
    for (double c : {0.0, 0.5, 1.0}) {
        Eigen::MatrixXcd s(2, 2);
        s << 1.0, c, c, 1.0;
        const GroupFunction j =
            j_from_model(DistinguishabilityModel::from_gram(s), Statistics::bosons, {0, 1});
        const auto w = sector_weights(j, t);
        CHECK(w[0] == Approx((1.0 + c * c) / 2.0).margin(1e-12));
        CHECK(w[1] == Approx((1.0 - c * c) / 2.0).margin(1e-12));
        CHECK(state_purity(j, t) == Approx((1.0 + c * c * c * c) / 2.0).margin(1e-12));
    }
}

TEST_CASE("sector weights match tensor space isotypic projections", "[distinguishability]") {
    std::mt19937_64 rng(35);
    const int n = 3, k = 3;
    const IrrepTable t = build_irrep_table(n);
    const auto phis = random_internal_states(n, k, rng);
    const GroupFunction j = j_from_model(DistinguishabilityModel::from_gram(gram_of(phis)),
                                         Statistics::bosons, {0, 1, 2});

    // Internal density operator of the symmetrized state with distinct modes:
    // the uniform mixture of factor-permuted product states.
    const std::int64_t dim = static_cast<std::int64_t>(std::pow(k, n));
    Eigen::VectorXcd prod(dim);
    for (std::int64_t x = 0; x < dim; ++x) {
        const std::vector<int> xd = digits(x, n, k);
        cplx v = 1.0;
        for (int a = 0; a < n; ++a) v *= phis[static_cast<std::size_t>(a)][xd[static_cast<std::size_t>(a)]];
        prod[x] = v;
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::uint64_t r = 0; r < factorial(n); ++r) {
        const Eigen::VectorXcd v = permute_factors(prod, unrank(r, n), k);
        rho += v * v.adjoint();
    }
    rho /= static_cast<double>(factorial(n));

    const auto w = sector_weights(j, t);
    double total = 0.0;
    for (int l = 0; l < t.num_irreps(); ++l) {
        const Eigen::MatrixXcd proj = isotypic_projector(
            t, l, [&](const Permutation& sigma) { return tensor_perm_matrix(sigma, k); });
        const double wl = (rho * proj).trace().real();
        CHECK(w[static_cast<std::size_t>(l)] == Approx(wl).margin(1e-10));
        total += wl;
    }
    CHECK(total == Approx(1.0).margin(1e-10));
    CHECK(state_purity(j, t) == Approx((rho * rho).trace().real()).margin(1e-10));
}

TEST_CASE("counting with overlap models matches the dense reference", "[distinguishability]") {
    std::mt19937_64 rng(36);
    const int n = 3, m = 3, k = 3;
    const IrrepTable t = build_irrep_table(n);
    const Eigen::MatrixXcd u = haar_random_unitary(m, rng);
    const auto phis = random_internal_states(n, k, rng);
    const Eigen::MatrixXcd s = gram_of(phis);

    for (const std::vector<int>& in : {std::vector<int>{0, 1, 2}, std::vector<int>{0, 0, 1}}) {
        for (Statistics st : {Statistics::bosons, Statistics::fermions}) {
            const std::vector<double> dense = dense_event_probabilities(u, in, phis, st);
            const GroupFunction j = j_from_model(DistinguishabilityModel::from_gram(s), st, in);
            const ScatteringSetup setup = make_setup(u, in, std::vector<int>(n, 0));
            const auto events = enumerate_events(n, m);
            double total = 0.0;
            for (std::size_t e = 0; e < events.size(); ++e) {
                const double p = counting_partial(setup, j, events[e], t);
                CHECK(p == Approx(dense[e]).margin(1e-10));
                total += p;
            }
            CHECK(total == Approx(1.0).margin(1e-10));
        }
    }
}

TEST_CASE("two particle dense reference at the beam splitter", "[distinguishability]") {
    std::mt19937_64 rng(37);
    const auto phis = random_internal_states(2, 2, rng);
    const double overlap2 = std::norm(phis[0].dot(phis[1]));

    const auto dense =
        dense_event_probabilities(beamsplitter_matrix(), {0, 1}, phis, Statistics::bosons);
    const auto events = enumerate_events(2, 2);
    for (std::size_t e = 0; e < events.size(); ++e) {
        if (events[e].occupations == std::vector<int>{1, 1})
            CHECK(dense[e] == Approx((1.0 - overlap2) / 2.0).margin(1e-12));
        else
            CHECK(dense[e] == Approx((1.0 + overlap2) / 4.0).margin(1e-12));
    }
}

TEST_CASE("statistics duality swaps conjugate sectors", "[distinguishability]") {
    std::mt19937_64 rng(38);
    const int n = 4;
    const IrrepTable t = build_irrep_table(n);
    const auto phis = random_internal_states(n, 3, rng);
    const Eigen::MatrixXcd s = gram_of(phis);

    const SpectralFunction bos = ft(gram_overlap_function(s, Statistics::bosons), t);
    const SpectralFunction fer = ft(gram_overlap_function(s, Statistics::fermions), t);

    for (int l = 0; l < t.num_irreps(); ++l) {
        const int lc = t.conjugate_index(l);
        REQUIRE(t.irrep(l).dim == t.irrep(lc).dim);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eb(bos.blocks[static_cast<std::size_t>(l)]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ef(fer.blocks[static_cast<std::size_t>(lc)]);
        // Spectra agree even though the matrices live in different bases.
        CHECK((eb.eigenvalues() - ef.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("positivity check accepts states and rejects non states", "[distinguishability]") {
    std::mt19937_64 rng(39);
    const IrrepTable t3 = build_irrep_table(3);
    const IrrepTable t4 = build_irrep_table(4);

    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + trial % 2;
        const IrrepTable& t = n == 3 ? t3 : t4;
        const auto phis = random_internal_states(n, 2 + trial % 3, rng);
        std::vector<int> in(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) in[static_cast<std::size_t>(a)] = (trial + a) % 2 == 0 ? 0 : a;
        const GroupFunction j = j_from_model(DistinguishabilityModel::from_gram(gram_of(phis)),
                                             Statistics::bosons, in);
        const PositivityReport rep = positivity_check(j, t);
        CHECK(rep.ok);
        CHECK(rep.hermiticity_residual < 1e-10);
        CHECK(rep.min_eigenvalue > -1e-10);
    }

    // A delta at a transposition transforms with eigenvalues of both signs.
    const GroupFunction bad = GroupFunction::delta(transposition(0, 1, 3));
    const PositivityReport rep = positivity_check(bad, t3);
    CHECK_FALSE(rep.ok);
    CHECK(rep.min_eigenvalue < -0.5);
}

TEST_CASE("emulated pure state reproduces mixed state counting", "[distinguishability]") {
    std::mt19937_64 rng(40);
    const int n = 3, m = 4;
    const IrrepTable t = build_irrep_table(n);
    const Eigen::MatrixXcd u = haar_random_unitary(m, rng);

    for (const std::vector<int>& in : {std::vector<int>{0, 1, 3}, std::vector<int>{0, 0, 2}}) {
        const auto phis = random_internal_states(n, 3, rng);
        const GroupFunction j = j_from_model(DistinguishabilityModel::from_gram(gram_of(phis)),
                                             Statistics::bosons, in);
        const GroupFunction c = emulate_pure(j, t);

        // The emulated amplitudes square back to j in every sector.
        const SpectralFunction chat = ft(c, t);
        const SpectralFunction jhat = ft(j, t);
        for (int l = 0; l < t.num_irreps(); ++l) {
            const auto& cb = chat.blocks[static_cast<std::size_t>(l)];
            CHECK((cb.adjoint() * cb - jhat.blocks[static_cast<std::size_t>(l)])
                      .cwiseAbs()
                      .maxCoeff() < 1e-10);
        }

        const ScatteringSetup s = make_setup(u, in, std::vector<int>(n, 0));
        for (const OutputEvent& ev : enumerate_events(n, m))
            CHECK(counting_superposition(s, c, ev, t) ==
                  Approx(counting_partial(s, j, ev, t)).margin(1e-10));
    }

    CHECK_THROWS_AS(emulate_pure(GroupFunction::delta(transposition(0, 1, 3)), t),
                    std::invalid_argument);
}

TEST_CASE("superposition counting equals projected overlap counting", "[distinguishability]") {
    std::mt19937_64 rng(41);
    const int n = 3, m = 3;
    const IrrepTable t = build_irrep_table(n);
    const Eigen::MatrixXcd u = haar_random_unitary(m, rng);
    std::normal_distribution<double> g(0.0, 1.0);

    for (const std::vector<int>& in : {std::vector<int>{0, 1, 2}, std::vector<int>{1, 1, 2}}) {
        GroupFunction c(n);
        for (std::uint64_t r = 0; r < factorial(n); ++r) c.set_rank(r, cplx(g(rng), g(rng)));
        const GroupFunction j = project_to_modes(convolve(star(c), c), in);
        const ScatteringSetup s = make_setup(u, in, std::vector<int>(n, 0));
        for (const OutputEvent& ev : enumerate_events(n, m))
            CHECK(counting_superposition(s, c, ev, t) ==
                  Approx(counting_partial(s, j, ev, t)).margin(1e-10));
    }
}

TEST_CASE("label models annihilate impossible fermionic configurations", "[distinguishability]") {
    // Two fermions with the same label in the same mode have no valid state.
    CHECK_THROWS_AS(j_from_model(DistinguishabilityModel::from_labels({4, 4, 7}),
                                 Statistics::fermions, {0, 0, 1}),
                    std::invalid_argument);
    // Different labels lift the exclusion.
    CHECK_NOTHROW(j_from_model(DistinguishabilityModel::from_labels({4, 5, 7}),
                               Statistics::fermions, {0, 0, 1}));
}
