#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "snft/irreps.hpp"

using namespace snft;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
    Eigen::MatrixXd m(2, 2);
    m << a, b, c, d;
    return m;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("S_3 standard irrep matches the documented basis", "[irreps]") {
    const IrrepTable t = build_irrep_table(3);
    const int l = t.index_of(Partition({2, 1}));
    const double s = std::sqrt(3.0) / 2.0;

    // Basis order puts the tableau with letter 3 in the first row first; in
    // this basis the swap of letters 1,2 is diag(-1, 1).
    CHECK(max_abs(t.matrix(l, Permutation(3)) - Eigen::MatrixXd::Identity(2, 2)) < 1e-15);
    CHECK(max_abs(t.matrix(l, from_cycles("(1 2)", 3)) - mat2(-1, 0, 0, 1)) < 1e-15);
    CHECK(max_abs(t.matrix(l, from_cycles("(2 3)", 3)) - mat2(0.5, s, s, -0.5)) < 1e-12);
    CHECK(max_abs(t.matrix(l, from_cycles("(1 3)", 3)) - mat2(0.5, -s, -s, -0.5)) < 1e-12);
    CHECK(max_abs(t.matrix(l, from_cycles("(1 2 3)", 3)) - mat2(-0.5, -s, s, -0.5)) < 1e-12);
    CHECK(max_abs(t.matrix(l, from_cycles("(1 3 2)", 3)) - mat2(-0.5, s, -s, -0.5)) < 1e-12);

    // Traces: 2, 0, 0, 0, -1, -1.
    CHECK(t.matrix(l, Permutation(3)).trace() == Catch::Approx(2.0));
    CHECK(std::abs(t.matrix(l, from_cycles("(1 2)", 3)).trace()) < 1e-15);
    CHECK(t.matrix(l, from_cycles("(1 2 3)", 3)).trace() == Catch::Approx(-1.0));
}

TEST_CASE("trivial and sign irreps", "[irreps]") {
    for (int n = 2; n <= 6; ++n) {
        const IrrepTable t = build_irrep_table(n);
        const int triv = t.index_of(Partition({n}));
        const int sgn = t.index_of(Partition(std::vector<int>(static_cast<std::size_t>(n), 1)));
        std::mt19937_64 rng(100 + n);
        std::uniform_int_distribution<std::uint64_t> pick(0, factorial(n) - 1);
        for (int k = 0; k < 20; ++k) {
            const Permutation p = unrank(pick(rng), n);
            CHECK(t.matrix(triv, p)(0, 0) == Catch::Approx(1.0));
            CHECK(t.matrix(sgn, p)(0, 0) == Catch::Approx(static_cast<double>(sign(p))));
        }
    }
}

TEST_CASE("irrep matrices are orthogonal and respect composition", "[irreps]") {
    for (int n = 2; n <= 4; ++n) {
        const IrrepTable t = build_irrep_table(n);
        const auto all = all_permutations(n);
        for (int l = 0; l < t.num_irreps(); ++l) {
            const int d = t.irrep(l).dim;
            for (const auto& a : all) {
                const Eigen::MatrixXd ma = t.matrix(l, a);
                REQUIRE(max_abs(ma * ma.transpose() - Eigen::MatrixXd::Identity(d, d)) < 1e-12);
                REQUIRE(max_abs(t.matrix(l, inverse(a)) - ma.transpose()) < 1e-12);
                for (const auto& b : all)
                    REQUIRE(max_abs(t.matrix(l, compose(a, b)) - ma * t.matrix(l, b)) < 1e-12);
            }
        }
    }
    for (int n = 5; n <= 6; ++n) {
        const IrrepTable t = build_irrep_table(n);
        std::mt19937_64 rng(200 + n);
        std::uniform_int_distribution<std::uint64_t> pick(0, factorial(n) - 1);
        for (int k = 0; k < 50; ++k) {
            const Permutation a = unrank(pick(rng), n);
            const Permutation b = unrank(pick(rng), n);
            for (int l = 0; l < t.num_irreps(); ++l) {
                const int d = t.irrep(l).dim;
                const Eigen::MatrixXd ma = t.matrix(l, a);
                REQUIRE(max_abs(ma * ma.transpose() - Eigen::MatrixXd::Identity(d, d)) < 1e-11);
                REQUIRE(max_abs(t.matrix(l, compose(a, b)) - ma * t.matrix(l, b)) < 1e-11);
            }
        }
    }
}

TEST_CASE("grand orthogonality for n = 3 and sampled n = 4", "[irreps]") {
    {
        const IrrepTable t = build_irrep_table(3);
        const auto all = all_permutations(3);
        for (int l = 0; l < t.num_irreps(); ++l)
            for (int m = 0; m < t.num_irreps(); ++m) {
                const int dl = t.irrep(l).dim, dm = t.irrep(m).dim;
                for (int a = 0; a < dl; ++a)
                    for (int b = 0; b < dl; ++b)
                        for (int c = 0; c < dm; ++c)
                            for (int e = 0; e < dm; ++e) {
                                double sum = 0;
                                for (const auto& p : all)
                                    sum += t.matrix(l, inverse(p))(a, b) * t.matrix(m, p)(c, e);
                                const double expect =
                                    (l == m && a == e && b == c) ? 6.0 / dl : 0.0;
                                REQUIRE(sum == Catch::Approx(expect).margin(1e-12));
                            }
            }
    }
    {
        const IrrepTable t = build_irrep_table(4);
        const auto all = all_permutations(4);
        std::mt19937_64 rng(404);
        for (int trial = 0; trial < 200; ++trial) {
            std::uniform_int_distribution<int> li(0, t.num_irreps() - 1);
            const int l = li(rng), m = li(rng);
            const int dl = t.irrep(l).dim, dm = t.irrep(m).dim;
            std::uniform_int_distribution<int> ai(0, dl - 1), ci(0, dm - 1);
            const int a = ai(rng), b = ai(rng), c = ci(rng), e = ci(rng);
            double sum = 0;
            for (const auto& p : all)
                sum += t.matrix(l, inverse(p))(a, b) * t.matrix(m, p)(c, e);
            const double expect = (l == m && a == e && b == c) ? 24.0 / dl : 0.0;
            REQUIRE(sum == Catch::Approx(expect).margin(1e-11));
        }
    }
}

TEST_CASE("character table of S_3 and orthogonality relations", "[irreps]") {
    const IrrepTable t = build_irrep_table(3);
    // Classes in canonical order: (3), (2,1), (1,1,1).
    REQUIRE(t.classes().size() == 3);
    CHECK(t.classes()[0] == Partition({3}));
    CHECK(t.class_size(0) == 2);
    CHECK(t.class_size(1) == 3);
    CHECK(t.class_size(2) == 1);
    const int std_idx = t.index_of(Partition({2, 1}));
    CHECK(t.character_int(std_idx, 0) == -1);
    CHECK(t.character_int(std_idx, 1) == 0);
    CHECK(t.character_int(std_idx, 2) == 2);

    for (int n = 2; n <= 7; ++n) {
        const IrrepTable tn = build_irrep_table(n);
        const int nc = static_cast<int>(tn.classes().size());
        // Row orthogonality: sum_c |C| chi_l(c) chi_m(c) = n! delta_lm.
        for (int l = 0; l < tn.num_irreps(); ++l)
            for (int m = l; m < tn.num_irreps(); ++m) {
                double s = 0;
                for (int c = 0; c < nc; ++c)
                    s += static_cast<double>(tn.class_size(c)) * tn.character_by_class(l, c) *
                         tn.character_by_class(m, c);
                REQUIRE(s == Catch::Approx(l == m ? static_cast<double>(factorial(n)) : 0.0)
                                 .margin(1e-6));
            }
        // Column orthogonality: sum_l chi_l(c) chi_l(c') = delta_cc' n!/|C|.
        for (int c = 0; c < nc; ++c)
            for (int c2 = c; c2 < nc; ++c2) {
                double s = 0;
                for (int l = 0; l < tn.num_irreps(); ++l)
                    s += tn.character_by_class(l, c) * tn.character_by_class(l, c2);
                const double expect =
                    c == c2 ? static_cast<double>(factorial(n)) / static_cast<double>(tn.class_size(c)) : 0.0;
                REQUIRE(s == Catch::Approx(expect).margin(1e-6));
            }
        // Conjugate partition characters differ by the sign character.
        for (int l = 0; l < tn.num_irreps(); ++l) {
            const int lc = tn.conjugate_index(l);
            for (int c = 0; c < nc; ++c) {
                const Permutation rep = class_representative(tn.classes()[c], n);
                REQUIRE(tn.character_int(lc, c) == sign(rep) * tn.character_int(l, c));
            }
        }
    }
}

TEST_CASE("restriction to the subgroup fixing the largest letter is block-diagonal", "[irreps]") {
    for (int n = 3; n <= 6; ++n) {
        const IrrepTable t = build_irrep_table(n);
        const IrrepTable& sub = t.subgroup_table();
        std::mt19937_64 rng(300 + n);
        std::uniform_int_distribution<std::uint64_t> pick(0, factorial(n - 1) - 1);
        for (int k = 0; k < 25; ++k) {
            const Permutation tau = unrank(pick(rng), n - 1);
            const Permutation lifted = embed(tau, n);
            for (int l = 0; l < t.num_irreps(); ++l) {
                const Eigen::MatrixXd big = t.matrix(l, lifted);
                // Corners in increasing row order give the sub-shapes in the
                // order the tableau basis groups them.
                const Partition& lam = t.irrep(l).lambda;
                int off = 0;
                for (int r = 0; r < lam.rows(); ++r) {
                    const bool corner = r + 1 == lam.rows() || lam.parts[r] > lam.parts[r + 1];
                    if (!corner) continue;
                    std::vector<int> parts = lam.parts;
                    --parts[r];
                    if (parts[r] == 0) parts.pop_back();
                    const int mu = sub.index_of(Partition(parts));
                    const int d = sub.irrep(mu).dim;
                    REQUIRE(max_abs(big.block(off, off, d, d) - sub.matrix(mu, tau)) < 1e-12);
                    off += d;
                }
                REQUIRE(off == t.irrep(l).dim);
                // Off-diagonal blocks vanish.
                Eigen::MatrixXd probe = big;
                off = 0;
                for (int r = 0; r < lam.rows(); ++r) {
                    const bool corner = r + 1 == lam.rows() || lam.parts[r] > lam.parts[r + 1];
                    if (!corner) continue;
                    std::vector<int> parts = lam.parts;
                    --parts[r];
                    if (parts[r] == 0) parts.pop_back();
                    const int d = sub.irrep(sub.index_of(Partition(parts))).dim;
                    probe.block(off, off, d, d).setZero();
                    off += d;
                }
                REQUIRE(max_abs(probe) < 1e-12);
            }
        }
    }
}

TEST_CASE("plain changes visit every permutation once", "[irreps]") {
    for (int n = 1; n <= 6; ++n) {
        const auto swaps = plain_changes(n);
        REQUIRE(swaps.size() == factorial(n) - 1);
        Permutation p(n);
        std::set<std::uint64_t> seen{rank(p)};
        for (int k : swaps) {
            p = compose(p, transposition(k, k + 1, n));
            seen.insert(rank(p));
        }
        REQUIRE(seen.size() == factorial(n));
    }
}

TEST_CASE("spectral basis rows flatten the irrep matrices", "[irreps]") {
    const IrrepTable t = build_irrep_table(4);
    const Eigen::MatrixXd& basis = t.spectral_basis();
    REQUIRE(basis.rows() == 24);
    REQUIRE(basis.cols() == 24);
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<std::uint64_t> pick(0, 23);
    for (int k = 0; k < 12; ++k) {
        const std::uint64_t r = pick(rng);
        const Permutation p = unrank(r, 4);
        for (int l = 0; l < t.num_irreps(); ++l) {
            const int d = t.irrep(l).dim;
            const int off = t.block_offsets()[static_cast<std::size_t>(l)];
            const Eigen::MatrixXd m = t.matrix(l, p);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    REQUIRE(basis(static_cast<Eigen::Index>(r), off + i * d + j) ==
                            Catch::Approx(m(i, j)).margin(1e-13));
        }
    }
}

TEST_CASE("coset representatives tile the group", "[irreps]") {
    const int n = 5;
    const IrrepTable t = build_irrep_table(n);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < n; ++i) {
        const Permutation ci = t.coset_representative(i);
        CHECK(ci(n - 1) == i);
        for (std::uint64_t r = 0; r < factorial(n - 1); ++r)
            seen.insert(rank(compose(ci, embed(unrank(r, n - 1), n))));
    }
    REQUIRE(seen.size() == factorial(n));
    CHECK(t.coset_representative(n - 1).is_identity());
}

TEST_CASE("table guards its supported range", "[irreps]") {
    CHECK_THROWS_AS(build_irrep_table(0), std::invalid_argument);
    CHECK_THROWS_AS(build_irrep_table(9), std::invalid_argument);
    CHECK(build_irrep_table(1).num_irreps() == 1);
}
