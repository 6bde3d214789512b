#pragma once
// Partial distinguishability of the input state, encoded as a function j on
// S_n built from pairwise overlaps of internal states (Gram matrix), discrete
// internal labels, or given explicitly. j is normalized so that j(id) = 1,
// which makes the sector weights sum to one.

#include <Eigen/Dense>

#include "snft/counting.hpp"
#include "snft/group_function.hpp"
#include "snft/spectral.hpp"
#include "snft/subgroup.hpp"

namespace snft {

enum class Statistics { bosons, fermions };

struct DistinguishabilityModel {
    enum class Kind { gram, labels, explicit_j } kind = Kind::gram;
    Eigen::MatrixXcd gram;    // pairwise internal-state overlaps, one row per particle
    std::vector<int> labels;  // discrete internal states, one per particle
    GroupFunction jfun;       // explicit j

    static DistinguishabilityModel from_gram(Eigen::MatrixXcd s) {
        return DistinguishabilityModel{Kind::gram, std::move(s), {}, {}};
    }
    static DistinguishabilityModel from_labels(std::vector<int> l) {
        return DistinguishabilityModel{Kind::labels, {}, std::move(l), {}};
    }
    static DistinguishabilityModel from_j(GroupFunction j) {
        return DistinguishabilityModel{Kind::explicit_j, {}, {}, std::move(j)};
    }
};

inline void validate_gram(const Eigen::MatrixXcd& s, double tol = 1e-8) {
    if (s.rows() != s.cols()) throw std::invalid_argument("gram matrix must be square");
    if ((s - s.adjoint()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("gram matrix must be Hermitian");
    for (Eigen::Index k = 0; k < s.rows(); ++k)
        if (std::abs(s(k, k) - 1.0) > tol)
            throw std::invalid_argument("gram matrix must have unit diagonal");
    const Eigen::MatrixXcd sym = 0.5 * (s + s.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("gram matrix must be positive semidefinite");
}

// J(sigma) = eps(sigma) prod_alpha S(sigma(alpha), alpha), with eps the sign
// character for fermions and 1 for bosons.
inline GroupFunction gram_overlap_function(const Eigen::MatrixXcd& s, Statistics st) {
    const int n = static_cast<int>(s.rows());
    GroupFunction j(n);
    for (std::uint64_t r = 0; r < factorial(n); ++r) {
        const Permutation sigma = unrank(r, n);
        cplx v = st == Statistics::fermions ? static_cast<double>(sign(sigma)) : 1.0;
        for (int al = 0; al < n; ++al) v *= s(sigma(al), al);
        j.set_rank(r, v);
    }
    return j;
}

// Two-sided average over the input-mode stabilizer, normalized so j(id) = 1:
// j = I_i * J * I_i / (I_i, J).
inline GroupFunction project_to_modes(const GroupFunction& bigj, const std::vector<int>& in_modes) {
    const Subgroup st = stabilizer(in_modes);
    cplx denom = 0.0;
    for (const Permutation& e : st.elements) denom += bigj(e);
    denom /= static_cast<double>(st.size());
    if (std::abs(denom) < kDenominatorGuard)
        throw std::invalid_argument("internal state annihilates the mode configuration");
    const GroupFunction ind = GroupFunction::indicator(st);
    GroupFunction j = convolve(ind, convolve(bigj, ind));
    j.values() /= denom;
    return j;
}

inline GroupFunction j_from_model(const DistinguishabilityModel& model, Statistics st,
                                  const std::vector<int>& in_modes) {
    const int n = static_cast<int>(in_modes.size());
    switch (model.kind) {
        case DistinguishabilityModel::Kind::gram: {
            if (model.gram.rows() != n)
                throw std::invalid_argument("j_from_model: gram size mismatch");
            validate_gram(model.gram);
            return project_to_modes(gram_overlap_function(model.gram, st), in_modes);
        }
        case DistinguishabilityModel::Kind::labels: {
            if (static_cast<int>(model.labels.size()) != n)
                throw std::invalid_argument("j_from_model: label count mismatch");
            // Orthogonal internal states: J is the signed indicator of the
            // label stabilizer.
            GroupFunction bigj(n);
            for (const Permutation& e : stabilizer(model.labels).elements)
                bigj.set(e, st == Statistics::fermions ? static_cast<double>(sign(e)) : 1.0);
            return project_to_modes(bigj, in_modes);
        }
        case DistinguishabilityModel::Kind::explicit_j: {
            if (model.jfun.n() != n)
                throw std::invalid_argument("j_from_model: explicit j size mismatch");
            GroupFunction j = model.jfun;
            const cplx at_id = j(Permutation(n));
            if (std::abs(at_id) < kDenominatorGuard)
                throw std::invalid_argument("j_from_model: explicit j vanishes at the identity");
            j.values() /= at_id;
            return j;
        }
    }
    throw std::invalid_argument("j_from_model: unknown kind");
}

// p_lambda = (d_lambda/n!) Tr j_hat(lambda); sums to j(id) = 1.
inline std::vector<double> sector_weights(const GroupFunction& j, const IrrepTable& t) {
    const SpectralFunction jhat = ft(j, t);
    std::vector<double> w;
    const double fn = static_cast<double>(factorial(t.n()));
    for (int l = 0; l < t.num_irreps(); ++l)
        w.push_back(static_cast<double>(t.irrep(l).dim) / fn *
                    detail::real_checked(jhat.blocks[l].trace(), "sector_weights"));
    return w;
}

// Purity of the reduced internal state: (1/n!) sum_l (d_l/n!) Tr[j_hat(lambda)^2].
inline double state_purity(const GroupFunction& j, const IrrepTable& t) {
    const SpectralFunction jhat = ft(j, t);
    double s = 0.0;
    const double fn = static_cast<double>(factorial(t.n()));
    for (int l = 0; l < t.num_irreps(); ++l)
        s += static_cast<double>(t.irrep(l).dim) / fn *
             detail::real_checked((jhat.blocks[l] * jhat.blocks[l]).trace(), "state_purity");
    return s / fn;
}

struct PositivityReport {
    double hermiticity_residual = 0.0;  // max over blocks of ||j_hat - j_hat+||
    double min_eigenvalue = 0.0;        // over all blocks of (j_hat + j_hat+)/2
    bool ok = false;
};

inline PositivityReport positivity_check(const GroupFunction& j, const IrrepTable& t,
                                         double tol = 1e-10) {
    const SpectralFunction jhat = ft(j, t);
    PositivityReport rep;
    rep.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& b : jhat.blocks) {
        rep.hermiticity_residual =
            std::max(rep.hermiticity_residual, (b - b.adjoint()).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (b + b.adjoint()),
                                                           Eigen::EigenvaluesOnly);
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, es.eigenvalues().minCoeff());
    }
    rep.ok = rep.hermiticity_residual <= tol && rep.min_eigenvalue >= -tol;
    return rep;
}

// Internal superposition c whose pure state reproduces the statistics of j:
// c_hat(lambda) is the Hermitian square root of j_hat(lambda).
inline GroupFunction emulate_pure(const GroupFunction& j, const IrrepTable& t) {
    const PositivityReport rep = positivity_check(j, t);
    if (!rep.ok) throw std::invalid_argument("emulate_pure: j is not a valid internal state");
    SpectralFunction jhat = ft(j, t);
    for (auto& b : jhat.blocks) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (b + b.adjoint()));
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        b = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    }
    return ift(jhat, t);
}

}  // namespace snft
