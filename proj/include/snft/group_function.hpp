#pragma once
// Complex-valued functions on S_n, stored densely by rank.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "snft/permutation.hpp"
#include "snft/subgroup.hpp"

namespace snft {

using cplx = std::complex<double>;

class GroupFunction {
public:
    GroupFunction() = default;
    explicit GroupFunction(int n)
        : n_(n), vals_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(factorial(n)))) {}

    static GroupFunction delta(const Permutation& sigma) {
        GroupFunction f(sigma.size());
        f.vals_[static_cast<Eigen::Index>(rank(sigma))] = 1.0;
        return f;
    }

    // Uniform weight 1/|H| on the subgroup, zero elsewhere.
    static GroupFunction indicator(const Subgroup& h) {
        GroupFunction f(h.n);
        const cplx w = 1.0 / static_cast<double>(h.size());
        for (const Permutation& e : h.elements) f.vals_[static_cast<Eigen::Index>(rank(e))] = w;
        return f;
    }

    int n() const { return n_; }
    Eigen::Index size() const { return vals_.size(); }

    cplx operator()(const Permutation& sigma) const {
        return vals_[static_cast<Eigen::Index>(rank(sigma))];
    }
    cplx at_rank(std::uint64_t r) const { return vals_[static_cast<Eigen::Index>(r)]; }
    void set_rank(std::uint64_t r, cplx v) { vals_[static_cast<Eigen::Index>(r)] = v; }
    void set(const Permutation& sigma, cplx v) { set_rank(rank(sigma), v); }

    const Eigen::VectorXcd& values() const { return vals_; }
    Eigen::VectorXcd& values() { return vals_; }

private:
    int n_ = 0;
    Eigen::VectorXcd vals_;
};

// f_tau(sigma) = f(tau^{-1} . sigma).
inline GroupFunction shift(const GroupFunction& f, const Permutation& tau) {
    GroupFunction out(f.n());
    const Permutation tinv = inverse(tau);
    for (std::uint64_t r = 0; r < factorial(f.n()); ++r)
        out.set_rank(r, f.at_rank(rank(compose(tinv, unrank(r, f.n())))));
    return out;
}

// (f * g)(sigma) = sum_tau f(sigma . tau^{-1}) g(tau).
inline GroupFunction convolve(const GroupFunction& f, const GroupFunction& g) {
    if (f.n() != g.n()) throw std::invalid_argument("convolve: size mismatch");
    const int n = f.n();
    const std::uint64_t fn = factorial(n);
    const auto all = all_permutations(n);
    std::vector<Permutation> inv(all.size());
    for (std::uint64_t r = 0; r < fn; ++r) inv[r] = inverse(all[r]);
    GroupFunction out(n);
    for (std::uint64_t t = 0; t < fn; ++t) {
        const cplx gv = g.at_rank(t);
        if (gv == 0.0) continue;
        for (std::uint64_t s = 0; s < fn; ++s)
            out.set_rank(s, out.at_rank(s) + f.at_rank(rank(compose(all[s], inv[t]))) * gv);
    }
    return out;
}

// f_star(sigma) = conj(f(sigma^{-1})).
inline GroupFunction star(const GroupFunction& f) {
    GroupFunction out(f.n());
    for (std::uint64_t r = 0; r < factorial(f.n()); ++r)
        out.set_rank(rank(inverse(unrank(r, f.n()))), std::conj(f.at_rank(r)));
    return out;
}

// Bilinear pairing (f, g) = sum_sigma f(sigma^{-1}) g(sigma).
inline cplx scalar_product(const GroupFunction& f, const GroupFunction& g) {
    if (f.n() != g.n()) throw std::invalid_argument("scalar_product: size mismatch");
    cplx s = 0.0;
    for (std::uint64_t r = 0; r < factorial(f.n()); ++r)
        s += f.at_rank(rank(inverse(unrank(r, f.n())))) * g.at_rank(r);
    return s;
}

inline double norm_squared(const GroupFunction& f) { return f.values().squaredNorm(); }

}  // namespace snft
