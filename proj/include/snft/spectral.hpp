#pragma once
// Fourier transform on S_n: f_hat(lambda) = sum_sigma f(sigma) rho^lambda(sigma),
// inverse f(sigma) = sum_lambda (d_lambda/n!) Tr[rho^lambda(sigma^{-1}) f_hat(lambda)].

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "snft/group_function.hpp"
#include "snft/irreps.hpp"

namespace snft {

struct SpectralFunction {
    int n = 0;
    std::vector<Eigen::MatrixXcd> blocks;  // aligned with IrrepTable irrep order

    Eigen::MatrixXcd& operator[](std::size_t i) { return blocks[i]; }
    const Eigen::MatrixXcd& operator[](std::size_t i) const { return blocks[i]; }
};

inline SpectralFunction zero_spectral(const IrrepTable& t) {
    SpectralFunction s;
    s.n = t.n();
    for (const Irrep& ir : t.irreps()) s.blocks.push_back(Eigen::MatrixXcd::Zero(ir.dim, ir.dim));
    return s;
}

namespace detail {

inline SpectralFunction unflatten(const Eigen::VectorXcd& flat, const IrrepTable& t) {
    SpectralFunction out = zero_spectral(t);
    for (int l = 0; l < t.num_irreps(); ++l) {
        const int d = t.irrep(l).dim;
        const int off = t.block_offsets()[static_cast<std::size_t>(l)];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out.blocks[l](i, j) = flat[off + i * d + j];
    }
    return out;
}

}  // namespace detail

inline SpectralFunction ft(const GroupFunction& f, const IrrepTable& t) {
    if (f.n() != t.n()) throw std::invalid_argument("ft: size mismatch");
    const Eigen::MatrixXd& basis = t.spectral_basis();
    Eigen::VectorXcd flat(basis.cols());
    flat.real() = basis.transpose() * f.values().real();
    flat.imag() = basis.transpose() * f.values().imag();
    return detail::unflatten(flat, t);
}

inline GroupFunction ift(const SpectralFunction& s, const IrrepTable& t) {
    if (s.n != t.n()) throw std::invalid_argument("ift: size mismatch");
    const double fn = static_cast<double>(factorial(t.n()));
    Eigen::VectorXcd weighted(static_cast<Eigen::Index>(factorial(t.n())));
    for (int l = 0; l < t.num_irreps(); ++l) {
        const int d = t.irrep(l).dim;
        const int off = t.block_offsets()[static_cast<std::size_t>(l)];
        const double w = static_cast<double>(d) / fn;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) weighted[off + i * d + j] = w * s.blocks[l](i, j);
    }
    const Eigen::MatrixXd& basis = t.spectral_basis();
    GroupFunction f(t.n());
    f.values().real() = basis * weighted.real();
    f.values().imag() = basis * weighted.imag();
    return f;
}

// Single-level coset decomposition over the subgroup fixing the largest
// letter: f_hat(lambda) = sum_i rho(c_i) sum_tau f(c_i . tau) rho(tau), with
// the inner sums assembled from one S_{n-1} transform per coset.
inline SpectralFunction fast_ft(const GroupFunction& f, const IrrepTable& t) {
    if (f.n() != t.n()) throw std::invalid_argument("fast_ft: size mismatch");
    const int n = t.n();
    if (n == 1) return ft(f, t);
    const IrrepTable& sub = t.subgroup_table();
    const Eigen::MatrixXd& subbasis = sub.spectral_basis();
    const std::uint64_t fsub = factorial(n - 1);

    std::vector<Permutation> lifted;
    lifted.reserve(static_cast<std::size_t>(fsub));
    for (std::uint64_t r = 0; r < fsub; ++r) lifted.push_back(embed(unrank(r, n - 1), n));

    // Corner shapes of each lambda in increasing row order, as sub-table indices.
    std::vector<std::vector<int>> corners(static_cast<std::size_t>(t.num_irreps()));
    for (int l = 0; l < t.num_irreps(); ++l) {
        const Partition& lam = t.irrep(l).lambda;
        for (int r = 0; r < lam.rows(); ++r) {
            if (r + 1 < lam.rows() && lam.parts[r] == lam.parts[r + 1]) continue;
            std::vector<int> parts = lam.parts;
            --parts[r];
            if (parts[r] == 0) parts.pop_back();
            corners[static_cast<std::size_t>(l)].push_back(sub.index_of(Partition(parts)));
        }
    }

    SpectralFunction out = zero_spectral(t);
    Eigen::VectorXcd fi(static_cast<Eigen::Index>(fsub));
    for (int i = 0; i < n; ++i) {
        const Permutation ci = t.coset_representative(i);
        for (std::uint64_t r = 0; r < fsub; ++r)
            fi[static_cast<Eigen::Index>(r)] = f.at_rank(rank(compose(ci, lifted[r])));
        Eigen::VectorXcd ghat(static_cast<Eigen::Index>(fsub));
        ghat.real() = subbasis.transpose() * fi.real();
        ghat.imag() = subbasis.transpose() * fi.imag();
        for (int l = 0; l < t.num_irreps(); ++l) {
            const int d = t.irrep(l).dim;
            Eigen::MatrixXcd inner = Eigen::MatrixXcd::Zero(d, d);
            int off = 0;
            for (int mu : corners[static_cast<std::size_t>(l)]) {
                const int dm = sub.irrep(mu).dim;
                const int moff = sub.block_offsets()[static_cast<std::size_t>(mu)];
                for (int a = 0; a < dm; ++a)
                    for (int b = 0; b < dm; ++b) inner(off + a, off + b) = ghat[moff + a * dm + b];
                off += dm;
            }
            if (off != d) throw consistency_error("fast_ft: corner blocks do not fill the irrep");
            out.blocks[static_cast<std::size_t>(l)] += t.matrix(l, ci) * inner;
        }
    }
    return out;
}

// Parseval pairing: sum_lambda (d_lambda/n!) Tr[A(lambda) B(lambda)].
inline cplx parseval_product(const SpectralFunction& a, const SpectralFunction& b,
                             const IrrepTable& t) {
    cplx s = 0.0;
    const double fn = static_cast<double>(factorial(t.n()));
    for (int l = 0; l < t.num_irreps(); ++l)
        s += static_cast<double>(t.irrep(l).dim) / fn * (a.blocks[l] * b.blocks[l]).trace();
    return s;
}

// (f*g, h) in spectral form: sum_lambda (d_lambda/n!) Tr[f g h].
inline cplx triple_product(const SpectralFunction& f, const SpectralFunction& g,
                           const SpectralFunction& h, const IrrepTable& t) {
    cplx s = 0.0;
    const double fn = static_cast<double>(factorial(t.n()));
    for (int l = 0; l < t.num_irreps(); ++l)
        s += static_cast<double>(t.irrep(l).dim) / fn * (f.blocks[l] * g.blocks[l] * h.blocks[l]).trace();
    return s;
}

inline SpectralFunction adjoint(const SpectralFunction& a) {
    SpectralFunction out = a;
    for (auto& b : out.blocks) b = b.adjoint().eval();
    return out;
}

inline SpectralFunction multiply(const SpectralFunction& a, const SpectralFunction& b) {
    SpectralFunction out = a;
    for (std::size_t l = 0; l < out.blocks.size(); ++l) out.blocks[l] = a.blocks[l] * b.blocks[l];
    return out;
}

// Projector onto the mu-isotypic component of an arbitrary unitary
// representation rho of S_n: (d_mu/n!) sum_sigma chi_mu(sigma^{-1}) rho(sigma).
inline Eigen::MatrixXcd isotypic_projector(
    const IrrepTable& t, int mu,
    const std::function<Eigen::MatrixXcd(const Permutation&)>& rho) {
    const std::uint64_t fn = factorial(t.n());
    Eigen::MatrixXcd p;
    for (std::uint64_t r = 0; r < fn; ++r) {
        const Permutation sigma = unrank(r, t.n());
        const Eigen::MatrixXcd m = rho(sigma);
        if (p.size() == 0) p = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
        p += t.character(mu, inverse(sigma)) * m;
    }
    return static_cast<double>(t.irrep(mu).dim) / static_cast<double>(fn) * p;
}

}  // namespace snft
