#pragma once
// Many-particle scattering amplitudes: N particles entering a M-mode unitary
// in modes i_1..i_N and detected in modes o_1..o_N. The permutation amplitude
// is a(sigma) = prod_alpha A[alpha][sigma(alpha)] with A[alpha][beta] =
// U[o_alpha][i_beta].

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "snft/group_function.hpp"
#include "snft/irreps.hpp"

namespace snft {

// exp(2 i pi k / m).  Quarter-turn angles get exact unit values so that
// cancellations such as the two-photon bunching zero are exact in floating
// point.
inline cplx unit_phase(long long k, long long m) {
    k %= m;
    if (k < 0) k += m;
    if (4 * k % m == 0) {
        static const cplx quarter[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
        return quarter[4 * k / m];
    }
    return std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m));
}

inline Eigen::MatrixXcd fourier_matrix(int m) {
    if (m < 1) throw std::invalid_argument("fourier_matrix: need m >= 1");
    Eigen::MatrixXcd u(m, m);
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            u(r, c) = norm * unit_phase(static_cast<long long>(r) * c, m);
    return u;
}

inline Eigen::MatrixXcd beamsplitter_matrix() {
    Eigen::MatrixXcd u(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    u << s, s, s, -s;
    return u;
}

inline Eigen::MatrixXcd haar_random_unitary(int m, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd a(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) a(r, c) = cplx(g(rng), g(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fixing the phases of R's diagonal makes the distribution Haar uniform.
    for (int c = 0; c < m; ++c) q.col(c) *= r(c, c) / std::abs(r(c, c));
    return q;
}

inline double unitarity_residual(const Eigen::MatrixXcd& u) {
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
        .cwiseAbs()
        .maxCoeff();
}

inline void validate_unitary(const Eigen::MatrixXcd& u, double tol = 1e-8) {
    if (u.rows() != u.cols()) throw std::invalid_argument("unitary must be square");
    if (unitarity_residual(u) > tol)
        throw std::invalid_argument("matrix is not unitary within tolerance");
}

struct ScatteringSetup {
    Eigen::MatrixXcd unitary;   // rows are output modes, columns input modes
    std::vector<int> in_modes;  // 0-based modes, one per particle
    std::vector<int> out_modes;

    int n() const { return static_cast<int>(in_modes.size()); }
    int m() const { return static_cast<int>(unitary.rows()); }
};

inline ScatteringSetup make_setup(Eigen::MatrixXcd u, std::vector<int> in_modes,
                                  std::vector<int> out_modes, double tol = 1e-8) {
    validate_unitary(u, tol);
    if (in_modes.size() != out_modes.size())
        throw std::invalid_argument("make_setup: particle numbers differ");
    const int m = static_cast<int>(u.rows());
    for (int v : in_modes)
        if (v < 0 || v >= m) throw std::invalid_argument("make_setup: input mode out of range");
    for (int v : out_modes)
        if (v < 0 || v >= m) throw std::invalid_argument("make_setup: output mode out of range");
    return ScatteringSetup{std::move(u), std::move(in_modes), std::move(out_modes)};
}

inline Eigen::MatrixXcd amplitude_matrix(const ScatteringSetup& s) {
    const int n = s.n();
    Eigen::MatrixXcd a(n, n);
    for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be) a(al, be) = s.unitary(s.out_modes[al], s.in_modes[be]);
    return a;
}

inline GroupFunction amplitude_function(const ScatteringSetup& s) {
    const int n = s.n();
    const Eigen::MatrixXcd a = amplitude_matrix(s);
    GroupFunction f(n);
    for (std::uint64_t r = 0; r < factorial(n); ++r) {
        const Permutation sigma = unrank(r, n);
        cplx v = 1.0;
        for (int al = 0; al < n; ++al) v *= a(al, sigma(al));
        f.set_rank(r, v);
    }
    return f;
}

// Ingestion path for amplitudes coming from outside this library.
inline GroupFunction amplitude_function(int n, const std::function<cplx(const Permutation&)>& cb) {
    GroupFunction f(n);
    for (std::uint64_t r = 0; r < factorial(n); ++r) f.set_rank(r, cb(unrank(r, n)));
    return f;
}

// imm_lambda(A) = sum_sigma chi_lambda(sigma) prod_alpha A[alpha][sigma(alpha)].
inline cplx immanant(const Eigen::MatrixXcd& a, const IrrepTable& t, int lam) {
    const int n = static_cast<int>(a.rows());
    if (n != t.n()) throw std::invalid_argument("immanant: size mismatch");
    cplx s = 0.0;
    for (std::uint64_t r = 0; r < factorial(n); ++r) {
        const Permutation sigma = unrank(r, n);
        cplx v = 1.0;
        for (int al = 0; al < n; ++al) v *= a(al, sigma(al));
        s += static_cast<double>(t.character_int(lam, sigma)) * v;
    }
    return s;
}

inline cplx permanent_definition(const Eigen::MatrixXcd& a) {
    const int n = static_cast<int>(a.rows());
    cplx s = 0.0;
    for (std::uint64_t r = 0; r < factorial(n); ++r) {
        const Permutation sigma = unrank(r, n);
        cplx v = 1.0;
        for (int al = 0; al < n; ++al) v *= a(al, sigma(al));
        s += v;
    }
    return s;
}

// Ryser's formula with Gray-code subset updates, O(2^n n).
inline cplx permanent(const Eigen::MatrixXcd& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return 1.0;
    Eigen::VectorXcd row_sums = Eigen::VectorXcd::Zero(n);
    cplx total = 0.0;
    std::uint64_t gray = 0;
    int popcount = 0;
    for (std::uint64_t k = 1; k < (std::uint64_t(1) << n); ++k) {
        const std::uint64_t next = k ^ (k >> 1);
        const std::uint64_t changed = next ^ gray;
        const int bit = std::countr_zero(changed);
        if (next & changed) {
            row_sums += a.col(bit);
            ++popcount;
        } else {
            row_sums -= a.col(bit);
            --popcount;
        }
        gray = next;
        cplx prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= row_sums[i];
        total += ((n - popcount) % 2 == 0 ? 1.0 : -1.0) * prod;
    }
    return total;
}

inline cplx determinant(const Eigen::MatrixXcd& a) { return a.determinant(); }

struct OutputEvent {
    std::vector<int> occupations;  // one entry per mode, summing to the particle number

    int particles() const { return std::accumulate(occupations.begin(), occupations.end(), 0); }
    int modes() const { return static_cast<int>(occupations.size()); }
};

inline std::vector<int> event_mode_list(const OutputEvent& ev) {
    std::vector<int> modes;
    for (int m = 0; m < ev.modes(); ++m)
        for (int k = 0; k < ev.occupations[m]; ++k) modes.push_back(m);
    return modes;
}

inline OutputEvent event_from_modes(const std::vector<int>& modes, int m) {
    OutputEvent ev{std::vector<int>(static_cast<std::size_t>(m), 0)};
    for (int v : modes) {
        if (v < 0 || v >= m) throw std::invalid_argument("event_from_modes: mode out of range");
        ++ev.occupations[v];
    }
    return ev;
}

inline std::uint64_t event_multiplicity(const OutputEvent& ev) {
    std::uint64_t s = 1;
    for (int c : ev.occupations) s *= factorial(c);
    return s;
}

// All events with the first mode count decreasing; C(n+m-1, n) entries.
inline std::vector<OutputEvent> enumerate_events(int n, int m) {
    if (m <= 0 || n < 0) throw std::invalid_argument("enumerate_events: bad arguments");
    std::vector<OutputEvent> out;
    std::vector<int> occ(static_cast<std::size_t>(m), 0);
    const std::function<void(int, int)> rec = [&](int mode, int left) {
        if (mode == m - 1) {
            occ[mode] = left;
            out.push_back(OutputEvent{occ});
            return;
        }
        for (int k = left; k >= 0; --k) {
            occ[mode] = k;
            rec(mode + 1, left - k);
        }
    };
    rec(0, n);
    return out;
}

}  // namespace snft
