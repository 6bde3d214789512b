#pragma once
// Classification of vanishing transmission blocks for multi-mode scattering.
// Ideal-interferometer symmetries of the mode assignments give exact relations
// rho(tau) ahat(lambda) rho(tau') = Lambda ahat(lambda); a block whose spectrum
// misses Lambda must vanish.  Every predicted zero is checked against the
// numerical block weight and a disagreement raises consistency_error.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "snft/errors.hpp"
#include "snft/gamas.hpp"
#include "snft/group_function.hpp"
#include "snft/irreps.hpp"
#include "snft/scattering.hpp"
#include "snft/spectral.hpp"
#include "snft/subgroup.hpp"

namespace snft {

// A block counts as suppressed when its weight falls below
// rel_tol * (largest block weight of the pair), with an absolute floor for
// pairs whose blocks all vanish.
inline constexpr double kSuppressionRelTol = 1e-10;
inline constexpr double kSuppressionWeightFloor = 1e-24;

enum class SuppressionStatus {
    allowed,
    pauli_forbidden,
    symmetry_suppressed,
    pauli_like_suppressed,
    numerically_suppressed,
};

inline constexpr int kNumSuppressionStatuses = 5;

inline const char* to_string(SuppressionStatus s) {
    switch (s) {
        case SuppressionStatus::allowed: return "allowed";
        case SuppressionStatus::pauli_forbidden: return "pauli_forbidden";
        case SuppressionStatus::symmetry_suppressed: return "symmetry_suppressed";
        case SuppressionStatus::pauli_like_suppressed: return "pauli_like_suppressed";
        case SuppressionStatus::numerically_suppressed: return "numerically_suppressed";
    }
    return "?";
}

struct SuppressionVerdict {
    Partition sector;
    double weight = 0.0;  // Tr[ahat^dagger ahat] restricted to the block
    SuppressionStatus status = SuppressionStatus::allowed;
    std::string witness;  // mechanism behind the prediction, empty otherwise
};

enum class SymmetryKind { translation, reflection };

inline const char* to_string(SymmetryKind k) {
    return k == SymmetryKind::translation ? "translation" : "reflection";
}

// Mode relabelings v -> v - p (translation) and v -> p - v (reflection),
// both mod m, that fix the occupation multiset of `modes`.  A witness tau
// realizes the relabeling on particle slots:
//   modes[tau(x)] = modes[x] - p      (translation)
//   modes[tau(x)] = p - modes[x]      (reflection)
// The witnesses of one (kind, p) form a coset of the multiset stabilizer;
// one representative per distinct cycle type is kept, the first in odometer
// order over per-value matchings, so the ascending matching leads.
struct StateSymmetry {
    SymmetryKind kind = SymmetryKind::translation;
    int p = 0;
    std::vector<Permutation> witnesses;
};

inline std::vector<StateSymmetry> find_state_symmetries(const std::vector<int>& modes, int m) {
    if (m < 1) throw std::invalid_argument("find_state_symmetries: m < 1");
    const int n = static_cast<int>(modes.size());
    for (int v : modes)
        if (v < 0 || v >= m) throw std::invalid_argument("find_state_symmetries: mode out of range");

    std::vector<std::vector<int>> pos(static_cast<std::size_t>(m));
    for (int x = 0; x < n; ++x) pos[static_cast<std::size_t>(modes[x])].push_back(x);

    std::vector<StateSymmetry> out;
    for (int kind = 0; kind < 2; ++kind) {
        for (int p = 0; p < m; ++p) {
            const auto target = [&](int v) {
                int w = (kind == 0 ? v - p : p - v) % m;
                return w < 0 ? w + m : w;
            };
            bool closed = true;
            for (int v = 0; v < m && closed; ++v)
                closed = pos[static_cast<std::size_t>(v)].size() ==
                         pos[static_cast<std::size_t>(target(v))].size();
            if (!closed) continue;

            std::vector<int> vals;
            for (int v = 0; v < m; ++v)
                if (!pos[static_cast<std::size_t>(v)].empty()) vals.push_back(v);
            std::vector<std::vector<int>> img(vals.size());
            for (std::size_t q = 0; q < vals.size(); ++q)
                img[q] = pos[static_cast<std::size_t>(target(vals[q]))];

            StateSymmetry sym;
            sym.kind = kind == 0 ? SymmetryKind::translation : SymmetryKind::reflection;
            sym.p = p;
            std::map<std::vector<int>, Permutation> by_type;
            for (;;) {
                std::vector<int> images(static_cast<std::size_t>(n));
                for (std::size_t q = 0; q < vals.size(); ++q) {
                    const auto& src = pos[static_cast<std::size_t>(vals[q])];
                    for (std::size_t j = 0; j < src.size(); ++j)
                        images[static_cast<std::size_t>(src[j])] = img[q][j];
                }
                Permutation tau(images);
                by_type.emplace(cycle_type(tau), std::move(tau));

                std::size_t q = 0;
                while (q < vals.size() && !std::next_permutation(img[q].begin(), img[q].end())) ++q;
                if (q == vals.size()) break;
            }
            sym.witnesses.reserve(by_type.size());
            for (auto& [type, tau] : by_type) sym.witnesses.push_back(std::move(tau));
            out.push_back(std::move(sym));
        }
    }
    return out;
}

inline bool is_fourier_unitary(const Eigen::MatrixXcd& u, double tol = 1e-12) {
    const int m = static_cast<int>(u.rows());
    if (m < 1 || u.cols() != m) return false;
    return (u - fourier_matrix(m)).cwiseAbs().maxCoeff() <= tol;
}

// Fourier amplitudes factor as a(sigma) = scale * exp(2 i pi k(sigma) / m) with
// k(sigma) = sum_alpha out[alpha] * in[sigma(alpha)].  The profile is checked
// entry by entry against the literal amplitude products.
struct PhaseProfile {
    int m = 0;
    double scale = 0.0;
    std::vector<int> k;  // indexed by permutation rank
};

inline PhaseProfile phase_profile(const ScatteringSetup& s) {
    if (!is_fourier_unitary(s.unitary))
        throw std::invalid_argument("phase_profile: unitary is not the Fourier matrix");
    const int n = s.n();
    const int m = s.m();
    PhaseProfile pp;
    pp.m = m;
    pp.scale = std::pow(static_cast<double>(m), -0.5 * n);
    const std::uint64_t fn = factorial(n);
    pp.k.resize(fn);
    const GroupFunction a = amplitude_function(s);
    double worst = 0.0;
    for (std::uint64_t r = 0; r < fn; ++r) {
        const Permutation sigma = unrank(r, n);
        int k = 0;
        for (int alpha = 0; alpha < n; ++alpha)
            k += s.out_modes[static_cast<std::size_t>(alpha)] *
                 s.in_modes[static_cast<std::size_t>(sigma(alpha))];
        k %= m;
        pp.k[r] = k;
        const cplx model = pp.scale * unit_phase(k, m);
        worst = std::max(worst, std::abs(model - a.at_rank(r)));
    }
    if (worst > 1e-12)
        throw consistency_error("phase_profile: phase model deviates from amplitudes by " +
                                std::to_string(worst));
    return pp;
}

struct CloudPoint {
    cplx value;
    std::uint64_t multiplicity = 0;
};

// Multiset of amplitude values.  Exact binning for the Fourier unitary,
// tolerance clustering otherwise.
inline std::vector<CloudPoint> amplitude_cloud(const ScatteringSetup& s) {
    std::vector<CloudPoint> out;
    if (is_fourier_unitary(s.unitary)) {
        const PhaseProfile pp = phase_profile(s);
        std::vector<std::uint64_t> count(static_cast<std::size_t>(pp.m), 0);
        for (int k : pp.k) ++count[static_cast<std::size_t>(k)];
        for (int k = 0; k < pp.m; ++k)
            if (count[static_cast<std::size_t>(k)] > 0)
                out.push_back({pp.scale * unit_phase(k, pp.m), count[static_cast<std::size_t>(k)]});
        return out;
    }
    const GroupFunction a = amplitude_function(s);
    std::vector<cplx> vals(a.values().begin(), a.values().end());
    std::sort(vals.begin(), vals.end(), [](const cplx& x, const cplx& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    double amax = 0.0;
    for (const cplx& v : vals) amax = std::max(amax, std::abs(v));
    const double tol = 1e-9 * (amax > 0.0 ? amax : 1.0);
    for (const cplx& v : vals) {
        if (!out.empty() && std::abs(v - out.back().value) <= tol)
            ++out.back().multiplicity;
        else
            out.push_back({v, 1});
    }
    return out;
}

namespace detail {

// Distinct eigenphases of each conjugacy class image per block, stored as
// integers k with eigenvalue exp(2 i pi k / order).  Multiplicities follow from
// integer characters of class powers and must come out integral; the
// (n-1, 1) block must carry phase 0 with multiplicity (#cycles - 1).
class SpectrumCache {
public:
    explicit SpectrumCache(const IrrepTable& t) : num_irreps_(t.num_irreps()) {
        const int n = t.n();
        const auto& cls = t.classes();
        const int nc = static_cast<int>(cls.size());
        orders_.resize(static_cast<std::size_t>(nc));
        phases_.resize(static_cast<std::size_t>(nc) * static_cast<std::size_t>(num_irreps_));
        const int std_idx = n >= 2 ? t.index_of(Partition{{n - 1, 1}}) : -1;
        for (int c = 0; c < nc; ++c) {
            const Permutation rep = class_representative(cls[static_cast<std::size_t>(c)], n);
            const int r = permutation_order(rep);
            const int cycles = num_cycles(rep);
            orders_[static_cast<std::size_t>(c)] = r;
            std::vector<std::vector<long long>> chi(
                static_cast<std::size_t>(num_irreps_), std::vector<long long>(static_cast<std::size_t>(r)));
            Permutation pw(n);
            for (int j = 0; j < r; ++j) {
                for (int l = 0; l < num_irreps_; ++l)
                    chi[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] = t.character_int(l, pw);
                pw = compose(rep, pw);
            }
            for (int l = 0; l < num_irreps_; ++l) {
                auto& ks = phases_[index(c, l)];
                long long total = 0;
                for (int k = 0; k < r; ++k) {
                    cplx acc = 0.0;
                    for (int j = 0; j < r; ++j)
                        acc += static_cast<double>(chi[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]) *
                               std::polar(1.0, -2.0 * M_PI * static_cast<double>(k) * j / r);
                    const double mval = acc.real() / r;
                    const long long mult = std::llround(mval);
                    if (std::abs(mval - static_cast<double>(mult)) > 1e-6 ||
                        std::abs(acc.imag() / r) > 1e-6 || mult < 0)
                        throw consistency_error("block eigenphase multiplicity is not a nonnegative integer");
                    if (mult > 0) ks.push_back(k);
                    total += mult;
                    if (l == std_idx && k == 0 && mult != cycles - 1)
                        throw consistency_error("fixed-phase count of the (n-1,1) block must be #cycles - 1");
                }
                if (total != t.irrep(l).dim)
                    throw consistency_error("block eigenphase multiplicities do not sum to the dimension");
            }
        }
    }

    int order(int class_idx) const { return orders_[static_cast<std::size_t>(class_idx)]; }

    const std::vector<int>& phases(int class_idx, int irrep_idx) const {
        return phases_[index(class_idx, irrep_idx)];
    }

private:
    std::size_t index(int c, int l) const {
        return static_cast<std::size_t>(c) * static_cast<std::size_t>(num_irreps_) +
               static_cast<std::size_t>(l);
    }

    int num_irreps_;
    std::vector<int> orders_;
    std::vector<std::vector<int>> phases_;
};

// Is exp(2 i pi t / m) among {exp(2 i pi k / r) : k in ks}?
inline bool phase_in_spectrum(long long t, int m, int r, const std::vector<int>& ks) {
    const long long mod = static_cast<long long>(m) * r;
    long long lhs = (t % m) * r % mod;
    if (lhs < 0) lhs += mod;
    for (int k : ks)
        if ((lhs - static_cast<long long>(k) * m) % mod == 0) return true;
    return false;
}

// Is exp(2 i pi t / m) among the pairwise products of two such spectra?
inline bool phase_in_product_spectrum(long long t, int m, int r1, const std::vector<int>& k1,
                                      int r2, const std::vector<int>& k2) {
    const long long mod = static_cast<long long>(m) * r1 * r2;
    long long lhs = (t % m) * r1 % mod * r2 % mod;
    if (lhs < 0) lhs += mod;
    for (int a : k1)
        for (int b : k2)
            if ((lhs - (static_cast<long long>(a) * r2 + static_cast<long long>(b) * r1) * m) % mod == 0)
                return true;
    return false;
}

struct SideInfo {
    std::vector<int> modes;  // ascending
    int mode_sum = 0;
    std::vector<long long> stab_chi;        // per block, over the multiset stabilizer
    std::vector<StateSymmetry> symmetries;  // empty unless the unitary is Fourier
    std::string signature;                  // structure key for flag caching
};

}  // namespace detail

struct InputReport {
    std::vector<int> in_modes;
    std::vector<OutputEvent> events;
    Eigen::MatrixXd weights;  // events x blocks
    std::vector<std::vector<SuppressionVerdict>> verdicts;
    // Events carrying at least one numerically_suppressed block: zeros the
    // recognized mechanisms leave unexplained.  Covers in particular the
    // full-cycle events where both the (n) and the (n-1, 1) block go dark.
    std::vector<std::size_t> residual_events;
};

class SuppressionAnalyzer {
public:
    SuppressionAnalyzer(const IrrepTable& t, Eigen::MatrixXcd u)
        : t_(&t),
          u_(std::move(u)),
          n_(t.n()),
          m_(static_cast<int>(u_.rows())),
          fn_(factorial(t.n())),
          spectra_(t) {
        validate_unitary(u_);
        fourier_ = is_fourier_unitary(u_);
        scale_ = std::pow(static_cast<double>(m_), -0.5 * n_);
        perms_.reserve(fn_);
        for (std::uint64_t r = 0; r < fn_; ++r) perms_.push_back(unrank(r, n_));
        for (int x = 0; x < n_; ++x)
            for (int y = x + 1; y < n_; ++y) swap_pairs_.emplace_back(x, y);
        left_tab_.resize(swap_pairs_.size());
        right_tab_.resize(swap_pairs_.size());
        for (std::size_t s = 0; s < swap_pairs_.size(); ++s) {
            const Permutation tau = transposition(swap_pairs_[s].first, swap_pairs_[s].second, n_);
            auto& lt = left_tab_[s];
            auto& rt = right_tab_[s];
            lt.resize(fn_);
            rt.resize(fn_);
            for (std::uint64_t r = 0; r < fn_; ++r) {
                lt[r] = rank(compose(tau, perms_[r]));
                rt[r] = rank(compose(perms_[r], tau));
            }
        }
    }

    const IrrepTable& table() const { return *t_; }
    const Eigen::MatrixXcd& unitary() const { return u_; }
    int n() const { return n_; }
    int m() const { return m_; }
    bool fourier() const { return fourier_; }

    // Block weights for one input against a list of output events, one
    // Gram-style pass through the spectral basis.
    Eigen::MatrixXd weight_table(const std::vector<int>& in_modes) const {
        return make_batch(sorted_modes(in_modes), enumerate_events(n_, m_)).weights;
    }

    InputReport analyze_input(const std::vector<int>& in_modes) const {
        return analyze_events(in_modes, enumerate_events(n_, m_));
    }

    std::vector<SuppressionVerdict> analyze_pair(const std::vector<int>& in_modes,
                                                 const OutputEvent& ev) const {
        return analyze_events(in_modes, {ev}).verdicts.front();
    }

    // Eigenvalue relations only: no stabilizer character tests, no invariance
    // scans, no numeric fallback status.  Flags are still confirmed against
    // the block weights.
    std::vector<SuppressionVerdict> symmetry_verdicts(const std::vector<int>& in_modes,
                                                      const OutputEvent& ev) const {
        const std::vector<int> in_sorted = sorted_modes(in_modes);
        const detail::SideInfo in_side = side_info(in_sorted);
        const detail::SideInfo out_side = side_info(event_mode_list(ev));
        const Batch batch = make_batch(in_sorted, {ev});
        const std::vector<Flag> flags = pair_flags(in_side, out_side, false);
        return assemble(flags, batch.weights.row(0), false);
    }

    InputReport analyze_events(const std::vector<int>& in_modes,
                               std::vector<OutputEvent> events) const {
        const std::vector<int> in_sorted = sorted_modes(in_modes);
        const detail::SideInfo in_side = side_info(in_sorted);
        Batch batch = make_batch(in_sorted, std::move(events));

        InputReport report;
        report.in_modes = in_sorted;
        report.events = std::move(batch.events);
        report.weights = std::move(batch.weights);
        report.verdicts.resize(report.events.size());

        const int nl = t_->num_irreps();
        std::unordered_map<std::string, std::vector<Flag>> flag_cache;

        for (std::size_t e = 0; e < report.events.size(); ++e) {
            const detail::SideInfo out_side = side_info(event_mode_list(report.events[e]));
            auto it = flag_cache.find(out_side.signature);
            if (it == flag_cache.end())
                it = flag_cache.emplace(out_side.signature, pair_flags(in_side, out_side)).first;
            std::vector<Flag> flags = it->second;
            merge_invariance_flags(batch, e, in_side, out_side, flags);

            bool unexplained = false;
            report.verdicts[e] =
                assemble(flags, report.weights.row(static_cast<Eigen::Index>(e)), true, &unexplained);
            if (unexplained) report.residual_events.push_back(e);
        }
        return report;
    }

private:
    struct Flag {
        SuppressionStatus status = SuppressionStatus::allowed;
        std::string text;
    };

    // Flagged blocks must be numerically dark; a flagged block carrying weight
    // is a soundness failure.  With numeric_fallback, dark unflagged blocks
    // become numerically_suppressed and mark the event as unexplained.
    std::vector<SuppressionVerdict> assemble(const std::vector<Flag>& flags,
                                             const Eigen::RowVectorXd& row, bool numeric_fallback,
                                             bool* unexplained = nullptr) const {
        const double thr = std::max(kSuppressionRelTol * row.maxCoeff(), kSuppressionWeightFloor);
        std::vector<SuppressionVerdict> out;
        out.reserve(flags.size());
        for (std::size_t l = 0; l < flags.size(); ++l) {
            SuppressionVerdict v;
            v.sector = t_->irrep(static_cast<int>(l)).lambda;
            v.weight = row(static_cast<Eigen::Index>(l));
            const Flag& f = flags[l];
            if (f.status != SuppressionStatus::allowed) {
                if (v.weight >= thr)
                    throw consistency_error("suppression prediction contradicts numerics: block " +
                                            to_string(v.sector) + " weight " +
                                            std::to_string(v.weight) + " via " + f.text);
                v.status = f.status;
                v.witness = f.text;
            } else if (numeric_fallback && v.weight < thr) {
                v.status = SuppressionStatus::numerically_suppressed;
                if (unexplained) *unexplained = true;
            }
            out.push_back(std::move(v));
        }
        return out;
    }

    struct Batch {
        std::vector<OutputEvent> events;
        Eigen::MatrixXd weights;                                       // events x blocks
        Eigen::Matrix<std::int16_t, Eigen::Dynamic, Eigen::Dynamic> prof;  // Fourier phase table
        Eigen::MatrixXcd amp;                                          // literal amplitudes otherwise
    };

    static std::vector<int> sorted_modes(std::vector<int> modes) {
        if (modes.empty()) throw std::invalid_argument("suppression: empty mode list");
        std::sort(modes.begin(), modes.end());
        return modes;
    }

    detail::SideInfo side_info(std::vector<int> modes) const {
        for (int v : modes)
            if (v < 0 || v >= m_) throw std::invalid_argument("suppression: mode out of range");
        detail::SideInfo s;
        s.modes = std::move(modes);
        s.mode_sum = std::accumulate(s.modes.begin(), s.modes.end(), 0);
        s.stab_chi.resize(static_cast<std::size_t>(t_->num_irreps()));
        for (int l = 0; l < t_->num_irreps(); ++l)
            s.stab_chi[static_cast<std::size_t>(l)] = stabilizer_character_sum(*t_, l, s.modes);
        if (fourier_) s.symmetries = find_state_symmetries(s.modes, m_);
        std::ostringstream key;
        key << (s.mode_sum % m_) << '|';
        int run = 1;
        for (std::size_t x = 1; x <= s.modes.size(); ++x) {
            if (x < s.modes.size() && s.modes[x] == s.modes[x - 1]) { ++run; continue; }
            key << run << '.';
            run = 1;
        }
        key << '|';
        for (const StateSymmetry& sym : s.symmetries) {
            key << (sym.kind == SymmetryKind::translation ? 't' : 'r') << sym.p << ':';
            for (const Permutation& tau : sym.witnesses)
                key << t_->class_index(cycle_type(tau)) << ',';
            key << ';';
        }
        s.signature = key.str();
        return s;
    }

    Batch make_batch(const std::vector<int>& in_modes, std::vector<OutputEvent> events) const {
        const std::size_t E = events.size();
        std::vector<int> inperm(fn_ * static_cast<std::size_t>(n_));
        for (std::uint64_t r = 0; r < fn_; ++r)
            for (int alpha = 0; alpha < n_; ++alpha)
                inperm[r * n_ + alpha] = in_modes[static_cast<std::size_t>(perms_[r](alpha))];

        Batch b;
        b.events = std::move(events);
        Eigen::MatrixXd fr(static_cast<Eigen::Index>(fn_), static_cast<Eigen::Index>(E));
        Eigen::MatrixXd fi(static_cast<Eigen::Index>(fn_), static_cast<Eigen::Index>(E));
        if (fourier_) {
            b.prof.resize(static_cast<Eigen::Index>(fn_), static_cast<Eigen::Index>(E));
            std::vector<double> ct(static_cast<std::size_t>(m_)), st(static_cast<std::size_t>(m_));
            for (int k = 0; k < m_; ++k) {
                ct[static_cast<std::size_t>(k)] = scale_ * std::cos(2.0 * M_PI * k / m_);
                st[static_cast<std::size_t>(k)] = scale_ * std::sin(2.0 * M_PI * k / m_);
            }
            for (std::size_t e = 0; e < E; ++e) {
                const std::vector<int> out = event_mode_list(b.events[e]);
                for (std::uint64_t r = 0; r < fn_; ++r) {
                    int k = 0;
                    for (int alpha = 0; alpha < n_; ++alpha)
                        k += out[static_cast<std::size_t>(alpha)] * inperm[r * n_ + alpha];
                    k %= m_;
                    b.prof(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e)) =
                        static_cast<std::int16_t>(k);
                    fr(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e)) = ct[static_cast<std::size_t>(k)];
                    fi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e)) = st[static_cast<std::size_t>(k)];
                }
            }
        } else {
            b.amp.resize(static_cast<Eigen::Index>(fn_), static_cast<Eigen::Index>(E));
            for (std::size_t e = 0; e < E; ++e) {
                const std::vector<int> out = event_mode_list(b.events[e]);
                for (std::uint64_t r = 0; r < fn_; ++r) {
                    cplx prod = 1.0;
                    for (int alpha = 0; alpha < n_; ++alpha)
                        prod *= u_(out[static_cast<std::size_t>(alpha)], inperm[r * n_ + alpha]);
                    b.amp(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e)) = prod;
                    fr(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e)) = prod.real();
                    fi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(e)) = prod.imag();
                }
            }
        }

        const Eigen::MatrixXd& basis = t_->spectral_basis();
        const Eigen::MatrixXd gr = basis.transpose() * fr;
        const Eigen::MatrixXd gi = basis.transpose() * fi;
        const auto& offsets = t_->block_offsets();
        const int nl = t_->num_irreps();
        b.weights.resize(static_cast<Eigen::Index>(E), nl);
        for (int l = 0; l < nl; ++l) {
            const int d = t_->irrep(l).dim;
            const int len = d * d;
            for (std::size_t e = 0; e < E; ++e)
                b.weights(static_cast<Eigen::Index>(e), l) =
                    gr.col(static_cast<Eigen::Index>(e)).segment(offsets[static_cast<std::size_t>(l)], len).squaredNorm() +
                    gi.col(static_cast<Eigen::Index>(e)).segment(offsets[static_cast<std::size_t>(l)], len).squaredNorm();
        }
        return b;
    }

    std::string lambda_text(long long t) const {
        return "Lambda=exp(2 i pi " + std::to_string(t) + "/" + std::to_string(m_) + ")";
    }

    // Exclusion flags shared by every output with the same structural
    // signature: stabilizer character tests, then the symmetry relations in a
    // fixed order (input translations, output translations, joint reflections).
    std::vector<Flag> pair_flags(const detail::SideInfo& in, const detail::SideInfo& out,
                                 bool with_pauli = true) const {
        const int nl = t_->num_irreps();
        std::vector<Flag> flags(static_cast<std::size_t>(nl));
        if (with_pauli) {
            for (int l = 0; l < nl; ++l) {
                if (in.stab_chi[static_cast<std::size_t>(l)] == 0)
                    flags[static_cast<std::size_t>(l)] = {SuppressionStatus::pauli_forbidden,
                                                          "input stabilizer character sum vanishes"};
                else if (out.stab_chi[static_cast<std::size_t>(l)] == 0)
                    flags[static_cast<std::size_t>(l)] = {SuppressionStatus::pauli_forbidden,
                                                          "output stabilizer character sum vanishes"};
            }
        }

        const auto mod_m = [&](long long t) {
            t %= m_;
            return t < 0 ? t + m_ : t;
        };
        const auto apply_shift = [&](const StateSymmetry& sym, const Permutation& tau, long long t,
                                     const char* side, const char* tau_name) {
            const int c = t_->class_index(cycle_type(tau));
            const int r = spectra_.order(c);
            for (int l = 0; l < nl; ++l) {
                auto& f = flags[static_cast<std::size_t>(l)];
                if (f.status != SuppressionStatus::allowed) continue;
                if (!detail::phase_in_spectrum(t, m_, r, spectra_.phases(c, l)))
                    f = {SuppressionStatus::symmetry_suppressed,
                         std::string(side) + " translation p=" + std::to_string(sym.p) + ", " +
                             tau_name + "=" + to_cycles(tau) + ", " + lambda_text(t)};
            }
        };

        for (const StateSymmetry& sym : in.symmetries) {
            if (sym.kind != SymmetryKind::translation) continue;
            const long long t = mod_m(static_cast<long long>(sym.p) * out.mode_sum);
            for (const Permutation& tau : sym.witnesses) {
                if (tau.is_identity()) continue;
                apply_shift(sym, tau, t, "input", "tau");
            }
        }
        for (const StateSymmetry& sym : out.symmetries) {
            if (sym.kind != SymmetryKind::translation) continue;
            const long long t = mod_m(-static_cast<long long>(sym.p) * in.mode_sum);
            for (const Permutation& tau : sym.witnesses) {
                if (tau.is_identity()) continue;
                apply_shift(sym, tau, t, "output", "tau'");
            }
        }
        for (const StateSymmetry& si : in.symmetries) {
            if (si.kind != SymmetryKind::reflection) continue;
            for (const StateSymmetry& so : out.symmetries) {
                if (so.kind != SymmetryKind::reflection) continue;
                const long long t = mod_m(static_cast<long long>(n_) * si.p * so.p -
                                          static_cast<long long>(so.p) * in.mode_sum -
                                          static_cast<long long>(si.p) * out.mode_sum);
                for (const Permutation& ti : si.witnesses) {
                    const int ci = t_->class_index(cycle_type(ti));
                    for (const Permutation& to : so.witnesses) {
                        const int co = t_->class_index(cycle_type(to));
                        for (int l = 0; l < nl; ++l) {
                            auto& f = flags[static_cast<std::size_t>(l)];
                            if (f.status != SuppressionStatus::allowed) continue;
                            if (!detail::phase_in_product_spectrum(t, m_, spectra_.order(ci),
                                                                   spectra_.phases(ci, l),
                                                                   spectra_.order(co),
                                                                   spectra_.phases(co, l)))
                                f = {SuppressionStatus::symmetry_suppressed,
                                     "input reflection p=" + std::to_string(si.p) + ", tau=" +
                                         to_cycles(ti) + ", output reflection p'=" +
                                         std::to_string(so.p) + ", tau'=" + to_cycles(to) + ", " +
                                         lambda_text(t)};
                        }
                    }
                }
            }
        }
        return flags;
    }

    // Invariance groups of the amplitude profile that strictly extend the mode
    // stabilizers.  Transposition scans feed a union-find; the resulting Young
    // group is invariant as a whole because exact profile invariances compose.
    // Blocks whose character sum over the group vanishes are flagged.
    void merge_invariance_flags(const Batch& batch, std::size_t e, const detail::SideInfo& in,
                                const detail::SideInfo& out, std::vector<Flag>& flags) const {
        const Eigen::Index col = static_cast<Eigen::Index>(e);
        double eps = 0.0;
        if (!fourier_) {
            const double amax = batch.amp.col(col).cwiseAbs().maxCoeff();
            eps = 1e-12 * (amax > 0.0 ? amax : 1.0);
        }
        const auto eq = [&](std::uint64_t r1, std::uint64_t r2) {
            if (fourier_)
                return batch.prof(static_cast<Eigen::Index>(r1), col) ==
                       batch.prof(static_cast<Eigen::Index>(r2), col);
            return std::abs(batch.amp(static_cast<Eigen::Index>(r1), col) -
                            batch.amp(static_cast<Eigen::Index>(r2), col)) <= eps;
        };

        for (int side = 0; side < 2; ++side) {
            const auto& tabs = side == 0 ? left_tab_ : right_tab_;
            std::vector<int> parent(static_cast<std::size_t>(n_));
            std::iota(parent.begin(), parent.end(), 0);
            const std::function<int(int)> find = [&](int x) {
                while (parent[static_cast<std::size_t>(x)] != x) {
                    parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
                    x = parent[static_cast<std::size_t>(x)];
                }
                return x;
            };
            for (std::size_t s = 0; s < swap_pairs_.size(); ++s) {
                bool invariant = true;
                for (std::uint64_t r = 0; r < fn_ && invariant; ++r)
                    invariant = eq(tabs[s][r], r);
                if (invariant) {
                    const int a = find(swap_pairs_[s].first);
                    const int b = find(swap_pairs_[s].second);
                    if (a != b) parent[static_cast<std::size_t>(a)] = b;
                }
            }
            std::vector<int> labels(static_cast<std::size_t>(n_));
            for (int x = 0; x < n_; ++x) labels[static_cast<std::size_t>(x)] = find(x);

            const std::vector<int>& values = side == 0 ? in.modes : out.modes;
            bool extends = false;
            for (int x = 0; x < n_ && !extends; ++x)
                for (int y = x + 1; y < n_ && !extends; ++y)
                    extends = labels[static_cast<std::size_t>(x)] == labels[static_cast<std::size_t>(y)] &&
                              values[static_cast<std::size_t>(x)] != values[static_cast<std::size_t>(y)];
            if (!extends) continue;

            const Subgroup h = stabilizer(labels);
            if (!fourier_) {
                bool verified = true;
                for (const Permutation& g : h.elements) {
                    if (g.is_identity()) continue;
                    for (std::uint64_t r = 0; r < fn_ && verified; ++r) {
                        const Permutation moved =
                            side == 0 ? compose(g, perms_[r]) : compose(perms_[r], g);
                        verified = eq(rank(moved), r);
                    }
                    if (!verified) break;
                }
                if (!verified) continue;
            }

            std::ostringstream blocks;
            std::map<int, std::vector<int>> by_label;
            for (int x = 0; x < n_; ++x) by_label[labels[static_cast<std::size_t>(x)]].push_back(x);
            for (const auto& [root, members] : by_label) {
                if (members.size() < 2) continue;
                blocks << '{';
                for (std::size_t j = 0; j < members.size(); ++j)
                    blocks << (j ? " " : "") << members[j] + 1;
                blocks << '}';
            }
            const std::string text = std::string(side == 0 ? "input" : "output") +
                                     " amplitude invariance blocks " + blocks.str() +
                                     "; character sum vanishes";
            for (int l = 0; l < t_->num_irreps(); ++l) {
                auto& f = flags[static_cast<std::size_t>(l)];
                if (f.status != SuppressionStatus::allowed) continue;
                long long chi = 0;
                for (const Permutation& g : h.elements) chi += t_->character_int(l, g);
                if (chi == 0) f = {SuppressionStatus::pauli_like_suppressed, text};
            }
        }
    }

    const IrrepTable* t_;
    Eigen::MatrixXcd u_;
    int n_;
    int m_;
    std::uint64_t fn_;
    bool fourier_ = false;
    double scale_ = 0.0;
    detail::SpectrumCache spectra_;
    std::vector<Permutation> perms_;
    std::vector<std::pair<int, int>> swap_pairs_;
    std::vector<std::vector<std::uint32_t>> left_tab_, right_tab_;
};

inline std::vector<SuppressionVerdict> suppression_verdicts(const ScatteringSetup& s,
                                                            const IrrepTable& t) {
    SuppressionAnalyzer az(t, s.unitary);
    return az.analyze_pair(s.in_modes, event_from_modes(s.out_modes, s.m()));
}

// Block weights Tr[ahat(lambda)^dagger ahat(lambda)] of one setup, in table
// order.
inline std::vector<std::pair<Partition, double>> sector_weights_table(const ScatteringSetup& s,
                                                                      const IrrepTable& t) {
    if (t.n() != s.n()) throw std::invalid_argument("sector_weights_table: table size mismatch");
    const SpectralFunction ahat = ft(amplitude_function(s), t);
    std::vector<std::pair<Partition, double>> out;
    out.reserve(static_cast<std::size_t>(t.num_irreps()));
    for (int l = 0; l < t.num_irreps(); ++l)
        out.emplace_back(t.irrep(l).lambda, ahat[l].squaredNorm());
    return out;
}

// Verdicts from the eigenvalue relations alone.  Statuses are restricted to
// symmetry_suppressed and allowed; each predicted zero is still confirmed
// against the block weight.
inline std::vector<SuppressionVerdict> symmetry_suppression_verdicts(const ScatteringSetup& s,
                                                                     const IrrepTable& t) {
    SuppressionAnalyzer az(t, s.unitary);
    return az.symmetry_verdicts(s.in_modes, event_from_modes(s.out_modes, s.m()));
}

// Candidate invariance groups for the character-sum test: the two mode
// stabilizers, cyclic groups of symmetry witnesses, and Young groups found by
// amplitude-invariance scans.
inline std::vector<Subgroup> default_pauli_like_candidates(const ScatteringSetup& s) {
    std::vector<Subgroup> out;
    std::vector<std::vector<std::uint64_t>> seen;
    const auto add = [&](Subgroup h) {
        std::vector<std::uint64_t> ranks;
        ranks.reserve(h.elements.size());
        for (const Permutation& g : h.elements) ranks.push_back(rank(g));
        if (std::find(seen.begin(), seen.end(), ranks) != seen.end()) return;
        seen.push_back(std::move(ranks));
        out.push_back(std::move(h));
    };
    add(stabilizer(s.in_modes));
    add(stabilizer(s.out_modes));
    if (is_fourier_unitary(s.unitary)) {
        for (const std::vector<int>* modes : {&s.in_modes, &s.out_modes})
            for (const StateSymmetry& sym : find_state_symmetries(*modes, s.m()))
                for (const Permutation& tau : sym.witnesses)
                    if (!tau.is_identity()) add(cyclic_group(tau));
    }

    const int n = s.n();
    const GroupFunction a = amplitude_function(s);
    double amax = 0.0;
    for (const cplx& v : a.values()) amax = std::max(amax, std::abs(v));
    const double eps = 1e-12 * (amax > 0.0 ? amax : 1.0);
    const std::uint64_t fn = factorial(n);
    for (int side = 0; side < 2; ++side) {
        std::vector<int> parent(static_cast<std::size_t>(n));
        std::iota(parent.begin(), parent.end(), 0);
        const std::function<int(int)> find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x)
                x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            return x;
        };
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y) {
                const Permutation tau = transposition(x, y, n);
                bool invariant = true;
                for (std::uint64_t r = 0; r < fn && invariant; ++r) {
                    const Permutation sigma = unrank(r, n);
                    const Permutation moved = side == 0 ? compose(tau, sigma) : compose(sigma, tau);
                    invariant = std::abs(a.at_rank(rank(moved)) - a.at_rank(r)) <= eps;
                }
                if (invariant) {
                    const int rx = find(x);
                    const int ry = find(y);
                    if (rx != ry) parent[static_cast<std::size_t>(rx)] = ry;
                }
            }
        std::vector<int> labels(static_cast<std::size_t>(n));
        bool nontrivial = false;
        for (int x = 0; x < n; ++x) {
            labels[static_cast<std::size_t>(x)] = find(x);
            nontrivial = nontrivial || labels[static_cast<std::size_t>(x)] != x;
        }
        if (nontrivial) add(stabilizer(labels));
    }
    return out;
}

// Character-sum verdicts over explicitly given invariance groups.  A group is
// used only if the amplitude is invariant under it on the left or on the
// right, verified element by element; flagged blocks are confirmed against
// their numerical weight.
inline std::vector<SuppressionVerdict> pauli_like_verdicts(const ScatteringSetup& s,
                                                           const IrrepTable& t,
                                                           const std::vector<Subgroup>& candidates) {
    const int n = s.n();
    if (t.n() != n) throw std::invalid_argument("pauli_like_verdicts: table size mismatch");
    const GroupFunction a = amplitude_function(s);
    const SpectralFunction ahat = ft(a, t);
    const std::uint64_t fn = factorial(n);
    double amax = 0.0;
    for (const cplx& v : a.values()) amax = std::max(amax, std::abs(v));
    const double eps = 1e-12 * (amax > 0.0 ? amax : 1.0);

    const int nl = t.num_irreps();
    std::vector<double> weight(static_cast<std::size_t>(nl));
    double wmax = 0.0;
    for (int l = 0; l < nl; ++l) {
        weight[static_cast<std::size_t>(l)] = ahat[l].squaredNorm();
        wmax = std::max(wmax, weight[static_cast<std::size_t>(l)]);
    }
    const double thr = std::max(kSuppressionRelTol * wmax, kSuppressionWeightFloor);

    std::vector<SuppressionVerdict> out(static_cast<std::size_t>(nl));
    for (int l = 0; l < nl; ++l) {
        out[static_cast<std::size_t>(l)].sector = t.irrep(l).lambda;
        out[static_cast<std::size_t>(l)].weight = weight[static_cast<std::size_t>(l)];
    }

    for (const Subgroup& h : candidates) {
        if (h.n != n) throw std::invalid_argument("pauli_like_verdicts: subgroup size mismatch");
        bool left = true, right = true;
        for (const Permutation& g : h.elements) {
            if (g.is_identity() || !(left || right)) continue;
            for (std::uint64_t r = 0; r < fn && (left || right); ++r) {
                const Permutation sigma = unrank(r, n);
                if (left && std::abs(a.at_rank(rank(compose(g, sigma))) - a.at_rank(r)) > eps)
                    left = false;
                if (right && std::abs(a.at_rank(rank(compose(sigma, g))) - a.at_rank(r)) > eps)
                    right = false;
            }
        }
        if (!left && !right) continue;
        for (int l = 0; l < nl; ++l) {
            auto& v = out[static_cast<std::size_t>(l)];
            if (v.status != SuppressionStatus::allowed) continue;
            long long chi = 0;
            for (const Permutation& g : h.elements) chi += t.character_int(l, g);
            if (chi != 0) continue;
            if (v.weight >= thr)
                throw consistency_error("pauli-like prediction contradicts numerics: block " +
                                        to_string(v.sector) + " weight " + std::to_string(v.weight));
            v.status = SuppressionStatus::pauli_like_suppressed;
            v.witness = std::string(left ? "left" : "right") +
                        " invariance group of order " + std::to_string(h.elements.size()) +
                        "; character sum vanishes";
        }
    }
    return out;
}

enum class DedupePolicy { none, dihedral };

struct ScanOptions {
    int n = 0;
    int m = 0;
    Eigen::MatrixXcd unitary;  // empty: Fourier matrix of size m
    DedupePolicy dedupe = DedupePolicy::none;
    int threads = 1;
    const IrrepTable* table = nullptr;  // optional, built on demand otherwise
};

struct ScanSummary {
    std::uint64_t pairs = 0;
    std::uint64_t verdicts = 0;
    std::array<std::uint64_t, kNumSuppressionStatuses> status_counts{};
    std::size_t inputs = 0;
    // (input event index, output event index) of every emitted pair holding a
    // numerically_suppressed block, indexed into enumerate_events(n, m).
    std::vector<std::pair<std::size_t, std::size_t>> residual_pairs;
};

using ScanRowFn =
    std::function<void(const OutputEvent& input, const OutputEvent& output, const SuppressionVerdict&)>;

// Verdicts for every (input event, output event) pair of n particles in m
// modes.  Emission order is deterministic: input events in enumeration order,
// then output events, then blocks in table order.  The dihedral policy keeps
// one representative per orbit of the joint mode relabelings v -> v + s,
// v -> -v combined with input/output exchange; weights are invariant under
// those moves for the Fourier unitary, so only representatives are emitted.
inline ScanSummary scan(const ScanOptions& opt, const ScanRowFn& row = {}) {
    if (opt.n < 1 || opt.n > 7) throw std::invalid_argument("scan: n out of range [1, 7]");
    if (opt.m < 1 || opt.m > 8) throw std::invalid_argument("scan: m out of range [1, 8]");
    Eigen::MatrixXcd u = opt.unitary.size() == 0 ? fourier_matrix(opt.m) : opt.unitary;
    if (u.rows() != opt.m || u.cols() != opt.m)
        throw std::invalid_argument("scan: unitary size does not match m");

    std::unique_ptr<IrrepTable> owned;
    const IrrepTable* tbl = opt.table;
    if (tbl == nullptr || tbl->n() != opt.n) {
        owned = std::make_unique<IrrepTable>(build_irrep_table(opt.n));
        tbl = owned.get();
    }
    const SuppressionAnalyzer az(*tbl, u);
    if (opt.dedupe == DedupePolicy::dihedral && !az.fourier())
        throw std::invalid_argument("scan: dihedral dedupe requires the Fourier unitary");

    const std::vector<OutputEvent> events = enumerate_events(opt.n, opt.m);
    const std::size_t E = events.size();

    // Occupation images under the 2m dihedral moves, g = reflect * m + shift.
    std::vector<std::vector<std::vector<int>>> img;
    std::vector<char> maximal(E, 1);
    if (opt.dedupe == DedupePolicy::dihedral) {
        img.resize(E);
        for (std::size_t e = 0; e < E; ++e) {
            img[e].resize(static_cast<std::size_t>(2 * opt.m));
            for (int refl = 0; refl < 2; ++refl)
                for (int s = 0; s < opt.m; ++s) {
                    std::vector<int> occ(static_cast<std::size_t>(opt.m));
                    for (int v = 0; v < opt.m; ++v) {
                        int src = (v - s) % opt.m;
                        if (src < 0) src += opt.m;
                        if (refl) src = (opt.m - src) % opt.m;
                        occ[static_cast<std::size_t>(v)] =
                            events[e].occupations[static_cast<std::size_t>(src)];
                    }
                    img[e][static_cast<std::size_t>(refl * opt.m + s)] = std::move(occ);
                }
            for (const auto& o : img[e])
                if (o > events[e].occupations) { maximal[e] = 0; break; }
        }
    }
    const auto pair_canonical = [&](std::size_t ei, std::size_t eo) {
        if (opt.dedupe != DedupePolicy::dihedral) return true;
        const auto& oi = events[ei].occupations;
        const auto& oo = events[eo].occupations;
        for (std::size_t g = 0; g < img[ei].size(); ++g) {
            const auto cmp = [&](const std::vector<int>& a1, const std::vector<int>& a2) {
                return a1 != oi ? a1 > oi : a2 > oo;
            };
            if (cmp(img[ei][g], img[eo][g]) || cmp(img[eo][g], img[ei][g])) return false;
        }
        return true;
    };

    std::vector<std::size_t> inputs;
    for (std::size_t e = 0; e < E; ++e)
        if (maximal[e]) inputs.push_back(e);

    ScanSummary sum;
    sum.inputs = inputs.size();
    const auto emit = [&](std::size_t ei, const InputReport& rep) {
        for (std::size_t eo = 0; eo < E; ++eo) {
            if (!pair_canonical(ei, eo)) continue;
            ++sum.pairs;
            if (std::binary_search(rep.residual_events.begin(), rep.residual_events.end(), eo))
                sum.residual_pairs.emplace_back(ei, eo);
            for (const SuppressionVerdict& v : rep.verdicts[eo]) {
                ++sum.verdicts;
                ++sum.status_counts[static_cast<std::size_t>(v.status)];
                if (row) row(events[ei], events[eo], v);
            }
        }
    };

    const int threads = std::max(1, opt.threads);
    if (threads == 1) {
        for (std::size_t ei : inputs) emit(ei, az.analyze_input(event_mode_list(events[ei])));
        return sum;
    }

    // Chunked pipeline: a chunk of inputs is analyzed in parallel, then
    // emitted in order, keeping memory proportional to the chunk size.
    const std::size_t chunk = static_cast<std::size_t>(2 * threads);
    for (std::size_t base = 0; base < inputs.size(); base += chunk) {
        const std::size_t count = std::min(chunk, inputs.size() - base);
        std::vector<InputReport> reports(count);
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t j = next.fetch_add(1);
                    if (j >= count) return;
                    try {
                        reports[j] = az.analyze_input(event_mode_list(events[inputs[base + j]]));
                    } catch (...) {
                        const std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        for (std::thread& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
        for (std::size_t j = 0; j < count; ++j) emit(inputs[base + j], reports[j]);
    }
    return sum;
}

}  // namespace snft
