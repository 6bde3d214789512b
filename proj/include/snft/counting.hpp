#pragma once
// Counting statistics for N particles behind an M-mode unitary. The event
// argument fixes the output side of the setup; the setup's own output modes
// are ignored here. All probabilities refer to collision events (occupation
// patterns), so stabilizer orders divide out the redundancy of mode lists.

#include <cmath>

#include "snft/gamas.hpp"
#include "snft/scattering.hpp"
#include "snft/spectral.hpp"

namespace snft {

constexpr double kDenominatorGuard = 1e-14;

namespace detail {

inline ScatteringSetup with_event(const ScatteringSetup& s, const OutputEvent& ev) {
    if (ev.particles() != s.n())
        throw std::invalid_argument("counting: event particle number mismatch");
    if (ev.modes() != s.m()) throw std::invalid_argument("counting: event mode count mismatch");
    return ScatteringSetup{s.unitary, s.in_modes, event_mode_list(ev)};
}

inline double real_checked(cplx v, const char* what) {
    if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real())))
        throw consistency_error(std::string(what) + ": trace is not real");
    return v.real();
}

}  // namespace detail

// Particles prepared in the internal superposition encoded by c:
// P = [sum_l d_l Tr(a+ c+ c a)] / (|stab_i| |stab_o| sum_l d_l Tr(I_i c+ c)).
inline double counting_superposition(const ScatteringSetup& s, const GroupFunction& c,
                                     const OutputEvent& ev, const IrrepTable& t) {
    const ScatteringSetup w = detail::with_event(s, ev);
    const SpectralFunction ahat = ft(amplitude_function(w), t);
    const SpectralFunction chat = ft(c, t);
    const SpectralFunction ihat = ft(GroupFunction::indicator(stabilizer(w.in_modes)), t);

    cplx num = 0.0, den = 0.0;
    for (int l = 0; l < t.num_irreps(); ++l) {
        const double d = static_cast<double>(t.irrep(l).dim);
        const Eigen::MatrixXcd cc = chat.blocks[l].adjoint() * chat.blocks[l];
        num += d * (ahat.blocks[l].adjoint() * cc * ahat.blocks[l]).trace();
        den += d * (ihat.blocks[l] * cc).trace();
    }
    const double den_r = detail::real_checked(den, "counting_superposition");
    if (std::abs(den_r) < kDenominatorGuard)
        throw std::invalid_argument("counting_superposition: input state is annihilated");
    const double stab = static_cast<double>(stabilizer_size(w.in_modes)) *
                        static_cast<double>(event_multiplicity(ev));
    return detail::real_checked(num, "counting_superposition") / (den_r * stab);
}

// Internal superpositions reproducing ideal statistics: constant for bosons,
// alternating for fermions.
inline GroupFunction boson_internal(int n) {
    GroupFunction c(n);
    c.values().setConstant(1.0);
    return c;
}

inline GroupFunction fermion_internal(int n) {
    GroupFunction c(n);
    for (std::uint64_t r = 0; r < factorial(n); ++r)
        c.set_rank(r, static_cast<double>(sign(unrank(r, n))));
    return c;
}

struct SectorProbability {
    double value = 0.0;
    bool admissible = true;
};

// Input state projected onto the isotypic component lambda:
// P = Tr[a_hat(lambda)+ a_hat(lambda)] / (|stab_i| |stab_o| Tr[I_i(lambda)]).
inline SectorProbability counting_sector(const ScatteringSetup& s, const Partition& lambda,
                                         const OutputEvent& ev, const IrrepTable& t) {
    const ScatteringSetup w = detail::with_event(s, ev);
    const int l = t.index_of(lambda);
    const long long chi_sum = stabilizer_character_sum(t, l, w.in_modes);
    if (chi_sum == 0) return SectorProbability{0.0, false};

    const SpectralFunction ahat = ft(amplitude_function(w), t);
    const double weight = ahat.blocks[static_cast<std::size_t>(l)].squaredNorm();
    // Tr I_i(lambda) = chi_sum / |stab_i|, so the stabilizer order cancels.
    const double p = weight / (static_cast<double>(chi_sum) *
                               static_cast<double>(event_multiplicity(ev)));
    return SectorProbability{p, true};
}

// Fully distinguishable particles: P = perm(|A|^2) / |stab_o|.
inline double counting_distinguishable(const ScatteringSetup& s, const OutputEvent& ev) {
    const ScatteringSetup w = detail::with_event(s, ev);
    const Eigen::MatrixXcd a = amplitude_matrix(w);
    const cplx p = permanent(a.cwiseAbs2().cast<cplx>().eval());
    return detail::real_checked(p, "counting_distinguishable") /
           static_cast<double>(event_multiplicity(ev));
}

// Partially distinguishable particles with internal-state function j:
// P = [1/(|stab_i| |stab_o|)] sum_l (d_l/n!) Tr[a+ j a].
inline double counting_partial(const ScatteringSetup& s, const GroupFunction& j,
                               const OutputEvent& ev, const IrrepTable& t) {
    const ScatteringSetup w = detail::with_event(s, ev);
    const SpectralFunction ahat = ft(amplitude_function(w), t);
    const SpectralFunction jhat = ft(j, t);
    cplx sum = 0.0;
    const double fn = static_cast<double>(factorial(t.n()));
    for (int l = 0; l < t.num_irreps(); ++l)
        sum += static_cast<double>(t.irrep(l).dim) / fn *
               (ahat.blocks[l].adjoint() * jhat.blocks[l] * ahat.blocks[l]).trace();
    const double stab = static_cast<double>(stabilizer_size(w.in_modes)) *
                        static_cast<double>(event_multiplicity(ev));
    return detail::real_checked(sum, "counting_partial") / stab;
}

}  // namespace snft
