#pragma once
// Generalized Pauli admissibility: the isotypic component lambda of a product
// state with the given mode occupations survives iff the character sum of
// lambda over the stabilizer of the mode list is nonzero.

#include <map>
#include <vector>

#include "snft/irreps.hpp"
#include "snft/subgroup.hpp"

namespace snft {

// Exact integer character sum of lambda over the Young subgroup fixing the
// given mode list.
inline long long stabilizer_character_sum(const IrrepTable& t, int lam,
                                          const std::vector<int>& modes) {
    long long s = 0;
    for (const Permutation& e : stabilizer(modes).elements) s += t.character_int(lam, e);
    return s;
}

inline bool gamas_admissible(const IrrepTable& t, int lam, const std::vector<int>& modes) {
    if (static_cast<int>(modes.size()) != t.n())
        throw std::invalid_argument("gamas_admissible: mode list size mismatch");
    return stabilizer_character_sum(t, lam, modes) != 0;
}

// Occupation multiplicities sorted decreasingly.
inline Partition multiplicity_partition(const std::vector<int>& modes) {
    std::map<int, int> counts;
    for (int v : modes) ++counts[v];
    std::vector<int> parts;
    for (const auto& [v, c] : counts) { (void)v; parts.push_back(c); }
    std::sort(parts.begin(), parts.end(), std::greater<int>());
    return Partition(parts);
}

// Dominance-order shortcut: admissible iff the multiplicity partition is
// dominated by lambda; equivalent to filling the diagram with no repeated
// label in any column.
inline bool gamas_admissible_dominance(const Partition& lambda, const std::vector<int>& modes) {
    const Partition mu = multiplicity_partition(modes);
    int sl = 0, sm = 0;
    const int rows = std::max(lambda.rows(), mu.rows());
    for (int k = 0; k < rows; ++k) {
        sl += k < lambda.rows() ? lambda.parts[k] : 0;
        sm += k < mu.rows() ? mu.parts[k] : 0;
        if (sm > sl) return false;
    }
    return true;
}

}  // namespace snft
