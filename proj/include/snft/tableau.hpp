#pragma once
// Standard Young tableaux with 0-based letters 0..n-1. The enumeration is
// recursive on the largest letter, placing it at removable corners in
// increasing row order; grouping by the corner of the largest letter makes
// every restriction to the subgroup fixing that letter block-diagonal.

#include <vector>

#include "snft/partition.hpp"

namespace snft {

struct StandardTableau {
    Partition shape;
    std::vector<int> row_of;  // row_of[letter]
    std::vector<int> col_of;  // col_of[letter]

    int size() const { return static_cast<int>(row_of.size()); }
    int content(int letter) const { return col_of[letter] - row_of[letter]; }

    friend bool operator==(const StandardTableau& a, const StandardTableau& b) = default;
};

namespace detail {

inline void enumerate_tableaux(const std::vector<int>& shape, std::vector<int>& row_of,
                               std::vector<int>& col_of, int letter,
                               const Partition& full_shape,
                               std::vector<StandardTableau>& out) {
    if (letter < 0) {
        out.push_back(StandardTableau{full_shape, row_of, col_of});
        return;
    }
    for (int r = 0; r < static_cast<int>(shape.size()); ++r) {
        const bool corner =
            shape[r] > 0 && (r + 1 == static_cast<int>(shape.size()) || shape[r] > shape[r + 1]);
        if (!corner) continue;
        std::vector<int> sub = shape;
        --sub[r];
        if (sub[r] == 0 && r + 1 == static_cast<int>(sub.size())) sub.pop_back();
        row_of[letter] = r;
        col_of[letter] = shape[r] - 1;
        enumerate_tableaux(sub, row_of, col_of, letter - 1, full_shape, out);
    }
}

}  // namespace detail

inline std::vector<StandardTableau> standard_tableaux(const Partition& lam) {
    const int n = lam.sum();
    std::vector<int> row_of(static_cast<std::size_t>(n)), col_of(static_cast<std::size_t>(n));
    std::vector<StandardTableau> out;
    detail::enumerate_tableaux(lam.parts, row_of, col_of, n - 1, lam, out);
    return out;
}

}  // namespace snft
