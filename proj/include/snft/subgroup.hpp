#pragma once
// Explicit subgroups of S_n as sorted element lists (identity first).

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "snft/permutation.hpp"

namespace snft {

struct Subgroup {
    int n = 0;
    std::vector<Permutation> elements;  // sorted by rank

    std::size_t size() const { return elements.size(); }
};

inline void sort_by_rank(std::vector<Permutation>& v) {
    std::sort(v.begin(), v.end(), [](const Permutation& a, const Permutation& b) {
        return rank(a) < rank(b);
    });
}

inline Subgroup trivial_group(int n) {
    return Subgroup{n, {Permutation(n)}};
}

inline Subgroup symmetric_group(int n) {
    return Subgroup{n, all_permutations(n)};
}

inline Subgroup cyclic_group(const Permutation& t) {
    Subgroup g{t.size(), {}};
    Permutation p(t.size());
    do {
        g.elements.push_back(p);
        p = compose(t, p);
    } while (!p.is_identity());
    sort_by_rank(g.elements);
    return g;
}

inline bool contains(const Subgroup& g, const Permutation& p) {
    return std::any_of(g.elements.begin(), g.elements.end(),
                       [&](const Permutation& e) { return e == p; });
}

// Young subgroup of all sigma with labels[sigma(x)] == labels[x] for every x:
// the permutations of positions within blocks of equal label.
inline Subgroup stabilizer(const std::vector<int>& labels) {
    const int n = static_cast<int>(labels.size());
    std::map<int, std::vector<int>> blocks;
    for (int x = 0; x < n; ++x) blocks[labels[x]].push_back(x);

    std::vector<Permutation> elems{Permutation(n)};
    for (const auto& [label, pos] : blocks) {
        (void)label;
        if (pos.size() < 2) continue;
        std::vector<int> order(pos.size());
        std::iota(order.begin(), order.end(), 0);
        std::vector<Permutation> grown;
        do {
            for (const Permutation& base : elems) {
                std::vector<int> img = base.images();
                for (std::size_t a = 0; a < pos.size(); ++a) img[pos[a]] = pos[order[a]];
                grown.push_back(Permutation(img));
            }
        } while (std::next_permutation(order.begin(), order.end()));
        elems = std::move(grown);
    }
    sort_by_rank(elems);
    return Subgroup{n, std::move(elems)};
}

inline std::uint64_t stabilizer_size(const std::vector<int>& labels) {
    std::map<int, int> counts;
    for (int v : labels) ++counts[v];
    std::uint64_t s = 1;
    for (const auto& [v, c] : counts) { (void)v; s *= factorial(c); }
    return s;
}

}  // namespace snft
