#pragma once
// Integer partitions in decreasing-part form, enumerated so that (n) comes
// first and (1,...,1) last.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "snft/permutation.hpp"

namespace snft {

struct Partition {
    std::vector<int> parts;  // strictly positive, non-increasing

    Partition() = default;
    explicit Partition(std::vector<int> p) : parts(std::move(p)) {
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i] <= 0) throw std::invalid_argument("Partition: parts must be positive");
            if (i > 0 && parts[i] > parts[i - 1])
                throw std::invalid_argument("Partition: parts must be non-increasing");
        }
    }

    int sum() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    int rows() const { return static_cast<int>(parts.size()); }

    friend bool operator==(const Partition& a, const Partition& b) = default;
};

inline std::vector<Partition> partitions_of(int n) {
    if (n < 0) throw std::invalid_argument("partitions_of: negative n");
    if (n == 0) return {Partition{}};
    std::vector<Partition> out;
    std::vector<int> a{n};
    while (true) {
        out.push_back(Partition(a));
        int k = static_cast<int>(a.size()) - 1;
        while (k >= 0 && a[k] == 1) --k;
        if (k < 0) break;
        int t = std::accumulate(a.begin() + k, a.end(), 0);
        const int v = a[k] - 1;
        a.resize(static_cast<std::size_t>(k));
        while (t > 0) {
            const int p = std::min(v, t);
            a.push_back(p);
            t -= p;
        }
    }
    return out;
}

inline Partition conjugate(const Partition& lam) {
    std::vector<int> cols;
    for (int c = 0; lam.rows() > 0 && c < lam.parts[0]; ++c) {
        int h = 0;
        for (int r = 0; r < lam.rows(); ++r)
            if (lam.parts[r] > c) ++h;
        cols.push_back(h);
    }
    return Partition(cols);
}

// Irrep dimension by the hook length formula; exact in integers for n <= 20.
inline std::uint64_t dimension(const Partition& lam) {
    const int n = lam.sum();
    const Partition conj = conjugate(lam);
    std::uint64_t den = 1;
    for (int r = 0; r < lam.rows(); ++r)
        for (int c = 0; c < lam.parts[r]; ++c)
            den *= static_cast<std::uint64_t>(lam.parts[r] - c + conj.parts[c] - r - 1);
    return factorial(n) / den;
}

inline std::string to_string(const Partition& lam) {
    std::string s = "(";
    for (int i = 0; i < lam.rows(); ++i) {
        if (i > 0) s += ',';
        s += std::to_string(lam.parts[i]);
    }
    s += ')';
    return s;
}

inline Partition parse_partition(const std::string& text) {
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b < e && text[b] == '(' && text[e - 1] == ')') { ++b; --e; }
    std::vector<int> parts;
    int v = -1;
    for (std::size_t i = b; i <= e; ++i) {
        if (i == e || text[i] == ',' || std::isspace(static_cast<unsigned char>(text[i]))) {
            if (v >= 0) parts.push_back(v);
            v = -1;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw std::invalid_argument("parse_partition: bad character");
        v = (v < 0 ? 0 : v) * 10 + (text[i] - '0');
    }
    return Partition(std::move(parts));
}

}  // namespace snft
