#pragma once
// Permutations of n letters with composition (sigma . tau)(x) = sigma(tau(x)).
// Letters are 0-based internally; cycle notation text uses 1-based letters.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace snft {

inline std::uint64_t factorial(int n) {
    if (n < 0 || n > 20) throw std::invalid_argument("factorial: n out of range");
    std::uint64_t f = 1;
    for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
    return f;
}

class Permutation {
public:
    Permutation() = default;

    // Identity on n letters.
    explicit Permutation(int n) : img_(static_cast<std::size_t>(n)) {
        if (n < 0) throw std::invalid_argument("Permutation: negative size");
        std::iota(img_.begin(), img_.end(), 0);
    }

    // One-line form: images[x] = sigma(x). Must be a bijection on {0, ..., n-1}.
    explicit Permutation(std::vector<int> images) : img_(std::move(images)) {
        std::vector<char> seen(img_.size(), 0);
        for (int v : img_) {
            if (v < 0 || v >= static_cast<int>(img_.size()) || seen[v])
                throw std::invalid_argument("Permutation: not a bijection");
            seen[v] = 1;
        }
    }

    int size() const { return static_cast<int>(img_.size()); }
    int operator()(int x) const { return img_[static_cast<std::size_t>(x)]; }
    const std::vector<int>& images() const { return img_; }

    bool is_identity() const {
        for (int x = 0; x < size(); ++x)
            if (img_[x] != x) return false;
        return true;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) = default;

private:
    std::vector<int> img_;
};

// (a . b)(x) = a(b(x)); b acts first.
inline Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw std::invalid_argument("compose: size mismatch");
    std::vector<int> img(static_cast<std::size_t>(a.size()));
    for (int x = 0; x < a.size(); ++x) img[x] = a(b(x));
    return Permutation(img);
}

inline Permutation inverse(const Permutation& p) {
    std::vector<int> img(static_cast<std::size_t>(p.size()));
    for (int x = 0; x < p.size(); ++x) img[p(x)] = x;
    return Permutation(img);
}

// Transposition of letters a and b (0-based).
inline Permutation transposition(int a, int b, int n) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b)
        throw std::invalid_argument("transposition: bad letters");
    Permutation p(n);
    std::vector<int> img = p.images();
    std::swap(img[a], img[b]);
    return Permutation(img);
}

// Cycle lengths in decreasing order, fixed points included; a partition of n.
inline std::vector<int> cycle_type(const Permutation& p) {
    std::vector<char> seen(p.size(), 0);
    std::vector<int> lengths;
    for (int x = 0; x < p.size(); ++x) {
        if (seen[x]) continue;
        int len = 0;
        for (int y = x; !seen[y]; y = p(y)) { seen[y] = 1; ++len; }
        lengths.push_back(len);
    }
    std::sort(lengths.begin(), lengths.end(), std::greater<int>());
    return lengths;
}

inline int num_cycles(const Permutation& p) {
    return static_cast<int>(cycle_type(p).size());
}

inline int permutation_order(const Permutation& p) {
    std::int64_t l = 1;
    for (int c : cycle_type(p)) l = std::lcm<std::int64_t>(l, c);
    return static_cast<int>(l);
}

// +1 for even, -1 for odd; multiplicative under composition.
inline int sign(const Permutation& p) {
    int s = 1;
    for (int c : cycle_type(p))
        if (c % 2 == 0) s = -s;
    return s;
}

// Lehmer-code rank: identity has rank 0, ranks enumerate S_n lexicographically
// by one-line form.
inline std::uint64_t rank(const Permutation& p) {
    const int n = p.size();
    std::uint64_t r = 0;
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            if (p(j) < p(i)) ++smaller;
        r += static_cast<std::uint64_t>(smaller) * factorial(n - 1 - i);
    }
    return r;
}

inline Permutation unrank(std::uint64_t r, int n) {
    if (r >= factorial(n)) throw std::invalid_argument("unrank: rank out of range");
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> img;
    img.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::uint64_t f = factorial(n - 1 - i);
        const int d = static_cast<int>(r / f);
        r %= f;
        img.push_back(pool[d]);
        pool.erase(pool.begin() + d);
    }
    return Permutation(img);
}

// Canonical cycle text: cycles start at their smallest letter and are ordered by
// it, fixed points omitted, letters 1-based. Identity prints as "id".
inline std::string to_cycles(const Permutation& p) {
    std::vector<char> seen(p.size(), 0);
    std::string out;
    for (int x = 0; x < p.size(); ++x) {
        if (seen[x] || p(x) == x) { seen[x] = 1; continue; }
        out += '(';
        bool first = true;
        for (int y = x; !seen[y]; y = p(y)) {
            seen[y] = 1;
            if (!first) out += ' ';
            out += std::to_string(y + 1);
            first = false;
        }
        out += ')';
    }
    return out.empty() ? "id" : out;
}

inline Permutation from_cycles(const std::string& text, int n) {
    std::vector<int> img(static_cast<std::size_t>(n));
    std::iota(img.begin(), img.end(), 0);
    std::size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
    skip_ws();
    if (text.compare(pos, 2, "id") == 0) {
        pos += 2;
        skip_ws();
        if (pos != text.size()) throw std::invalid_argument("from_cycles: trailing text");
        return Permutation(n);
    }
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    bool any = false;
    while (pos < text.size()) {
        if (text[pos] != '(') throw std::invalid_argument("from_cycles: expected '('");
        ++pos;
        std::vector<int> cyc;
        while (true) {
            skip_ws();
            if (pos < text.size() && text[pos] == ',') { ++pos; skip_ws(); }
            if (pos >= text.size()) throw std::invalid_argument("from_cycles: unterminated cycle");
            if (text[pos] == ')') { ++pos; break; }
            if (!std::isdigit(static_cast<unsigned char>(text[pos])))
                throw std::invalid_argument("from_cycles: expected letter");
            int v = 0;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                v = v * 10 + (text[pos++] - '0');
            if (v < 1 || v > n) throw std::invalid_argument("from_cycles: letter out of range");
            if (used[v - 1]) throw std::invalid_argument("from_cycles: repeated letter");
            used[v - 1] = 1;
            cyc.push_back(v - 1);
        }
        if (cyc.size() > 1) {
            any = true;
            for (std::size_t k = 0; k < cyc.size(); ++k)
                img[cyc[k]] = cyc[(k + 1) % cyc.size()];
        }
        skip_ws();
    }
    (void)any;
    return Permutation(img);
}

// Writes sigma as a left-to-right composition of adjacent transpositions
// s_k = (k, k+1): sigma = s_{k0} . s_{k1} . ... (0-based k, s_{k0} outermost).
inline std::vector<int> adjacent_factorization(const Permutation& p) {
    std::vector<int> w = p.images();
    std::vector<int> ks;
    // Bubble sort of the one-line form; swapping positions k, k+1 multiplies by
    // s_k on the right, so sigma . s_{k0} . ... . s_{km} = id.
    bool moved = true;
    while (moved) {
        moved = false;
        for (int k = 0; k + 1 < static_cast<int>(w.size()); ++k) {
            if (w[k] > w[k + 1]) {
                std::swap(w[k], w[k + 1]);
                ks.push_back(k);
                moved = true;
            }
        }
    }
    std::reverse(ks.begin(), ks.end());
    return ks;
}

// Extends p to n letters, fixing the new largest letters.
inline Permutation embed(const Permutation& p, int n) {
    if (n < p.size()) throw std::invalid_argument("embed: target smaller than source");
    std::vector<int> img = p.images();
    for (int x = p.size(); x < n; ++x) img.push_back(x);
    return Permutation(img);
}

inline std::vector<Permutation> all_permutations(int n) {
    const std::uint64_t fn = factorial(n);
    std::vector<Permutation> out;
    out.reserve(static_cast<std::size_t>(fn));
    for (std::uint64_t r = 0; r < fn; ++r) out.push_back(unrank(r, n));
    return out;
}

}  // namespace snft
