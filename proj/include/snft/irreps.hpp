#pragma once
// Young's orthogonal representation for every irrep of S_n, adapted to the
// chain S_1 < S_2 < ... < S_n: restricting to permutations that fix the
// largest letter is block-diagonal in the tableau basis.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "snft/errors.hpp"
#include "snft/partition.hpp"
#include "snft/permutation.hpp"
#include "snft/subgroup.hpp"
#include "snft/tableau.hpp"

namespace snft {

struct Irrep {
    Partition lambda;
    int dim = 0;
    std::vector<StandardTableau> basis;
    std::vector<Eigen::MatrixXd> gen;  // gen[k] represents the swap of letters k, k+1
};

// Sequence of adjacent swap positions that walks through all of S_n, one swap
// at a time (plain changes); applying s_{k} on the right at each step visits
// every permutation exactly once starting from the identity.
inline std::vector<int> plain_changes(int n) {
    std::vector<int> val(static_cast<std::size_t>(n)), dir(static_cast<std::size_t>(n), -1);
    std::iota(val.begin(), val.end(), 0);
    std::vector<int> swaps;
    while (true) {
        int best = -1, bi = -1;
        for (int i = 0; i < n; ++i) {
            const int j = i + dir[i];
            if (j < 0 || j >= n) continue;
            if (val[j] < val[i] && (best < 0 || val[i] > best)) { best = val[i]; bi = i; }
        }
        if (bi < 0) break;
        const int bj = bi + dir[bi];
        std::swap(val[bi], val[bj]);
        std::swap(dir[bi], dir[bj]);
        swaps.push_back(std::min(bi, bj));
        for (int i = 0; i < n; ++i)
            if (val[i] > best) dir[i] = -dir[i];
    }
    return swaps;
}

namespace detail {

inline Irrep build_irrep(const Partition& lam) {
    Irrep ir;
    ir.lambda = lam;
    ir.basis = standard_tableaux(lam);
    ir.dim = static_cast<int>(ir.basis.size());
    const int n = lam.sum();

    std::map<std::vector<int>, int> index;
    for (int t = 0; t < ir.dim; ++t) index[ir.basis[t].row_of] = t;

    for (int k = 0; k + 1 < n; ++k) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ir.dim, ir.dim);
        for (int t = 0; t < ir.dim; ++t) {
            const StandardTableau& T = ir.basis[t];
            const int d = T.content(k + 1) - T.content(k);
            const double r = 1.0 / d;
            m(t, t) = r;
            if (d != 1 && d != -1) {
                std::vector<int> rows = T.row_of;
                std::swap(rows[k], rows[k + 1]);
                const auto it = index.find(rows);
                if (it == index.end()) throw consistency_error("build_irrep: swapped tableau missing");
                m(it->second, t) = std::sqrt(1.0 - r * r);
            }
        }
        ir.gen.push_back(std::move(m));
    }
    return ir;
}

}  // namespace detail

class IrrepTable;
inline IrrepTable build_irrep_table(int n);

class IrrepTable {
public:
    int n() const { return n_; }
    const std::vector<Irrep>& irreps() const { return irreps_; }
    const Irrep& irrep(int idx) const { return irreps_[static_cast<std::size_t>(idx)]; }
    int num_irreps() const { return static_cast<int>(irreps_.size()); }

    int index_of(const Partition& lam) const {
        const auto it = index_.find(lam.parts);
        if (it == index_.end()) throw std::invalid_argument("IrrepTable: unknown partition");
        return it->second;
    }

    int conjugate_index(int idx) const {
        return index_of(conjugate(irreps_[static_cast<std::size_t>(idx)].lambda));
    }

    // Matrix of sigma in irrep idx, as the ordered product of the generator
    // matrices of its adjacent factorization.
    Eigen::MatrixXd matrix(int idx, const Permutation& sigma) const {
        const Irrep& ir = irreps_[static_cast<std::size_t>(idx)];
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(ir.dim, ir.dim);
        for (int k : adjacent_factorization(sigma)) m *= ir.gen[static_cast<std::size_t>(k)];
        return m;
    }

    const std::vector<Partition>& classes() const { return classes_; }

    int class_index(const std::vector<int>& cyc) const {
        const auto it = class_index_.find(cyc);
        if (it == class_index_.end()) throw std::invalid_argument("IrrepTable: unknown class");
        return it->second;
    }

    std::uint64_t class_size(int c) const { return class_sizes_[static_cast<std::size_t>(c)]; }

    double character(int idx, const Permutation& sigma) const {
        return chars_[static_cast<std::size_t>(idx)][static_cast<std::size_t>(class_index(cycle_type(sigma)))];
    }

    double character_by_class(int idx, int c) const {
        return chars_[static_cast<std::size_t>(idx)][static_cast<std::size_t>(c)];
    }

    // Characters of S_n are integers; values outside integer tolerance are a defect.
    long long character_int(int idx, int c) const {
        return chars_int_[static_cast<std::size_t>(idx)][static_cast<std::size_t>(c)];
    }

    long long character_int(int idx, const Permutation& sigma) const {
        return character_int(idx, class_index(cycle_type(sigma)));
    }

    // Offset of each irrep block in the flattened length-n! spectral layout;
    // block idx spans [offset, offset + dim^2) in row-major order.
    const std::vector<int>& block_offsets() const { return offsets_; }

    // Dense n! x n! matrix whose row rank(sigma) holds all irrep matrices of
    // sigma flattened; memory grows as (n!)^2, so refuse beyond n = 7.
    const Eigen::MatrixXd& spectral_basis() const {
        std::lock_guard<std::mutex> lock(caches_->mu);
        if (!caches_->basis) {
            if (n_ > 7) throw std::invalid_argument("spectral_basis: n > 7 would need > 12 GiB");
            caches_->basis = std::make_unique<Eigen::MatrixXd>(build_spectral_basis());
        }
        return *caches_->basis;
    }

    // Table of S_{n-1}, built on first use.
    const IrrepTable& subgroup_table() const {
        std::lock_guard<std::mutex> lock(caches_->mu);
        if (!caches_->sub) {
            if (n_ < 2) throw std::invalid_argument("subgroup_table: n < 2");
            caches_->sub = std::make_shared<IrrepTable>(build_irrep_table(n_ - 1));
        }
        return *caches_->sub;
    }

    // Transversal of left cosets of the subgroup fixing the largest letter:
    // element i is the cycle sending letter n-1 to i (identity for i = n-1).
    Permutation coset_representative(int i) const {
        std::vector<int> img(static_cast<std::size_t>(n_));
        std::iota(img.begin(), img.end(), 0);
        for (int x = i; x + 1 < n_; ++x) img[x] = x + 1;
        img[n_ - 1] = i;
        return Permutation(img);
    }

private:
    friend IrrepTable build_irrep_table(int n);

    struct Caches {
        std::mutex mu;
        std::unique_ptr<Eigen::MatrixXd> basis;
        std::shared_ptr<IrrepTable> sub;
    };

    Eigen::MatrixXd build_spectral_basis() const {
        const std::uint64_t fn = factorial(n_);
        Eigen::MatrixXd basis(static_cast<Eigen::Index>(fn), static_cast<Eigen::Index>(fn));
        std::vector<Eigen::MatrixXd> cur;
        cur.reserve(irreps_.size());
        for (const Irrep& ir : irreps_) cur.push_back(Eigen::MatrixXd::Identity(ir.dim, ir.dim));
        Permutation sigma(n_);
        const std::vector<int> swaps = plain_changes(n_);
        for (std::size_t step = 0;; ++step) {
            const auto row = static_cast<Eigen::Index>(rank(sigma));
            for (std::size_t l = 0; l < irreps_.size(); ++l) {
                const int d = irreps_[l].dim;
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        basis(row, offsets_[l] + i * d + j) = cur[l](i, j);
            }
            if (step == swaps.size()) break;
            const int k = swaps[step];
            sigma = compose(sigma, transposition(k, k + 1, n_));
            for (std::size_t l = 0; l < irreps_.size(); ++l)
                cur[l] = cur[l] * irreps_[l].gen[static_cast<std::size_t>(k)];
        }
        return basis;
    }

    int n_ = 0;
    std::vector<Irrep> irreps_;
    std::map<std::vector<int>, int> index_;
    std::vector<int> offsets_;
    std::vector<Partition> classes_;
    std::map<std::vector<int>, int> class_index_;
    std::vector<std::uint64_t> class_sizes_;
    std::vector<std::vector<double>> chars_;
    std::vector<std::vector<long long>> chars_int_;
    std::shared_ptr<Caches> caches_;
};

// Representative of the class with the given cycle type: cycles filled with
// consecutive letters.
inline Permutation class_representative(const Partition& cyc, int n) {
    if (cyc.sum() != n) throw std::invalid_argument("class_representative: type must sum to n");
    std::vector<int> img(static_cast<std::size_t>(n));
    int base = 0;
    for (int len : cyc.parts) {
        for (int j = 0; j < len; ++j) img[base + j] = base + (j + 1) % len;
        base += len;
    }
    return Permutation(img);
}

inline IrrepTable build_irrep_table(int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("build_irrep_table: supported range is 1 <= n <= 8");
    IrrepTable t;
    t.n_ = n;
    t.caches_ = std::make_shared<IrrepTable::Caches>();
    int off = 0;
    for (const Partition& lam : partitions_of(n)) {
        t.index_[lam.parts] = static_cast<int>(t.irreps_.size());
        t.irreps_.push_back(detail::build_irrep(lam));
        t.offsets_.push_back(off);
        off += t.irreps_.back().dim * t.irreps_.back().dim;
    }
    if (static_cast<std::uint64_t>(off) != factorial(n))
        throw consistency_error("build_irrep_table: dimension sum mismatch");

    t.classes_ = partitions_of(n);
    for (int c = 0; c < static_cast<int>(t.classes_.size()); ++c) {
        const Partition& cyc = t.classes_[static_cast<std::size_t>(c)];
        t.class_index_[cyc.parts] = c;
        std::map<int, int> mult;
        for (int p : cyc.parts) ++mult[p];
        std::uint64_t den = 1;
        for (const auto& [len, m] : mult) {
            for (int q = 0; q < m; ++q) den *= static_cast<std::uint64_t>(len);
            den *= factorial(m);
        }
        t.class_sizes_.push_back(factorial(n) / den);
    }

    t.chars_.assign(t.irreps_.size(), std::vector<double>(t.classes_.size(), 0.0));
    t.chars_int_.assign(t.irreps_.size(), std::vector<long long>(t.classes_.size(), 0));
    for (std::size_t c = 0; c < t.classes_.size(); ++c) {
        const Permutation rep = class_representative(t.classes_[c], n);
        for (std::size_t l = 0; l < t.irreps_.size(); ++l) {
            const double chi = t.matrix(static_cast<int>(l), rep).trace();
            const double rounded = std::round(chi);
            if (std::abs(chi - rounded) > 1e-6)
                throw consistency_error("build_irrep_table: non-integer character");
            t.chars_[l][c] = rounded;
            t.chars_int_[l][c] = static_cast<long long>(rounded);
        }
    }
    return t;
}

}  // namespace snft
