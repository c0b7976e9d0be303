#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eqcorners/linalg.hpp"

namespace eqc {

// Finite group with an exact orthogonal matrix representation. Elements are
// abstract ids with a matrix image each; the representation need not be
// faithful (distinct ids may share a matrix), which is how actions with a
// nontrivial kernel are expressed. Immutable after construction; copies
// share the underlying data.
class MatrixGroup {
public:
    MatrixGroup() = default;

    // Closure of orthogonal generators under multiplication. Element ids are
    // assigned breadth-first from the identity, products taken in generator
    // order, so ids are reproducible across runs.
    static MatrixGroup generate(const std::vector<Mat>& generators, int cap = 1024,
                                std::string name = "") {
        if (generators.empty())
            throw Error("generate: at least one generator (or an explicit dimension) required");
        const int n = generators[0].rows();
        auto impl = std::make_shared<Impl>();
        impl->ambient = n;
        impl->name = std::move(name);
        for (const Mat& g : generators) {
            if (!g.is_square() || g.rows() != n)
                throw DimensionMismatch("generate: generators of mixed dimension");
            if (!g.is_orthogonal())
                throw NotOrthogonal("generate: generator is not exactly orthogonal");
        }
        std::map<Mat, int> index;
        impl->rep.push_back(Mat::identity(n));
        index[impl->rep[0]] = 0;
        for (std::size_t head = 0; head < impl->rep.size(); ++head) {
            for (const Mat& g : generators) {
                Mat m = impl->rep[head] * g;
                if (index.count(m))
                    continue;
                if (static_cast<int>(impl->rep.size()) >= cap)
                    throw CapExceeded("generate: group closure exceeds cap " + std::to_string(cap));
                index[m] = static_cast<int>(impl->rep.size());
                impl->rep.push_back(std::move(m));
            }
        }
        const int m = static_cast<int>(impl->rep.size());
        impl->table.assign(m, std::vector<int>(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                impl->table[i][j] = index.at(impl->rep[i] * impl->rep[j]);
        for (const Mat& g : generators)
            impl->generators.push_back(index.at(g));
        impl->finish();
        MatrixGroup out;
        out.impl_ = std::move(impl);
        return out;
    }

    // Explicit element list with multiplication table; element 0 must be the
    // identity. This is the input form for non-faithful representations.
    static MatrixGroup from_table(const std::vector<Mat>& elements,
                                  const std::vector<std::vector<int>>& table,
                                  std::string name = "") {
        const int m = static_cast<int>(elements.size());
        if (m == 0 || static_cast<int>(table.size()) != m)
            throw Error("from_table: element list and table sizes disagree");
        const int n = elements[0].rows();
        auto impl = std::make_shared<Impl>();
        impl->ambient = n;
        impl->name = std::move(name);
        impl->rep = elements;
        impl->table = table;
        if (!elements[0].is_identity())
            throw Error("from_table: element 0 must be the identity matrix");
        for (const Mat& g : elements) {
            if (!g.is_square() || g.rows() != n)
                throw DimensionMismatch("from_table: elements of mixed dimension");
            if (!g.is_orthogonal())
                throw NotOrthogonal("from_table: element is not exactly orthogonal");
        }
        for (int i = 0; i < m; ++i) {
            if (static_cast<int>(table[i].size()) != m)
                throw Error("from_table: ragged table");
            std::vector<bool> seen(m, false);
            for (int j = 0; j < m; ++j) {
                int k = table[i][j];
                if (k < 0 || k >= m || seen[k])
                    throw Error("from_table: table row is not a permutation");
                seen[k] = true;
                if (table[0][j] != j || table[j][0] != j)
                    throw Error("from_table: element 0 is not a two-sided identity");
                if (!(elements[i] * elements[j] == elements[k]))
                    throw Error("from_table: matrices do not respect the table");
            }
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k)
                    if (table[table[i][j]][k] != table[i][table[j][k]])
                        throw Error("from_table: table is not associative");
        for (int i = 1; i < m; ++i)
            impl->generators.push_back(i);
        impl->finish();
        MatrixGroup out;
        out.impl_ = std::move(impl);
        return out;
    }

    bool valid() const { return impl_ != nullptr; }
    int order() const { return static_cast<int>(impl_->rep.size()); }
    int ambient_dim() const { return impl_->ambient; }
    const std::string& name() const { return impl_->name; }
    const std::vector<int>& generator_ids() const { return impl_->generators; }

    const Mat& matrix(int id) const { return impl_->rep[id]; }
    int mul(int a, int b) const { return impl_->table[a][b]; }
    int inv(int a) const { return impl_->inverse[a]; }
    int conj(int g, int a) const { return mul(mul(g, a), inv(g)); } // g a g^-1

    Vec act(int g, const Vec& v) const { return matrix(g).apply(v); }

    Subspace act(int g, const Subspace& s) const {
        std::vector<Vec> rows;
        rows.reserve(s.dim());
        for (const Vec& b : s.basis())
            rows.push_back(act(g, b));
        return Subspace::span(s.ambient(), std::move(rows));
    }

    bool same_group(const MatrixGroup& other) const { return impl_ == other.impl_; }

private:
    struct Impl {
        int ambient = 0;
        std::string name;
        std::vector<Mat> rep;
        std::vector<std::vector<int>> table;
        std::vector<int> inverse;
        std::vector<int> generators;

        void finish() {
            const int m = static_cast<int>(rep.size());
            inverse.assign(m, -1);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    if (table[i][j] == 0) {
                        inverse[i] = j;
                        break;
                    }
            for (int i = 0; i < m; ++i)
                if (inverse[i] < 0)
                    throw Error("group element without inverse");
        }
    };

    std::shared_ptr<const Impl> impl_;
};

// Subgroup given by sorted member ids within a parent group.
class Subgroup {
public:
    Subgroup() = default;
    Subgroup(MatrixGroup parent, std::vector<int> ids) : parent_(std::move(parent)), ids_(std::move(ids)) {
        std::sort(ids_.begin(), ids_.end());
        ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
        if (ids_.empty() || ids_[0] != 0)
            throw Error("subgroup must contain the identity");
        for (int a : ids_)
            for (int b : ids_)
                if (!contains(parent_.mul(a, b)))
                    throw Error("subgroup member set is not closed");
    }

    const MatrixGroup& parent() const { return parent_; }
    const std::vector<int>& ids() const { return ids_; }
    int order() const { return static_cast<int>(ids_.size()); }

    bool contains(int id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

    bool contains(const Subgroup& other) const {
        return std::all_of(other.ids_.begin(), other.ids_.end(), [&](int i) { return contains(i); });
    }

    friend bool operator==(const Subgroup& a, const Subgroup& b) {
        return a.parent_.same_group(b.parent_) && a.ids_ == b.ids_;
    }

private:
    MatrixGroup parent_;
    std::vector<int> ids_;
};

inline Subgroup whole_group(const MatrixGroup& g) {
    std::vector<int> ids(g.order());
    for (int i = 0; i < g.order(); ++i)
        ids[i] = i;
    return Subgroup(g, std::move(ids));
}

inline Subgroup trivial_subgroup(const MatrixGroup& g) {
    return Subgroup(g, {0});
}

// {g : g v = v}, exact comparison.
inline Subgroup point_stabilizer(const MatrixGroup& g, const Vec& v) {
    if (v.size() != std::size_t(g.ambient_dim()))
        throw DimensionMismatch("point_stabilizer: vector dimension");
    std::vector<int> ids;
    for (int i = 0; i < g.order(); ++i)
        if (g.act(i, v) == v)
            ids.push_back(i);
    return Subgroup(g, std::move(ids));
}

// {g : g w = w for all w in W}.
inline Subgroup pointwise_stabilizer(const MatrixGroup& g, const Subspace& w) {
    if (w.ambient() != g.ambient_dim())
        throw DimensionMismatch("pointwise_stabilizer: ambient dimension");
    std::vector<int> ids;
    for (int i = 0; i < g.order(); ++i) {
        bool fixes = true;
        for (const Vec& b : w.basis())
            if (g.act(i, b) != b) {
                fixes = false;
                break;
            }
        if (fixes)
            ids.push_back(i);
    }
    return Subgroup(g, std::move(ids));
}

// {g : g = identity matrix}; the generic stabilizer of a linear action.
inline Subgroup representation_kernel(const MatrixGroup& g) {
    std::vector<int> ids;
    for (int i = 0; i < g.order(); ++i)
        if (g.matrix(i).is_identity())
            ids.push_back(i);
    return Subgroup(g, std::move(ids));
}

inline Subgroup conjugate_subgroup(const MatrixGroup& g, const Subgroup& k, int by) {
    std::vector<int> ids;
    ids.reserve(k.order());
    for (int a : k.ids())
        ids.push_back(g.conj(by, a));
    return Subgroup(g, std::move(ids));
}

// {g : g K g^-1 = K}.
inline Subgroup normalizer(const MatrixGroup& g, const Subgroup& k) {
    if (!k.parent().same_group(g))
        throw Error("normalizer: subgroup of a different group");
    std::vector<int> ids;
    for (int i = 0; i < g.order(); ++i) {
        bool normalizes = true;
        for (int a : k.ids())
            if (!k.contains(g.conj(i, a))) {
                normalizes = false;
                break;
            }
        if (normalizes)
            ids.push_back(i);
    }
    return Subgroup(g, std::move(ids));
}

// A witness g with g K1 g^-1 = K2, if one exists.
inline std::optional<int> are_conjugate(const MatrixGroup& g, const Subgroup& k1, const Subgroup& k2) {
    if (!k1.parent().same_group(g) || !k2.parent().same_group(g))
        throw Error("are_conjugate: subgroups of a different group");
    if (k1.order() != k2.order())
        return std::nullopt;
    for (int i = 0; i < g.order(); ++i) {
        bool all = true;
        for (int a : k1.ids())
            if (!k2.contains(g.conj(i, a))) {
                all = false;
                break;
            }
        if (all)
            return i;
    }
    return std::nullopt;
}

// Whether some conjugate of k1 is contained in k2.
inline bool conjugate_into(const MatrixGroup& g, const Subgroup& k1, const Subgroup& k2) {
    if (k1.order() > k2.order())
        return false;
    for (int i = 0; i < g.order(); ++i) {
        bool all = true;
        for (int a : k1.ids())
            if (!k2.contains(g.conj(i, a))) {
                all = false;
                break;
            }
        if (all)
            return true;
    }
    return false;
}

} // namespace eqc
