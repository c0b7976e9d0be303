#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <string>
#include <vector>

#include "eqcorners/errors.hpp"
#include "eqcorners/rational.hpp"

namespace eqc {

using Vec = std::vector<Rational>;

inline Rational dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("dot: vectors of size " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

inline Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("vector sum: size mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("vector difference: size mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] - b[i];
    return r;
}

inline Vec operator*(const Rational& c, const Vec& v) {
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = c * v[i];
    return r;
}

// Dense rational matrix, row major.
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, Rational(0)) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static Mat from_rows(const std::vector<Vec>& rows) {
        if (rows.empty())
            return Mat();
        Mat m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
        for (int i = 0; i < m.rows_; ++i) {
            if (rows[i].size() != std::size_t(m.cols_))
                throw DimensionMismatch("from_rows: ragged rows");
            for (int j = 0; j < m.cols_; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
    const Rational& operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

    Vec row(int i) const {
        Vec r(cols_);
        for (int j = 0; j < cols_; ++j)
            r[j] = (*this)(i, j);
        return r;
    }

    Mat transposed() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    Vec apply(const Vec& v) const {
        if (v.size() != std::size_t(cols_))
            throw DimensionMismatch("matrix apply: dimension mismatch");
        Vec r(rows_, Rational(0));
        for (int i = 0; i < rows_; ++i) {
            Rational s = 0;
            for (int j = 0; j < cols_; ++j)
                s += (*this)(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_)
            throw DimensionMismatch("matrix product: inner dimension mismatch");
        Mat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Rational& aik = a(i, k);
                if (aik == 0)
                    continue;
                for (int j = 0; j < b.cols_; ++j)
                    c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    // Lexicographic; gives groups and subspaces a stable total order.
    friend std::strong_ordering operator<=>(const Mat& a, const Mat& b) {
        if (auto c = a.rows_ <=> b.rows_; c != 0)
            return c;
        if (auto c = a.cols_ <=> b.cols_; c != 0)
            return c;
        for (std::size_t i = 0; i < a.data_.size(); ++i) {
            if (a.data_[i] < b.data_[i])
                return std::strong_ordering::less;
            if (b.data_[i] < a.data_[i])
                return std::strong_ordering::greater;
        }
        return std::strong_ordering::equal;
    }

    bool is_square() const { return rows_ == cols_; }

    bool is_orthogonal() const {
        if (!is_square())
            return false;
        return (*this) * transposed() == identity(rows_);
    }

    bool is_identity() const { return *this == identity(rows_); }

    bool is_diagonal_sign() const {
        if (!is_square())
            return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) {
                const Rational& x = (*this)(i, j);
                if (i == j ? (x != 1 && x != -1) : (x != 0))
                    return false;
            }
        return true;
    }

    // Exactly one nonzero entry, +-1, per row and column.
    bool is_signed_permutation() const {
        if (!is_square())
            return false;
        std::vector<int> col_used(cols_, 0);
        for (int i = 0; i < rows_; ++i) {
            int nz = -1;
            for (int j = 0; j < cols_; ++j) {
                const Rational& x = (*this)(i, j);
                if (x == 0)
                    continue;
                if (x != 1 && x != -1)
                    return false;
                if (nz >= 0)
                    return false;
                nz = j;
            }
            if (nz < 0 || col_used[nz]++)
                return false;
        }
        return true;
    }

private:
    int rows_, cols_;
    std::vector<Rational> data_;
};

// In-place reduced row echelon form. Returns pivot columns. Rows below the
// returned rank are zero; pivots are 1 with their columns cleared.
inline std::vector<int> rref(std::vector<Vec>& rows) {
    if (rows.empty())
        return {};
    const int cols = static_cast<int>(rows[0].size());
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < static_cast<int>(rows.size()); ++c) {
        int piv = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(rows[r], rows[piv]);
        Rational lead = rows[r][c];
        for (int j = c; j < cols; ++j)
            rows[r][j] /= lead;
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == r || rows[i][c] == 0)
                continue;
            Rational f = rows[i][c];
            for (int j = c; j < cols; ++j)
                rows[i][j] -= f * rows[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r, Vec(cols, Rational(0)));
    return pivots;
}

// Canonical basis of {x : rows * x = 0}.
inline std::vector<Vec> nullspace(std::vector<Vec> rows, int cols) {
    std::vector<int> pivots = rref(rows);
    std::vector<bool> is_pivot(cols, false);
    for (int p : pivots)
        is_pivot[p] = true;
    std::vector<Vec> basis;
    for (int c = 0; c < cols; ++c) {
        if (is_pivot[c])
            continue;
        Vec v(cols, Rational(0));
        v[c] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -rows[i][c];
        basis.push_back(std::move(v));
    }
    rref(basis); // canonical form of the nullspace itself
    return basis;
}

// Exact rational linear subspace in canonical reduced-row-echelon form, so
// equal subspaces have identical representations and compare bitwise.
class Subspace {
public:
    Subspace() : ambient_(0) {}
    explicit Subspace(int ambient) : ambient_(ambient) {}

    static Subspace span(int ambient, std::vector<Vec> vectors) {
        for (const Vec& v : vectors)
            if (v.size() != std::size_t(ambient))
                throw DimensionMismatch("span: vector length disagrees with ambient dimension");
        rref(vectors);
        Subspace s(ambient);
        s.basis_ = std::move(vectors);
        return s;
    }

    static Subspace full(int ambient) {
        std::vector<Vec> rows;
        for (int i = 0; i < ambient; ++i) {
            Vec e(ambient, Rational(0));
            e[i] = 1;
            rows.push_back(std::move(e));
        }
        return span(ambient, std::move(rows));
    }

    static Subspace zero(int ambient) { return Subspace(ambient); }

    int ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    int codim() const { return ambient_ - dim(); }
    const std::vector<Vec>& basis() const { return basis_; }

    bool is_full() const { return dim() == ambient_; }
    bool is_zero() const { return dim() == 0; }

    bool contains_vector(const Vec& v) const {
        if (v.size() != std::size_t(ambient_))
            throw DimensionMismatch("contains_vector: ambient mismatch");
        Vec w = v;
        for (const Vec& b : basis_) {
            int pivot = lead_col(b);
            if (w[pivot] != 0) {
                Rational f = w[pivot];
                for (int j = 0; j < ambient_; ++j)
                    w[j] -= f * b[j];
            }
        }
        return eqc::is_zero(w);
    }

    bool contains(const Subspace& other) const {
        check_ambient(other);
        return std::all_of(other.basis_.begin(), other.basis_.end(),
                           [&](const Vec& v) { return contains_vector(v); });
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

    // Stable total order: by ambient, dim, then basis entries.
    friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
        if (auto c = a.ambient_ <=> b.ambient_; c != 0)
            return c;
        if (auto c = a.dim() <=> b.dim(); c != 0)
            return c;
        for (int i = 0; i < a.dim(); ++i)
            for (int j = 0; j < a.ambient_; ++j) {
                if (a.basis_[i][j] < b.basis_[i][j])
                    return std::strong_ordering::less;
                if (b.basis_[i][j] < a.basis_[i][j])
                    return std::strong_ordering::greater;
            }
        return std::strong_ordering::equal;
    }

    void check_ambient(const Subspace& other) const {
        if (ambient_ != other.ambient_)
            throw DimensionMismatch("subspace ambient dimensions disagree");
    }

    static int lead_col(const Vec& row) {
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0)
                return static_cast<int>(j);
        return -1;
    }

private:
    int ambient_;
    std::vector<Vec> basis_;
};

inline Subspace sum(const Subspace& a, const Subspace& b) {
    a.check_ambient(b);
    std::vector<Vec> rows = a.basis();
    rows.insert(rows.end(), b.basis().begin(), b.basis().end());
    return Subspace::span(a.ambient(), std::move(rows));
}

// W with W orthogonal to A under the standard inner product, W + A = ambient.
inline Subspace orthogonal_complement(const Subspace& a) {
    return Subspace::span(a.ambient(), nullspace(a.basis(), a.ambient()));
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
    a.check_ambient(b);
    std::vector<Vec> normals = orthogonal_complement(a).basis();
    const std::vector<Vec> nb = orthogonal_complement(b).basis();
    normals.insert(normals.end(), nb.begin(), nb.end());
    return Subspace::span(a.ambient(), nullspace(std::move(normals), a.ambient()));
}

// Common fixed locus {v : Mv = v for all M}. An empty set fixes everything.
inline Subspace fixed_subspace(const std::vector<Mat>& elements, int ambient) {
    std::vector<Vec> rows;
    for (const Mat& m : elements) {
        if (!m.is_square() || m.rows() != ambient)
            throw DimensionMismatch("fixed_subspace: matrix dimension disagrees with ambient");
        for (int i = 0; i < ambient; ++i) {
            Vec r = m.row(i);
            r[i] -= 1;
            if (!is_zero(r))
                rows.push_back(std::move(r));
        }
    }
    return Subspace::span(ambient, nullspace(std::move(rows), ambient));
}

// Coordinates of v in the given subspace basis; v must lie in the subspace.
inline Vec coordinates_in(const Subspace& s, const Vec& v) {
    Vec w = v;
    Vec coeff(s.dim(), Rational(0));
    for (int i = 0; i < s.dim(); ++i) {
        int pivot = Subspace::lead_col(s.basis()[i]);
        coeff[i] = w[pivot];
        if (w[pivot] != 0) {
            Rational f = w[pivot];
            for (int j = 0; j < s.ambient(); ++j)
                w[j] -= f * s.basis()[i][j];
        }
    }
    if (!is_zero(w))
        throw Error("coordinates_in: vector not in subspace");
    return coeff;
}

inline Vec from_coordinates(const Subspace& s, const Vec& coeff) {
    Vec v(s.ambient(), Rational(0));
    for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < s.ambient(); ++j)
            v[j] += coeff[i] * s.basis()[i][j];
    return v;
}

} // namespace eqc
