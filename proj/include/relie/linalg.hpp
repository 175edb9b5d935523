#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "relie/field.hpp"

namespace relie {

// Dense ambient dimensions are capped; beyond this operations refuse rather
// than thrash.
inline constexpr std::size_t kAmbientLimit = 59049;  // 3^10

using Vec = std::vector<Fel>;

class Matrix {
public:
    Matrix(FieldPtr f, std::size_t rows, std::size_t cols)
        : f_(std::move(f)), rows_(rows), cols_(cols), a_(rows * cols, 0) {
        if (cols_ > kAmbientLimit || rows_ > kAmbientLimit)
            throw SizeLimit("matrix dimension exceeds the supported dense limit");
    }

    static Matrix identity(FieldPtr f, std::size_t n) {
        Matrix m(std::move(f), n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static Matrix from_rows(FieldPtr f, const std::vector<Vec>& rows, std::size_t cols) {
        Matrix m(std::move(f), rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) throw AmbientMismatch("row length mismatch");
            for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
        }
        return m;
    }

    const FieldPtr& field() const { return f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Fel& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    Fel at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    Vec row(std::size_t r) const {
        return Vec(a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_);
    }

    void set_row(std::size_t r, const Vec& v) {
        for (std::size_t c = 0; c < cols_; ++c) at(r, c) = v[c];
    }

    Matrix mul(const Matrix& b) const {
        if (cols_ != b.rows_) throw AmbientMismatch("matrix product shape mismatch");
        Matrix r(f_, rows_, b.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                Fel aik = at(i, k);
                if (!aik) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    Fel t = f_->mul(aik, b.at(k, j));
                    r.at(i, j) = f_->add(r.at(i, j), t);
                }
            }
        return r;
    }

    // column-vector convention: (M v)_i = sum_j M_ij v_j
    Vec mul_vec(const Vec& v) const {
        if (v.size() != cols_) throw AmbientMismatch("matrix-vector shape mismatch");
        Vec r(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            Fel s = 0;
            for (std::size_t j = 0; j < cols_; ++j) {
                Fel m = at(i, j);
                if (m && v[j]) s = f_->add(s, f_->mul(m, v[j]));
            }
            r[i] = s;
        }
        return r;
    }

    Matrix transpose() const {
        Matrix r(f_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Matrix frobenius_entrywise(std::int64_t e) const {
        Matrix r(f_, rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_->frobenius(a_[i], e);
        return r;
    }

    static Matrix vstack(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.cols_) throw AmbientMismatch("vstack width mismatch");
        Matrix r(a.f_, a.rows_ + b.rows_, a.cols_);
        std::copy(a.a_.begin(), a.a_.end(), r.a_.begin());
        std::copy(b.a_.begin(), b.a_.end(), r.a_.begin() + a.a_.size());
        return r;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

private:
    FieldPtr f_;
    std::size_t rows_, cols_;
    std::vector<Fel> a_;
};

namespace detail {

// In-place Gaussian elimination to reduced row-echelon form.
// Returns pivot columns.
inline std::vector<std::size_t> rref_in_place(Matrix& m) {
    const FieldPtr& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < m.cols() && lead < m.rows(); ++col) {
        std::size_t sel = lead;
        while (sel < m.rows() && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != lead)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(sel, c), m.at(lead, c));
        Fel piv_inv = f->inv(m.at(lead, col));
        for (std::size_t c = col; c < m.cols(); ++c) m.at(lead, c) = f->mul(m.at(lead, c), piv_inv);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == lead) continue;
            Fel factor = m.at(r, col);
            if (!factor) continue;
            for (std::size_t c = col; c < m.cols(); ++c) {
                Fel t = f->mul(factor, m.at(lead, c));
                m.at(r, c) = f->sub(m.at(r, c), t);
            }
        }
        pivots.push_back(col);
        ++lead;
    }
    return pivots;
}

}  // namespace detail

// A subspace of F^ambient held in canonical form: reduced row-echelon basis
// with no zero rows. Two subspaces are equal iff their basis matrices are
// bit-identical.
class Subspace {
public:
    static Subspace zero(FieldPtr f, std::size_t ambient) {
        return Subspace(Matrix(std::move(f), 0, ambient), {});
    }

    static Subspace full(FieldPtr f, std::size_t ambient) {
        Matrix id = Matrix::identity(std::move(f), ambient);
        std::vector<std::size_t> piv(ambient);
        for (std::size_t i = 0; i < ambient; ++i) piv[i] = i;
        return Subspace(std::move(id), std::move(piv));
    }

    static Subspace span(Matrix rows) {
        std::vector<std::size_t> pivots = detail::rref_in_place(rows);
        Matrix basis(rows.field(), pivots.size(), rows.cols());
        for (std::size_t r = 0; r < pivots.size(); ++r)
            for (std::size_t c = 0; c < rows.cols(); ++c) basis.at(r, c) = rows.at(r, c);
        return Subspace(std::move(basis), std::move(pivots));
    }

    static Subspace span_rows(FieldPtr f, const std::vector<Vec>& rows, std::size_t ambient) {
        return span(Matrix::from_rows(std::move(f), rows, ambient));
    }

    const Matrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    const FieldPtr& field() const { return basis_.field(); }
    std::size_t ambient() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }

    // v reduced modulo the subspace; zero iff contained.
    Vec reduce(Vec v) const {
        const FieldPtr& f = field();
        if (v.size() != ambient()) throw AmbientMismatch("vector/subspace ambient mismatch");
        for (std::size_t r = 0; r < dim(); ++r) {
            Fel c = v[pivots_[r]];
            if (!c) continue;
            for (std::size_t j = 0; j < ambient(); ++j) {
                Fel t = f->mul(c, basis_.at(r, j));
                v[j] = f->sub(v[j], t);
            }
        }
        return v;
    }

    bool contains(const Vec& v) const {
        Vec r = reduce(v);
        return std::all_of(r.begin(), r.end(), [](Fel x) { return x == 0; });
    }

    bool contains(const Subspace& other) const {
        if (other.ambient() != ambient()) throw AmbientMismatch("subspace ambient mismatch");
        for (std::size_t r = 0; r < other.dim(); ++r)
            if (!contains(other.basis().row(r))) return false;
        return true;
    }

    bool operator==(const Subspace& o) const {
        return basis_ == o.basis_;
    }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

private:
    Subspace(Matrix basis, std::vector<std::size_t> pivots)
        : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

inline Subspace rref(const Matrix& m) { return Subspace::span(m); }

// {x : M x = 0} as a canonical subspace of F^cols.
inline Subspace kernel(const Matrix& m) {
    Matrix r = m;
    std::vector<std::size_t> pivots = detail::rref_in_place(r);
    const FieldPtr& f = m.field();
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<Vec> rows;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (is_pivot[j]) continue;
        Vec v(m.cols(), 0);
        v[j] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f->neg(r.at(i, j));
        rows.push_back(std::move(v));
    }
    return Subspace::span_rows(f, rows, m.cols());
}

inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw AmbientMismatch("subspace sum ambient mismatch");
    return Subspace::span(Matrix::vstack(a.basis(), b.basis()));
}

// Exact lattice meet via the kernel construction: solve alpha*A - beta*B = 0
// over coefficient pairs and span the resulting alpha*A vectors.
inline Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw AmbientMismatch("subspace meet ambient mismatch");
    const FieldPtr& f = a.field();
    std::size_t da = a.dim(), db = b.dim();
    if (da == 0 || db == 0) return Subspace::zero(f, a.ambient());
    // columns: the da + db coefficients; rows: one equation per ambient coord
    Matrix sys(f, a.ambient(), da + db);
    for (std::size_t j = 0; j < a.ambient(); ++j) {
        for (std::size_t i = 0; i < da; ++i) sys.at(j, i) = a.basis().at(i, j);
        for (std::size_t i = 0; i < db; ++i) sys.at(j, da + i) = f->neg(b.basis().at(i, j));
    }
    Subspace k = kernel(sys);
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < k.dim(); ++r) {
        Vec coeffs = k.basis().row(r);
        Vec v(a.ambient(), 0);
        for (std::size_t i = 0; i < da; ++i) {
            if (!coeffs[i]) continue;
            for (std::size_t j = 0; j < a.ambient(); ++j)
                v[j] = f->add(v[j], f->mul(coeffs[i], a.basis().at(i, j)));
        }
        rows.push_back(std::move(v));
    }
    return Subspace::span_rows(f, rows, a.ambient());
}

// span{ T * sigma^e(v) : v in a basis of A }, sigma applied coordinatewise.
// This is again a subspace because the Frobenius is surjective.
inline Subspace semilinear_image(const Matrix& t, std::int64_t e, const Subspace& a) {
    if (t.rows() != t.cols() || t.cols() != a.ambient())
        throw AmbientMismatch("operator/subspace ambient mismatch");
    const FieldPtr& f = a.field();
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < a.dim(); ++r) {
        Vec v = a.basis().row(r);
        for (auto& x : v) x = f->frobenius(x, e);
        rows.push_back(t.mul_vec(v));
    }
    return Subspace::span_rows(f, rows, a.ambient());
}

// One solution of M x = b, free coordinates set to zero.
inline std::optional<Vec> solve(const Matrix& m, const Vec& b) {
    if (b.size() != m.rows()) throw AmbientMismatch("solve shape mismatch");
    const FieldPtr& f = m.field();
    Matrix aug(f, m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = b[i];
    }
    std::vector<std::size_t> pivots = detail::rref_in_place(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;  // inconsistent
    Vec x(m.cols(), 0);
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug.at(i, m.cols());
    return x;
}

// Coefficients c with c * rows(B) = v, if v lies in the row span.
inline std::optional<Vec> coords_in_rows(const Matrix& basis, const Vec& v) {
    return solve(basis.transpose(), v);
}

inline std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw AmbientMismatch("inverse of non-square matrix");
    const FieldPtr& f = m.field();
    std::size_t n = m.rows();
    Matrix aug(f, n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = 1;
    }
    std::vector<std::size_t> pivots = detail::rref_in_place(aug);
    if (pivots.size() != n || pivots[n - 1] != n - 1) return std::nullopt;
    Matrix r(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r.at(i, j) = aug.at(i, n + j);
    return r;
}

inline std::size_t rank(const Matrix& m) {
    Matrix c = m;
    return detail::rref_in_place(c).size();
}

// Row representatives of A modulo B (requires B <= A): reduce A's basis rows
// by B and re-echelonize. The rows returned are actual elements of A.
inline Matrix complement_rows(const Subspace& a, const Subspace& b) {
    if (!a.contains(b)) throw AmbientMismatch("complement_rows requires B <= A");
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < a.dim(); ++r) rows.push_back(b.reduce(a.basis().row(r)));
    Subspace s = Subspace::span_rows(a.field(), rows, a.ambient());
    return s.basis();
}

inline Matrix random_matrix(const FieldPtr& f, std::size_t rows, std::size_t cols,
                            std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint32_t> dist(0, f->order() - 1);
    Matrix m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = dist(rng);
    return m;
}

inline Matrix random_invertible(const FieldPtr& f, std::size_t n, std::mt19937_64& rng) {
    for (;;) {
        Matrix m = random_matrix(f, n, n, rng);
        if (rank(m) == n) return m;
    }
}

}  // namespace relie
