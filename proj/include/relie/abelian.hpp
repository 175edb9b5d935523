#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "relie/liealg.hpp"

namespace relie {

// The p-map of an abelian restricted Lie algebra as a sigma-semilinear
// operator: v maps to T * sigma(v) with sigma applied coordinatewise.
struct SemilinearOperator {
    FieldPtr field;
    Matrix t;

    Vec apply(const Vec& v) const {
        Vec w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) w[i] = field->frobenius(v[i], 1);
        return t.mul_vec(w);
    }

    Vec apply_iter(Vec v, std::uint32_t r) const {
        for (std::uint32_t i = 0; i < r; ++i) v = apply(v);
        return v;
    }

    // matrix of the r-fold iterate: N^r(v) = (T T^sigma ... T^{sigma^{r-1}}) sigma^r(v)
    Matrix iterate_matrix(std::uint32_t r) const {
        Matrix m = Matrix::identity(field, t.rows());
        for (std::uint32_t i = 0; i < r; ++i) m = m.mul(t.frobenius_entrywise(static_cast<std::int64_t>(i)));
        return m;
    }
};

inline SemilinearOperator as_semilinear(const Algebra& alg) {
    if (!alg.is_abelian()) throw NotAbelian("p-map is semilinear only on abelian algebras");
    Matrix t(alg.field(), alg.dim(), alg.dim());
    for (std::size_t i = 0; i < alg.dim(); ++i)
        for (std::size_t j = 0; j < alg.dim(); ++j) t.at(j, i) = alg.pmap(i)[j];
    return SemilinearOperator{alg.field(), std::move(t)};
}

// r_k = dim of the k-fold iterated image; stops after reaching zero or after
// one repeated value certifies stability
inline std::vector<std::size_t> rank_profile(const SemilinearOperator& op) {
    std::vector<std::size_t> profile{op.t.rows()};
    Subspace im = Subspace::full(op.field, op.t.rows());
    for (;;) {
        im = semilinear_image(op.t, 1, im);
        profile.push_back(im.dim());
        if (im.dim() == 0 || profile[profile.size() - 1] == profile[profile.size() - 2])
            return profile;
    }
}

struct CyclicDecomposition {
    std::vector<Vec> generators;        // in the coordinates of the input algebra
    std::vector<std::uint32_t> exponents;  // descending
    std::vector<std::size_t> summand_dims;
};

namespace detail {

// exponent of v under a nilpotent semilinear operator; the index of a
// nilpotent operator never exceeds the dimension
inline std::optional<std::uint32_t> operator_exponent(const SemilinearOperator& op, Vec v) {
    for (std::uint32_t s = 0; s <= op.t.rows(); ++s) {
        if (is_zero(v)) return s;
        v = op.apply(v);
    }
    return std::nullopt;
}

struct AbstractGen {
    Vec gen;
    std::uint32_t exp;
};

// Greedy peeling for a nilpotent semilinear operator on F^m: split off a
// cyclic summand of maximal exponent, decompose the quotient, and lift each
// quotient generator to one annihilated at the same exponent.
inline std::vector<AbstractGen> decompose_nilpotent(const FieldPtr& f, const Matrix& t) {
    std::size_t m = t.rows();
    if (m == 0) return {};
    SemilinearOperator op{f, t};

    std::uint32_t max_exp = 0;
    std::size_t pick = 0;
    for (std::size_t i = 0; i < m; ++i) {
        Vec e(m, 0);
        e[i] = 1;
        auto s = operator_exponent(op, e);
        if (!s) throw InternalCheckError("operator is not nilpotent in peeling");
        if (*s > max_exp) {
            max_exp = *s;
            pick = i;
        }
    }
    if (max_exp == 0) throw InternalCheckError("zero space slipped past the base case");

    Vec x(m, 0);
    x[pick] = 1;
    std::vector<Vec> orbit;
    Vec cur = x;
    for (std::uint32_t j = 0; j < max_exp; ++j) {
        orbit.push_back(cur);
        cur = op.apply(cur);
    }
    Subspace cyclic = Subspace::span_rows(f, orbit, m);
    if (cyclic.dim() != max_exp)
        throw InternalCheckError("cyclic span dimension differs from the exponent");

    // quotient by the cyclic summand on the non-pivot coordinates
    std::vector<bool> is_pivot(m, false);
    for (std::size_t p : cyclic.pivots()) is_pivot[p] = true;
    std::vector<std::size_t> reps;
    for (std::size_t c = 0; c < m; ++c)
        if (!is_pivot[c]) reps.push_back(c);
    std::size_t qm = reps.size();
    Matrix tq(f, qm, qm);
    for (std::size_t j = 0; j < qm; ++j) {
        Vec e(m, 0);
        e[reps[j]] = 1;
        Vec w = cyclic.reduce(op.apply(e));
        for (std::size_t i = 0; i < qm; ++i) tq.at(i, j) = w[reps[i]];
    }

    std::vector<AbstractGen> out{{x, max_exp}};
    for (const AbstractGen& g : decompose_nilpotent(f, tq)) {
        Vec y(m, 0);
        for (std::size_t j = 0; j < qm; ++j) y[reps[j]] = g.gen[j];
        Vec c = op.apply_iter(y, g.exp);
        if (!cyclic.contains(c))
            throw InternalCheckError("lifted generator does not close into the cyclic summand");
        if (!is_zero(c)) {
            // solve N^r(z) = c with z in the cyclic summand; solvable because
            // the summand has maximal exponent
            Matrix mr = op.iterate_matrix(g.exp);
            Matrix twisted = cyclic.basis().frobenius_entrywise(g.exp);  // basis of sigma^r(C)
            Matrix sys = mr.mul(twisted.transpose());                    // m x dim(C)
            auto a = solve(sys, c);
            if (!a) throw InternalCheckError("maximal-exponent lifting system is inconsistent");
            Vec w = twisted.transpose().mul_vec(*a);
            Vec z(m);
            for (std::size_t i = 0; i < m; ++i)
                z[i] = f->frobenius(w[i], -static_cast<std::int64_t>(g.exp));
            for (std::size_t i = 0; i < m; ++i) y[i] = f->sub(y[i], z[i]);
        }
        if (!is_zero(op.apply_iter(y, g.exp)))
            throw InternalCheckError("lifted generator is not annihilated at its exponent");
        out.push_back({y, g.exp});
    }
    return out;
}

}  // namespace detail

// Unique decomposition of an abelian p-nilpotent algebra into cyclic
// summands; the number of summands and the exponent multiset are invariants.
inline CyclicDecomposition cyclic_decomposition(const Algebra& alg) {
    SemilinearOperator op = as_semilinear(alg);
    for (std::size_t i = 0; i < alg.dim(); ++i) {
        Vec e = zero_vec(alg);
        e[i] = 1;
        if (!detail::operator_exponent(op, e))
            throw NotPNilpotent("abelian algebra has a basis vector of infinite exponent");
    }
    std::vector<detail::AbstractGen> gens = detail::decompose_nilpotent(alg.field(), op.t);
    CyclicDecomposition out;
    std::vector<Vec> all_rows;
    for (const auto& g : gens) {
        out.generators.push_back(g.gen);
        out.exponents.push_back(g.exp);
        out.summand_dims.push_back(g.exp);
        Vec cur = g.gen;
        for (std::uint32_t j = 0; j < g.exp; ++j) {
            all_rows.push_back(cur);
            cur = op.apply(cur);
        }
    }
    for (std::size_t i = 1; i < out.exponents.size(); ++i)
        if (out.exponents[i - 1] < out.exponents[i])
            throw InternalCheckError("peeling produced non-descending exponents");
    if (Subspace::span_rows(alg.field(), all_rows, alg.dim()).dim() != alg.dim())
        throw InternalCheckError("cyclic summands do not decompose the algebra");
    return out;
}

struct AbelianIso {
    bool isomorphic = false;
    std::optional<Matrix> witness;  // column-convention map from P to Q coordinates
};

// Isomorphism test for abelian p-nilpotent algebras: the exponent multisets
// decide, and on success the generator matching x_i -> y_i is emitted and
// machine-verified before being returned.
inline AbelianIso abelian_iso(const Algebra& p, const Algebra& q) {
    if (!p.field()->same(*q.field()))
        throw AmbientMismatch("abelian_iso requires the same base field");
    CyclicDecomposition dp = cyclic_decomposition(p);
    CyclicDecomposition dq = cyclic_decomposition(q);
    if (p.dim() != q.dim() || dp.exponents != dq.exponents) return {};

    const FieldPtr& f = p.field();
    std::size_t n = p.dim();
    SemilinearOperator np = as_semilinear(p), nq = as_semilinear(q);
    Matrix op(f, n, n), oq(f, n, n);
    std::size_t col = 0;
    for (std::size_t g = 0; g < dp.generators.size(); ++g) {
        Vec cp = dp.generators[g], cq = dq.generators[g];
        for (std::uint32_t j = 0; j < dp.exponents[g]; ++j, ++col) {
            for (std::size_t i = 0; i < n; ++i) {
                op.at(i, col) = cp[i];
                oq.at(i, col) = cq[i];
            }
            cp = np.apply(cp);
            cq = nq.apply(cq);
        }
    }
    auto opinv = inverse(op);
    if (!opinv) throw InternalCheckError("orbit basis matrix is singular");
    Matrix w = oq.mul(*opinv);
    // replay: the witness must intertwine the semilinear operators
    for (std::size_t i = 0; i < n; ++i) {
        Vec ei(n, 0);
        ei[i] = 1;
        Vec lhs = w.mul_vec(np.apply(ei));
        Vec rhs = nq.apply(w.mul_vec(ei));
        if (lhs != rhs) throw InternalCheckError("abelian isomorphism witness failed replay");
    }
    return {true, w};
}

struct FittingDecomposition {
    Subspace invertible_part;  // image of the dim-fold iterate
    Subspace nil_part;         // kernel of the dim-fold iterate; equals Rad(L)
    Subspace toral_span;       // F-span of the p-fixed points x^[p] = x
    bool toral_basis_exists = false;
};

inline FittingDecomposition fitting_decomposition(const Algebra& alg) {
    SemilinearOperator op = as_semilinear(alg);
    const FieldPtr& f = alg.field();
    std::size_t n = alg.dim();
    std::uint32_t steps = static_cast<std::uint32_t>(n);

    Subspace inv = Subspace::full(f, n);
    for (std::uint32_t i = 0; i < steps; ++i) inv = semilinear_image(op.t, 1, inv);

    Matrix mn = op.iterate_matrix(steps);
    Subspace ker_mn = kernel(mn);
    std::vector<Vec> nil_rows;
    for (std::size_t r = 0; r < ker_mn.dim(); ++r) {
        Vec v = ker_mn.basis().row(r);
        for (auto& x : v) x = f->frobenius(x, -static_cast<std::int64_t>(steps));
        nil_rows.push_back(std::move(v));
    }
    Subspace nil = Subspace::span_rows(f, nil_rows, n);

    if (inv.dim() + nil.dim() != n || subspace_intersect(inv, nil).dim() != 0)
        throw InternalCheckError("Fitting parts are not complementary");
    if (semilinear_image(op.t, 1, inv) != inv)
        throw InternalCheckError("operator is not bijective on the invertible part");
    if (!nil.contains(semilinear_image(op.t, 1, nil)))
        throw InternalCheckError("nil part is not invariant");
    Subspace shrink = nil;
    for (std::uint32_t i = 0; i <= steps && shrink.dim(); ++i)
        shrink = semilinear_image(op.t, 1, shrink);
    if (shrink.dim() != 0)
        throw InternalCheckError("operator is not nilpotent on the nil part");

    // p-fixed points x^[p] = x, solved as an F_p-linear system on coordinates
    std::uint32_t k = f->degree(), pr = f->characteristic();
    FieldPtr fp = FiniteField::prime(pr);
    std::vector<Fel> xpow(k, 1);  // powers of the generator of the modulus basis
    for (std::uint32_t j = 1; j < k; ++j) {
        std::vector<std::uint32_t> digits(k, 0);
        digits[j] = 1;
        xpow[j] = f->from_coeffs(digits);
    }
    auto mult_block = [&](Fel c) {
        Matrix b(fp, k, k);
        for (std::uint32_t j = 0; j < k; ++j) {
            Fel img = f->mul(c, xpow[j]);
            for (std::uint32_t i = 0; i < k; ++i) b.at(i, j) = f->coeff(img, i);
        }
        return b;
    };
    Matrix frob_block(fp, k, k);
    for (std::uint32_t j = 0; j < k; ++j) {
        Fel img = f->frobenius(xpow[j], 1);
        for (std::uint32_t i = 0; i < k; ++i) frob_block.at(i, j) = f->coeff(img, i);
    }
    Matrix big(fp, n * k, n * k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (op.t.at(i, j) == 0) continue;
            Matrix block = mult_block(op.t.at(i, j)).mul(frob_block);
            for (std::uint32_t a = 0; a < k; ++a)
                for (std::uint32_t b = 0; b < k; ++b)
                    big.at(i * k + a, j * k + b) = block.at(a, b);
        }
    for (std::size_t d = 0; d < n * k; ++d) big.at(d, d) = fp->sub(big.at(d, d), 1);
    Subspace fixed_fp = kernel(big);
    std::vector<Vec> fixed_rows;
    for (std::size_t r = 0; r < fixed_fp.dim(); ++r) {
        Vec coded = fixed_fp.basis().row(r);
        Vec v(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::uint32_t> digits(k);
            for (std::uint32_t a = 0; a < k; ++a) digits[a] = coded[i * k + a];
            v[i] = f->from_coeffs(digits);
        }
        fixed_rows.push_back(std::move(v));
    }
    Subspace toral = Subspace::span_rows(f, fixed_rows, n);

    FittingDecomposition out{inv, nil, toral, toral == inv};
    return out;
}

}  // namespace relie
