#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "relie/linalg.hpp"

namespace relie {

// A restricted Lie algebra presented by structure constants [b_i, b_j] for
// i < j and the images b_i^[p] of the p-map on basis vectors. Antisymmetry is
// implicit: the (j, i) entry is stored negated, the diagonal is zero.
// Instances are filled once and treated as immutable afterwards; every
// operation below is a pure function.
class Algebra {
public:
    Algebra(FieldPtr f, std::size_t n)
        : field_(std::move(f)),
          dim_(n),
          bracket_(n * n, Vec(n, 0)),
          pmap_(n, Vec(n, 0)),
          names_(n) {
        for (std::size_t i = 0; i < n; ++i) names_[i] = "b" + std::to_string(i + 1);
    }

    const FieldPtr& field() const { return field_; }
    std::size_t dim() const { return dim_; }

    void set_bracket(std::size_t i, std::size_t j, const Vec& v) {
        if (i >= j || j >= dim_ || v.size() != dim_)
            throw AmbientMismatch("bracket entry must have i < j and a full coordinate vector");
        bracket_[i * dim_ + j] = v;
        Vec neg(dim_);
        for (std::size_t m = 0; m < dim_; ++m) neg[m] = field_->neg(v[m]);
        bracket_[j * dim_ + i] = neg;
    }

    void set_pmap(std::size_t i, const Vec& v) {
        if (i >= dim_ || v.size() != dim_) throw AmbientMismatch("pmap entry shape mismatch");
        pmap_[i] = v;
    }

    void set_name(std::size_t i, std::string name) { names_[i] = std::move(name); }

    const Vec& bracket(std::size_t i, std::size_t j) const { return bracket_[i * dim_ + j]; }
    const Vec& pmap(std::size_t i) const { return pmap_[i]; }
    const std::vector<std::string>& names() const { return names_; }

    const std::optional<std::vector<int>>& weights() const { return weights_; }
    void set_weights(std::vector<int> w) { weights_ = std::move(w); }

    bool is_abelian() const {
        for (const auto& v : bracket_)
            for (Fel x : v)
                if (x) return false;
        return true;
    }

    Subspace full_space() const { return Subspace::full(field_, dim_); }
    Subspace zero_space() const { return Subspace::zero(field_, dim_); }

private:
    FieldPtr field_;
    std::size_t dim_;
    std::vector<Vec> bracket_;  // n*n grid of coordinate vectors
    std::vector<Vec> pmap_;
    std::vector<std::string> names_;
    std::optional<std::vector<int>> weights_;
};

// ---------------------------------------------------------------------------
// element arithmetic

inline Vec zero_vec(const Algebra& a) { return Vec(a.dim(), 0); }

inline bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](Fel x) { return x == 0; });
}

inline Vec add_vec(const FieldPtr& f, const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f->add(a[i], b[i]);
    return r;
}

inline Vec scale_vec(const FieldPtr& f, Fel c, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f->mul(c, a[i]);
    return r;
}

inline Vec bracket_elem(const Algebra& alg, const Vec& u, const Vec& v) {
    const FieldPtr& f = alg.field();
    Vec r = zero_vec(alg);
    for (std::size_t i = 0; i < alg.dim(); ++i) {
        if (!u[i]) continue;
        for (std::size_t j = 0; j < alg.dim(); ++j) {
            if (!v[j] || i == j) continue;
            Fel c = f->mul(u[i], v[j]);
            const Vec& bij = alg.bracket(i, j);
            for (std::size_t m = 0; m < alg.dim(); ++m)
                if (bij[m]) r[m] = f->add(r[m], f->mul(c, bij[m]));
        }
    }
    return r;
}

inline Matrix ad_matrix(const Algebra& alg, const Vec& x) {
    Matrix m(alg.field(), alg.dim(), alg.dim());
    for (std::size_t j = 0; j < alg.dim(); ++j) {
        Vec ej = zero_vec(alg);
        ej[j] = 1;
        Vec col = bracket_elem(alg, x, ej);
        for (std::size_t i = 0; i < alg.dim(); ++i) m.at(i, j) = col[i];
    }
    return m;
}

namespace detail {

// sum_{i=1}^{p-1} s_i(u, v) where i*s_i is the lambda^{i-1} coefficient of
// ad(lambda*u + v)^{p-1}(u); this is Jacobson's expansion of (u+v)^[p].
inline Vec jacobson_correction(const Algebra& alg, const Vec& u, const Vec& v) {
    const FieldPtr& f = alg.field();
    std::uint32_t p = f->characteristic();
    // polynomial in lambda with coefficients in L, degree index -> coords
    std::vector<Vec> w{u};
    for (std::uint32_t step = 1; step < p; ++step) {
        std::vector<Vec> next(w.size() + 1, zero_vec(alg));
        for (std::size_t d = 0; d < w.size(); ++d) {
            if (is_zero(w[d])) continue;
            next[d] = add_vec(f, next[d], bracket_elem(alg, v, w[d]));
            next[d + 1] = add_vec(f, next[d + 1], bracket_elem(alg, u, w[d]));
        }
        w = std::move(next);
    }
    Vec total = zero_vec(alg);
    for (std::uint32_t i = 1; i < p; ++i) {
        if (i - 1 >= w.size()) break;
        Fel inv_i = f->inv(f->scalar(i));
        total = add_vec(f, total, scale_vec(f, inv_i, w[i - 1]));
    }
    return total;
}

}  // namespace detail

// x^[p], expanded basis vector by basis vector in a fixed order (left fold),
// accumulating sigma(alpha_i) * pmap(b_i) plus Jacobson correction terms.
inline Vec p_power_once(const Algebra& alg, const Vec& x) {
    const FieldPtr& f = alg.field();
    Vec acc_elem = zero_vec(alg);
    Vec acc_pow = zero_vec(alg);
    bool first = true;
    for (std::size_t i = 0; i < alg.dim(); ++i) {
        if (!x[i]) continue;
        Vec term = zero_vec(alg);
        term[i] = x[i];
        Vec term_pow = scale_vec(f, f->frobenius(x[i], 1), alg.pmap(i));
        if (first) {
            acc_elem = term;
            acc_pow = term_pow;
            first = false;
        } else {
            acc_pow = add_vec(f, acc_pow, term_pow);
            acc_pow = add_vec(f, acc_pow, detail::jacobson_correction(alg, acc_elem, term));
            acc_elem = add_vec(f, acc_elem, term);
        }
    }
    return acc_pow;
}

inline Vec p_power(const Algebra& alg, Vec x, std::uint32_t e) {
    for (std::uint32_t i = 0; i < e; ++i) x = p_power_once(alg, x);
    return x;
}

// least s with x^{p^s} = 0, or nullopt when the orbit cycles without
// reaching zero (the orbit is finite, so a revisit certifies this)
inline std::optional<std::uint32_t> exponent(const Algebra& alg, Vec x) {
    std::set<Vec> seen;
    std::uint32_t s = 0;
    while (!is_zero(x)) {
        if (!seen.insert(x).second) return std::nullopt;
        x = p_power_once(alg, x);
        ++s;
    }
    return s;
}

// ---------------------------------------------------------------------------
// validation

struct Violation {
    std::string axiom;
    std::vector<std::size_t> indices;
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

inline ValidationReport validate(const Algebra& alg) {
    ValidationReport rep;
    const FieldPtr& f = alg.field();
    std::size_t n = alg.dim();
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_zero(alg.bracket(i, i))) {
            rep.ok = false;
            rep.violations.push_back({"antisymmetry", {i, i}, "[b,b] != 0"});
        }
    }
    // entries reduced
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (Fel c : alg.bracket(i, j))
                if (c >= f->order()) {
                    rep.ok = false;
                    rep.violations.push_back({"coefficients", {i, j}, "entry not reduced in field"});
                }
    // Jacobi identity on basis triples
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                Vec ei = zero_vec(alg), ej = zero_vec(alg), ek = zero_vec(alg);
                ei[i] = 1;
                ej[j] = 1;
                ek[k] = 1;
                Vec s = bracket_elem(alg, bracket_elem(alg, ei, ej), ek);
                s = add_vec(f, s, bracket_elem(alg, bracket_elem(alg, ej, ek), ei));
                s = add_vec(f, s, bracket_elem(alg, bracket_elem(alg, ek, ei), ej));
                if (!is_zero(s)) {
                    rep.ok = false;
                    rep.violations.push_back({"jacobi", {i, j, k}, "Jacobi sum nonzero"});
                }
            }
    // ad(b^[p]) = ad(b)^p per basis vector
    std::uint32_t p = f->characteristic();
    for (std::size_t i = 0; i < n; ++i) {
        Vec ei = zero_vec(alg);
        ei[i] = 1;
        Matrix adp = ad_matrix(alg, ei);
        Matrix pow = Matrix::identity(f, n);
        for (std::uint32_t t = 0; t < p; ++t) pow = pow.mul(adp);
        Matrix lhs = ad_matrix(alg, alg.pmap(i));
        if (!(lhs == pow)) {
            rep.ok = false;
            rep.violations.push_back({"ad_compatibility", {i}, "ad(b^[p]) != ad(b)^p"});
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// subspace machinery over the algebra

inline Subspace bracket_space(const Algebra& alg, const Subspace& a, const Subspace& b) {
    if (a.ambient() != alg.dim() || b.ambient() != alg.dim())
        throw AmbientMismatch("bracket_space ambient mismatch");
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            rows.push_back(bracket_elem(alg, a.basis().row(i), b.basis().row(j)));
    return Subspace::span_rows(alg.field(), rows, alg.dim());
}

// span{ b^[p] : b a basis vector of s }
inline Subspace p_image_span(const Algebra& alg, const Subspace& s) {
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < s.dim(); ++i)
        rows.push_back(p_power_once(alg, s.basis().row(i)));
    return Subspace::span_rows(alg.field(), rows, alg.dim());
}

// smallest subspace containing s whose basis p-powers stay inside
// (fixed-point iteration; callers guarantee bracket closure where needed)
inline Subspace p_closure(const Algebra& alg, Subspace s) {
    for (;;) {
        Subspace next = subspace_sum(s, p_image_span(alg, s));
        if (next.dim() == s.dim()) return s;
        s = next;
    }
}

// closure under brackets with the whole algebra and under the p-map
inline Subspace restricted_ideal_closure(const Algebra& alg, Subspace s) {
    Subspace l = alg.full_space();
    for (;;) {
        Subspace next = subspace_sum(s, p_image_span(alg, s));
        next = subspace_sum(next, bracket_space(alg, s, l));
        if (next.dim() == s.dim()) return s;
        s = next;
    }
}

// closure of s under its own brackets and p-powers (restricted subalgebra span)
inline Subspace restricted_subalgebra_closure(const Algebra& alg, Subspace s) {
    for (;;) {
        Subspace next = subspace_sum(s, p_image_span(alg, s));
        next = subspace_sum(next, bracket_space(alg, s, s));
        if (next.dim() == s.dim()) return s;
        s = next;
    }
}

// gamma_1 = L, gamma_{i+1} = [gamma_i, L]; the returned chain ends with the
// first stable term (0 exactly when the algebra is nilpotent)
inline std::vector<Subspace> lower_central_series(const Algebra& alg) {
    std::vector<Subspace> chain{alg.full_space()};
    for (;;) {
        Subspace next = bracket_space(alg, chain.back(), alg.full_space());
        if (next == chain.back()) return chain;
        chain.push_back(next);
    }
}

inline std::uint32_t nilpotence_class(const Algebra& alg) {
    std::vector<Subspace> chain = lower_central_series(alg);
    if (chain.back().dim() != 0)
        throw NotNilpotent("lower central series stabilizes above zero");
    return static_cast<std::uint32_t>(chain.size()) - 1;
}

// L'_p: the restricted subalgebra generated by gamma_2; bracket closure is
// enforced even though it is automatic for nilpotent input
inline Subspace derived_p(const Algebra& alg) {
    Subspace g2 = bracket_space(alg, alg.full_space(), alg.full_space());
    return restricted_ideal_closure(alg, g2);
}

inline Subspace center(const Algebra& alg) {
    std::size_t n = alg.dim();
    if (n == 0) return alg.zero_space();
    Matrix sys(alg.field(), n * n, n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec ei = zero_vec(alg);
        ei[i] = 1;
        for (std::size_t j = 0; j < n; ++j) {
            Vec ej = zero_vec(alg);
            ej[j] = 1;
            Vec br = bracket_elem(alg, ei, ej);
            for (std::size_t m = 0; m < n; ++m) sys.at(j * n + m, i) = br[m];
        }
    }
    return kernel(sys);
}

namespace detail {

// Iterated p-image orbit of a subspace with cycle detection. Returns the list
// S_0, S_1, ... up to (not including) the first revisited subspace, plus the
// index that was revisited.
struct ImageOrbit {
    std::vector<Subspace> terms;
    std::size_t cycle_start = 0;
};

inline ImageOrbit image_orbit(const Algebra& alg, Subspace s) {
    ImageOrbit orbit;
    for (;;) {
        for (std::size_t i = 0; i < orbit.terms.size(); ++i)
            if (orbit.terms[i] == s) {
                orbit.cycle_start = i;
                return orbit;
            }
        orbit.terms.push_back(s);
        s = p_image_span(alg, s);
    }
}

}  // namespace detail

// D_n(L) = sum over i*p^j >= n of gamma_i(L)^{p^j}, where gamma_i^{p^j} is the
// j-fold iterated p-image span of a basis of gamma_i. The result is checked to
// be p-closed and an ideal; a failure is surfaced, not hidden.
inline Subspace dimension_subalgebra(const Algebra& alg, std::uint32_t n) {
    if (n == 0) throw AmbientMismatch("dimension subalgebra index starts at 1");
    const std::uint32_t p = alg.field()->characteristic();
    std::vector<Subspace> gammas = lower_central_series(alg);
    std::size_t tail_index = gammas.size() - 1;  // gamma_i = gammas[tail] for i >= tail+1
    Subspace total = alg.zero_space();
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        std::uint32_t i = static_cast<std::uint32_t>(gi + 1);
        const Subspace& g = gammas[gi];
        if (g.dim() == 0) continue;
        detail::ImageOrbit orbit = detail::image_orbit(alg, g);
        // smallest j with i*p^j >= n; for the stable tail any index i >= n is
        // available too, so every j >= 0 counts there
        std::uint64_t jmin = 0;
        if (gi == tail_index) {
            jmin = 0;
        } else {
            std::uint64_t v = i;
            while (v < n) {
                v *= p;
                ++jmin;
            }
        }
        for (std::size_t j = 0; j < orbit.terms.size(); ++j) {
            bool in_cycle = j >= orbit.cycle_start;
            if (j >= jmin || in_cycle)
                total = subspace_sum(total, orbit.terms[j]);
        }
    }
    if (!total.contains(p_image_span(alg, total)) ||
        !total.contains(bracket_space(alg, total, alg.full_space())))
        throw InternalCheckError(
            "dimension subalgebra formula produced a non-ideal or non-p-closed subspace at n=" +
            std::to_string(n));
    return total;
}

struct DimensionChain {
    std::vector<Subspace> terms;  // D_1, D_2, ...
    bool terminates = false;      // reached 0
};

// D_1 >= D_2 >= ...; stops at 0 or at the provably stable tail. Plateaus can
// occur mid-chain (heights skip values), so stabilization is only certified
// past the orbit pre-periods.
inline DimensionChain dimension_chain(const Algebra& alg) {
    const std::uint32_t p = alg.field()->characteristic();
    std::vector<Subspace> gammas = lower_central_series(alg);
    std::uint64_t safe = 1;
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        detail::ImageOrbit orbit = detail::image_orbit(alg, gammas[gi]);
        std::uint64_t bound = gi + 1;
        for (std::size_t j = 0; j < orbit.cycle_start + 1; ++j) bound *= p;
        safe = std::max(safe, bound);
    }
    DimensionChain chain;
    for (std::uint32_t n = 1;; ++n) {
        chain.terms.push_back(dimension_subalgebra(alg, n));
        const Subspace& last = chain.terms.back();
        if (chain.terms.size() >= 2 &&
            !chain.terms[chain.terms.size() - 2].contains(last))
            throw InternalCheckError("dimension subalgebra chain is not descending");
        if (last.dim() == 0) {
            chain.terminates = true;
            return chain;
        }
        if (n >= safe && chain.terms.size() >= 2 &&
            chain.terms[chain.terms.size() - 2] == last) {
            chain.terms.pop_back();
            return chain;
        }
    }
}

// largest n with x in D_n(L); nullopt means every D_n (infinite height)
inline std::optional<std::uint32_t> height(const Algebra& alg, const DimensionChain& chain,
                                           const Vec& x) {
    if (is_zero(x)) return std::nullopt;
    std::uint32_t h = 0;
    for (std::size_t i = 0; i < chain.terms.size(); ++i) {
        if (chain.terms[i].contains(x))
            h = static_cast<std::uint32_t>(i + 1);
        else
            return h;
    }
    return chain.terminates ? std::optional<std::uint32_t>(h) : std::nullopt;
}

// ---------------------------------------------------------------------------
// quotients

inline bool is_restricted_ideal(const Algebra& alg, const Subspace& s) {
    return s.contains(bracket_space(alg, s, alg.full_space())) &&
           s.contains(p_image_span(alg, s));
}

inline bool is_restricted_subalgebra(const Algebra& alg, const Subspace& s) {
    return s.contains(bracket_space(alg, s, s)) && s.contains(p_image_span(alg, s));
}

// Quotient presentation on the complement coordinates of the ideal, plus the
// lift/project maps between the two coordinate systems.
struct QuotientResult {
    Algebra algebra;
    Subspace ideal;
    std::vector<std::size_t> rep_coords;  // quotient basis j lifts to e_{rep_coords[j]}

    Vec project(const Vec& v) const {
        Vec reduced = ideal.reduce(v);
        Vec out(rep_coords.size());
        for (std::size_t j = 0; j < rep_coords.size(); ++j) out[j] = reduced[rep_coords[j]];
        return out;
    }

    Vec lift(const Vec& v) const {
        Vec out(ideal.ambient(), 0);
        for (std::size_t j = 0; j < rep_coords.size(); ++j) out[rep_coords[j]] = v[j];
        return out;
    }
};

inline QuotientResult quotient(const Algebra& alg, const Subspace& ideal) {
    if (ideal.ambient() != alg.dim()) throw AmbientMismatch("ideal ambient mismatch");
    if (!is_restricted_ideal(alg, ideal))
        throw NotAnIdeal("subspace is not a restricted ideal");
    std::vector<bool> is_pivot(alg.dim(), false);
    for (std::size_t p : ideal.pivots()) is_pivot[p] = true;
    std::vector<std::size_t> reps;
    for (std::size_t c = 0; c < alg.dim(); ++c)
        if (!is_pivot[c]) reps.push_back(c);

    Algebra q(alg.field(), reps.size());
    QuotientResult result{std::move(q), ideal, reps};
    for (std::size_t a = 0; a < reps.size(); ++a) {
        for (std::size_t b = a + 1; b < reps.size(); ++b) {
            Vec ea = zero_vec(alg), eb = zero_vec(alg);
            ea[reps[a]] = 1;
            eb[reps[b]] = 1;
            result.algebra.set_bracket(a, b, result.project(bracket_elem(alg, ea, eb)));
        }
        Vec ea = zero_vec(alg);
        ea[reps[a]] = 1;
        result.algebra.set_pmap(a, result.project(p_power_once(alg, ea)));
        result.algebra.set_name(a, alg.names()[reps[a]]);
    }
    ValidationReport rep = validate(result.algebra);
    if (!rep.ok) throw InternalCheckError("quotient presentation failed validation");
    return result;
}

// ---------------------------------------------------------------------------
// graded algebra gr(L) = direct sum of D_i/D_{i+1}

struct GradedResult {
    Algebra algebra;          // carries weights metadata
    Matrix representatives;   // row t = representative in L of graded basis t
    std::vector<int> weights;
};

inline GradedResult graded(const Algebra& alg) {
    DimensionChain chain = dimension_chain(alg);
    if (!chain.terminates)
        throw NotPNilpotent("dimension subalgebra chain does not reach zero");
    const FieldPtr& f = alg.field();
    std::vector<Vec> reps;
    std::vector<int> weights;
    for (std::size_t i = 0; i + 1 < chain.terms.size(); ++i) {
        Matrix level = complement_rows(chain.terms[i], chain.terms[i + 1]);
        for (std::size_t r = 0; r < level.rows(); ++r) {
            reps.push_back(level.row(r));
            weights.push_back(static_cast<int>(i + 1));
        }
    }
    if (reps.size() != alg.dim())
        throw InternalCheckError("graded basis size does not match dim L");
    Matrix basis = Matrix::from_rows(f, reps, alg.dim());
    int max_weight = weights.empty() ? 0 : weights.back();

    auto graded_coords = [&](const Vec& w, int target_weight) {
        Vec out(reps.size(), 0);
        if (is_zero(w)) return out;
        if (target_weight > max_weight) {
            throw InternalCheckError("graded component lands beyond the chain but is nonzero");
        }
        auto coords = coords_in_rows(basis, w);
        if (!coords) throw InternalCheckError("graded representative basis is not a basis");
        for (std::size_t t = 0; t < reps.size(); ++t) {
            if ((*coords)[t] && weights[t] < target_weight)
                throw InternalCheckError("graded element has coordinates below its weight");
            out[t] = weights[t] == target_weight ? (*coords)[t] : 0;
        }
        return out;
    };

    Algebra g(f, reps.size());
    for (std::size_t a = 0; a < reps.size(); ++a) {
        for (std::size_t b = a + 1; b < reps.size(); ++b) {
            Vec w = bracket_elem(alg, reps[a], reps[b]);
            g.set_bracket(a, b, graded_coords(w, weights[a] + weights[b]));
        }
        Vec w = p_power_once(alg, reps[a]);
        g.set_pmap(a, graded_coords(w, static_cast<int>(f->characteristic()) * weights[a]));
        g.set_name(a, "w" + std::to_string(weights[a]) + "_" + std::to_string(a + 1));
    }
    g.set_weights(weights);
    ValidationReport rep = validate(g);
    if (!rep.ok) throw InternalCheckError("graded presentation failed validation");
    return GradedResult{std::move(g), std::move(basis), std::move(weights)};
}

// ---------------------------------------------------------------------------
// p-nilpotency

// true iff every basis vector has finite exponent and the descending chain
// L >= p_closure(p-image of L) >= ... reaches zero
inline bool is_p_nilpotent(const Algebra& alg) {
    for (std::size_t i = 0; i < alg.dim(); ++i) {
        Vec ei = zero_vec(alg);
        ei[i] = 1;
        if (!exponent(alg, ei)) return false;
    }
    Subspace c = alg.full_space();
    for (;;) {
        Subspace next = p_closure(alg, p_image_span(alg, c));
        if (next.dim() == 0) return true;
        if (next.dim() >= c.dim()) return false;
        c = next;
    }
}

// transport the presentation through an invertible change of basis; column a
// of B is the new basis vector b'_a in old coordinates
inline Algebra base_change(const Algebra& alg, const Matrix& b) {
    auto binv = inverse(b);
    if (!binv) throw AmbientMismatch("base change matrix is singular");
    std::size_t n = alg.dim();
    Algebra out(alg.field(), n);
    std::vector<Vec> cols(n);
    for (std::size_t a = 0; a < n; ++a) {
        Vec col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = b.at(i, a);
        cols[a] = col;
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t c = a + 1; c < n; ++c)
            out.set_bracket(a, c, binv->mul_vec(bracket_elem(alg, cols[a], cols[c])));
        out.set_pmap(a, binv->mul_vec(p_power_once(alg, cols[a])));
    }
    return out;
}

// block direct sum; useful for assembling catalog fixtures
inline Algebra direct_sum(const Algebra& a, const Algebra& b) {
    if (!a.field()->same(*b.field())) throw AmbientMismatch("direct sum over different fields");
    std::size_t n = a.dim(), m = b.dim();
    Algebra out(a.field(), n + m);
    auto embed_a = [&](const Vec& v) {
        Vec r(n + m, 0);
        std::copy(v.begin(), v.end(), r.begin());
        return r;
    };
    auto embed_b = [&](const Vec& v) {
        Vec r(n + m, 0);
        std::copy(v.begin(), v.end(), r.begin() + n);
        return r;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) out.set_bracket(i, j, embed_a(a.bracket(i, j)));
        out.set_pmap(i, embed_a(a.pmap(i)));
        out.set_name(i, a.names()[i] + "'");
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j)
            out.set_bracket(n + i, n + j, embed_b(b.bracket(i, j)));
        out.set_pmap(n + i, embed_b(b.pmap(i)));
        out.set_name(n + i, b.names()[i] + "''");
    }
    return out;
}

}  // namespace relie
