#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "relie/abelian.hpp"
#include "relie/liealg.hpp"

namespace relie {

// Sparse element of u(L): monomial index -> coefficient, no explicit zeros.
using PBWElement = std::map<std::uint32_t, Fel>;

// The restricted enveloping algebra u(L) on its p^n-dimensional PBW basis.
// Monomials are exponent tuples (a_1..a_n) with 0 <= a_i < p in graded-lex
// order; products are computed by straightening, rewriting e_j e_i for j > i
// through the bracket and e_i^p through the p-map. The monomial-by-generator
// products are memoized; the cache is prefilled when the algebra is small and
// synchronized otherwise, so concurrent use never changes observable results.
class PBWAlgebra {
public:
    explicit PBWAlgebra(Algebra parent) : parent_(std::move(parent)) {
        const FieldPtr& f = parent_.field();
        p_ = f->characteristic();
        n_ = parent_.dim();
        std::uint64_t dim = 1;
        for (std::size_t i = 0; i < n_; ++i) {
            dim *= p_;
            if (dim > kAmbientLimit)
                throw SizeLimit("PBW dimension p^n exceeds the supported dense limit");
        }
        dim_ = static_cast<std::size_t>(dim);

        std::vector<std::vector<std::uint8_t>> tuples;
        std::vector<std::uint8_t> cur(n_, 0);
        tuples.push_back(cur);
        for (;;) {
            std::size_t i = 0;
            while (i < n_ && ++cur[i] == p_) cur[i++] = 0;
            if (i == n_) break;
            tuples.push_back(cur);
            if (n_ == 0) break;
        }
        std::stable_sort(tuples.begin(), tuples.end(),
                         [](const auto& a, const auto& b) {
                             std::size_t da = 0, db = 0;
                             for (auto x : a) da += x;
                             for (auto x : b) db += x;
                             if (da != db) return da < db;
                             return a < b;
                         });
        monos_ = std::move(tuples);
        for (std::uint32_t i = 0; i < monos_.size(); ++i) index_[monos_[i]] = i;

        eager_ = dim_ <= 1024;
        if (eager_) {
            for (std::uint32_t m = 0; m < dim_; ++m)
                for (std::size_t j = 0; j < n_; ++j) mono_times_gen(m, j);
        }
    }

    const Algebra& parent() const { return parent_; }
    const FieldPtr& field() const { return parent_.field(); }
    std::uint32_t characteristic() const { return p_; }
    std::size_t generators() const { return n_; }
    std::size_t dim() const { return dim_; }

    const std::vector<std::uint8_t>& monomial(std::uint32_t idx) const { return monos_[idx]; }
    std::uint32_t monomial_index(const std::vector<std::uint8_t>& t) const {
        return index_.at(t);
    }
    std::uint32_t unit_index() const { return 0; }

    std::size_t monomial_degree(std::uint32_t idx) const {
        std::size_t d = 0;
        for (auto x : monos_[idx]) d += x;
        return d;
    }

    PBWElement one() const { return PBWElement{{0, 1}}; }

    PBWElement embed(const Vec& x) const {
        if (x.size() != n_) throw AmbientMismatch("embed expects an element of L");
        PBWElement e;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!x[i]) continue;
            std::vector<std::uint8_t> t(n_, 0);
            t[i] = 1;
            e[index_.at(t)] = x[i];
        }
        return e;
    }

    PBWElement add(const PBWElement& a, const PBWElement& b) const {
        const FieldPtr& f = field();
        PBWElement r = a;
        for (const auto& [m, c] : b) {
            Fel s = f->add(r.count(m) ? r[m] : 0, c);
            if (s)
                r[m] = s;
            else
                r.erase(m);
        }
        return r;
    }

    PBWElement scale(Fel c, const PBWElement& a) const {
        if (!c) return {};
        const FieldPtr& f = field();
        PBWElement r;
        for (const auto& [m, x] : a) {
            Fel v = f->mul(c, x);
            if (v) r[m] = v;
        }
        return r;
    }

    // right multiplication of a sparse element by the generator e_j
    PBWElement mul_gen(const PBWElement& a, std::size_t j) const {
        const FieldPtr& f = field();
        PBWElement r;
        for (const auto& [m, c] : a) {
            const PBWElement& prod = mono_times_gen(m, j);
            for (const auto& [mm, cc] : prod) {
                Fel s = f->add(r.count(mm) ? r[mm] : 0, f->mul(c, cc));
                if (s)
                    r[mm] = s;
                else
                    r.erase(mm);
            }
        }
        return r;
    }

    PBWElement mul_mono(const PBWElement& a, std::uint32_t mono_idx) const {
        PBWElement r = a;
        const auto& t = monos_[mono_idx];
        for (std::size_t i = 0; i < n_; ++i)
            for (std::uint8_t rep = 0; rep < t[i]; ++rep) r = mul_gen(r, i);
        return r;
    }

    PBWElement mul(const PBWElement& a, const PBWElement& b) const {
        const FieldPtr& f = field();
        PBWElement r;
        for (const auto& [mb, cb] : b) {
            PBWElement part = mul_mono(a, mb);
            for (const auto& [m, c] : part) {
                Fel s = f->add(r.count(m) ? r[m] : 0, f->mul(c, cb));
                if (s)
                    r[m] = s;
                else
                    r.erase(m);
            }
        }
        return r;
    }

    PBWElement power(const PBWElement& a, std::uint32_t e) const {
        PBWElement r = one();
        for (std::uint32_t i = 0; i < e; ++i) r = mul(r, a);
        return r;
    }

    Vec to_dense(const PBWElement& a) const {
        Vec v(dim_, 0);
        for (const auto& [m, c] : a) v[m] = c;
        return v;
    }

    PBWElement from_dense(const Vec& v) const {
        PBWElement e;
        for (std::uint32_t m = 0; m < v.size(); ++m)
            if (v[m]) e[m] = v[m];
        return e;
    }

private:
    Algebra parent_;
    std::uint32_t p_ = 0;
    std::size_t n_ = 0, dim_ = 0;
    std::vector<std::vector<std::uint8_t>> monos_;
    std::map<std::vector<std::uint8_t>, std::uint32_t> index_;
    bool eager_ = false;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::uint64_t, PBWElement> cache_;

    const PBWElement& mono_times_gen(std::uint32_t mono_idx, std::size_t j) const {
        std::uint64_t key = static_cast<std::uint64_t>(mono_idx) * n_ + j;
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        PBWElement val = compute_mono_times_gen(mono_idx, j);
        std::lock_guard<std::mutex> lock(cache_mutex_);
        return cache_.emplace(key, std::move(val)).first->second;
    }

    PBWElement compute_mono_times_gen(std::uint32_t mono_idx, std::size_t j) const {
        const FieldPtr& f = field();
        const auto& m = monos_[mono_idx];
        // largest index past j that carries a generator
        std::size_t k = n_;
        for (std::size_t t = n_; t-- > j + 1;)
            if (m[t] > 0) {
                k = t;
                break;
            }
        if (k == n_) {
            // every live index is <= j: either bump the exponent or fold e_j^p
            if (m[j] + 1u < p_) {
                auto t = m;
                ++t[j];
                return PBWElement{{index_.at(t), 1}};
            }
            auto prefix = m;
            prefix[j] = 0;
            std::uint32_t prefix_idx = index_.at(prefix);
            PBWElement r;
            const Vec& pj = parent_.pmap(j);
            for (std::size_t t = 0; t < n_; ++t) {
                if (!pj[t]) continue;
                PBWElement part = mono_times_gen_uncached(prefix_idx, t);
                for (const auto& [mm, cc] : part) {
                    Fel s = f->add(r.count(mm) ? r[mm] : 0, f->mul(pj[t], cc));
                    if (s)
                        r[mm] = s;
                    else
                        r.erase(mm);
                }
            }
            return r;
        }
        // peel one e_k: m * e_j = (m'' e_k) e_j = (m'' e_j) e_k + m'' [e_k, e_j]
        auto mpp = m;
        --mpp[k];
        std::uint32_t mpp_idx = index_.at(mpp);
        PBWElement part1 = mono_times_gen_uncached(mpp_idx, j);
        PBWElement r;
        for (const auto& [mm, cc] : part1) {
            PBWElement shifted = mono_times_gen_uncached(mm, k);
            for (const auto& [m2, c2] : shifted) {
                Fel s = f->add(r.count(m2) ? r[m2] : 0, f->mul(cc, c2));
                if (s)
                    r[m2] = s;
                else
                    r.erase(m2);
            }
        }
        const Vec& br = parent_.bracket(k, j);
        for (std::size_t t = 0; t < n_; ++t) {
            if (!br[t]) continue;
            PBWElement part = mono_times_gen_uncached(mpp_idx, t);
            for (const auto& [mm, cc] : part) {
                Fel s = f->add(r.count(mm) ? r[mm] : 0, f->mul(br[t], cc));
                if (s)
                    r[mm] = s;
                else
                    r.erase(mm);
            }
        }
        return r;
    }

    // recursion entry that reuses the cache
    PBWElement mono_times_gen_uncached(std::uint32_t mono_idx, std::size_t j) const {
        return mono_times_gen(mono_idx, j);
    }
};

inline PBWAlgebra build_env(const Algebra& alg) { return PBWAlgebra(alg); }

// ---------------------------------------------------------------------------
// augmentation filtration

// the embedded copy of L: span of the degree-1 monomial axes
inline Subspace embedded_l(const PBWAlgebra& u) {
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < u.generators(); ++i) {
        Vec x(u.generators(), 0);
        x[i] = 1;
        rows.push_back(u.to_dense(u.embed(x)));
    }
    return Subspace::span_rows(u.field(), rows, u.dim());
}

// a subspace of L carried into the coordinates of u(L)
inline Subspace embedded_subspace(const PBWAlgebra& u, const Subspace& s_in_l) {
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < s_in_l.dim(); ++r)
        rows.push_back(u.to_dense(u.embed(s_in_l.basis().row(r))));
    return Subspace::span_rows(u.field(), rows, u.dim());
}

// omega^1 = kernel of the augmentation map = span of all non-unit monomials
inline Subspace augmentation_ideal(const PBWAlgebra& u) {
    std::vector<Vec> rows;
    for (std::uint32_t m = 1; m < u.dim(); ++m) {
        Vec v(u.dim(), 0);
        v[m] = 1;
        rows.push_back(std::move(v));
    }
    return Subspace::span_rows(u.field(), rows, u.dim());
}

// omega^1, omega^2, ... until zero or a certified-stable repeat; a power of an
// ideal that repeats once repeats forever. max_power = 0 means no cap.
inline std::vector<Subspace> augmentation_chain(const PBWAlgebra& u, std::size_t max_power = 0) {
    std::vector<Subspace> chain{augmentation_ideal(u)};
    for (;;) {
        const Subspace& prev = chain.back();
        if (prev.dim() == 0) return chain;
        if (chain.size() >= 2 && prev == chain[chain.size() - 2]) return chain;
        if (max_power && chain.size() >= max_power) return chain;
        std::vector<Vec> rows;
        for (std::size_t r = 0; r < prev.dim(); ++r) {
            PBWElement e = u.from_dense(prev.basis().row(r));
            for (std::size_t i = 0; i < u.generators(); ++i)
                rows.push_back(u.to_dense(u.mul_gen(e, i)));
        }
        chain.push_back(Subspace::span_rows(u.field(), rows, u.dim()));
    }
}

inline Subspace augmentation_power(const PBWAlgebra& u, std::size_t k) {
    if (k == 0) throw AmbientMismatch("augmentation powers start at 1");
    std::vector<Subspace> chain = augmentation_chain(u, k);
    if (chain.size() >= k) return chain[k - 1];
    return chain.back();  // chain stabilized (possibly at zero) before k
}

// least k with omega^k = 0; nullopt when the chain stabilizes above zero
inline std::optional<std::size_t> nilpotency_index(const PBWAlgebra& u) {
    std::vector<Subspace> chain = augmentation_chain(u);
    if (chain.back().dim() != 0) return std::nullopt;
    return chain.size();
}

// D_n(L) = L `intersect` omega^n(L), expressed back in L-coordinates; this is
// the definitional side of the dimension subalgebra formula
inline Subspace dimension_subalgebra_oracle(const PBWAlgebra& u, std::size_t n) {
    Subspace meet = subspace_intersect(embedded_l(u), augmentation_power(u, n));
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < meet.dim(); ++r) {
        Vec dense = meet.basis().row(r);
        Vec x(u.generators(), 0);
        for (std::size_t i = 0; i < u.generators(); ++i) {
            std::vector<std::uint8_t> t(u.generators(), 0);
            t[i] = 1;
            x[i] = dense[u.monomial_index(t)];
        }
        rows.push_back(std::move(x));
    }
    return Subspace::span_rows(u.field(), rows, u.generators());
}

// ---------------------------------------------------------------------------
// products of subspaces inside u(L)

namespace detail {

inline Subspace product_span(const PBWAlgebra& u, const std::vector<PBWElement>& left,
                             const std::vector<PBWElement>& right) {
    std::vector<Vec> rows;
    for (const auto& a : left)
        for (const auto& b : right) rows.push_back(u.to_dense(u.mul(a, b)));
    return Subspace::span_rows(u.field(), rows, u.dim());
}

inline std::vector<PBWElement> subspace_elements(const PBWAlgebra& u, const Subspace& s) {
    std::vector<PBWElement> out;
    for (std::size_t r = 0; r < s.dim(); ++r) out.push_back(u.from_dense(s.basis().row(r)));
    return out;
}

inline std::vector<PBWElement> embedded_rows(const PBWAlgebra& u, const Subspace& s_in_l) {
    std::vector<PBWElement> out;
    for (std::size_t r = 0; r < s_in_l.dim(); ++r) out.push_back(u.embed(s_in_l.basis().row(r)));
    return out;
}

inline std::vector<PBWElement> all_nonunit_monomials(const PBWAlgebra& u) {
    std::vector<PBWElement> out;
    for (std::uint32_t m = 1; m < u.dim(); ++m) out.push_back(PBWElement{{m, 1}});
    return out;
}

inline std::vector<PBWElement> all_monomials(const PBWAlgebra& u) {
    std::vector<PBWElement> out;
    for (std::uint32_t m = 0; m < u.dim(); ++m) out.push_back(PBWElement{{m, 1}});
    return out;
}

}  // namespace detail

// J_L = omega(L) L' + L' omega(L); the same subspace must result from L'_p,
// and that equality is asserted on every call.
inline Subspace jl_subspace(const PBWAlgebra& u) {
    const Algebra& alg = u.parent();
    Subspace lprime = bracket_space(alg, alg.full_space(), alg.full_space());
    auto omega_monos = detail::all_nonunit_monomials(u);
    auto build = [&](const Subspace& gen_space) {
        auto gens = detail::embedded_rows(u, gen_space);
        Subspace left = detail::product_span(u, omega_monos, gens);
        Subspace right = detail::product_span(u, gens, omega_monos);
        return subspace_sum(left, right);
    };
    Subspace j = build(lprime);
    Subspace j_from_lp = build(derived_p(alg));
    if (j != j_from_lp)
        throw InternalCheckError("J_L differs between L' and L'_p generating sets");
    return j;
}

// the two sides of the dimension identity behind Lemma Nu(L):
// lhs = dim N u(L) - dim(omega N + N omega), rhs = dim N - dim([N,L] + N^p)
struct NQuotientDims {
    std::size_t lhs = 0;
    std::size_t rhs = 0;
};

inline NQuotientDims n_quotient_dims(const PBWAlgebra& u, const Subspace& n_sub) {
    const Algebra& alg = u.parent();
    if (n_sub.ambient() != alg.dim()) throw AmbientMismatch("N must live in L");
    auto n_rows = detail::embedded_rows(u, n_sub);
    Subspace nu = detail::product_span(u, n_rows, detail::all_monomials(u));
    auto omega_monos = detail::all_nonunit_monomials(u);
    Subspace two_sided = subspace_sum(detail::product_span(u, omega_monos, n_rows),
                                      detail::product_span(u, n_rows, omega_monos));
    if (!nu.contains(two_sided))
        throw InternalCheckError("omega N + N omega escaped N u(L)");

    Subspace np = restricted_subalgebra_closure(alg, p_image_span(alg, n_sub));
    Subspace denom = subspace_sum(bracket_space(alg, n_sub, alg.full_space()), np);
    return NQuotientDims{nu.dim() - two_sided.dim(), n_sub.dim() - denom.dim()};
}

// ---------------------------------------------------------------------------
// the E-space of the main-theorem decomposition

// lifts of the cyclic basis of L/L'_p through first-found coset
// representatives; the elements are linearly independent modulo L'_p
inline std::vector<Vec> e_space_generators(const Algebra& alg) {
    QuotientResult q = quotient(alg, derived_p(alg));
    CyclicDecomposition dec = cyclic_decomposition(q.algebra);
    SemilinearOperator op = as_semilinear(q.algebra);
    std::vector<Vec> x;
    for (std::size_t g = 0; g < dec.generators.size(); ++g) {
        Vec cur = dec.generators[g];
        for (std::uint32_t j = 0; j < dec.exponents[g]; ++j) {
            x.push_back(q.lift(cur));
            cur = op.apply(cur);
        }
    }
    return x;
}

// E = J_L + span of all PBW monomials in X of degree at least two
inline Subspace e_space(const PBWAlgebra& u, const std::vector<Vec>& x) {
    const FieldPtr& f = u.field();
    Subspace j = jl_subspace(u);
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < j.dim(); ++r) rows.push_back(j.basis().row(r));
    std::vector<PBWElement> gens;
    for (const auto& v : x) gens.push_back(u.embed(v));
    std::vector<std::uint8_t> exps(x.size(), 0);
    std::uint32_t p = u.characteristic();
    for (;;) {
        std::size_t i = 0;
        while (i < exps.size() && ++exps[i] == p) exps[i++] = 0;
        if (i == exps.size() || exps.empty()) break;
        std::size_t degree = 0;
        for (auto e : exps) degree += e;
        if (degree < 2) continue;
        PBWElement prod = u.one();
        for (std::size_t t = 0; t < exps.size(); ++t)
            for (std::uint8_t rep = 0; rep < exps[t]; ++rep) prod = u.mul(prod, gens[t]);
        rows.push_back(u.to_dense(prod));
    }
    return Subspace::span_rows(f, rows, u.dim());
}

struct CentralityReport {
    bool ok = true;
    std::vector<std::string> issues;
};

// E/J_L must be a central restricted Lie ideal of omega(L)/J_L: commutators
// [E, omega] land in J_L and p-th powers of E stay in E
inline CentralityReport verify_e_centrality(const PBWAlgebra& u, const Subspace& e) {
    if (!is_p_nilpotent(u.parent()))
        throw NotPNilpotent("centrality check requires a p-nilpotent algebra");
    CentralityReport rep;
    Subspace j = jl_subspace(u);
    auto e_rows = detail::subspace_elements(u, e);
    auto omega_monos = detail::all_nonunit_monomials(u);
    for (std::size_t r = 0; r < e_rows.size(); ++r) {
        for (std::size_t m = 0; m < omega_monos.size(); ++m) {
            PBWElement comm = u.add(u.mul(e_rows[r], omega_monos[m]),
                                    u.scale(u.field()->neg(1), u.mul(omega_monos[m], e_rows[r])));
            if (!j.contains(u.to_dense(comm))) {
                rep.ok = false;
                rep.issues.push_back("commutator of E basis row " + std::to_string(r) +
                                     " with monomial " + std::to_string(m + 1) +
                                     " escapes J_L");
            }
        }
        PBWElement pw = u.power(e_rows[r], u.characteristic());
        if (!e.contains(u.to_dense(pw))) {
            rep.ok = false;
            rep.issues.push_back("p-th power of E basis row " + std::to_string(r) +
                                 " escapes E");
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// weights

inline std::size_t monomial_weight(const PBWAlgebra& u, std::uint32_t mono_idx,
                                   const std::vector<std::uint32_t>& heights) {
    const auto& t = u.monomial(mono_idx);
    std::size_t w = 0;
    for (std::size_t i = 0; i < t.size(); ++i) w += static_cast<std::size_t>(t[i]) * heights[i];
    return w;
}

// the multiset of heights any filtration-adapted basis must have: height h
// with multiplicity dim D_h/D_{h+1}
inline std::vector<std::uint32_t> height_multiset(const Algebra& alg) {
    DimensionChain chain = dimension_chain(alg);
    if (!chain.terminates) throw NotPNilpotent("height multiset needs a terminating D-chain");
    std::vector<std::uint32_t> hs;
    for (std::size_t i = 0; i + 1 < chain.terms.size(); ++i) {
        std::size_t mult = chain.terms[i].dim() - chain.terms[i + 1].dim();
        for (std::size_t t = 0; t < mult; ++t) hs.push_back(static_cast<std::uint32_t>(i + 1));
    }
    return hs;
}

// count of PBW monomials over a basis with the given heights whose weight is
// at least k; by the weight-basis lemma this must equal dim omega^k
inline std::size_t weighted_monomial_count_at_least(const PBWAlgebra& u,
                                                    const std::vector<std::uint32_t>& heights,
                                                    std::size_t k) {
    std::size_t count = 0;
    for (std::uint32_t m = 0; m < u.dim(); ++m)
        if (monomial_weight(u, m, heights) >= k) ++count;
    return count;
}

// the algebra map u(P) -> u(Q) induced by an isomorphism b : P -> Q (column
// convention), as a dim x dim matrix on PBW monomials
inline Matrix induced_env_map(const PBWAlgebra& up, const PBWAlgebra& uq, const Matrix& b) {
    if (up.dim() != uq.dim()) throw AmbientMismatch("induced map needs equal PBW dimensions");
    std::size_t n = up.generators();
    std::vector<PBWElement> gen_images(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = b.at(r, i);
        gen_images[i] = uq.embed(col);
    }
    Matrix m(up.field(), up.dim(), up.dim());
    for (std::uint32_t idx = 0; idx < up.dim(); ++idx) {
        PBWElement img = uq.one();
        const auto& t = up.monomial(idx);
        for (std::size_t i = 0; i < n; ++i)
            for (std::uint8_t rep = 0; rep < t[i]; ++rep) img = uq.mul(img, gen_images[i]);
        for (const auto& [mm, c] : img) m.at(mm, idx) = c;
    }
    return m;
}

}  // namespace relie
