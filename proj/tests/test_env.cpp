#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "relie/env.hpp"

using namespace relie;
using namespace relie::testing;

namespace {

PBWElement random_element(const PBWAlgebra& u, std::mt19937_64& rng, int max_terms = 4) {
    std::uniform_int_distribution<std::uint32_t> mono(0, static_cast<std::uint32_t>(u.dim() - 1));
    std::uniform_int_distribution<std::uint32_t> coef(0, u.field()->order() - 1);
    PBWElement e;
    for (int t = 0; t < max_terms; ++t) {
        Fel c = coef(rng);
        if (c) e[mono(rng)] = c;
    }
    return e;
}

Vec random_l_element(const Algebra& alg, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint32_t> coef(0, alg.field()->order() - 1);
    Vec v(alg.dim());
    for (auto& x : v) x = coef(rng);
    return v;
}

}  // namespace

TEST_CASE("PBW dimension and the truncated polynomial case") {
    SECTION("n = 1, trivial p-map: F[x]/(x^p)") {
        for (auto f : {F2(), F3()}) {
            PBWAlgebra u = build_env(one_dim(f, 0));
            CHECK(u.dim() == f->characteristic());
            // x^{p-1} * x = 0
            PBWElement x = u.embed({1});
            CHECK(u.power(x, f->characteristic()).empty());
        }
    }
    SECTION("n = 1 toral: F[x]/(x^p - x)") {
        PBWAlgebra u = build_env(one_dim(F2(), 1));
        PBWElement x = u.embed({1});
        CHECK(u.power(x, 2) == x);
    }
    SECTION("Heisenberg over F_2 has dimension 8 and y x = x y + z") {
        PBWAlgebra u = build_env(heisenberg(F2(), 0, 0, 0));
        CHECK(u.dim() == 8);
        Vec x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
        PBWElement yx = u.mul(u.embed(y), u.embed(x));
        PBWElement expected = u.add(u.mul(u.embed(x), u.embed(y)), u.embed(z));
        CHECK(yx == expected);
    }
    SECTION("dimension is p^n on bigger fixtures") {
        CHECK(build_env(ut4_f2()).dim() == 64);
        CHECK(build_env(filiform4_f3()).dim() == 81);
        CHECK(build_env(Algebra(F3(), 0)).dim() == 1);
    }
}

TEST_CASE("multiplication is associative and unital (spot check)") {
    std::mt19937_64 rng(53);
    for (const Algebra& alg : {heisenberg(F3(), 1, 2, 1), ut4_f2(), filiform4_f3(),
                               heisenberg(F2(), 1, 1, 1)}) {
        PBWAlgebra u = build_env(alg);
        for (int t = 0; t < 12; ++t) {
            PBWElement a = random_element(u, rng), b = random_element(u, rng),
                       c = random_element(u, rng);
            CHECK(u.mul(u.mul(a, b), c) == u.mul(a, u.mul(b, c)));
        }
        PBWElement a = random_element(u, rng);
        CHECK(u.mul(u.one(), a) == a);
        CHECK(u.mul(a, u.one()) == a);
    }
}

TEST_CASE("the embedding is a restricted homomorphism") {
    std::mt19937_64 rng(59);
    for (const Algebra& alg : {heisenberg(F2(), 0, 1, 0), heisenberg(F3(), 2, 0, 1), ut4_f2(),
                               filiform4_f3()}) {
        PBWAlgebra u = build_env(alg);
        const FieldPtr& f = alg.field();
        // commutators reproduce brackets on basis pairs
        for (std::size_t i = 0; i < alg.dim(); ++i)
            for (std::size_t j = i + 1; j < alg.dim(); ++j) {
                PBWElement ei = u.embed(unit(alg.dim(), i));
                PBWElement ej = u.embed(unit(alg.dim(), j));
                PBWElement comm = u.add(u.mul(ej, ei), u.scale(f->neg(1), u.mul(ei, ej)));
                CHECK(comm == u.embed(bracket_elem(alg, unit(alg.dim(), j), unit(alg.dim(), i))));
            }
        // associative p-th powers reproduce the p-map, on basis vectors and on
        // random elements (this independently validates the Jacobson expansion)
        for (std::size_t i = 0; i < alg.dim(); ++i) {
            PBWElement ei = u.embed(unit(alg.dim(), i));
            CHECK(u.power(ei, f->characteristic()) == u.embed(alg.pmap(i)));
        }
        for (int t = 0; t < 20; ++t) {
            Vec v = random_l_element(alg, rng);
            CHECK(u.power(u.embed(v), f->characteristic()) ==
                  u.embed(p_power(alg, v, 1)));
        }
    }
}

TEST_CASE("augmentation filtration") {
    SECTION("n = 1, F_2, trivial p-map") {
        PBWAlgebra u = build_env(one_dim(F2(), 0));
        auto chain = augmentation_chain(u);
        REQUIRE(chain.size() == 2);
        CHECK(chain[0].dim() == 1);
        CHECK(chain[1].dim() == 0);
        CHECK(nilpotency_index(u) == 2u);
    }
    SECTION("Heisenberg over F_2: dims 7,5,3,1,0") {
        PBWAlgebra u = build_env(heisenberg(F2(), 0, 0, 0));
        auto chain = augmentation_chain(u);
        std::vector<std::size_t> dims;
        for (const auto& s : chain) dims.push_back(s.dim());
        CHECK(dims == std::vector<std::size_t>{7, 5, 3, 1, 0});
        CHECK(nilpotency_index(u) == 5u);
    }
    SECTION("one-sided generator products agree with two-sided products") {
        for (const Algebra& alg : {heisenberg(F3(), 1, 0, 0), heisenberg(F2(), 0, 1, 0)}) {
            PBWAlgebra u = build_env(alg);
            auto chain = augmentation_chain(u);
            // recompute omega^{k+1} as span{a*b : a in basis omega^k, b in basis omega}
            for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
                auto lhs = detail::subspace_elements(u, chain[k]);
                auto rhs = detail::subspace_elements(u, chain[0]);
                CHECK(detail::product_span(u, lhs, rhs) == chain[k + 1]);
            }
        }
    }
    SECTION("toral algebras have non-nilpotent augmentation ideals") {
        PBWAlgebra u = build_env(one_dim(F2(), 1));
        CHECK(!nilpotency_index(u).has_value());
        CHECK(augmentation_power(u, 10).dim() == 1);
    }
}

TEST_CASE("dimension subalgebra oracle agrees with the closed formula") {
    for (const Algebra& alg :
         {heisenberg(F2(), 0, 0, 0), heisenberg(F2(), 1, 1, 1), heisenberg(F3(), 0, 2, 0),
          abelian_partition(F2(), {2, 1}), abelian_partition(F3(), {2}), filiform4_f3(),
          ut4_f2(), one_dim(F2(), 1), heisenberg(F2(), 0, 0, 1)}) {
        PBWAlgebra u = build_env(alg);
        std::size_t bound = augmentation_chain(u).size();
        for (std::size_t n = 1; n <= bound; ++n) {
            CHECK(dimension_subalgebra(alg, static_cast<std::uint32_t>(n)) ==
                  dimension_subalgebra_oracle(u, n));
        }
    }
}

TEST_CASE("oracle examples") {
    PBWAlgebra u = build_env(heisenberg(F2(), 0, 0, 0));
    CHECK(dimension_subalgebra_oracle(u, 1) == Subspace::full(F2(), 3));
    CHECK(dimension_subalgebra_oracle(u, 2) == Subspace::span_rows(F2(), {{0, 0, 1}}, 3));
    PBWAlgebra a = build_env(abelian_partition(F2(), {1, 1}));
    CHECK(dimension_subalgebra_oracle(a, 2).dim() == 0);
}

TEST_CASE("J_L") {
    SECTION("abelian: zero") {
        PBWAlgebra u = build_env(abelian_partition(F3(), {2}));
        CHECK(jl_subspace(u).dim() == 0);
    }
    SECTION("Heisenberg over F_2: span{xz, yz, xyz}") {
        PBWAlgebra u = build_env(heisenberg(F2(), 0, 0, 0));
        Subspace j = jl_subspace(u);
        CHECK(j.dim() == 3);
        auto mono = [&](std::uint8_t a, std::uint8_t b, std::uint8_t c) {
            Vec v(8, 0);
            v[u.monomial_index({a, b, c})] = 1;
            return v;
        };
        CHECK(j.contains(mono(1, 0, 1)));
        CHECK(j.contains(mono(0, 1, 1)));
        CHECK(j.contains(mono(1, 1, 1)));
        // J_L sits inside omega^2
        CHECK(augmentation_power(u, 2).contains(j));
    }
}

TEST_CASE("Nu(L) dimension identity") {
    SECTION("N = 0") {
        PBWAlgebra u = build_env(heisenberg(F2(), 0, 0, 0));
        NQuotientDims d = n_quotient_dims(u, u.parent().zero_space());
        CHECK(d.lhs == 0);
        CHECK(d.rhs == 0);
    }
    SECTION("N = L for abelian with zero p-map") {
        Algebra a = abelian_partition(F2(), {1, 1});
        Algebra z(F2(), 2);
        PBWAlgebra u = build_env(z);
        NQuotientDims d = n_quotient_dims(u, z.full_space());
        CHECK(d.lhs == 2);
        CHECK(d.rhs == 2);
    }
    SECTION("N = L'_p for Heisenberg over F_2") {
        Algebra h = heisenberg(F2(), 0, 0, 0);
        PBWAlgebra u = build_env(h);
        NQuotientDims d = n_quotient_dims(u, derived_p(h));
        CHECK(d.lhs == 1);
        CHECK(d.rhs == 1);
    }
    SECTION("lhs = rhs across fixtures and canonical subalgebras") {
        for (const Algebra& alg : {heisenberg(F2(), 1, 0, 0), heisenberg(F3(), 0, 0, 0),
                                   ut4_f2(), filiform4_f3(), abelian_partition(F3(), {2, 1})}) {
            PBWAlgebra u = build_env(alg);
            for (const Subspace& n_sub :
                 {alg.zero_space(), derived_p(alg), center(alg), alg.full_space()}) {
                NQuotientDims d = n_quotient_dims(u, n_sub);
                CHECK(d.lhs == d.rhs);
            }
        }
    }
}

TEST_CASE("E-space decomposition") {
    SECTION("two-dimensional abelian over F_2: E = span{x1 x2}") {
        Algebra a(F2(), 2);
        PBWAlgebra u = build_env(a);
        auto x = e_space_generators(a);
        REQUIRE(x.size() == 2);
        Subspace e = e_space(u, x);
        CHECK(e.dim() == 1);
        CHECK(e.contains(u.to_dense(u.mul(u.embed(x[0]), u.embed(x[1])))));
    }
    SECTION("omega = L + E and (L + J) meet E = J") {
        for (const Algebra& alg :
             {heisenberg(F2(), 0, 0, 0), heisenberg(F3(), 1, 0, 0), ut4_f2(),
              abelian_partition(F2(), {2, 1}), filiform4_f3()}) {
            PBWAlgebra u = build_env(alg);
            auto x = e_space_generators(alg);
            Subspace e = e_space(u, x);
            Subspace l = embedded_l(u);
            Subspace j = jl_subspace(u);
            CHECK(subspace_sum(l, e) == augmentation_power(u, 1));
            CHECK(subspace_intersect(subspace_sum(l, j), e) == j);
            // second form: E meet L'_p u(L) = J
            auto lp_rows = detail::embedded_rows(u, derived_p(alg));
            Subspace lpu = detail::product_span(u, lp_rows, detail::all_monomials(u));
            CHECK(subspace_intersect(e, lpu) == j);
        }
    }
    SECTION("E/J_L is central and p-closed") {
        for (const Algebra& alg :
             {abelian_partition(F2(), {1, 1}), heisenberg(F2(), 0, 0, 0), filiform4_f3()}) {
            PBWAlgebra u = build_env(alg);
            Subspace e = e_space(u, e_space_generators(alg));
            CentralityReport rep = verify_e_centrality(u, e);
            CHECK(rep.ok);
            CHECK(rep.issues.empty());
        }
    }
    SECTION("non-p-nilpotent input refused") {
        Algebra t = one_dim(F2(), 1);
        PBWAlgebra u = build_env(t);
        CHECK_THROWS_AS(verify_e_centrality(u, augmentation_ideal(u)), NotPNilpotent);
    }
}

TEST_CASE("heights and weights") {
    Algebra h = heisenberg(F2(), 0, 0, 0);
    PBWAlgebra u = build_env(h);
    DimensionChain chain = dimension_chain(h);
    CHECK(height(h, chain, Vec{0, 0, 1}) == 2u);
    auto heights = height_multiset(h);
    CHECK(heights == std::vector<std::uint32_t>{1, 1, 2});
    CHECK(monomial_weight(u, u.monomial_index({1, 1, 1}), heights) == 4);
    CHECK(!height(h, chain, Vec{0, 0, 0}).has_value());
}

TEST_CASE("weight-count basis lemma: counts match omega dims") {
    for (const Algebra& alg :
         {heisenberg(F2(), 0, 0, 0), heisenberg(F3(), 0, 0, 0), abelian_partition(F2(), {3}),
          abelian_partition(F3(), {2, 1}), ut4_f2(), filiform4_f3()}) {
        PBWAlgebra u = build_env(alg);
        auto heights = height_multiset(alg);
        auto chain = augmentation_chain(u);
        for (std::size_t k = 1; k <= chain.size(); ++k)
            CHECK(chain[k - 1].dim() == weighted_monomial_count_at_least(u, heights, k));
    }
}

TEST_CASE("graded filtration dims match: u(gr L) vs gr(u(L))") {
    for (const Algebra& alg :
         {heisenberg(F2(), 1, 0, 0), abelian_partition(F3(), {2}), ut4_f2(), filiform4_f3()}) {
        PBWAlgebra u = build_env(alg);
        GradedResult gr = graded(alg);
        PBWAlgebra ug = build_env(gr.algebra);
        auto c1 = augmentation_chain(u);
        auto c2 = augmentation_chain(ug);
        REQUIRE(c1.size() == c2.size());
        for (std::size_t k = 0; k < c1.size(); ++k) CHECK(c1[k].dim() == c2[k].dim());
    }
}

TEST_CASE("filtration transport under base change (Dn + omega^{n+1})") {
    std::mt19937_64 rng(61);
    for (const Algebra& alg : {heisenberg(F2(), 0, 0, 0), abelian_partition(F3(), {2})}) {
        Matrix b = random_invertible(alg.field(), alg.dim(), rng);
        Algebra moved = base_change(alg, b);
        PBWAlgebra up = build_env(alg);
        PBWAlgebra uq = build_env(moved);
        Matrix phi = induced_env_map(up, uq, b);
        auto dp = dimension_chain(alg);
        auto dq = dimension_chain(moved);
        std::size_t kmax = std::min(dp.terms.size(), dq.terms.size());
        for (std::size_t n = 1; n <= kmax; ++n) {
            Subspace lhs = subspace_sum(embedded_subspace(up, dp.terms[n - 1]),
                                        augmentation_power(up, n + 1));
            // transport through phi
            std::vector<Vec> rows;
            for (std::size_t r = 0; r < lhs.dim(); ++r)
                rows.push_back(phi.mul_vec(lhs.basis().row(r)));
            Subspace transported = Subspace::span_rows(up.field(), rows, up.dim());
            Subspace rhs = subspace_sum(embedded_subspace(uq, dq.terms[n - 1]),
                                        augmentation_power(uq, n + 1));
            CHECK(transported == rhs);
        }
    }
}
