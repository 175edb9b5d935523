#pragma once

// In-memory builders for the small algebras the tests revolve around.

#include "relie/liealg.hpp"

namespace relie::testing {

inline FieldPtr F2() { return FiniteField::prime(2); }
inline FieldPtr F3() { return FiniteField::prime(3); }
inline FieldPtr F4() { return FiniteField::make(2, 2, {1, 1, 1}); }

// [x,y] = z with the p-map valued in the center: x -> a z, y -> b z, z -> c z
inline Algebra heisenberg(FieldPtr f, Fel a, Fel b, Fel c) {
    Algebra alg(std::move(f), 3);
    alg.set_bracket(0, 1, {0, 0, 1});
    alg.set_pmap(0, {0, 0, a});
    alg.set_pmap(1, {0, 0, b});
    alg.set_pmap(2, {0, 0, c});
    alg.set_name(0, "x");
    alg.set_name(1, "y");
    alg.set_name(2, "z");
    return alg;
}

// abelian with p-map shifting down each block: x1 -> x2 -> ... -> 0
inline Algebra abelian_partition(FieldPtr f, const std::vector<std::uint32_t>& parts) {
    std::size_t n = 0;
    for (auto s : parts) n += s;
    Algebra alg(std::move(f), n);
    std::size_t at = 0;
    for (auto s : parts) {
        for (std::size_t i = 0; i + 1 < s; ++i) {
            Vec v(n, 0);
            v[at + i + 1] = 1;
            alg.set_pmap(at + i, v);
        }
        at += s;
    }
    return alg;
}

// one-dimensional with x^[p] = c x
inline Algebra one_dim(FieldPtr f, Fel c) {
    Algebra alg(std::move(f), 1);
    alg.set_pmap(0, {c});
    return alg;
}

// strictly upper triangular 4x4 matrices over F_2 with the matrix-square
// p-map; basis E12,E13,E14,E23,E24,E34 (squares of basis elements vanish)
inline Algebra ut4_f2() {
    Algebra alg(F2(), 6);
    auto idx = [](int i, int j) {  // 1-based matrix positions
        if (i == 1 && j == 2) return 0;
        if (i == 1 && j == 3) return 1;
        if (i == 1 && j == 4) return 2;
        if (i == 2 && j == 3) return 3;
        if (i == 2 && j == 4) return 4;
        return 5;  // (3,4)
    };
    const int pos[6][2] = {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
    for (int a = 0; a < 6; ++a) {
        for (int b = a + 1; b < 6; ++b) {
            int i = pos[a][0], j = pos[a][1], k = pos[b][0], l = pos[b][1];
            Vec v(6, 0);
            // [E_ij, E_kl] = delta_jk E_il - delta_li E_kj; char 2, no collision
            if (j == k) v[idx(i, l)] = 1;
            if (l == i) v[idx(k, j)] = 1;
            alg.set_bracket(a, b, v);
        }
        alg.set_name(a, "E" + std::to_string(pos[a][0]) + std::to_string(pos[a][1]));
    }
    return alg;
}

// filiform of dimension 4 over F_3: [e1,e2]=e3, [e1,e3]=e4, zero p-map
inline Algebra filiform4_f3() {
    Algebra alg(F3(), 4);
    alg.set_bracket(0, 1, {0, 0, 1, 0});
    alg.set_bracket(0, 2, {0, 0, 0, 1});
    return alg;
}

// non-nilpotent: [x,y] = y, x^[p] = x (forced), y^[p] = 0
inline Algebra nonnilpotent_2dim(FieldPtr f) {
    Algebra alg(std::move(f), 2);
    alg.set_bracket(0, 1, {0, 1});
    alg.set_pmap(0, {1, 0});
    alg.set_name(0, "x");
    alg.set_name(1, "y");
    return alg;
}

inline Vec unit(std::size_t n, std::size_t i) {
    Vec v(n, 0);
    v[i] = 1;
    return v;
}

}  // namespace relie::testing
