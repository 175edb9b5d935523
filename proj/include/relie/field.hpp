#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "relie/errors.hpp"

namespace relie {

// Element of a finite field F_{p^k}, encoded as sum_i c_i * p^i where
// (c_0, ..., c_{k-1}) are the coordinates in the modulus basis 1, x, ..., x^{k-1}.
// All arithmetic goes through the owning FiniteField.
using Fel = std::uint32_t;

// F_{p^k} presented as F_p[x]/(modulus). The modulus is any monic irreducible
// polynomial of degree k; it is stored and reported so results are reproducible.
class FiniteField {
public:
    FiniteField(std::uint32_t p, std::uint32_t k, std::vector<std::uint32_t> modulus)
        : p_(p), k_(k), modulus_(std::move(modulus)) {
        if (p_ < 2 || !is_prime(p_)) throw ValidationError("field characteristic must be prime");
        if (k_ < 1) throw ValidationError("extension degree must be >= 1");
        if (modulus_.size() != k_ + 1) throw ValidationError("modulus must have degree k");
        for (auto c : modulus_)
            if (c >= p_) throw ValidationError("modulus coefficients must be reduced mod p");
        if (modulus_.back() != 1) throw ValidationError("modulus must be monic");
        if (!is_irreducible(modulus_, p_)) throw ValidationError("modulus is reducible over F_p");

        q_ = 1;
        pow_p_.resize(k_ + 1);
        for (std::uint32_t i = 0; i <= k_; ++i) {
            pow_p_[i] = q_;
            if (i < k_) {
                if (q_ > (1u << 28) / p_) throw SizeLimit("field order exceeds encoding range");
                q_ *= p_;
            }
        }
        // x^k = -(m_0 + m_1 x + ... + m_{k-1} x^{k-1})
        xk_reduction_.resize(k_);
        for (std::uint32_t i = 0; i < k_; ++i) xk_reduction_[i] = (p_ - modulus_[i]) % p_;

        if (q_ <= kTableLimit) build_tables();
    }

    static std::shared_ptr<const FiniteField> make(std::uint32_t p, std::uint32_t k,
                                                   std::vector<std::uint32_t> modulus) {
        return std::make_shared<const FiniteField>(p, k, std::move(modulus));
    }

    // Prime field F_p with modulus x.
    static std::shared_ptr<const FiniteField> prime(std::uint32_t p) {
        return make(p, 1, {0, 1});
    }

    std::uint32_t characteristic() const { return p_; }
    std::uint32_t degree() const { return k_; }
    std::uint32_t order() const { return q_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    Fel zero() const { return 0; }
    Fel one() const { return 1; }

    // c * 1 for c in the prime field.
    Fel scalar(std::uint32_t c) const { return c % p_; }

    std::uint32_t coeff(Fel a, std::uint32_t i) const { return (a / pow_p_[i]) % p_; }

    Fel from_coeffs(const std::vector<std::uint32_t>& c) const {
        Fel a = 0;
        for (std::uint32_t i = 0; i < k_ && i < c.size(); ++i) a += (c[i] % p_) * pow_p_[i];
        return a;
    }

    Fel add(Fel a, Fel b) const {
        if (p_ == 2) return a ^ b;
        Fel r = 0;
        for (std::uint32_t i = 0; i < k_; ++i)
            r += ((coeff(a, i) + coeff(b, i)) % p_) * pow_p_[i];
        return r;
    }

    Fel neg(Fel a) const {
        if (p_ == 2) return a;
        Fel r = 0;
        for (std::uint32_t i = 0; i < k_; ++i) r += ((p_ - coeff(a, i)) % p_) * pow_p_[i];
        return r;
    }

    Fel sub(Fel a, Fel b) const { return add(a, neg(b)); }

    Fel mul(Fel a, Fel b) const {
        if (!mul_table_.empty()) return mul_table_[a * q_ + b];
        return mul_slow(a, b);
    }

    Fel pow(Fel a, std::uint64_t e) const {
        Fel r = 1, base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    Fel inv(Fel a) const {
        if (a == 0) throw DivisionByZero();
        if (!inv_table_.empty()) return inv_table_[a];
        return pow(a, q_ - 2);
    }

    Fel div(Fel a, Fel b) const { return mul(a, inv(b)); }

    // a^{p^e}; negative e applies the inverse automorphism, which exists
    // because finite fields are perfect. The Frobenius has order k on F_{p^k}.
    Fel frobenius(Fel a, std::int64_t e) const {
        std::int64_t r = e % static_cast<std::int64_t>(k_);
        if (r < 0) r += k_;
        Fel x = a;
        for (std::int64_t i = 0; i < r; ++i)
            x = frob_table_.empty() ? pow(x, p_) : frob_table_[x];
        return x;
    }

    bool same(const FiniteField& other) const {
        return p_ == other.p_ && k_ == other.k_ && modulus_ == other.modulus_;
    }

    std::string to_string(Fel a) const { return std::to_string(a); }

    // "p^k" spec string plus modulus, e.g. "F(2^2; 1,1,1)".
    std::string describe() const {
        std::string s = "F(" + std::to_string(p_);
        if (k_ > 1) s += "^" + std::to_string(k_);
        s += "; ";
        for (std::size_t i = 0; i < modulus_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(modulus_[i]);
        }
        return s + ")";
    }

    static bool is_prime(std::uint32_t n) {
        if (n < 2) return false;
        for (std::uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

private:
    static constexpr std::uint32_t kTableLimit = 256;

    std::uint32_t p_, k_, q_ = 0;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> pow_p_;
    std::vector<std::uint32_t> xk_reduction_;
    std::vector<Fel> mul_table_;
    std::vector<Fel> inv_table_;
    std::vector<Fel> frob_table_;

    Fel mul_slow(Fel a, Fel b) const {
        // schoolbook product of coefficient vectors, then reduce x^k repeatedly
        std::vector<std::uint32_t> prod(2 * k_ - 1, 0);
        for (std::uint32_t i = 0; i < k_; ++i) {
            std::uint32_t ai = coeff(a, i);
            if (!ai) continue;
            for (std::uint32_t j = 0; j < k_; ++j)
                prod[i + j] = (prod[i + j] + ai * coeff(b, j)) % p_;
        }
        for (std::uint32_t d = 2 * k_ - 2; d >= k_ && d < prod.size(); --d) {
            std::uint32_t c = prod[d];
            if (c) {
                prod[d] = 0;
                for (std::uint32_t i = 0; i < k_; ++i)
                    prod[d - k_ + i] = (prod[d - k_ + i] + c * xk_reduction_[i]) % p_;
            }
            if (d == k_) break;
        }
        Fel r = 0;
        for (std::uint32_t i = 0; i < k_; ++i) r += prod[i] * pow_p_[i];
        return r;
    }

    void build_tables() {
        mul_table_.resize(static_cast<std::size_t>(q_) * q_);
        for (Fel a = 0; a < q_; ++a)
            for (Fel b = 0; b < q_; ++b) mul_table_[a * q_ + b] = mul_slow(a, b);
        inv_table_.assign(q_, 0);
        for (Fel a = 1; a < q_; ++a) {
            for (Fel b = 1; b < q_; ++b)
                if (mul_table_[a * q_ + b] == 1) {
                    inv_table_[a] = b;
                    break;
                }
        }
        frob_table_.resize(q_);
        for (Fel a = 0; a < q_; ++a) {
            Fel x = 1;
            for (std::uint32_t i = 0; i < p_; ++i) x = mul_table_[x * q_ + a];
            frob_table_[a] = x;
        }
    }

    // Irreducibility by trial division against every monic polynomial of
    // degree 1..k/2; exact and fast enough for k <= 8.
    static bool is_irreducible(const std::vector<std::uint32_t>& f, std::uint32_t p) {
        std::uint32_t k = static_cast<std::uint32_t>(f.size()) - 1;
        if (k == 1) return true;
        for (std::uint32_t d = 1; 2 * d <= k; ++d) {
            // enumerate monic polynomials of degree d: d free coefficients
            std::uint64_t count = 1;
            for (std::uint32_t i = 0; i < d; ++i) count *= p;
            for (std::uint64_t code = 0; code < count; ++code) {
                std::vector<std::uint32_t> g(d + 1, 0);
                std::uint64_t c = code;
                for (std::uint32_t i = 0; i < d; ++i) {
                    g[i] = static_cast<std::uint32_t>(c % p);
                    c /= p;
                }
                g[d] = 1;
                if (poly_divides(g, f, p)) return false;
            }
        }
        return true;
    }

    static bool poly_divides(const std::vector<std::uint32_t>& g,
                             const std::vector<std::uint32_t>& f, std::uint32_t p) {
        std::vector<std::uint32_t> r = f;
        std::size_t dg = g.size() - 1;
        while (r.size() >= g.size()) {
            std::uint32_t lead = r.back();
            if (lead) {
                std::size_t shift = r.size() - g.size();
                for (std::size_t i = 0; i <= dg; ++i) {
                    std::uint32_t t = (lead * g[i]) % p;
                    r[shift + i] = (r[shift + i] + p - t) % p;
                }
            }
            r.pop_back();
        }
        return std::accumulate(r.begin(), r.end(), 0u) == 0;
    }
};

using FieldPtr = std::shared_ptr<const FiniteField>;

}  // namespace relie
