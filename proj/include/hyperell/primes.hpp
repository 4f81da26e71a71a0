/*
   Copyright 2026 The hyperell Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef HYPERELL_PRIMES_HPP
#define HYPERELL_PRIMES_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <stdexcept>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "polyfield.hpp"

namespace hyperell {

/// Integer Moebius function.
inline int mobius_int(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("mobius_int needs n >= 1");
    int sign = 1;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        n /= d;
        if (n % d == 0) return 0;
        sign = -sign;
    }
    return n > 1 ? -sign : sign;
}

/// Number of monic irreducibles of degree n over F_q: (1/n) sum_{d|n} mu(d) q^{n/d}.
inline std::int64_t prime_count_formula(std::uint32_t q, int n) {
    if (n < 1) throw std::invalid_argument("prime_count_formula needs n >= 1");
    std::int64_t total = 0;
    for (int d = 1; d <= n; ++d) {
        if (n % d) continue;
        total = checked_add(total, checked_mul(mobius_int(d), checked_pow(q, static_cast<unsigned>(n / d))));
    }
    return total / n;
}

/// Ben-Or irreducibility test: f is irreducible iff gcd(x^{p^i} - x, f) = 1 for i <= deg f / 2.
inline bool is_irreducible(const Poly& f) {
    if (f.degree() < 1) return false;
    const Poly m = make_monic(f);
    if (m.degree() == 1) return true;
    const FieldSpec F = m.field();
    const Poly x = Poly::x(F);
    Poly h = x % m;
    for (int i = 1; 2 * i <= m.degree(); ++i) {
        h = pow_mod(h, F.p(), m);
        if (!gcd(h - x, m).is_one()) return false;
    }
    return true;
}

/// All monic irreducibles over F_q up to a maximum degree, each degree's list in
/// canonical (index) order. Immutable once built.
class PrimeTable {
   public:
    PrimeTable(FieldSpec field, int max_degree) : field_(field), max_degree_(max_degree) {
        if (max_degree < 0) throw std::invalid_argument("negative prime table degree");
        by_degree_.resize(static_cast<std::size_t>(max_degree) + 1);
        for (int n = 1; n <= max_degree; ++n) sieve_degree(n);
    }

    /// Reassemble from persisted lists; counts are re-verified.
    PrimeTable(FieldSpec field, std::vector<std::vector<Poly>> by_degree) : field_(field), by_degree_(std::move(by_degree)) {
        max_degree_ = static_cast<int>(by_degree_.size()) - 1;
        for (int n = 1; n <= max_degree_; ++n)
            if (static_cast<std::int64_t>(by_degree_[n].size()) != prime_count_formula(field_.p(), n))
                throw std::runtime_error("prime table count mismatch at degree " + std::to_string(n));
    }

    FieldSpec field() const noexcept { return field_; }
    int max_degree() const noexcept { return max_degree_; }

    const std::vector<Poly>& of_degree(int n) const {
        if (n < 1 || n > max_degree_) throw std::out_of_range("prime table has no degree " + std::to_string(n));
        return by_degree_[n];
    }

    std::int64_t count(int n) const { return static_cast<std::int64_t>(of_degree(n).size()); }

    /// Position of a monic irreducible within its degree list, or -1.
    std::int64_t position(const Poly& p) const {
        const auto& list = of_degree(p.degree());
        auto it = std::lower_bound(list.begin(), list.end(), p);
        return (it != list.end() && *it == p) ? it - list.begin() : -1;
    }

   private:
    FieldSpec field_;
    int max_degree_ = 0;
    std::vector<std::vector<Poly>> by_degree_;

    // Mark every product (prime of degree d <= n/2) * (monic of degree n - d) as composite.
    void sieve_degree(int n) {
        const std::uint32_t q = field_.p();
        const std::uint64_t total = checked_upow(q, static_cast<unsigned>(n));
        if (total > (std::uint64_t{1} << 28)) throw std::length_error("prime table degree too large for sieving");
        std::vector<bool> composite(total, false);
        std::vector<std::uint32_t> prod(static_cast<std::size_t>(n) + 1);
        std::vector<std::uint32_t> cof(static_cast<std::size_t>(n) + 1);
        for (int d = 1; 2 * d <= n; ++d) {
            const int e = n - d;
            const std::uint64_t cofactors = checked_upow(q, static_cast<unsigned>(e));
            for (const Poly& P : by_degree_[d]) {
                const auto pc = P.coeffs();
                for (std::uint64_t b = 0; b < cofactors; ++b) {
                    std::uint64_t t = b;
                    for (int i = 0; i < e; ++i) {
                        cof[i] = static_cast<std::uint32_t>(t % q);
                        t /= q;
                    }
                    cof[e] = 1;
                    std::fill(prod.begin(), prod.end(), 0);
                    for (int i = 0; i <= d; ++i) {
                        if (pc[i] == 0) continue;
                        for (int j = 0; j <= e; ++j) prod[i + j] = (prod[i + j] + pc[i] * cof[j]) % q;
                    }
                    std::uint64_t idx = 0;
                    for (int i = n - 1; i >= 0; --i) idx = idx * q + prod[i];
                    composite[idx] = true;
                }
            }
        }
        auto& out = by_degree_[n];
        for (std::uint64_t idx = 0; idx < total; ++idx)
            if (!composite[idx]) out.push_back(Poly::monic_from_index(field_, n, idx));
        if (static_cast<std::int64_t>(out.size()) != prime_count_formula(q, n))
            throw std::logic_error("sieved prime count disagrees with the divisor formula");
    }
};

struct Factorization {
    std::vector<std::pair<Poly, int>> factors;  // monic primes, canonical order
    Residue unit = 1;
};

inline Poly reassemble(const Factorization& fz, FieldSpec field) {
    Poly r = Poly::constant(field, fz.unit);
    for (const auto& [p, e] : fz.factors) r = r * pow(p, static_cast<std::uint64_t>(e));
    return r;
}

/// Trial division against the table up to half the degree.
inline Factorization factorize(const Poly& f, const PrimeTable& table) {
    if (f.is_zero()) throw std::domain_error("factorize: zero polynomial");
    if (!(f.field() == table.field())) throw std::invalid_argument("factorize: table over a different field");
    Factorization out;
    out.unit = f.leading();
    Poly g = make_monic(f);
    for (int d = 1; 2 * d <= g.degree(); ++d) {
        if (d > table.max_degree()) throw std::out_of_range("factorize: prime table too small");
        for (const Poly& P : table.of_degree(d)) {
            if (g.degree() < 2 * d && g.degree() >= d) break;
            int e = 0;
            for (;;) {
                auto [quo, rem] = divmod(g, P);
                if (!rem.is_zero()) break;
                g = std::move(quo);
                ++e;
            }
            if (e) out.factors.emplace_back(P, e);
        }
    }
    if (g.degree() >= 1) out.factors.emplace_back(g, 1);
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

inline Factorization factorize(const Poly& f) {
    if (f.is_zero()) throw std::domain_error("factorize: zero polynomial");
    return factorize(f, PrimeTable(f.field(), std::max(1, f.degree() / 2)));
}

/// Square-free test: gcd(f, f') constant, with a factorization fallback when f' = 0.
inline bool is_squarefree(const Poly& f) {
    if (f.is_zero()) throw std::domain_error("is_squarefree: zero polynomial");
    if (f.degree() <= 0) return true;
    const Poly d = derivative(f);
    if (d.is_zero()) {
        for (const auto& [p, e] : factorize(f).factors)
            if (e > 1) return false;
        return true;
    }
    return gcd(f, d).degree() == 0;
}

namespace detail {
inline void require_monic(const Poly& f, const char* what) {
    if (f.is_zero() || !f.is_monic()) throw std::invalid_argument(std::string(what) + ": argument must be monic and nonzero");
}
}  // namespace detail

inline int mobius(const Poly& f, const PrimeTable& table) {
    detail::require_monic(f, "mobius");
    const auto fz = factorize(f, table);
    for (const auto& [p, e] : fz.factors)
        if (e > 1) return 0;
    return fz.factors.size() % 2 ? -1 : 1;
}

inline int mobius(const Poly& f) {
    detail::require_monic(f, "mobius");
    return mobius(f, PrimeTable(f.field(), std::max(1, f.degree() / 2)));
}

inline int von_mangoldt(const Poly& f, const PrimeTable& table) {
    detail::require_monic(f, "von_mangoldt");
    const auto fz = factorize(f, table);
    return fz.factors.size() == 1 ? fz.factors.front().first.degree() : 0;
}

inline int von_mangoldt(const Poly& f) {
    detail::require_monic(f, "von_mangoldt");
    return von_mangoldt(f, PrimeTable(f.field(), std::max(1, f.degree() / 2)));
}

}  // namespace hyperell

#endif  // HYPERELL_PRIMES_HPP
