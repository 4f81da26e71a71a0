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

#ifndef HYPERELL_CHARSYM_HPP
#define HYPERELL_CHARSYM_HPP

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "polyfield.hpp"
#include "primes.hpp"

namespace hyperell {

/// Legendre symbol of F_q residues, c^{(q-1)/2}, tabulated once per q.
inline const std::vector<std::int8_t>& legendre_table(FieldSpec field) {
    thread_local std::uint32_t last_p = 0;
    thread_local const std::vector<std::int8_t>* last = nullptr;
    if (last_p == field.p()) return *last;

    static std::mutex mu;
    static std::unordered_map<std::uint32_t, std::vector<std::int8_t>> tables;
    std::lock_guard lock(mu);
    auto [it, inserted] = tables.try_emplace(field.p());
    if (inserted) {
        auto& t = it->second;
        t.resize(field.p());
        t[0] = 0;
        for (Residue c = 1; c < field.p(); ++c) t[c] = field.pow(c, (field.p() - 1) / 2) == 1 ? 1 : -1;
    }
    last_p = field.p();
    last = &it->second;
    return *last;
}

inline int legendre(FieldSpec field, Residue c) { return legendre_table(field)[c % field.p()]; }

/// (f/P) straight from Euler's criterion f^{(|P|-1)/2} mod P. Slow; used as the reference.
inline int residue_symbol_def(const Poly& f, const Poly& P) {
    detail::require_same_field(f, P);
    if (!P.is_monic() || !is_irreducible(P)) throw std::invalid_argument("residue_symbol_def: modulus must be monic irreducible");
    const Poly r = f % P;
    if (r.is_zero()) return 0;
    const std::uint64_t norm = checked_upow(P.field().p(), static_cast<unsigned>(P.degree()));
    const Poly e = pow_mod(r, (norm - 1) / 2, P);
    if (e.is_one()) return 1;
    if (e == Poly::constant(P.field(), -1)) return -1;
    throw std::logic_error("Euler criterion produced neither +1 nor -1");
}

/// Jacobi symbol (B/A) for monic A by Euclidean reduction and reciprocity,
/// never factoring. Constant numerators use (c/A) = legendre(c)^{deg A}.
inline int jacobi_symbol(Poly B, Poly A) {
    detail::require_same_field(B, A);
    if (A.is_zero() || !A.is_monic()) throw std::invalid_argument("jacobi_symbol: denominator must be monic");
    const FieldSpec F = A.field();
    const bool odd_half = ((F.p() - 1) / 2) % 2 == 1;
    int sign = 1;
    for (;;) {
        if (A.degree() == 0) return sign;
        B = B % A;
        if (B.is_zero()) return 0;
        const Residue c = B.leading();
        if (A.degree() % 2 == 1) sign *= legendre(F, c);
        if (B.degree() == 0) return sign;
        B = make_monic(B);
        if (odd_half && A.degree() % 2 == 1 && B.degree() % 2 == 1) sign = -sign;
        std::swap(A, B);
    }
}

/// True when f is a nonzero constant times a perfect square.
inline bool is_perfect_square(const Poly& f) {
    if (f.is_zero()) return true;
    if (f.degree() == 0) return true;
    for (const auto& [p, e] : factorize(f).factors)
        if (e % 2) return false;
    return true;
}

/// chi_D(f) = (D/f): D sits in the numerator, the argument f in the denominator.
class QuadraticCharacter {
   public:
    explicit QuadraticCharacter(Poly D) : D_(std::move(D)) {
        if (!D_.is_monic() || D_.degree() < 1) throw std::invalid_argument("chi_D: D must be monic of positive degree");
        if (is_perfect_square(D_)) throw std::invalid_argument("chi_D: D must not be a perfect square");
    }

    const Poly& modulus() const noexcept { return D_; }

    int operator()(const Poly& f) const { return jacobi_symbol(D_, f); }

   private:
    Poly D_;
};

inline int chi_d(const Poly& D, const Poly& f) { return QuadraticCharacter(D)(f); }

}  // namespace hyperell

#endif  // HYPERELL_CHARSYM_HPP
