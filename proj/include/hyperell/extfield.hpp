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

#ifndef HYPERELL_EXTFIELD_HPP
#define HYPERELL_EXTFIELD_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "polyfield.hpp"
#include "primes.hpp"

namespace hyperell {

/// First monic irreducible of degree n in canonical order.
inline Poly first_irreducible(FieldSpec field, int n) {
    if (n < 1) throw std::invalid_argument("extension degree must be >= 1");
    const std::uint64_t total = checked_upow(field.p(), static_cast<unsigned>(n));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Poly cand = Poly::monic_from_index(field, n, idx);
        if (is_irreducible(cand)) return cand;
    }
    throw std::logic_error("no irreducible polynomial found");
}

/// F_{p^n} = F_p[y]/(modulus), elements as residue vectors of length n.
///
/// Straightforward representation meant for verification (point counts), not speed.
class ExtField {
   public:
    using Element = std::vector<Residue>;

    ExtField(FieldSpec base, int n) : ExtField(base, first_irreducible(base, n)) {}

    ExtField(FieldSpec base, Poly modulus) : base_(base), modulus_(std::move(modulus)) {
        if (!modulus_.is_monic() || !is_irreducible(modulus_)) throw std::invalid_argument("extension modulus must be monic irreducible");
        n_ = modulus_.degree();
        order_ = checked_upow(base_.p(), static_cast<unsigned>(n_));
    }

    FieldSpec base() const noexcept { return base_; }
    int degree() const noexcept { return n_; }
    const Poly& modulus() const noexcept { return modulus_; }
    std::uint64_t order() const noexcept { return order_; }

    Element zero() const { return Element(n_, 0); }
    Element embed(Residue c) const {
        Element e(n_, 0);
        e[0] = c % base_.p();
        return e;
    }
    Element one() const { return embed(1); }

    Element from_index(std::uint64_t idx) const {
        Element e(n_, 0);
        for (int i = 0; i < n_; ++i) {
            e[i] = static_cast<Residue>(idx % base_.p());
            idx /= base_.p();
        }
        return e;
    }

    std::uint64_t index(const Element& e) const {
        std::uint64_t idx = 0;
        for (int i = n_ - 1; i >= 0; --i) idx = idx * base_.p() + e[i];
        return idx;
    }

    static bool is_zero(const Element& e) {
        for (auto c : e)
            if (c) return false;
        return true;
    }

    Element add(const Element& a, const Element& b) const {
        Element r(n_);
        for (int i = 0; i < n_; ++i) r[i] = base_.add(a[i], b[i]);
        return r;
    }

    Element sub(const Element& a, const Element& b) const {
        Element r(n_);
        for (int i = 0; i < n_; ++i) r[i] = base_.sub(a[i], b[i]);
        return r;
    }

    Element mul(const Element& a, const Element& b) const {
        std::vector<std::uint64_t> prod(2 * n_ - 1, 0);
        const std::uint64_t p = base_.p();
        for (int i = 0; i < n_; ++i) {
            if (!a[i]) continue;
            for (int j = 0; j < n_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
        }
        // reduce with y^n = -(m_{n-1} y^{n-1} + ... + m_0)
        const auto m = modulus_.coeffs();
        for (int k = 2 * n_ - 2; k >= n_; --k) {
            const std::uint64_t t = prod[k];
            if (!t) continue;
            prod[k] = 0;
            for (int i = 0; i < n_; ++i) prod[k - n_ + i] = (prod[k - n_ + i] + (p - m[i]) * t) % p;
        }
        return Element(prod.begin(), prod.begin() + n_);
    }

    Element pow(Element a, std::uint64_t e) const {
        Element r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return r;
    }

    /// Horner evaluation of a base-field polynomial at an extension element.
    Element evaluate(const Poly& f, const Element& x) const {
        if (!(f.field() == base_)) throw std::invalid_argument("evaluate: polynomial over a different field");
        Element acc = zero();
        const auto c = f.coeffs();
        for (std::size_t i = c.size(); i-- > 0;) acc = add(mul(acc, x), embed(c[i]));
        return acc;
    }

    /// Quadratic character of F_{p^n}: 0 at 0, else a^{(p^n-1)/2} = +-1.
    int quadratic_character(const Element& a) const {
        if (is_zero(a)) return 0;
        const Element r = pow(a, (order_ - 1) / 2);
        if (r == one()) return 1;
        if (r == embed(base_.p() - 1)) return -1;
        throw std::logic_error("Euler criterion produced neither +1 nor -1");
    }

   private:
    FieldSpec base_;
    Poly modulus_;
    int n_ = 1;
    std::uint64_t order_ = 0;
};

}  // namespace hyperell

#endif  // HYPERELL_EXTFIELD_HPP
