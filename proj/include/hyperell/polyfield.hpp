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

#ifndef HYPERELL_POLYFIELD_HPP
#define HYPERELL_POLYFIELD_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"

namespace hyperell {

using Residue = std::uint32_t;

/// The prime field F_p, p an odd prime.
class FieldSpec {
   public:
    explicit FieldSpec(std::uint32_t p) : p_(p) {
        if (p < 3 || p % 2 == 0) throw std::invalid_argument("field modulus must be an odd prime, got " + std::to_string(p));
        if (p > 65521) throw std::invalid_argument("field modulus too large for residue arithmetic");
        for (std::uint32_t d = 3; d * d <= p; d += 2)
            if (p % d == 0) throw std::invalid_argument("field modulus must be prime, got " + std::to_string(p));
    }

    std::uint32_t p() const noexcept { return p_; }

    Residue reduce(std::int64_t v) const noexcept {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        return static_cast<Residue>(r < 0 ? r + p_ : r);
    }
    Residue add(Residue a, Residue b) const noexcept { return (a + b) % p_; }
    Residue sub(Residue a, Residue b) const noexcept { return (a + p_ - b) % p_; }
    Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Residue mul(Residue a, Residue b) const noexcept { return static_cast<Residue>((std::uint64_t{a} * b) % p_); }
    Residue pow(Residue a, std::uint64_t e) const noexcept {
        Residue r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    Residue inv(Residue a) const {
        if (a % p_ == 0) throw std::domain_error("inverse of zero in F_p");
        return pow(a, p_ - 2);
    }

    friend bool operator==(FieldSpec a, FieldSpec b) noexcept { return a.p_ == b.p_; }

   private:
    std::uint32_t p_;
};

/// Polynomial over F_p, coefficients stored low degree first.
///
/// The zero polynomial has no coefficients and reports degree() == -1; every
/// nonzero polynomial has a nonzero leading coefficient.
class Poly {
   public:
    explicit Poly(FieldSpec field) : field_(field) {}

    Poly(FieldSpec field, std::vector<Residue> coeffs) : field_(field), c_(std::move(coeffs)) {
        for (auto& c : c_) c %= field_.p();
        trim();
    }

    Poly(FieldSpec field, std::initializer_list<std::int64_t> coeffs) : field_(field) {
        c_.reserve(coeffs.size());
        for (auto c : coeffs) c_.push_back(field_.reduce(c));
        trim();
    }

    static Poly constant(FieldSpec field, std::int64_t c) { return Poly(field, {c}); }
    static Poly one(FieldSpec field) { return constant(field, 1); }
    static Poly x(FieldSpec field) { return Poly(field, {0, 1}); }

    static Poly monomial(FieldSpec field, int degree, Residue c = 1) {
        std::vector<Residue> v(static_cast<std::size_t>(degree) + 1, 0);
        v.back() = c;
        return Poly(field, std::move(v));
    }

    /// Monic polynomial of the given degree whose lower coefficients are the
    /// base-p digits of index (constant term least significant). Index order is
    /// the canonical order: lexicographic, highest degree coefficient first.
    static Poly monic_from_index(FieldSpec field, int degree, std::uint64_t index) {
        std::vector<Residue> v(static_cast<std::size_t>(degree) + 1, 0);
        for (int i = 0; i < degree; ++i) {
            v[i] = static_cast<Residue>(index % field.p());
            index /= field.p();
        }
        v[degree] = 1;
        Poly r(field);
        r.c_ = std::move(v);
        return r;
    }

    std::uint64_t monic_index() const {
        std::uint64_t idx = 0;
        for (int i = degree() - 1; i >= 0; --i) idx = idx * field_.p() + c_[i];
        return idx;
    }

    FieldSpec field() const noexcept { return field_; }
    bool is_zero() const noexcept { return c_.empty(); }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_constant() const noexcept { return c_.size() <= 1; }
    bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }

    Residue coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    Residue leading() const {
        if (c_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
        return c_.back();
    }
    std::span<const Residue> coeffs() const noexcept { return c_; }

    Residue operator()(Residue x) const noexcept {
        Residue acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = field_.add(field_.mul(acc, x), *it);
        return acc;
    }

    std::string to_string() const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            if (c_[i] == 0) continue;
            if (!first) os << " + ";
            first = false;
            if (i == 0 || c_[i] != 1) os << c_[i];
            if (i > 0 && c_[i] != 1) os << "*";
            if (i >= 1) os << "x";
            if (i >= 2) os << "^" << i;
        }
        return os.str();
    }

    friend bool operator==(const Poly& a, const Poly& b) noexcept { return a.field_ == b.field_ && a.c_ == b.c_; }

    /// Canonical order: by degree, then coefficients compared highest degree first.
    friend std::strong_ordering operator<=>(const Poly& a, const Poly& b) noexcept {
        if (auto c = a.field_.p() <=> b.field_.p(); c != 0) return c;
        if (auto c = a.degree() <=> b.degree(); c != 0) return c;
        for (int i = a.degree(); i >= 0; --i)
            if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

   private:
    FieldSpec field_;
    std::vector<Residue> c_;

    void trim() noexcept {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a);
    friend Poly operator*(const Poly& a, const Poly& b);
};

namespace detail {
inline void require_same_field(const Poly& a, const Poly& b) {
    if (!(a.field() == b.field())) throw std::invalid_argument("polynomials over different prime fields");
}
}  // namespace detail

inline Poly operator+(const Poly& a, const Poly& b) {
    detail::require_same_field(a, b);
    const FieldSpec f = a.field_;
    std::vector<Residue> r(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.add(a.coeff(i), b.coeff(i));
    return Poly(f, std::move(r));
}

inline Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& c : r.c_) c = a.field_.neg(c);
    return r;
}

inline Poly operator-(const Poly& a, const Poly& b) {
    detail::require_same_field(a, b);
    const FieldSpec f = a.field_;
    std::vector<Residue> r(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f.sub(a.coeff(i), b.coeff(i));
    return Poly(f, std::move(r));
}

inline Poly operator*(const Poly& a, const Poly& b) {
    detail::require_same_field(a, b);
    if (a.is_zero() || b.is_zero()) return Poly(a.field_);
    const std::uint64_t p = a.field_.p();
    std::vector<std::uint64_t> acc(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] = (acc[i + j] + std::uint64_t{a.c_[i]} * b.c_[j]) % p;
    }
    std::vector<Residue> r(acc.begin(), acc.end());
    return Poly(a.field_, std::move(r));
}

inline Poly scale(const Poly& a, Residue s) {
    std::vector<Residue> r(a.coeffs().begin(), a.coeffs().end());
    for (auto& c : r) c = a.field().mul(c, s);
    return Poly(a.field(), std::move(r));
}

struct DivMod {
    Poly quotient;
    Poly remainder;
};

/// Euclidean division; deg(remainder) < deg(b).
inline DivMod divmod(const Poly& a, const Poly& b) {
    detail::require_same_field(a, b);
    if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
    const FieldSpec f = a.field();
    if (a.degree() < b.degree()) return {Poly(f), a};
    const auto bc = b.coeffs();
    std::vector<Residue> rem(a.coeffs().begin(), a.coeffs().end());
    std::vector<Residue> quo(rem.size() - bc.size() + 1, 0);
    const Residue lead_inv = f.inv(bc.back());
    const std::size_t db = bc.size() - 1;
    for (std::size_t i = rem.size(); i-- > db;) {
        if (rem[i] == 0) continue;
        const Residue t = f.mul(rem[i], lead_inv);
        quo[i - db] = t;
        for (std::size_t j = 0; j <= db; ++j) rem[i - db + j] = f.sub(rem[i - db + j], f.mul(t, bc[j]));
    }
    rem.resize(db);
    return {Poly(f, std::move(quo)), Poly(f, std::move(rem))};
}

inline Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).quotient; }
inline Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).remainder; }

inline Poly make_monic(const Poly& a) {
    if (a.is_zero()) return a;
    return scale(a, a.field().inv(a.leading()));
}

/// Monic greatest common divisor; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
    detail::require_same_field(a, b);
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

inline Poly derivative(const Poly& f) {
    const FieldSpec F = f.field();
    const auto c = f.coeffs();
    if (c.size() <= 1) return Poly(F);
    std::vector<Residue> r(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) r[i - 1] = F.mul(c[i], F.reduce(static_cast<std::int64_t>(i)));
    return Poly(F, std::move(r));
}

inline Poly pow(const Poly& base, std::uint64_t e) {
    Poly r = Poly::one(base.field());
    Poly b = base;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

/// base^e mod m by square-and-multiply.
inline Poly pow_mod(const Poly& base, std::uint64_t e, const Poly& m) {
    Poly r = Poly::one(base.field()) % m;
    Poly b = base % m;
    while (e) {
        if (e & 1) r = (r * b) % m;
        e >>= 1;
        if (e) b = (b * b) % m;
    }
    return r;
}

}  // namespace hyperell

#endif  // HYPERELL_POLYFIELD_HPP
