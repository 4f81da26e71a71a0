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

#ifndef HYPERELL_ARITH_HPP
#define HYPERELL_ARITH_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hyperell {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 addition overflow");
    return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("int64 subtraction overflow");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 multiplication overflow");
    return r;
}

inline std::int64_t checked_pow(std::int64_t base, unsigned exp) {
    std::int64_t r = 1;
    for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

inline std::uint64_t checked_upow(std::uint64_t base, unsigned exp) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (__builtin_mul_overflow(r, base, &r)) throw std::overflow_error("uint64 power overflow");
    }
    return r;
}

inline BigInt big_pow(std::int64_t base, unsigned exp) {
    BigInt r = 1;
    for (unsigned i = 0; i < exp; ++i) r *= base;
    return r;
}

/// Binomial coefficient C(n, k) as an exact integer; zero when k < 0 or k > n.
inline BigInt binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline BigInt factorial(std::int64_t n) {
    BigInt r = 1;
    for (std::int64_t i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Rational rational_pow(const Rational& base, int exp) {
    Rational r = 1;
    Rational b = exp >= 0 ? base : Rational(1) / base;
    for (int i = 0; i < (exp >= 0 ? exp : -exp); ++i) r *= b;
    return r;
}

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << "/" << denominator(r);
    return os.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// A value of the form coeff * q^(half_exponent/2) with coeff rational.
///
/// Products of traces tr(Theta^k) = s_k / q^(k/2) land here: the scaled integer
/// sums stay exact and the half-integral power of q is tracked separately.
/// Normal form keeps half_exponent in {-1, 0}.
class ExactValue {
   public:
    ExactValue() = default;
    ExactValue(std::uint32_t q, Rational coeff, int half_exponent) : q_(q), coeff_(std::move(coeff)), half_exp_(half_exponent) {
        normalize();
    }

    std::uint32_t q() const noexcept { return q_; }
    const Rational& coeff() const noexcept { return coeff_; }
    int half_exponent() const noexcept { return half_exp_; }

    /// Exactly rational (no stray sqrt(q)) after normalization.
    bool is_rational() const noexcept { return half_exp_ == 0 || coeff_ == 0; }

    Rational as_rational() const {
        if (!is_rational()) throw std::domain_error("value carries an odd power of sqrt(q)");
        return coeff_;
    }

    double to_double() const {
        long double v = coeff_.convert_to<long double>();
        if (half_exp_ != 0) v /= std::sqrt(static_cast<long double>(q_));
        return static_cast<double>(v);
    }

    /// "num/den", or "num/den*q^(-1/2)" when a sqrt(q) remains.
    std::string to_string() const {
        std::string s = hyperell::to_string(coeff_);
        if (half_exp_ != 0) s += "*q^(" + std::to_string(half_exp_) + "/2)";
        return s;
    }

    friend bool operator==(const ExactValue& a, const ExactValue& b) {
        return a.q_ == b.q_ && a.coeff_ == b.coeff_ && a.half_exp_ == b.half_exp_;
    }

   private:
    std::uint32_t q_ = 3;
    Rational coeff_ = 0;
    int half_exp_ = 0;

    void normalize() {
        if (coeff_ == 0) {
            half_exp_ = 0;
            return;
        }
        // fold whole powers of q into the rational part
        int whole = half_exp_ >= 0 ? half_exp_ / 2 : -((-half_exp_ + 1) / 2);
        half_exp_ -= 2 * whole;
        coeff_ *= rational_pow(Rational(q_), whole);
        if (half_exp_ == 1) {
            coeff_ *= q_;
            half_exp_ = -1;
        }
    }
};

}  // namespace hyperell

#endif  // HYPERELL_ARITH_HPP
