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

#ifndef HYPERELL_RMT_HPP
#define HYPERELL_RMT_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "arith.hpp"
#include "moment.hpp"

namespace hyperell {

/// E[Z^i] for a standard normal Z: (i-1)!! for even i, 0 for odd i.
inline BigInt gaussian_moment(int i) {
    if (i < 0) throw std::invalid_argument("gaussian_moment needs i >= 0");
    if (i % 2) return 0;
    BigInt r = 1;
    for (int j = i - 1; j > 1; j -= 2) r *= j;
    return r;
}

struct RmtMoment {
    Rational value;
    bool valid = true;  // sum a_j k_j <= 2g + 1
};

/// USp(2g) average of prod (tr U^{k_j})^{a_j} through E prod (sqrt(k_j) Z_j - eta_{k_j})^{a_j}.
inline RmtMoment usp_moment_exact(const MomentSpec& m, int g) {
    RmtMoment out;
    out.valid = m.weight() <= 2 * g + 1;
    Rational total = 1;
    for (const auto& t : m.terms()) {
        const int eta = MomentSpec::eta(t.k);
        BigInt factor = 0;
        for (int i = 0; 2 * i <= t.a; ++i) {
            const int rest = t.a - 2 * i;
            // (-eta)^rest with 0^0 = 1
            const int sign_term = rest == 0 ? 1 : (eta == 0 ? 0 : (rest % 2 ? -1 : 1));
            if (sign_term == 0) continue;
            factor += binomial(t.a, 2 * i) * big_pow(t.k, static_cast<unsigned>(i)) * gaussian_moment(2 * i) * sign_term;
        }
        total *= Rational(factor);
    }
    out.value = total;
    return out;
}

namespace detail {

inline double trace_product(const MomentSpec& m, std::initializer_list<double> angles) {
    double v = 1;
    for (const auto& t : m.terms()) {
        double tr = 0;
        for (double th : angles) tr += 2 * std::cos(t.k * th);
        v *= std::pow(tr, t.a);
    }
    return v;
}

template <class F>
double integrate_0_pi(F&& f, double tol) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate(f, 0.0, std::numbers::pi, 20, tol);
}

}  // namespace detail

/// Average over USp(2g), g in {1, 2}, by adaptive quadrature of the Weyl
/// integration formula. The density is normalized numerically.
inline double weyl_quadrature_moment(const MomentSpec& m, int g, double tol = 1e-12) {
    using detail::integrate_0_pi;
    if (g == 1) {
        auto w = [](double t) { return std::sin(t) * std::sin(t); };
        const double norm = integrate_0_pi(w, tol);
        const double val = integrate_0_pi([&](double t) { return w(t) * detail::trace_product(m, {t}); }, tol);
        return val / norm;
    }
    if (g == 2) {
        auto w = [](double a, double b) {
            const double d = std::cos(a) - std::cos(b);
            return d * d * std::sin(a) * std::sin(a) * std::sin(b) * std::sin(b);
        };
        auto outer = [&](auto&& integrand) {
            return integrate_0_pi([&](double a) { return integrate_0_pi([&](double b) { return integrand(a, b); }, tol); }, tol);
        };
        const double norm = outer(w);
        const double val = outer([&](double a, double b) { return w(a, b) * detail::trace_product(m, {a, b}); });
        return val / norm;
    }
    throw std::invalid_argument("weyl_quadrature_moment supports g in {1, 2}");
}

}  // namespace hyperell

#endif  // HYPERELL_RMT_HPP
