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

#ifndef HYPERELL_LFUNCTION_HPP
#define HYPERELL_LFUNCTION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "charsym.hpp"
#include "extfield.hpp"
#include "fastchar.hpp"
#include "polyfield.hpp"
#include "primes.hpp"

namespace hyperell {

/// y^2 = Q(x) with Q monic, square-free, of degree 2g+1.
class Curve {
   public:
    Curve(FieldSpec field, int genus, Poly Q) : field_(field), genus_(genus), Q_(std::move(Q)) {
        if (genus_ < 1) throw std::invalid_argument("curve genus must be >= 1");
        if (!(Q_.field() == field_)) throw std::invalid_argument("curve polynomial over a different field");
        if (!Q_.is_monic() || Q_.degree() != 2 * genus_ + 1) throw std::invalid_argument("curve polynomial must be monic of degree 2g+1");
        if (!is_squarefree(Q_)) throw std::invalid_argument("curve polynomial must be square-free");
    }

    FieldSpec field() const noexcept { return field_; }
    int genus() const noexcept { return genus_; }
    const Poly& poly() const noexcept { return Q_; }

   private:
    FieldSpec field_;
    int genus_;
    Poly Q_;
};

/// Coefficients of L(u, chi_D) and of its completed form L*(u).
struct LData {
    std::uint32_t q = 3;
    std::vector<std::int64_t> A;      // A_D(beta), beta = 0..deg D - 1
    int lambda = 0;                   // trivial zeros at u = 1
    int delta = 0;                    // deg L* = 2 delta
    std::vector<std::int64_t> Astar;  // A*_D(beta), beta = 0..2 delta
};

enum class CoefficientStrategy {
    FunctionalEquation,  // enumerate up to the middle degree, complete by symmetry
    FullEnumeration,     // enumerate every degree (test oracle)
};

/// sum over monic B of degree beta of (D/B)
inline std::int64_t character_sum_degree(const Poly& D, int beta) {
    const FieldSpec F = D.field();
    const std::uint64_t count = checked_upow(F.p(), static_cast<unsigned>(beta));
    std::int64_t total = 0;
    for (std::uint64_t idx = 0; idx < count; ++idx) total += jacobi_symbol(D, Poly::monic_from_index(F, beta, idx));
    return total;
}

/// max over beta of |A*(beta) - q^{beta-delta} A*(2 delta - beta)|, checked on the integral half.
inline std::int64_t functional_equation_residual(const std::vector<std::int64_t>& Astar, std::uint32_t q, int delta) {
    if (static_cast<int>(Astar.size()) != 2 * delta + 1) throw std::invalid_argument("A* has the wrong length");
    std::int64_t worst = 0;
    for (int b = delta; b <= 2 * delta; ++b) {
        const std::int64_t diff = checked_sub(Astar[b], checked_mul(checked_pow(q, static_cast<unsigned>(b - delta)), Astar[2 * delta - b]));
        worst = std::max(worst, diff < 0 ? -diff : diff);
    }
    return worst;
}

/// A_D(0..up_to) for monic square-free non-square D of positive degree.
inline std::vector<std::int64_t> dirichlet_coefficients(const Poly& D, int up_to,
                                                        CoefficientStrategy strategy = CoefficientStrategy::FunctionalEquation) {
    if (!D.is_monic() || D.degree() < 1) throw std::invalid_argument("dirichlet_coefficients: D must be monic of positive degree");
    if (up_to < 0) throw std::invalid_argument("dirichlet_coefficients: negative degree");
    const std::uint32_t q = D.field().p();
    const int deg = D.degree();
    std::vector<std::int64_t> A(static_cast<std::size_t>(up_to) + 1, 0);
    if (strategy == CoefficientStrategy::FullEnumeration) {
        for (int b = 0; b <= up_to; ++b) A[b] = character_sum_degree(D, b);
        return A;
    }
    const int lambda = deg % 2 == 0 ? 1 : 0;
    const int delta = (deg - 1 - lambda) / 2;
    // L* coefficients up to delta, from enumerated A via L* = L / (1-u)^lambda
    std::vector<std::int64_t> star(static_cast<std::size_t>(2 * delta) + 1, 0);
    std::int64_t run = 0;
    for (int b = 0; b <= delta; ++b) {
        const std::int64_t a = character_sum_degree(D, b);
        run = lambda ? checked_add(run, a) : a;
        star[b] = run;
    }
    for (int b = delta + 1; b <= 2 * delta; ++b)
        star[b] = checked_mul(checked_pow(q, static_cast<unsigned>(b - delta)), star[2 * delta - b]);
    for (int b = 0; b <= up_to; ++b) {
        const std::int64_t cur = b <= 2 * delta ? star[b] : 0;
        const std::int64_t prev = (b >= 1 && b - 1 <= 2 * delta) ? star[b - 1] : 0;
        A[b] = lambda ? checked_sub(cur, prev) : cur;
    }
    return A;
}

inline std::vector<std::int64_t> dirichlet_coefficients(const Curve& c, int up_to,
                                                        CoefficientStrategy strategy = CoefficientStrategy::FunctionalEquation) {
    if (up_to > 2 * c.genus()) throw std::invalid_argument("dirichlet_coefficients: up_to exceeds 2g");
    return dirichlet_coefficients(c.poly(), up_to, strategy);
}

/// Strip the trivial zero and check the functional equation exactly.
inline LData complete_l(std::uint32_t q, int deg_D, const std::vector<std::int64_t>& A) {
    if (static_cast<int>(A.size()) < deg_D) throw std::invalid_argument("complete_l: coefficients needed through deg D - 1");
    LData L;
    L.q = q;
    L.A = A;
    L.lambda = deg_D % 2 == 0 ? 1 : 0;
    L.delta = (deg_D - 1 - L.lambda) / 2;
    for (std::size_t b = static_cast<std::size_t>(deg_D); b < A.size(); ++b)
        if (A[b] != 0) throw std::logic_error("L-function coefficient nonzero beyond deg D - 1");
    if (A.empty() || A[0] != 1) throw std::logic_error("A_D(0) must be 1");
    L.Astar.assign(static_cast<std::size_t>(2 * L.delta) + 1, 0);
    std::int64_t run = 0;
    for (int b = 0; b <= 2 * L.delta; ++b) {
        run = L.lambda ? checked_add(run, A[b]) : A[b];
        L.Astar[b] = run;
    }
    if (L.lambda) {
        // (1-u) L* must reproduce A exactly, including the top coefficient
        if (checked_add(run, A[2 * L.delta + 1]) != 0) throw std::logic_error("trivial zero at u = 1 missing");
    }
    if (functional_equation_residual(L.Astar, q, L.delta) != 0) throw std::logic_error("functional equation violated");
    return L;
}

inline LData complete_l(const Curve& c, const std::vector<std::int64_t>& A) { return complete_l(c.field().p(), c.poly().degree(), A); }

inline LData l_data(const Curve& c, CoefficientStrategy strategy = CoefficientStrategy::FunctionalEquation) {
    return complete_l(c, dirichlet_coefficients(c, 2 * c.genus(), strategy));
}

/// Power sums p_n = sum_j alpha_j^n of the inverse roots of L*, by Newton's
/// identities. These equal s_n = q^{n/2} tr Theta^n; index 0 holds 2 delta.
inline std::vector<std::int64_t> traces_from_lpoly(const LData& L, int N) {
    std::vector<std::int64_t> p(static_cast<std::size_t>(N) + 1, 0);
    p[0] = 2 * L.delta;
    auto c = [&](int i) -> std::int64_t { return i <= 2 * L.delta ? L.Astar[i] : 0; };
    for (int n = 1; n <= N; ++n) {
        std::int64_t v = checked_mul(-n, c(n));
        for (int i = 1; i < n; ++i) v = checked_sub(v, checked_mul(c(i), p[n - i]));
        p[n] = v;
    }
    return p;
}

/// s_n = -lambda - sum_{deg f = n} Lambda(f) chi_Q(f), summing over prime powers.
/// Characters come from the Euclidean Jacobi symbol (reference path).
inline std::vector<std::int64_t> traces_explicit(const Poly& D, int N, const PrimeTable& table) {
    if (N > table.max_degree()) throw std::out_of_range("traces_explicit: prime table too small");
    const int lambda = D.degree() % 2 == 0 ? 1 : 0;
    std::vector<std::int64_t> plus(static_cast<std::size_t>(N) + 1, 0), minus(static_cast<std::size_t>(N) + 1, 0);
    for (int d = 1; d <= N; ++d)
        for (const Poly& P : table.of_degree(d)) {
            const int v = jacobi_symbol(D, P);
            if (v > 0) ++plus[d];
            if (v < 0) ++minus[d];
        }
    std::vector<std::int64_t> s(static_cast<std::size_t>(N) + 1, 0);
    s[0] = D.degree() - 1 - lambda;
    for (int n = 1; n <= N; ++n) {
        std::int64_t total = 0;
        for (int d = 1; d <= n; ++d) {
            if (n % d) continue;
            const int e = n / d;
            total += d * (plus[d] + (e % 2 ? -minus[d] : minus[d]));
        }
        s[n] = -lambda - total;
    }
    return s;
}

inline std::vector<std::int64_t> traces_explicit(const Curve& c, int N, const PrimeTable& table) {
    return traces_explicit(c.poly(), N, table);
}

/// The same explicit-formula sum from per-degree character tallies.
inline std::vector<std::int64_t> traces_from_profile(const std::vector<DegreeCounts>& profile, int N, int two_delta, int lambda = 0) {
    if (static_cast<int>(profile.size()) <= N) throw std::out_of_range("traces_from_profile: profile too short");
    std::vector<std::int64_t> s(static_cast<std::size_t>(N) + 1, 0);
    s[0] = two_delta;
    for (int n = 1; n <= N; ++n) {
        std::int64_t total = 0;
        for (int d = 1; d <= n; ++d) {
            if (n % d) continue;
            const auto& c = profile[d];
            total += d * (c.plus + ((n / d) % 2 ? -c.minus : c.minus));
        }
        s[n] = -lambda - total;
    }
    return s;
}

/// Raised when an L* root is found off the circle |u| = q^{-1/2}.
class RiemannHypothesisViolation : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

namespace detail {

using RPoly = std::vector<Rational>;  // low degree first

inline void rtrim(RPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline RPoly rderiv(const RPoly& a) {
    RPoly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<long>(i));
    rtrim(r);
    return r;
}

inline std::pair<RPoly, RPoly> rdivmod(RPoly a, const RPoly& b) {
    rtrim(a);
    if (b.empty()) throw std::domain_error("rational polynomial division by zero");
    if (a.size() < b.size()) return {RPoly{}, a};
    RPoly q(a.size() - b.size() + 1, 0);
    for (std::size_t i = a.size() - 1;; --i) {
        const Rational t = a[i] / b.back();
        q[i - b.size() + 1] = t;
        for (std::size_t j = 0; j < b.size(); ++j) a[i - b.size() + 1 + j] -= t * b[j];
        if (i == b.size() - 1) break;
    }
    a.resize(b.size() - 1);
    rtrim(a);
    rtrim(q);
    return {q, a};
}

inline RPoly rmonic(RPoly a) {
    rtrim(a);
    if (a.empty()) return a;
    const Rational lead = a.back();
    for (auto& c : a) c /= lead;
    return a;
}

inline RPoly rgcd(RPoly a, RPoly b) {
    rtrim(a);
    rtrim(b);
    while (!b.empty()) {
        auto r = rdivmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return rmonic(a);
}

inline RPoly rsub(RPoly a, const RPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    rtrim(a);
    return a;
}

/// Yun's square-free decomposition: returns (factor, multiplicity) pairs.
inline std::vector<std::pair<RPoly, int>> squarefree_decomposition(const RPoly& f) {
    std::vector<std::pair<RPoly, int>> out;
    const RPoly fp = rderiv(f);
    RPoly a = rgcd(f, fp);
    RPoly b = rdivmod(f, a).first;
    RPoly c = rdivmod(fp, a).first;
    RPoly d = rsub(c, rderiv(b));
    for (int i = 1; b.size() > 1; ++i) {
        a = rgcd(b, d);
        if (a.size() > 1) out.emplace_back(a, i);
        b = rdivmod(b, a).first;
        c = rdivmod(d, a).first;
        d = rsub(c, rderiv(b));
    }
    return out;
}

inline long double reval(const std::vector<long double>& a, long double x) {
    long double acc = 0;
    for (std::size_t i = a.size(); i-- > 0;) acc = acc * x + a[i];
    return acc;
}

/// Real roots of a square-free polynomial, bracketed by the roots of its derivative.
inline std::vector<long double> real_roots(const std::vector<long double>& a) {
    const int deg = static_cast<int>(a.size()) - 1;
    if (deg < 1) return {};
    if (deg == 1) return {-a[0] / a[1]};
    long double bound = 0;
    for (int i = 0; i < deg; ++i) bound = std::max(bound, std::fabs(a[i] / a[deg]));
    bound += 1;
    std::vector<long double> da;
    for (int i = 1; i <= deg; ++i) da.push_back(a[i] * i);
    std::vector<long double> marks{-bound};
    for (auto r : real_roots(da)) marks.push_back(r);
    marks.push_back(bound);
    std::vector<long double> roots;
    for (std::size_t k = 0; k + 1 < marks.size(); ++k) {
        long double lo = marks[k], hi = marks[k + 1];
        long double flo = reval(a, lo), fhi = reval(a, hi);
        if (flo == 0) {
            roots.push_back(lo);
            continue;
        }
        if ((flo < 0) == (fhi < 0)) continue;
        for (int it = 0; it < 200; ++it) {
            const long double mid = lo + (hi - lo) / 2;
            if (mid <= lo || mid >= hi) break;
            const long double fm = reval(a, mid);
            if (fm == 0) {
                lo = hi = mid;
                break;
            }
            if ((fm < 0) == (flo < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(lo + (hi - lo) / 2);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace detail

/// h(t) with L*(u) = u^delta h(1/u + q u); its roots are 2 sqrt(q) cos(theta_j).
inline std::vector<BigInt> real_weil_polynomial(const LData& L) {
    const int g = L.delta;
    const BigInt q = L.q;
    std::vector<std::vector<BigInt>> T(static_cast<std::size_t>(g) + 1);
    T[0] = {2};
    if (g >= 1) T[1] = {0, 1};
    for (int m = 1; m < g; ++m) {
        std::vector<BigInt> next(static_cast<std::size_t>(m) + 2, 0);
        for (std::size_t i = 0; i < T[m].size(); ++i) next[i + 1] += T[m][i];
        for (std::size_t i = 0; i < T[m - 1].size(); ++i) next[i] -= q * T[m - 1][i];
        T[m + 1] = std::move(next);
    }
    std::vector<BigInt> h(static_cast<std::size_t>(g) + 1, 0);
    h[0] += L.Astar[g];
    for (int b = 0; b < g; ++b)
        for (std::size_t i = 0; i < T[g - b].size(); ++i) h[i] += L.Astar[b] * T[g - b][i];
    return h;
}

struct FrobeniusRoots {
    std::vector<std::complex<long double>> u;  // zeros of L*, with multiplicity
    std::vector<double> theta;                 // eigenphases in (-pi, pi], sorted
    double max_radius_error = 0;               // max | |u| sqrt(q) - 1 |
};

/// Zeros of L* and the eigenphases theta_j with u_j = q^{-1/2} e^{-i theta_j}.
/// Throws RiemannHypothesisViolation if a zero is off the circle beyond tol.
inline FrobeniusRoots frobenius_roots(const LData& L, double tol = 1e-9) {
    FrobeniusRoots out;
    if (L.delta == 0) return out;
    const auto h = real_weil_polynomial(L);
    detail::RPoly hr;
    for (const auto& c : h) hr.emplace_back(c);
    detail::rtrim(hr);
    const long double q = L.q;
    const long double sq = std::sqrt(q);
    long double scale = 0;
    for (std::size_t b = 0; b < L.Astar.size(); ++b)
        scale += std::fabs(static_cast<long double>(L.Astar[b])) * std::pow(1 / sq, static_cast<long double>(b));

    for (const auto& [factor, mult] : detail::squarefree_decomposition(hr)) {
        std::vector<long double> fa;
        for (const auto& c : factor) fa.push_back(c.convert_to<long double>());
        const auto roots = detail::real_roots(fa);
        if (static_cast<int>(roots.size()) != static_cast<int>(fa.size()) - 1)
            throw RiemannHypothesisViolation("real Weil polynomial has non-real roots");
        for (long double a : roots) {
            // 1 - a u + q u^2 = 0
            const std::complex<long double> disc = std::sqrt(std::complex<long double>(a * a - 4 * q, 0));
            for (int sgn : {1, -1}) {
                const std::complex<long double> u = (a + static_cast<long double>(sgn) * disc) / (2 * q);
                const long double err = std::fabs(std::abs(u) * sq - 1);
                if (err > tol) throw RiemannHypothesisViolation("zero off the critical circle by " + std::to_string(static_cast<double>(err)));
                std::complex<long double> val = 0;
                for (std::size_t b = L.Astar.size(); b-- > 0;) val = val * u + static_cast<long double>(L.Astar[b]);
                if (std::abs(val) > tol * scale) throw RiemannHypothesisViolation("computed zero does not annihilate L*");
                out.max_radius_error = std::max(out.max_radius_error, static_cast<double>(err));
                long double th = -std::arg(u);
                if (th <= -std::numbers::pi_v<long double>) th += 2 * std::numbers::pi_v<long double>;
                for (int m = 0; m < mult; ++m) {
                    out.u.push_back(u);
                    out.theta.push_back(static_cast<double>(th));
                }
            }
        }
    }
    if (static_cast<int>(out.theta.size()) != 2 * L.delta) throw RiemannHypothesisViolation("wrong number of zeros");
    std::sort(out.theta.begin(), out.theta.end());
    return out;
}

inline std::vector<double> eigenphases(const LData& L) { return frobenius_roots(L).theta; }

/// Point count over F_{q^n}: infinity plus 1 + eta(Q(x)) for each x.
inline std::int64_t point_count_direct(const Curve& c, int n) {
    const ExtField F(c.field(), n);
    std::int64_t total = 1;
    for (std::uint64_t idx = 0; idx < F.order(); ++idx) total += 1 + F.quadratic_character(F.evaluate(c.poly(), F.from_index(idx)));
    return total;
}

/// N_n = q^n + 1 - s_n.
inline std::int64_t point_count_from_traces(std::uint32_t q, int n, std::int64_t s_n) {
    return checked_sub(checked_add(checked_pow(q, static_cast<unsigned>(n)), 1), s_n);
}

}  // namespace hyperell

#endif  // HYPERELL_LFUNCTION_HPP
