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

#ifndef HYPERELL_ENSEMBLE_HPP
#define HYPERELL_ENSEMBLE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "charsym.hpp"
#include "fastchar.hpp"
#include "lfunction.hpp"
#include "moment.hpp"
#include "parallel.hpp"
#include "polyfield.hpp"
#include "primes.hpp"
#include "rmt.hpp"

namespace hyperell {

/// The family H_{2g+1} of monic square-free Q of degree 2g+1 over F_q.
struct EnsembleSpec {
    FieldSpec q;
    int g;

    int degree() const noexcept { return 2 * g + 1; }
    /// #H_{2g+1} = (q-1) q^{2g}
    std::int64_t expected_count() const { return checked_mul(q.p() - 1, checked_pow(q.p(), static_cast<unsigned>(2 * g))); }
    std::uint64_t candidates() const { return checked_upow(q.p(), static_cast<unsigned>(degree())); }
};

/// Refusal to enumerate an ensemble larger than the configured budget.
class BudgetExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultBudget = 1594323;  // 3^13

inline void check_budget(const EnsembleSpec& spec, std::uint64_t budget) {
    if (spec.g < 1) throw std::invalid_argument("genus must be >= 1");
    if (spec.candidates() > budget) {
        int fit = spec.g - 1;
        while (fit >= 1 && checked_upow(spec.q.p(), static_cast<unsigned>(2 * fit + 1)) > budget) --fit;
        throw BudgetExceeded("q^(2g+1) = " + std::to_string(spec.candidates()) + " exceeds the enumeration budget " + std::to_string(budget) +
                             (fit >= 1 ? "; largest genus within budget is " + std::to_string(fit) : std::string("; no genus fits")));
    }
}

/// Every monic square-free Q of degree 2g+1, once each, in canonical order.
inline std::vector<Poly> enumerate_curves(const EnsembleSpec& spec, unsigned workers = 1, std::uint64_t budget = kDefaultBudget) {
    check_budget(spec, budget);
    const std::uint64_t total = spec.candidates();
    const unsigned chunks = std::max(1u, workers);
    std::vector<std::vector<Poly>> parts(chunks);
    parallel_chunks(chunks, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
            const std::uint64_t lo = total * c / chunks, hi = total * (c + 1) / chunks;
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                Poly Q = Poly::monic_from_index(spec.q, spec.degree(), idx);
                if (gcd(Q, derivative(Q)).degree() == 0) parts[c].push_back(std::move(Q));
            }
        }
    });
    std::vector<Poly> out;
    out.reserve(static_cast<std::size_t>(spec.expected_count()));
    for (auto& p : parts)
        for (auto& Q : p) out.push_back(std::move(Q));
    if (static_cast<std::int64_t>(out.size()) != spec.expected_count())
        throw std::logic_error("enumerated " + std::to_string(out.size()) + " curves, expected " + std::to_string(spec.expected_count()));
    return out;
}

/// <F> = (1/#H) sum_Q F(Q), exact.
template <class F>
Rational ensemble_average(const std::vector<Poly>& curves, F&& fn, unsigned workers = 1) {
    if (curves.empty()) throw std::invalid_argument("ensemble_average over an empty ensemble");
    const auto values = parallel_map<Rational>(curves.size(), workers, [&](std::size_t i) { return Rational(fn(curves[i])); });
    Rational total = 0;
    for (const auto& v : values) total += v;
    return total / static_cast<long long>(curves.size());
}

/// The same average via Q = A^2 B over all monic A, B, weighted by mu(A).
/// F must be defined on every monic polynomial of degree 2g+1.
template <class F>
Rational moebius_decomposed_average(const EnsembleSpec& spec, F&& fn, const PrimeTable& table, unsigned workers = 1) {
    const FieldSpec field = spec.q;
    Rational total = 0;
    for (int alpha = 0; 2 * alpha <= spec.degree(); ++alpha) {
        const int beta = spec.degree() - 2 * alpha;
        const std::uint64_t nA = checked_upow(field.p(), static_cast<unsigned>(alpha));
        const std::uint64_t nB = checked_upow(field.p(), static_cast<unsigned>(beta));
        for (std::uint64_t ia = 0; ia < nA; ++ia) {
            const Poly A = Poly::monic_from_index(field, alpha, ia);
            const int mu = mobius(A, table);
            if (mu == 0) continue;
            const Poly A2 = A * A;
            const auto values = parallel_map<Rational>(nB, workers, [&](std::size_t ib) {
                return Rational(fn(A2 * Poly::monic_from_index(field, beta, ib)));
            });
            Rational part = 0;
            for (const auto& v : values) part += v;
            total += mu * part;
        }
    }
    return total / spec.expected_count();
}

/// Per-curve machinery for the ensemble: character profiles from the fast
/// evaluator, and L* from the small-degree Dirichlet coefficients.
class CurveAnalyzer {
   public:
    CurveAnalyzer(const PrimeTable& table, int genus, int max_degree)
        : field_(table.field()), g_(genus), max_degree_(std::max(max_degree, genus)), eval_(table, std::max(max_degree, genus)) {
        // factorization of every monic B with deg B <= g, as (degree, position, exponent)
        small_.resize(static_cast<std::size_t>(g_) + 1);
        for (int b = 1; b <= g_; ++b) {
            const std::uint64_t n = checked_upow(field_.p(), static_cast<unsigned>(b));
            for (std::uint64_t idx = 0; idx < n; ++idx) {
                const auto fz = factorize(Poly::monic_from_index(field_, b, idx), table);
                std::vector<SmallFactor> f;
                for (const auto& [P, e] : fz.factors) f.push_back({P.degree(), static_cast<int>(table.position(P)), e});
                small_[b].push_back(std::move(f));
            }
        }
    }

    int genus() const noexcept { return g_; }
    int max_degree() const noexcept { return max_degree_; }
    const PrimeCharacterEvaluator& evaluator() const noexcept { return eval_; }

    std::vector<DegreeCounts> profile(const Poly& Q) const { return eval_.profile(Q); }

    /// s_0..s_N through the explicit formula.
    std::vector<std::int64_t> traces(const Poly& Q, int N) const { return traces_from_profile(eval_.profile(Q), N, 2 * g_); }

    /// A*(0..2g): enumerate B up to degree g (chi multiplicative in B), then
    /// complete by the functional equation.
    std::vector<std::int64_t> astar(const Poly& Q) const {
        std::vector<std::vector<int>> chars(static_cast<std::size_t>(g_) + 1);
        for (int d = 1; d <= g_; ++d) chars[d] = eval_.characters(Q, d);
        const std::uint32_t q = field_.p();
        std::vector<std::int64_t> A(static_cast<std::size_t>(2 * g_) + 1, 0);
        A[0] = 1;
        for (int b = 1; b <= g_; ++b) {
            std::int64_t sum = 0;
            for (const auto& fac : small_[b]) {
                int v = 1;
                for (const auto& f : fac) {
                    const int c = chars[f.degree][f.position];
                    v *= (f.exponent % 2 == 0) ? c * c : c;
                    if (!v) break;
                }
                sum += v;
            }
            A[b] = sum;
        }
        for (int b = g_ + 1; b <= 2 * g_; ++b) A[b] = checked_mul(checked_pow(q, static_cast<unsigned>(b - g_)), A[2 * g_ - b]);
        return A;
    }

   private:
    struct SmallFactor {
        int degree;
        int position;
        int exponent;
    };
    FieldSpec field_;
    int g_;
    int max_degree_;
    PrimeCharacterEvaluator eval_;
    std::vector<std::vector<std::vector<SmallFactor>>> small_;
};

/// L* coefficients c_1..c_{2g} recovered from power sums by inverse Newton
/// identities; exactness of each division is asserted.
inline std::vector<std::int64_t> lpoly_from_traces(const std::vector<std::int64_t>& s, int two_delta) {
    if (static_cast<int>(s.size()) <= two_delta) throw std::out_of_range("lpoly_from_traces: need s_1..s_{2 delta}");
    std::vector<std::int64_t> c(static_cast<std::size_t>(two_delta) + 1, 0);
    c[0] = 1;
    for (int n = 1; n <= two_delta; ++n) {
        std::int64_t acc = s[n];
        for (int i = 1; i < n; ++i) acc = checked_add(acc, checked_mul(c[i], s[n - i]));
        if (acc % n) throw std::logic_error("power sums are not those of an integral L-polynomial");
        c[n] = -acc / n;
    }
    return c;
}

/// Per-curve s_0..s_N for a whole ensemble (explicit formula path).
struct TraceTable {
    std::uint32_t q = 3;
    int g = 1;
    int N = 0;
    std::vector<Poly> curves;
    std::vector<std::vector<std::int64_t>> s;      // s_0..s_N per curve
    std::vector<std::vector<std::int64_t>> astar;  // A*(0..2g) per curve

    std::size_t size() const noexcept { return curves.size(); }
};

inline TraceTable compute_traces(const EnsembleSpec& spec, int N, const CurveAnalyzer& analyzer, unsigned workers = 1,
                                 std::uint64_t budget = kDefaultBudget) {
    if (N > analyzer.max_degree()) throw std::out_of_range("compute_traces: analyzer degree below N");
    TraceTable t;
    t.q = spec.q.p();
    t.g = spec.g;
    t.N = N;
    t.curves = enumerate_curves(spec, workers, budget);
    t.s = parallel_map<std::vector<std::int64_t>>(t.curves.size(), workers, [&](std::size_t i) { return analyzer.traces(t.curves[i], N); });
    t.astar = parallel_map<std::vector<std::int64_t>>(t.curves.size(), workers, [&](std::size_t i) { return analyzer.astar(t.curves[i]); });
    return t;
}

/// Squares-only prediction: expected contribution of prime squares to the
/// product of traces, with the exact prime counts pi_q(k), pi_q(k/2).
/// pi(n) supplies the number of monic irreducibles of degree n.
template <class PrimeCount>
Rational squares_prediction(std::uint32_t q, PrimeCount&& pi, const MomentSpec& m) {
    Rational total = 1;
    for (const auto& t : m.terms()) {
        const int k = t.k, a = t.a;
        Rational factor = 0;
        for (int i = 0; 2 * i <= a; ++i) {
            const int rest = a - 2 * i;
            BigInt half_choose;
            if (k % 2)
                half_choose = rest == 0 ? 1 : 0;
            else
                half_choose = binomial(pi(k / 2), rest);
            if (half_choose == 0) continue;
            Rational term = Rational(binomial(a, 2 * i) * factorial(2 * i) * factorial(rest)) / Rational(big_pow(2, static_cast<unsigned>(i)));
            term *= Rational(big_pow(k, static_cast<unsigned>(2 * i)));
            term *= rational_pow(Rational(-k, 2), rest);
            term *= Rational(binomial(pi(k), i) * half_choose);
            // q^{-k a / 2}; k a is even whenever the term survives
            if ((k * a) % 2) throw std::logic_error("odd total weight in a surviving squares term");
            term /= Rational(big_pow(q, static_cast<unsigned>(k * a / 2)));
            factor += term;
        }
        total *= factor;
    }
    return total;
}

inline Rational squares_prediction(const PrimeTable& table, const MomentSpec& m) {
    return squares_prediction(table.field().p(), [&](int n) { return table.count(n); }, m);
}

struct EnsembleReport {
    MomentSpec moment;
    std::uint32_t q = 3;
    int g = 1;
    ExactValue empirical;
    Rational squares;
    RmtMoment rmt;
    std::int64_t curve_count = 0;
    double wall_seconds = 0;

    double empirical_value() const { return empirical.to_double(); }
    double deviation_from_squares() const { return empirical.to_double() - to_double(squares); }
    double deviation_from_rmt() const { return empirical.to_double() - to_double(rmt.value); }
    double squares_minus_rmt() const { return to_double(squares) - to_double(rmt.value); }
    bool theorem_range() const { return moment.weight() <= 2 * g - 1; }
};

/// <prod (s_{k_j} / q^{k_j/2})^{a_j}> over the ensemble.
inline ExactValue empirical_trace_moment(const TraceTable& t, const MomentSpec& m) {
    if (m.max_power() > t.N) throw std::out_of_range("trace table does not reach power " + std::to_string(m.max_power()));
    BigInt num = 0;
    for (const auto& s : t.s) {
        BigInt v = 1;
        for (const auto& term : m.terms())
            for (int i = 0; i < term.a; ++i) v *= s[term.k];
        num += v;
    }
    return ExactValue(t.q, Rational(num, static_cast<long long>(t.size())), -m.weight());
}

inline EnsembleReport trace_product_moment(const TraceTable& t, const PrimeTable& table, const MomentSpec& m) {
    EnsembleReport r;
    r.moment = m;
    r.q = t.q;
    r.g = t.g;
    r.curve_count = static_cast<std::int64_t>(t.size());
    r.empirical = empirical_trace_moment(t, m);
    r.squares = squares_prediction(table, m);
    r.rmt = usp_moment_exact(m, t.g);
    return r;
}

/// sigma(f, alpha) = sum over monic A of degree alpha coprime to f of mu(A).
inline std::int64_t sigma_sum_for(const Poly& f, int alpha, const PrimeTable& table) {
    const FieldSpec F = f.field();
    const std::uint64_t n = checked_upow(F.p(), static_cast<unsigned>(alpha));
    std::int64_t total = 0;
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        const Poly A = Poly::monic_from_index(F, alpha, idx);
        if (gcd(A, f).degree() != 0) continue;
        total += mobius(A, table);
    }
    return total;
}

/// Distinct representative primes of the given degrees; the shift picks later
/// entries of each degree list.
inline std::vector<Poly> representative_primes(const std::vector<int>& degrees, const PrimeTable& table, std::size_t shift = 0) {
    std::vector<Poly> reps;
    std::vector<std::size_t> used(static_cast<std::size_t>(table.max_degree()) + 1, 0);
    for (int k : degrees) {
        if (k < 1 || k > table.max_degree()) throw std::out_of_range("no prime table entry for degree " + std::to_string(k));
        const auto& list = table.of_degree(k);
        const std::size_t pos = used[k] + shift;
        if (pos >= list.size()) throw std::invalid_argument("not enough primes of degree " + std::to_string(k));
        reps.push_back(list[pos]);
        ++used[k];
    }
    return reps;
}

/// sigma(k_1..k_n; alpha) via representative primes; evaluated for several
/// choices of representatives and required to agree.
inline std::int64_t sigma_sum(const std::vector<int>& degrees, int alpha, const PrimeTable& table, int samples = 3) {
    if (alpha < 0) throw std::invalid_argument("sigma_sum needs alpha >= 0");
    std::int64_t first = 0;
    int done = 0;
    for (int s = 0; s < samples; ++s) {
        std::vector<Poly> reps;
        try {
            reps = representative_primes(degrees, table, static_cast<std::size_t>(s));
        } catch (const std::invalid_argument&) {
            if (s == 0) throw;
            break;
        }
        Poly f = Poly::one(table.field());
        for (const auto& p : reps) f = f * p;
        const auto v = sigma_sum_for(f, alpha, table);
        if (done == 0)
            first = v;
        else if (v != first)
            throw std::logic_error("sigma depends on the choice of primes, not just their degrees");
        ++done;
    }
    return first;
}

struct MultiCharSum {
    std::int64_t definitional = 0;  // direct sum of (B / p_1...p_n)
    std::int64_t reciprocity = 0;   // sign times sum of A_F(beta) from Euler products
};

namespace detail {

// Ordered tuples of distinct primes with the given degrees.
template <class Fn>
void for_each_prime_tuple(const std::vector<int>& degrees, const PrimeTable& table, Fn&& fn) {
    std::vector<const Poly*> cur;
    auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == degrees.size()) {
            fn(cur);
            return;
        }
        for (const Poly& p : table.of_degree(degrees[j])) {
            bool dup = false;
            for (auto* c : cur) dup = dup || (*c == p);
            if (dup) continue;
            cur.push_back(&p);
            self(self, j + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
}

// coefficient of u^beta in prod_{deg P <= beta} (1 - chi(P) u^{deg P})^{-1}
inline std::int64_t euler_product_coefficient(const Poly& F, int beta, const PrimeTable& table) {
    std::vector<std::int64_t> series(static_cast<std::size_t>(beta) + 1, 0);
    series[0] = 1;
    for (int d = 1; d <= beta; ++d) {
        for (const Poly& P : table.of_degree(d)) {
            const int x = jacobi_symbol(F, P);
            if (!x) continue;
            // multiply by 1/(1 - x u^d)
            for (int i = d; i <= beta; ++i) series[i] += x * series[i - d];
        }
    }
    return series[beta];
}

}  // namespace detail

/// S(beta; k_1..k_n) by both routes.
inline MultiCharSum multi_char_sum(int beta, const std::vector<int>& degrees, const PrimeTable& table) {
    if (beta < 0 || degrees.empty()) throw std::invalid_argument("multi_char_sum needs beta >= 0 and at least one degree");
    if (beta > table.max_degree()) throw std::out_of_range("multi_char_sum: prime table too small for beta");
    const FieldSpec field = table.field();
    const std::uint64_t nB = checked_upow(field.p(), static_cast<unsigned>(beta));
    std::vector<Poly> Bs;
    Bs.reserve(nB);
    for (std::uint64_t i = 0; i < nB; ++i) Bs.push_back(Poly::monic_from_index(field, beta, i));
    int total_degree = 0;
    for (int k : degrees) total_degree += k;
    const bool flip = ((field.p() - 1) / 2) % 2 == 1 && beta % 2 == 1 && total_degree % 2 == 1;

    MultiCharSum out;
    detail::for_each_prime_tuple(degrees, table, [&](const std::vector<const Poly*>& ps) {
        Poly F = Poly::one(field);
        for (auto* p : ps) F = F * *p;
        for (const auto& B : Bs) out.definitional += jacobi_symbol(B, F);
        out.reciprocity += detail::euler_product_coefficient(F, beta, table);
    });
    if (flip) out.reciprocity = -out.reciprocity;
    return out;
}

/// Split of -tr Theta^k scaled by q^{k/2}: primes (e = 1), prime squares
/// (e = 2), and higher prime powers (e >= 3).
struct TermDecomposition {
    std::int64_t prime = 0;
    std::int64_t square = 0;
    std::int64_t higher = 0;

    std::int64_t total() const noexcept { return prime + square + higher; }
};

inline TermDecomposition term_decomposition(const std::vector<DegreeCounts>& profile, int k) {
    if (k < 1 || static_cast<int>(profile.size()) <= k) throw std::out_of_range("term_decomposition: profile too short");
    TermDecomposition t;
    for (int e = 1; e <= k; ++e) {
        if (k % e) continue;
        const auto& c = profile[k / e];
        const std::int64_t v = static_cast<std::int64_t>(k / e) * (c.plus + (e % 2 ? -c.minus : c.minus));
        (e == 1 ? t.prime : e == 2 ? t.square : t.higher) += v;
    }
    return t;
}

/// sum over ordered m-tuples of distinct primes of chi(p_1...p_m): m! e_m(chi).
inline BigInt distinct_prime_sum(const DegreeCounts& c, int m) {
    // e_m is the u^m coefficient of (1+u)^plus (1-u)^minus
    BigInt e = 0;
    for (int i = 0; i <= m; ++i) {
        BigInt term = binomial(c.plus, i) * binomial(c.minus, m - i);
        e += (m - i) % 2 ? -term : term;
    }
    return e * factorial(m);
}

/// Unordered l-sets of distinct degree-k primes with some member dividing Q.
inline BigInt omega(const DegreeCounts& c, int l) {
    const std::int64_t pi = c.plus + c.minus + c.zero;
    return binomial(pi, l) - binomial(pi - c.zero, l);
}

/// P(m, k) = k^m q^{-mk/2} sum over ordered distinct m-tuples of chi(p_1...p_m).
inline ExactValue prime_tuple_term(const std::vector<DegreeCounts>& profile, std::uint32_t q, int k, int m) {
    return ExactValue(q, Rational(big_pow(k, static_cast<unsigned>(m)) * distinct_prime_sum(profile.at(k), m)), -m * k);
}

/// Delta(2m, k) = k^{2m} q^{-mk} sum over m-sets of distinct degree-k primes of chi(prod p^2).
inline Rational delta_term(const std::vector<DegreeCounts>& profile, std::uint32_t q, int k, int m) {
    const auto& c = profile.at(k);
    return Rational(big_pow(k, static_cast<unsigned>(2 * m)) * binomial(c.plus + c.minus, m)) / Rational(big_pow(q, static_cast<unsigned>(m * k)));
}

/// Box(m, k) = (k/2)^m q^{-mk/2} sum over m-sets of distinct degree-k/2 primes of chi(prod p^2); zero for odd k.
inline Rational square_term(const std::vector<DegreeCounts>& profile, std::uint32_t q, int k, int m) {
    if (k % 2) return m == 0 ? Rational(1) : Rational(0);
    const auto& c = profile.at(k / 2);
    return rational_pow(Rational(k, 2), m) * Rational(binomial(c.plus + c.minus, m)) / Rational(big_pow(q, static_cast<unsigned>(m * k / 2)));
}

struct PrimeTermReport {
    int k = 0;
    int l = 0;
    Rational prime_power_moment;  // <(P_k)^{2l}>
    Rational delta2;              // <Delta(2, k)>
    Rational cross;               // <P(2, k)>
    double reference = 0;         // k, the leading value of <Delta(2,k)>
};

/// Exact <(P_k)^{2l}>, <Delta(2,k)> and <P(2,k)> from per-curve profiles.
inline PrimeTermReport prime_term_moment(const std::vector<std::vector<DegreeCounts>>& profiles, std::uint32_t q, int k, int l) {
    if (profiles.empty()) throw std::invalid_argument("prime_term_moment over an empty ensemble");
    PrimeTermReport r;
    r.k = k;
    r.l = l;
    r.reference = k;
    BigInt pm = 0, d2 = 0, cr = 0;
    for (const auto& prof : profiles) {
        const auto t = term_decomposition(prof, k);
        BigInt v = 1;
        for (int i = 0; i < 2 * l; ++i) v *= t.prime;
        pm += v;
        const auto& c = prof.at(k);
        d2 += c.plus + c.minus;
        cr += distinct_prime_sum(c, 2);
    }
    const auto n = static_cast<long long>(profiles.size());
    r.prime_power_moment = Rational(pm) / (Rational(big_pow(q, static_cast<unsigned>(l * k))) * n);
    r.delta2 = Rational(d2 * k * k) / (Rational(big_pow(q, static_cast<unsigned>(k))) * n);
    r.cross = Rational(cr * k * k) / (Rational(big_pow(q, static_cast<unsigned>(k))) * n);
    return r;
}

/// <chi_Q(f^2)> over the ensemble, with the lower bound 1 - (1/(1-1/q)) sum 1/|P|.
struct SquareCharacterCheck {
    Rational average;
    Rational lower_bound;
    bool holds = false;
};

inline SquareCharacterCheck square_character_average(const std::vector<Poly>& curves, const Poly& f, unsigned workers = 1) {
    const FieldSpec F = f.field();
    const Poly f2 = f * f;
    SquareCharacterCheck out;
    out.average = ensemble_average(curves, [&](const Poly& Q) { return jacobi_symbol(Q, f2); }, workers);
    Rational inv_norms = 0;
    for (const auto& [P, e] : factorize(f).factors) inv_norms += Rational(1) / Rational(big_pow(F.p(), static_cast<unsigned>(P.degree())));
    out.lower_bound = 1 - inv_norms / (1 - Rational(1, F.p()));
    out.holds = out.lower_bound <= out.average && out.average <= 1;
    return out;
}

}  // namespace hyperell

#endif  // HYPERELL_ENSEMBLE_HPP
