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

#ifndef HYPERELL_EXPERIMENT_HPP
#define HYPERELL_EXPERIMENT_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cache.hpp"
#include "charsym.hpp"
#include "ensemble.hpp"
#include "lfunction.hpp"
#include "linstat.hpp"
#include "moment.hpp"
#include "report.hpp"
#include "rmt.hpp"

namespace hyperell {

/// Bad or inconsistent experiment parameters (exit status 2).
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;

struct ExperimentConfig {
    std::string command;
    std::uint32_t q = 3;
    int g = 1;
    int g_max = -1;  // -1: only g
    int N = -1;      // -1: 2g, raised to whatever the command needs
    std::vector<std::string> specs;
    std::string tf = "triangular:3";
    unsigned workers = 1;
    std::string format = "csv";
    std::string out;
    std::vector<int> degrees;
    int alpha = -1;  // -1: tabulate a range
    int beta = -1;
    int m = 3;
    int l = 1;
    std::uint64_t budget = kDefaultBudget;
    std::string Q;  // low-first coefficients, e.g. "1,2,0,1"
};

struct ExperimentResult {
    Report report;
    int status = kExitOk;
};

namespace detail {

template <class T>
std::string join(const std::vector<T>& v, const char* sep = " ", std::size_t from = 0) {
    std::ostringstream os;
    for (std::size_t i = from; i < v.size(); ++i) os << (i > from ? sep : "") << v[i];
    return os.str();
}

inline std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
    return s;
}

inline std::string exact_string(const Rational& r) { return ExactValue(3, r, 0).to_string(); }

inline int effective_N(const ExperimentConfig& c, int needed = 0) { return std::max(c.N < 0 ? 2 * c.g : c.N, needed); }

inline void base_params(Report& r, const ExperimentConfig& c) {
    r.params.push_back({"q", std::to_string(c.q)});
    r.params.push_back({"g", std::to_string(c.g)});
}

inline Poly parse_coefficients(FieldSpec field, const std::string& text) {
    std::vector<Residue> c;
    for (const auto& s : split(text, ',')) {
        if (s.empty()) throw ConfigError("empty coefficient in '" + text + "'");
        long long v = 0;
        try {
            std::size_t used = 0;
            v = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::logic_error&) {
            throw ConfigError("bad coefficient '" + s + "'");
        }
        c.push_back(static_cast<Residue>(field.reduce(v)));
    }
    return Poly(field, c);
}

struct CurveChecks {
    bool dual_traces = true;
    bool functional_equation = true;
    bool riemann = true;
    bool point_counts = true;
    bool slow_path = true;
    bool slow_checked = false;
};

}  // namespace detail

/// Throws ConfigError or BudgetExceeded before any heavy work.
inline void validate(const ExperimentConfig& c) {
    static const std::vector<std::string> commands = {"primes", "verify", "lfun", "moment", "decompose", "sigma", "charsum", "rmt", "linstat"};
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) throw ConfigError("unknown command '" + c.command + "'");
    try {
        FieldSpec{c.q};
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (c.g < 1) throw ConfigError("g must be >= 1");
    if (c.g_max >= 0 && c.g_max < c.g) throw ConfigError("g-max must be >= g");
    if (c.N == 0 || c.N < -1) throw ConfigError("N must be >= 1");
    if (c.workers < 1 || c.workers > 256) throw ConfigError("workers must be in 1..256");
    if (c.m < 1) throw ConfigError("m must be >= 1");
    if (c.l < 0) throw ConfigError("l must be >= 0");
    try {
        parse_format(c.format);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    for (int d : c.degrees)
        if (d < 1) throw ConfigError("degrees must be >= 1");
    try {
        for (const auto& s : c.specs) MomentSpec::parse(s);
        if (c.command == "linstat") TestFunction::parse(c.tf);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if ((c.command == "sigma" || c.command == "charsum") && c.degrees.empty()) throw ConfigError(c.command + " needs --degrees");
    const FieldSpec field(c.q);
    const bool ensemble = c.command == "verify" || c.command == "moment" || c.command == "decompose" || c.command == "linstat" ||
                          (c.command == "lfun" && c.Q.empty());
    if (ensemble)
        for (int g = c.g; g <= std::max(c.g, c.g_max); ++g) check_budget(EnsembleSpec{field, g}, c.budget);
    if (c.command == "charsum" || c.command == "sigma") {
        const int total = std::accumulate(c.degrees.begin(), c.degrees.end(), 0);
        const int top = std::max({c.alpha, c.beta, total, *std::max_element(c.degrees.begin(), c.degrees.end())});
        if (checked_upow(c.q, static_cast<unsigned>(top)) > c.budget) throw BudgetExceeded("q^" + std::to_string(top) + " exceeds the enumeration budget");
    }
}

inline ExperimentResult run_primes(const ExperimentConfig& c, CacheStore& store) {
    const int n = c.N < 0 ? 6 : c.N;
    const auto table = store.prime_table(FieldSpec(c.q), n);
    ExperimentResult res;
    auto& r = res.report;
    r.name = "primes";
    r.params = {{"q", std::to_string(c.q)}, {"max_degree", std::to_string(n)}};
    r.columns = {"degree", "count", "formula", "primes"};
    for (int d = 1; d <= n; ++d) {
        std::vector<std::string> ps;
        for (const auto& P : table.of_degree(d)) ps.push_back(P.to_string());
        const auto formula = prime_count_formula(c.q, d);
        if (formula != table.count(d)) res.status = kExitInvariant;
        r.add_row({std::to_string(d), std::to_string(table.count(d)), std::to_string(formula), detail::join(ps, "; ")});
    }
    return res;
}

/// Every hard invariant on every curve of H_{2g+1}.
inline ExperimentResult run_verify(const ExperimentConfig& c, CacheStore& store) {
    const FieldSpec field(c.q);
    const EnsembleSpec spec{field, c.g};
    const int N = detail::effective_N(c, 3);
    const auto table = store.prime_table(field, N);
    const CurveAnalyzer analyzer(table, c.g, N);
    const auto curves = enumerate_curves(spec, c.workers, c.budget);
    // the definitional Jacobi-symbol route is affordable on small ensembles only
    const bool slow = spec.candidates() <= 3125;
    const int counts_to = std::min(3, N);
    const auto checks = parallel_map<detail::CurveChecks>(curves.size(), c.workers, [&](std::size_t i) {
        detail::CurveChecks ck;
        const Poly& Q = curves[i];
        const auto s = analyzer.traces(Q, N);
        const auto A = analyzer.astar(Q);
        const LData L = complete_l(c.q, Q.degree(), std::vector<std::int64_t>(A.begin(), A.begin() + Q.degree()));
        ck.dual_traces = traces_from_lpoly(L, N) == s;
        try {
            const auto from_traces = lpoly_from_traces(s, 2 * c.g);
            ck.functional_equation = from_traces == L.Astar && functional_equation_residual(from_traces, c.q, c.g) == 0;
        } catch (const std::logic_error&) {
            ck.functional_equation = false;
        }
        try {
            frobenius_roots(L);
        } catch (const RiemannHypothesisViolation&) {
            ck.riemann = false;
        }
        const Curve curve(field, c.g, Q);
        for (int n = 1; n <= counts_to; ++n) ck.point_counts = ck.point_counts && point_count_direct(curve, n) == point_count_from_traces(c.q, n, s[n]);
        if (slow) {
            ck.slow_checked = true;
            try {
                const LData full = l_data(curve, CoefficientStrategy::FullEnumeration);
                ck.slow_path = full.Astar == L.Astar && traces_explicit(Q, N, table) == s;
            } catch (const std::logic_error&) {
                ck.slow_path = false;
            }
        }
        return ck;
    });
    ExperimentResult res;
    auto& r = res.report;
    r.name = "verify";
    detail::base_params(r, c);
    r.params.push_back({"N", std::to_string(N)});
    r.columns = {"invariant", "checked", "failures"};
    auto row = [&](const std::string& name, auto member, bool applies) {
        std::int64_t checked = 0, failed = 0;
        for (const auto& ck : checks) {
            if (!applies && !ck.slow_checked) continue;
            ++checked;
            if (!(ck.*member)) ++failed;
        }
        if (failed) res.status = kExitInvariant;
        r.add_row({name, std::to_string(checked), std::to_string(failed)});
    };
    r.add_row({"ensemble_size", std::to_string(curves.size()), curves.size() == static_cast<std::size_t>(spec.expected_count()) ? "0" : "1"});
    row("functional_equation", &detail::CurveChecks::functional_equation, true);
    row("riemann_hypothesis", &detail::CurveChecks::riemann, true);
    row("explicit_vs_lpoly_traces", &detail::CurveChecks::dual_traces, true);
    row("point_counts_n<=" + std::to_string(counts_to), &detail::CurveChecks::point_counts, true);
    if (slow) row("jacobi_symbol_route", &detail::CurveChecks::slow_path, false);
    return res;
}

inline ExperimentResult run_lfun(const ExperimentConfig& c, CacheStore& store) {
    const FieldSpec field(c.q);
    const int N = detail::effective_N(c);
    std::vector<Poly> curves;
    if (!c.Q.empty()) {
        curves.push_back(detail::parse_coefficients(field, c.Q));
        if (curves[0].degree() != 2 * c.g + 1) throw ConfigError("Q must have degree 2g+1 = " + std::to_string(2 * c.g + 1));
        try {
            Curve(field, c.g, curves[0]);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    } else {
        curves = enumerate_curves(EnsembleSpec{field, c.g}, c.workers, c.budget);
    }
    const auto table = store.prime_table(field, std::max(N, c.g));
    const CurveAnalyzer analyzer(table, c.g, N);
    const int counts_to = std::min(3, N);
    const auto rows = parallel_map<std::vector<std::string>>(curves.size(), c.workers, [&](std::size_t i) {
        const Poly& Q = curves[i];
        const auto A = analyzer.astar(Q);
        const LData L = complete_l(c.q, Q.degree(), std::vector<std::int64_t>(A.begin(), A.begin() + Q.degree()));
        const auto s = traces_from_lpoly(L, N);
        const auto fr = frobenius_roots(L);
        std::vector<std::int64_t> counts;
        for (int n = 1; n <= counts_to; ++n) counts.push_back(point_count_from_traces(c.q, n, s[n]));
        return std::vector<std::string>{Q.to_string(), detail::join(L.Astar), detail::join(s, " ", 1), detail::join_doubles(fr.theta),
                                        format_double(fr.max_radius_error), detail::join(counts)};
    });
    ExperimentResult res;
    auto& r = res.report;
    r.name = "lfun";
    detail::base_params(r, c);
    r.params.push_back({"N", std::to_string(N)});
    r.columns = {"Q", "Lstar_coefficients", "s_1..s_N", "eigenphases", "max_radius_error", "point_counts"};
    for (auto& row : rows) r.add_row(row);
    return res;
}

inline ExperimentResult run_moment(const ExperimentConfig& c, CacheStore& store) {
    const FieldSpec field(c.q);
    std::vector<MomentSpec> specs;
    for (const auto& s : c.specs.empty() ? std::vector<std::string>{"(2,1)"} : c.specs) specs.push_back(MomentSpec::parse(s));
    int need = 1;
    for (const auto& m : specs) need = std::max(need, m.max_power());
    const int N = detail::effective_N(c, need);
    const auto table = store.prime_table(field, std::max(N, c.g));
    const CurveAnalyzer analyzer(table, c.g, N);
    const auto traces = store.traces(EnsembleSpec{field, c.g}, N, analyzer, c.workers, c.budget);
    ExperimentResult res;
    auto& r = res.report;
    r.name = "moment";
    detail::base_params(r, c);
    r.params.push_back({"N", std::to_string(N)});
    r.columns = {"spec",   "weight",       "theorem_range",          "curves",     "empirical_exact", "empirical", "squares_prediction_exact",
                 "squares_prediction", "rmt_exact", "rmt", "rmt_exact_valid", "empirical_minus_squares", "empirical_minus_rmt", "squares_minus_rmt"};
    for (const auto& m : specs) {
        const auto rep = trace_product_moment(traces, table, m);
        if (!rep.theorem_range()) r.notes.push_back(m.to_string() + ": weight " + std::to_string(m.weight()) + " exceeds 2g-1");
        r.add_row({m.to_string(), std::to_string(m.weight()), rep.theorem_range() ? "1" : "0", std::to_string(rep.curve_count),
                   rep.empirical.to_string(), format_double(rep.empirical_value()), detail::exact_string(rep.squares),
                   format_double(to_double(rep.squares)), detail::exact_string(rep.rmt.value), format_double(to_double(rep.rmt.value)),
                   rep.rmt.valid ? "1" : "0", format_double(rep.deviation_from_squares()), format_double(rep.deviation_from_rmt()),
                   format_double(rep.squares_minus_rmt())});
    }
    return res;
}

inline ExperimentResult run_decompose(const ExperimentConfig& c, CacheStore& store) {
    const FieldSpec field(c.q);
    std::vector<int> ks = c.degrees;
    const int N0 = detail::effective_N(c);
    if (ks.empty())
        for (int k = 1; k <= N0; ++k) ks.push_back(k);
    const int N = std::max(N0, *std::max_element(ks.begin(), ks.end()));
    const auto table = store.prime_table(field, std::max(N, c.g));
    const CurveAnalyzer analyzer(table, c.g, N);
    const auto curves = enumerate_curves(EnsembleSpec{field, c.g}, c.workers, c.budget);
    const auto profiles = parallel_map<std::vector<DegreeCounts>>(curves.size(), c.workers, [&](std::size_t i) { return analyzer.profile(curves[i]); });
    ExperimentResult res;
    auto& r = res.report;
    r.name = "decompose";
    detail::base_params(r, c);
    r.params.push_back({"l", std::to_string(c.l)});
    r.columns = {"k",          "mean_prime_exact", "mean_square_exact", "mean_higher_exact", "identity_failures", "delta2_exact", "delta2",
                 "p2_exact",   "p2",               "prime_power_moment_exact", "prime_power_moment", "reference_k", "omega_max", "omega_bound", "omega_ok"};
    const auto n = static_cast<long long>(curves.size());
    for (int k : ks) {
        BigInt sp = 0, ss = 0, sh = 0, omax = 0;
        std::int64_t failures = 0;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const auto t = term_decomposition(profiles[i], k);
            const auto s = traces_from_profile(profiles[i], k, 2 * c.g);
            if (t.total() != -s[k]) ++failures;
            sp += t.prime;
            ss += t.square;
            sh += t.higher;
            omax = std::max(omax, omega(profiles[i][k], c.l));
        }
        const auto pm = prime_term_moment(profiles, c.q, k, c.l);
        // omega_Q^l(k) <= ((2g+1)/k) pi(k)^(l-1)
        const Rational bound = c.l == 0 ? Rational(0) : Rational(2 * c.g + 1, k) * Rational(big_pow(table.count(k), static_cast<unsigned>(c.l - 1)));
        const bool omega_ok = Rational(omax) <= bound;
        if (failures || !omega_ok) res.status = kExitInvariant;
        auto mean = [&](const BigInt& v) { return ExactValue(c.q, Rational(v, n), -k).to_string(); };
        r.add_row({std::to_string(k), mean(sp), mean(ss), mean(sh), std::to_string(failures), detail::exact_string(pm.delta2),
                   format_double(to_double(pm.delta2)), detail::exact_string(pm.cross), format_double(to_double(pm.cross)),
                   detail::exact_string(pm.prime_power_moment), format_double(to_double(pm.prime_power_moment)), format_double(pm.reference),
                   omax.str(), hyperell::to_string(bound), omega_ok ? "1" : "0"});
    }
    return res;
}

inline ExperimentResult run_sigma(const ExperimentConfig& c, CacheStore& store) {
    const FieldSpec field(c.q);
    const int kmin = *std::min_element(c.degrees.begin(), c.degrees.end());
    const int kmax = *std::max_element(c.degrees.begin(), c.degrees.end());
    const int amax = c.alpha >= 0 ? c.alpha : kmin + 1;
    const auto table = store.prime_table(field, std::max(kmax, amax));
    ExperimentResult res;
    auto& r = res.report;
    r.name = "sigma";
    r.params = {{"q", std::to_string(c.q)}, {"degrees", detail::join(c.degrees, ",")}};
    r.columns = {"alpha", "sigma", "expected", "ok"};
    for (int a = c.alpha >= 0 ? c.alpha : 0; a <= amax; ++a) {
        const auto v = sigma_sum(c.degrees, a, table);
        std::string expected = "-", ok = "-";
        if (a == 0 || a == 1 || a < kmin) {
            const std::int64_t e = a == 0 ? 1 : a == 1 ? -static_cast<std::int64_t>(c.q) : 0;
            expected = std::to_string(e);
            ok = v == e ? "1" : "0";
            if (v != e) res.status = kExitInvariant;
        }
        r.add_row({std::to_string(a), std::to_string(v), expected, ok});
    }
    return res;
}

inline ExperimentResult run_charsum(const ExperimentConfig& c, CacheStore& store) {
    const FieldSpec field(c.q);
    const int total = std::accumulate(c.degrees.begin(), c.degrees.end(), 0);
    const int kmax = *std::max_element(c.degrees.begin(), c.degrees.end());
    const int bmax = c.beta >= 0 ? c.beta : total;
    const auto table = store.prime_table(field, std::max(kmax, bmax));
    ExperimentResult res;
    auto& r = res.report;
    r.name = "charsum";
    r.params = {{"q", std::to_string(c.q)}, {"degrees", detail::join(c.degrees, ",")}};
    r.columns = {"beta", "definitional", "reciprocity", "paths_agree", "vanishing_expected", "ok"};
    for (int b = c.beta >= 0 ? c.beta : 0; b <= bmax; ++b) {
        const auto s = multi_char_sum(b, c.degrees, table);
        const bool agree = s.definitional == s.reciprocity;
        const bool vanish = b >= total;
        const bool ok = agree && (!vanish || s.definitional == 0);
        if (!ok) res.status = kExitInvariant;
        r.add_row({std::to_string(b), std::to_string(s.definitional), std::to_string(s.reciprocity), agree ? "1" : "0", vanish ? "1" : "0", ok ? "1" : "0"});
    }
    return res;
}

inline ExperimentResult run_rmt(const ExperimentConfig& c, CacheStore&) {
    ExperimentResult res;
    auto& r = res.report;
    r.name = "rmt";
    r.params = {{"g", std::to_string(c.g)}};
    r.columns = {"spec", "weight", "exact", "exact_decimal", "exact_valid", "quadrature", "abs_difference"};
    for (const auto& text : c.specs.empty() ? std::vector<std::string>{"(2,1)"} : c.specs) {
        const auto m = MomentSpec::parse(text);
        const auto ex = usp_moment_exact(m, c.g);
        std::string quad = "-", diff = "-";
        if (c.g <= 2) {
            const double v = weyl_quadrature_moment(m, c.g);
            quad = format_double(v);
            diff = format_double(std::fabs(v - to_double(ex.value)));
        }
        r.add_row({m.to_string(), std::to_string(m.weight()), detail::exact_string(ex.value), format_double(to_double(ex.value)), ex.valid ? "1" : "0", quad, diff});
    }
    return res;
}

inline ExperimentResult run_linstat(const ExperimentConfig& c, CacheStore& store) {
    const FieldSpec field(c.q);
    const auto tf = TestFunction::parse(c.tf);
    const auto ref = mock_gaussian_reference(tf);
    ExperimentResult res;
    auto& r = res.report;
    r.name = "linstat";
    r.params = {{"q", std::to_string(c.q)}, {"test_function", tf.name()}, {"moments", std::to_string(c.m)},
                {"reference_mean", hyperell::to_string(ref.mean)}, {"reference_variance", hyperell::to_string(ref.variance)}};
    if (tf.support_radius() * c.m > 1) r.notes.push_back("support radius exceeds 1/m; moments beyond the mock-Gaussian range");
    r.columns = {"g", "curves", "j", "raw", "raw_reference_exact", "raw_reference", "raw_deviation", "central", "central_reference_exact",
                 "central_reference", "central_deviation"};
    for (int g = c.g; g <= std::max(c.g, c.g_max); ++g) {
        const int N = std::max(1, support_cutoff(tf, 2 * g));
        const auto table = store.prime_table(field, std::max(N, g));
        const CurveAnalyzer analyzer(table, g, N);
        const auto traces = store.traces(EnsembleSpec{field, g}, N, analyzer, c.workers, c.budget);
        const auto z = z_moments(traces.s, c.q, g, tf, c.m);
        for (int j = 1; j <= c.m; ++j)
            r.add_row({std::to_string(g), std::to_string(z.curve_count), std::to_string(j), format_double(z.raw[j]), hyperell::to_string(z.reference_raw[j]),
                       format_double(to_double(z.reference_raw[j])), format_double(z.raw_deviation(j)), format_double(z.central[j]),
                       hyperell::to_string(z.reference_central[j]), format_double(to_double(z.reference_central[j])), format_double(z.central_deviation(j))});
    }
    return res;
}

inline ExperimentResult run_experiment(const ExperimentConfig& c, CacheStore& store) {
    validate(c);
    if (c.command == "primes") return run_primes(c, store);
    if (c.command == "verify") return run_verify(c, store);
    if (c.command == "lfun") return run_lfun(c, store);
    if (c.command == "moment") return run_moment(c, store);
    if (c.command == "decompose") return run_decompose(c, store);
    if (c.command == "sigma") return run_sigma(c, store);
    if (c.command == "charsum") return run_charsum(c, store);
    if (c.command == "rmt") return run_rmt(c, store);
    return run_linstat(c, store);
}

}  // namespace hyperell

#endif  // HYPERELL_EXPERIMENT_HPP
