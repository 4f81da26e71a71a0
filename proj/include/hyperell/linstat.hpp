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

#ifndef HYPERELL_LINSTAT_HPP
#define HYPERELL_LINSTAT_HPP

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"

namespace hyperell {

/// Compensated (Neumaier) running sum; order of additions is the caller's.
class NeumaierSum {
   public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

   private:
    double sum_ = 0;
    double comp_ = 0;
};

namespace detail {

using RatPoly = std::vector<Rational>;  // low-first

inline Rational rat_eval(const RatPoly& p, const Rational& u) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * u + *it;
    return acc;
}

inline RatPoly rat_mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline RatPoly rat_deriv(const RatPoly& a) {
    RatPoly r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<long long>(i));
    return r;
}

inline Rational rat_integral(const RatPoly& p, const Rational& a, const Rational& b) {
    Rational total = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto n = static_cast<int>(i) + 1;
        total += p[i] * (rational_pow(b, n) - rational_pow(a, n)) / n;
    }
    return total;
}

inline Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            // decimals are read exactly: "0.25" -> 1/4
            const auto dot = s.find('.');
            if (dot == std::string::npos) {
                const long long v = std::stoll(s, &used);
                if (used != s.size()) throw std::invalid_argument(s);
                return Rational(v);
            }
            const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            const long long v = std::stoll(digits, &used);
            if (used != digits.size()) throw std::invalid_argument(s);
            return Rational(v) / Rational(big_pow(10, static_cast<unsigned>(s.size() - dot - 1)));
        }
        const long long n = std::stoll(s.substr(0, slash), &used);
        if (used != slash) throw std::invalid_argument(s);
        const std::string ds = s.substr(slash + 1);
        const long long d = std::stoll(ds, &used);
        if (used != ds.size() || d == 0) throw std::invalid_argument(s);
        return Rational(n, d);
    } catch (const std::logic_error&) {
        throw std::invalid_argument("not a rational number: '" + s + "'");
    }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

/// Even test function given on the Fourier side: fhat(u) = p_i(|u|) for
/// breakpoint_i <= |u| <= breakpoint_{i+1}, and 0 beyond the last breakpoint.
class TestFunction {
   public:
    TestFunction(std::vector<Rational> breakpoints, std::vector<std::vector<Rational>> pieces, std::string name = "")
        : bp_(std::move(breakpoints)), pieces_(std::move(pieces)), name_(std::move(name)) {
        if (bp_.size() < 2 || pieces_.size() + 1 != bp_.size())
            throw std::invalid_argument("test function needs n+1 breakpoints for n pieces");
        if (bp_.front() != 0) throw std::invalid_argument("first breakpoint must be 0");
        for (std::size_t i = 1; i < bp_.size(); ++i)
            if (!(bp_[i - 1] < bp_[i])) throw std::invalid_argument("breakpoints must increase");
        for (std::size_t i = 1; i < pieces_.size(); ++i)
            if (detail::rat_eval(pieces_[i - 1], bp_[i]) != detail::rat_eval(pieces_[i], bp_[i]))
                throw std::invalid_argument("test function is discontinuous at a breakpoint");
        if (detail::rat_eval(pieces_.back(), bp_.back()) != 0) throw std::invalid_argument("test function must vanish at its support radius");
        if (name_.empty()) name_ = to_string();
        smoothness_ = compute_smoothness();
        tail_constant_ = compute_tail_constant();
    }

    /// max(0, 1 - m|u|)
    static TestFunction triangular(int m) {
        if (m < 1) throw std::invalid_argument("triangular test function needs m >= 1");
        return TestFunction({0, Rational(1, m)}, {{1, Rational(-m)}}, "triangular:" + std::to_string(m));
    }

    /// (1 - u^2/r^2)^3 on |u| <= r; twice continuously differentiable.
    static TestFunction bump(const Rational& r) {
        if (r <= 0) throw std::invalid_argument("bump radius must be positive");
        const Rational a = Rational(1) / (r * r);
        return TestFunction({0, r}, {{1, 0, -3 * a, 0, 3 * a * a, 0, -a * a * a}}, "bump:" + hyperell::to_string(r));
    }

    static TestFunction zero() { return TestFunction({0, 1}, {{0}}, "zero"); }

    /// "triangular:m", "bump:r", "zero", or "pw:b0,b1,..;c0,c1,..;c0,.." with
    /// one coefficient list (low-first, in |u|) per interval.
    static TestFunction parse(const std::string& text) {
        const auto colon = text.find(':');
        const std::string kind = text.substr(0, colon);
        const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
        if (kind == "zero") return zero();
        if (kind == "triangular") {
            const Rational m = detail::parse_rational(body);
            if (denominator(m) != 1) throw std::invalid_argument("triangular:m needs an integer m");
            return triangular(static_cast<int>(numerator(m)));
        }
        if (kind == "bump") return bump(detail::parse_rational(body));
        if (kind == "pw") {
            const auto groups = detail::split(body, ';');
            if (groups.size() < 2) throw std::invalid_argument("pw: needs breakpoints and at least one piece");
            std::vector<Rational> bp;
            for (const auto& s : detail::split(groups[0], ',')) bp.push_back(detail::parse_rational(s));
            std::vector<std::vector<Rational>> pieces;
            for (std::size_t i = 1; i < groups.size(); ++i) {
                std::vector<Rational> c;
                for (const auto& s : detail::split(groups[i], ',')) c.push_back(detail::parse_rational(s));
                pieces.push_back(std::move(c));
            }
            return TestFunction(std::move(bp), std::move(pieces), text);
        }
        throw std::invalid_argument("unknown test function '" + text + "'");
    }

    const std::string& name() const noexcept { return name_; }
    const Rational& support_radius() const noexcept { return bp_.back(); }
    const std::vector<Rational>& breakpoints() const noexcept { return bp_; }
    const std::vector<std::vector<Rational>>& pieces() const noexcept { return pieces_; }

    Rational exact(Rational u) const {
        if (u < 0) u = -u;
        if (u >= bp_.back()) return 0;
        for (std::size_t i = 0; i + 1 < bp_.size(); ++i)
            if (u <= bp_[i + 1]) return detail::rat_eval(pieces_[i], u);
        return 0;
    }

    double operator()(double u) const {
        u = std::fabs(u);
        if (u >= hyperell::to_double(bp_.back())) return 0;
        for (std::size_t i = 0; i + 1 < bp_.size(); ++i)
            if (u <= hyperell::to_double(bp_[i + 1])) {
                double acc = 0;
                for (auto it = pieces_[i].rbegin(); it != pieces_[i].rend(); ++it) acc = acc * u + hyperell::to_double(*it);
                return acc;
            }
        return 0;
    }

    /// f(x) = 2 * int_0^r fhat(u) cos(2 pi u x) du.
    double x_side(double x) const {
        const double w = 2 * std::numbers::pi * std::fabs(x);
        double total = 0;
        for (std::size_t i = 0; i + 1 < bp_.size(); ++i) {
            const double a = hyperell::to_double(bp_[i]), b = hyperell::to_double(bp_[i + 1]);
            std::vector<double> c;
            for (const auto& r : pieces_[i]) c.push_back(hyperell::to_double(r));
            total += piece_cosine_integral(c, a, b, w);
        }
        return 2 * total;
    }

    /// Number c of continuous derivatives across the whole line (c >= 1).
    int smoothness() const noexcept { return smoothness_; }

    /// B with |f(x)| <= B / |x|^(c+1).
    double tail_constant() const noexcept { return tail_constant_; }

    std::string to_string() const {
        std::ostringstream os;
        os << "pw:";
        for (std::size_t i = 0; i < bp_.size(); ++i) os << (i ? "," : "") << hyperell::to_string(bp_[i]);
        for (const auto& p : pieces_) {
            os << ';';
            for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << hyperell::to_string(p[i]);
        }
        return os.str();
    }

   private:
    static double piece_cosine_integral(const std::vector<double>& c, double a, double b, double w) {
        auto poly = [&](double u) {
            double acc = 0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
            return acc;
        };
        if (w * (b - a) < 20) {
            return boost::math::quadrature::gauss<double, 30>::integrate([&](double u) { return poly(u) * std::cos(w * u); }, a, b);
        }
        // repeated integration by parts: int p cos(wu) = sum_j p^(j) * trig_j / w^(j+1)
        std::vector<double> d = c;
        double total = 0;
        for (int j = 0; !d.empty(); ++j) {
            auto pe = [&](double u) {
                double acc = 0;
                for (auto it = d.rbegin(); it != d.rend(); ++it) acc = acc * u + *it;
                return acc;
            };
            // antiderivative pattern of cos: sin, -(-cos), -sin, ... with 1/w^(j+1)
            auto trig = [&](double u) {
                switch (j % 4) {
                    case 0: return std::sin(w * u);
                    case 1: return std::cos(w * u);
                    case 2: return -std::sin(w * u);
                    default: return -std::cos(w * u);
                }
            };
            total += (pe(b) * trig(b) - pe(a) * trig(a)) / std::pow(w, j + 1);
            std::vector<double> nd;
            for (std::size_t i = 1; i < d.size(); ++i) nd.push_back(d[i] * static_cast<double>(i));
            d = std::move(nd);
        }
        return total;
    }

    // jump of the j-th derivative of the even extension at each node
    std::vector<Rational> derivative_jumps(int j) const {
        std::vector<Rational> jumps;
        auto deriv_at = [&](std::size_t piece, const Rational& u) {
            detail::RatPoly p = pieces_[piece];
            for (int k = 0; k < j; ++k) p = detail::rat_deriv(p);
            return detail::rat_eval(p, u);
        };
        // origin: right limit minus the mirrored left limit (-1)^j times it
        const Rational at0 = deriv_at(0, 0);
        jumps.push_back(j % 2 ? 2 * at0 : Rational(0));
        for (std::size_t i = 1; i < pieces_.size(); ++i) jumps.push_back(deriv_at(i, bp_[i]) - deriv_at(i - 1, bp_[i]));
        jumps.push_back(-deriv_at(pieces_.size() - 1, bp_.back()));
        return jumps;
    }

    int compute_smoothness() const {
        int c = 1;
        for (;; ++c) {
            bool all_zero = true;
            for (const auto& jmp : derivative_jumps(c)) all_zero = all_zero && jmp == 0;
            if (!all_zero) return c;
            bool vanishes = true;
            for (const auto& p : pieces_) {
                auto d = p;
                for (int k = 0; k <= c; ++k) d = detail::rat_deriv(d);
                vanishes = vanishes && std::all_of(d.begin(), d.end(), [](const Rational& r) { return r == 0; });
            }
            if (vanishes) return c;  // identically zero test function
        }
    }

    // total variation of the c-th derivative (both sides of the origin) over (2 pi)^(c+1)
    double compute_tail_constant() const {
        const int c = smoothness_;
        double tv = 0;
        const auto jumps = derivative_jumps(c);
        // the origin once, every other node on both sides
        for (std::size_t i = 0; i < jumps.size(); ++i) tv += (i ? 2 : 1) * std::fabs(hyperell::to_double(jumps[i]));
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            auto d = pieces_[i];
            for (int k = 0; k <= c; ++k) d = detail::rat_deriv(d);
            const double a = hyperell::to_double(bp_[i]), b = hyperell::to_double(bp_[i + 1]);
            double bound = 0;
            for (std::size_t k = 0; k < d.size(); ++k) bound += std::fabs(hyperell::to_double(d[k])) * std::pow(std::max(std::fabs(a), std::fabs(b)), k);
            tv += 2 * (b - a) * bound;
        }
        return tv / std::pow(2 * std::numbers::pi, c + 1);
    }

    std::vector<Rational> bp_;
    std::vector<std::vector<Rational>> pieces_;
    std::string name_;
    int smoothness_ = 1;
    double tail_constant_ = 0;
};

/// Limiting mean fhat(0) - int_0^1 fhat and variance 2 int_{-1/2}^{1/2} |u| fhat^2.
struct GaussianReference {
    Rational mean;
    Rational variance;
};

inline GaussianReference mock_gaussian_reference(const TestFunction& tf) {
    GaussianReference g;
    Rational integral = 0, second = 0;
    const auto& bp = tf.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const auto& p = tf.pieces()[i];
        const Rational a = bp[i];
        const Rational b1 = std::min(bp[i + 1], Rational(1));
        if (a < b1) integral += detail::rat_integral(p, a, b1);
        const Rational b2 = std::min(bp[i + 1], Rational(1, 2));
        if (a < b2) second += detail::rat_integral(detail::rat_mul({0, 1}, detail::rat_mul(p, p)), a, b2);
    }
    g.mean = tf.exact(0) - integral;
    g.variance = 4 * second;
    return g;
}

/// Raw Gaussian moments M_0..M_m from M_{j+1} = mean M_j + j var M_{j-1}.
inline std::vector<Rational> gaussian_raw_moments(const GaussianReference& ref, int m) {
    std::vector<Rational> M(static_cast<std::size_t>(std::max(m, 1)) + 1, 0);
    M[0] = 1;
    M[1] = ref.mean;
    for (int j = 1; j < m; ++j) M[j + 1] = ref.mean * M[j] + j * ref.variance * M[j - 1];
    M.resize(static_cast<std::size_t>(m) + 1);
    return M;
}

/// Central Gaussian moments: 0 for odd order, (j-1)!! var^{j/2} for even.
inline std::vector<Rational> gaussian_central_moments(const GaussianReference& ref, int m) {
    std::vector<Rational> C(static_cast<std::size_t>(m) + 1, 0);
    C[0] = 1;
    for (int j = 2; j <= m; j += 2) C[j] = C[j - 2] * (j - 1) * ref.variance;
    return C;
}

/// Largest k with fhat(k/N) possibly nonzero, i.e. k < N r.
inline int support_cutoff(const TestFunction& tf, int N) {
    const Rational nr = tf.support_radius() * N;
    BigInt k = numerator(nr) / denominator(nr);
    if (Rational(k) == nr) k -= 1;
    return static_cast<int>(k);
}

/// Z_f = fhat(0) + (2/N) sum_{k >= 1} fhat(k/N) t_k from unitarized traces t_k = tr U^k.
inline double z_from_unitary_traces(const std::vector<double>& t, const TestFunction& tf, int N) {
    if (N < 1) throw std::invalid_argument("z statistic needs N >= 1");
    const int K = support_cutoff(tf, N);
    if (static_cast<int>(t.size()) <= K)
        throw std::out_of_range("z statistic needs traces through k = " + std::to_string(K) + ", have " + std::to_string(t.size() - 1));
    if (tf.exact(Rational(K + 1, N)) != 0) throw std::logic_error("test function nonzero beyond its support cutoff");
    NeumaierSum sum;
    for (int k = 1; k <= K; ++k) sum.add(tf(static_cast<double>(k) / N) * t[k]);
    return tf(0) + 2.0 / N * sum.value();
}

/// Z_f from integer traces s_k = q^{k/2} tr Theta^k, with N = 2g.
inline double z_statistic(const std::vector<std::int64_t>& s, std::uint32_t q, const TestFunction& tf, int N) {
    const int K = std::min(support_cutoff(tf, N), static_cast<int>(s.size()) - 1);
    std::vector<double> t(static_cast<std::size_t>(std::max(K, 0)) + 1, 0);
    for (int k = 1; k <= K; ++k) t[k] = static_cast<double>(s[k]) / std::pow(static_cast<double>(q), k / 2.0);
    if (K < support_cutoff(tf, N)) t.resize(static_cast<std::size_t>(std::max(K, 0)) + 1);
    return z_from_unitary_traces(t, tf, N);
}

struct XSideValue {
    double value = 0;
    double tail_bound = 0;
};

/// Z_f = sum_j sum_k f(N(theta_j/2pi - k)), truncated once the tail bound
/// summed over all phases is below tol.
inline XSideValue z_from_eigenphases(const std::vector<double>& theta, const TestFunction& tf, int N, double tol = 1e-10) {
    if (theta.empty()) return {};
    const int p = tf.smoothness() + 1;
    const double B = tf.tail_constant();
    const double per_phase = tol / static_cast<double>(theta.size());
    // tail of sum over |x| > X with spacing N: 2B (X^-p + X^(1-p) / (N (p-1)))
    auto tail = [&](double X) { return 2 * B * (std::pow(X, -p) + std::pow(X, 1 - p) / (N * (p - 1.0))); };
    double X = N;
    while (B > 0 && tail(X) > per_phase) X *= 1.25;
    XSideValue out;
    NeumaierSum sum;
    for (double th : theta) {
        const double phi = th / (2 * std::numbers::pi);
        const auto kmax = static_cast<long long>(std::ceil(phi + X / N)) + 1;
        const auto kmin = static_cast<long long>(std::floor(phi - X / N)) - 1;
        for (long long k = kmin; k <= kmax; ++k) {
            const double x = N * (phi - static_cast<double>(k));
            if (std::fabs(x) > X) continue;
            sum.add(tf.x_side(x));
        }
        out.tail_bound += B > 0 ? tail(X) : 0;
    }
    out.value = sum.value();
    return out;
}

struct ZMomentReport {
    std::uint32_t q = 3;
    int g = 1;
    std::string test_function;
    int moments = 0;
    std::int64_t curve_count = 0;
    bool within_support = true;  // r <= 1/m
    GaussianReference reference;
    std::vector<double> raw;      // index 1..m
    std::vector<double> central;  // index 1..m (central[1] = 0)
    std::vector<Rational> reference_raw;
    std::vector<Rational> reference_central;

    double raw_deviation(int j) const { return std::fabs(raw.at(j) - hyperell::to_double(reference_raw.at(j))); }
    double central_deviation(int j) const { return std::fabs(central.at(j) - hyperell::to_double(reference_central.at(j))); }
};

/// Empirical moments of Z_f over per-curve trace rows; reduction is serial in
/// row order.
inline ZMomentReport z_moments(const std::vector<std::vector<std::int64_t>>& traces, std::uint32_t q, int g, const TestFunction& tf, int m) {
    if (traces.empty()) throw std::invalid_argument("z_moments over an empty ensemble");
    if (m < 1) throw std::invalid_argument("z_moments needs m >= 1");
    ZMomentReport r;
    r.q = q;
    r.g = g;
    r.test_function = tf.name();
    r.moments = m;
    r.curve_count = static_cast<std::int64_t>(traces.size());
    r.within_support = tf.support_radius() * m <= 1;
    r.reference = mock_gaussian_reference(tf);
    r.reference_raw = gaussian_raw_moments(r.reference, m);
    r.reference_central = gaussian_central_moments(r.reference, m);
    std::vector<double> z;
    z.reserve(traces.size());
    for (const auto& s : traces) z.push_back(z_statistic(s, q, tf, 2 * g));
    const double n = static_cast<double>(z.size());
    r.raw.assign(static_cast<std::size_t>(m) + 1, 0);
    r.central.assign(static_cast<std::size_t>(m) + 1, 0);
    r.raw[0] = r.central[0] = 1;
    for (int j = 1; j <= m; ++j) {
        NeumaierSum s;
        for (double v : z) s.add(std::pow(v, j));
        r.raw[j] = s.value() / n;
    }
    for (int j = 2; j <= m; ++j) {
        NeumaierSum s;
        for (double v : z) s.add(std::pow(v - r.raw[1], j));
        r.central[j] = s.value() / n;
    }
    return r;
}

}  // namespace hyperell

#endif  // HYPERELL_LINSTAT_HPP
