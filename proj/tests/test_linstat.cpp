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

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "hyperell/ensemble.hpp"
#include "hyperell/linstat.hpp"
#include "hyperell/rmt.hpp"

using namespace hyperell;

namespace {

// integrates over [0, b] piece by piece so each panel is a polynomial
double integrate_pieces(const TestFunction& tf, const std::function<double(double)>& f, double b) {
    double total = 0, lo = 0;
    for (std::size_t i = 1; i < tf.breakpoints().size() && lo < b; ++i) {
        const double hi = std::min(b, to_double(tf.breakpoints()[i]));
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 10, 1e-14);
        lo = hi;
    }
    return total;
}

Rational rpow(const Rational& b, int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

double sinc(double t) { return t == 0 ? 1.0 : std::sin(std::numbers::pi * t) / (std::numbers::pi * t); }

}  // namespace

TEST(TestFunction, TriangularAndBumpShapes) {
    const auto tri = TestFunction::triangular(3);
    EXPECT_EQ(tri.exact(0), Rational(1));
    EXPECT_EQ(tri.exact(Rational(1, 6)), Rational(1, 2));
    EXPECT_EQ(tri.exact(Rational(-1, 6)), Rational(1, 2));
    EXPECT_EQ(tri.exact(Rational(1, 3)), Rational(0));
    EXPECT_EQ(tri.exact(Rational(2)), Rational(0));
    const auto bump = TestFunction::bump(Rational(1, 2));
    EXPECT_EQ(bump.exact(Rational(1, 4)), Rational(27, 64));
    EXPECT_DOUBLE_EQ(bump(0.25), 27.0 / 64);
    EXPECT_DOUBLE_EQ(bump(-0.25), 27.0 / 64);
    EXPECT_EQ(bump(0.6), 0.0);
}

TEST(TestFunction, Parse) {
    EXPECT_EQ(TestFunction::parse("triangular:4").exact(Rational(1, 8)), Rational(1, 2));
    EXPECT_EQ(TestFunction::parse("bump:0.5").support_radius(), Rational(1, 2));
    EXPECT_EQ(TestFunction::parse("zero").exact(0), Rational(0));
    const auto pw = TestFunction::parse("pw:0,1/4,1/2;1,-2;1,-2");
    EXPECT_EQ(pw.exact(Rational(3, 8)), Rational(1, 4));
    EXPECT_EQ(TestFunction::parse(pw.to_string()).exact(Rational(1, 8)), Rational(3, 4));
    for (const char* bad : {"triangular:1.5", "triangular:0", "bump:-1", "pw:0,1/2;1", "pw:0,1/4,1/2;1,-2;1,-1",
                            "pw:1,2;1,-1", "pw:0,1/2,1/4;1;1", "sinc:2", "pw:0,x;1,-1"})
        EXPECT_THROW(TestFunction::parse(bad), std::invalid_argument) << bad;
}

TEST(TestFunction, XSideMatchesClosedFormForTriangular) {
    for (int m : {2, 3, 4}) {
        const auto tri = TestFunction::triangular(m);
        for (double x : {0.0, 0.1, 0.37, 1.0, 2.5, 7.3, 19.9, 64.2, 400.1}) {
            const double expect = sinc(x / m) * sinc(x / m) / m;
            EXPECT_NEAR(tri.x_side(x), expect, 1e-12) << "m=" << m << " x=" << x;
            EXPECT_NEAR(tri.x_side(-x), expect, 1e-12);
        }
    }
}

TEST(TestFunction, TailBoundHolds) {
    for (const auto& tf : {TestFunction::triangular(3), TestFunction::bump(Rational(1)), TestFunction::parse("pw:0,1/4,1/2;1,-2;1,-2")}) {
        const int p = tf.smoothness() + 1;
        EXPECT_GE(tf.smoothness(), 1);
        for (double x = 1.3; x < 500; x *= 1.7) EXPECT_LE(std::fabs(tf.x_side(x)), tf.tail_constant() / std::pow(x, p) * (1 + 1e-9)) << tf.name() << " x=" << x;
    }
    EXPECT_EQ(TestFunction::triangular(3).smoothness(), 1);
    EXPECT_EQ(TestFunction::bump(Rational(1)).smoothness(), 3);
}

TEST(MockGaussianReference, TriangularMeanAndVariance) {
    const auto ref = mock_gaussian_reference(TestFunction::triangular(3));
    EXPECT_EQ(ref.mean, Rational(5, 6));
    EXPECT_EQ(ref.variance, Rational(1, 27));
    const auto zero = mock_gaussian_reference(TestFunction::zero());
    EXPECT_EQ(zero.mean, Rational(0));
    EXPECT_EQ(zero.variance, Rational(0));
}

TEST(MockGaussianReference, QuadratureOracle) {
    for (const auto& tf : {TestFunction::triangular(2), TestFunction::triangular(3), TestFunction::triangular(4), TestFunction::bump(Rational(1, 3)),
                           TestFunction::bump(Rational(3, 2)), TestFunction::parse("pw:0,1/4,1/2;1,-2;1,-2")}) {
        const auto ref = mock_gaussian_reference(tf);
        auto f = [&](double u) { return tf(u); };
        // fhat(0) - (1/2) int_{-1}^{1} fhat, and 2 int_{-1/2}^{1/2} |u| fhat^2, folded by evenness
        const double mean = tf(0) - integrate_pieces(tf, f, 1);
        const double var = 4 * integrate_pieces(tf, [&](double u) { return u * f(u) * f(u); }, 0.5);
        EXPECT_NEAR(to_double(ref.mean), mean, 1e-12) << tf.name();
        EXPECT_NEAR(to_double(ref.variance), var, 1e-12) << tf.name();
    }
}

TEST(MockGaussianReference, MomentRecursionMatchesBinomialExpansion) {
    const GaussianReference ref{Rational(5, 6), Rational(1, 27)};
    const auto raw = gaussian_raw_moments(ref, 6);
    const auto central = gaussian_central_moments(ref, 6);
    ASSERT_EQ(raw.size(), 7u);
    for (int j = 0; j <= 6; ++j) {
        // E (mu + Z')^j with Z' centered of variance v: sum C(j,i) mu^{j-i} E Z'^i
        Rational expect = 0;
        for (int i = 0; i <= j; ++i) expect += Rational(binomial(j, i)) * rpow(ref.mean, j - i) * central[i];
        EXPECT_EQ(raw[j], expect) << j;
        if (j % 2 == 0) {
            EXPECT_EQ(central[j], Rational(gaussian_moment(j)) * rpow(ref.variance, j / 2));
        } else {
            EXPECT_EQ(central[j], Rational(0));
        }
    }
    EXPECT_EQ(raw[2], ref.mean * ref.mean + ref.variance);
}

TEST(ZStatistic, SupportCutoffAndTruncation) {
    EXPECT_EQ(support_cutoff(TestFunction::triangular(3), 6), 1);
    EXPECT_EQ(support_cutoff(TestFunction::triangular(3), 8), 2);
    EXPECT_EQ(support_cutoff(TestFunction::bump(Rational(1)), 8), 7);
    EXPECT_EQ(support_cutoff(TestFunction::bump(Rational(1, 9)), 8), 0);
    // s_1 = 3 at q = 9 -> t_1 = 1: Z = 1 + (2/6)(1/2)(1)
    EXPECT_NEAR(z_statistic({6, 3}, 9, TestFunction::triangular(3), 6), 1 + 1.0 / 6, 1e-15);
    EXPECT_EQ(z_statistic({8, 1, 0, 2, 0, 0, 5, 0}, 3, TestFunction::zero(), 8), 0.0);
}

TEST(ZStatistic, MissingTracesThrow) {
    EXPECT_THROW(z_statistic({8, 1}, 3, TestFunction::triangular(2), 8), std::out_of_range);
    EXPECT_THROW(z_from_unitary_traces({0, 1, 1}, TestFunction::bump(Rational(1)), 8), std::out_of_range);
    EXPECT_THROW(z_from_unitary_traces({0}, TestFunction::bump(Rational(1)), 0), std::invalid_argument);
}

TEST(ZStatistic, SyntheticIdentityPhases) {
    const int g = 3, N = 2 * g;
    const auto tf = TestFunction::bump(Rational(3, 2));
    const std::vector<double> theta(2 * g, 0.0);
    std::vector<double> t(N * 2, 2.0 * g);
    const double trace_side = z_from_unitary_traces(t, tf, N);
    double direct = 0;
    for (int k = -400; k <= 400; ++k) direct += 2 * g * tf.x_side(-N * k);
    const auto x = z_from_eigenphases(theta, tf, N, 1e-11);
    EXPECT_NEAR(x.value, trace_side, 1e-9);
    EXPECT_NEAR(direct, trace_side, 1e-9);
    EXPECT_LE(x.tail_bound, 1e-11);
}

TEST(ZStatistic, DualEvaluationOnCurvesWithBump) {
    const FieldSpec F(3);
    const auto tf = TestFunction::bump(Rational(1));
    const int g = 2, N = 2 * g;
    const PrimeTable table(F, 4);
    for (const auto& Q : enumerate_curves(EnsembleSpec{F, g})) {
        const auto L = l_data(Curve(F, g, Q));
        const auto s = traces_from_lpoly(L, support_cutoff(tf, N));
        const double trace_side = z_statistic(s, 3, tf, N);
        const auto x = z_from_eigenphases(eigenphases(L), tf, N, 1e-11);
        ASSERT_NEAR(x.value, trace_side, 1e-9) << Q.to_string();
    }
}

TEST(ZStatistic, DualEvaluationOnCurvesWithTriangular) {
    const FieldSpec F(3);
    const auto tf = TestFunction::triangular(2);
    const int g = 2, N = 2 * g;
    const auto curves = enumerate_curves(EnsembleSpec{F, g});
    for (std::size_t i = 0; i < curves.size(); i += 53) {
        const auto L = l_data(Curve(F, g, curves[i]));
        const double trace_side = z_statistic(traces_from_lpoly(L, support_cutoff(tf, N)), 3, tf, N);
        const auto x = z_from_eigenphases(eigenphases(L), tf, N, 1e-6);
        EXPECT_NEAR(x.value, trace_side, 1e-6 + 1e-12);
        EXPECT_LE(x.tail_bound, 1e-6);
    }
}

TEST(ZMoments, DegenerateSupportBelowOneMode) {
    const FieldSpec F(3);
    const PrimeTable table(F, 4);
    const CurveAnalyzer an(table, 2, 4);
    const auto t = compute_traces(EnsembleSpec{F, 2}, 4, an);
    const auto tf = TestFunction::bump(Rational(1, 5));
    const auto r = z_moments(t.s, 3, 2, tf, 3);
    EXPECT_EQ(r.raw[1], 1.0);
    EXPECT_EQ(r.raw[3], 1.0);
    EXPECT_EQ(r.central[2], 0.0);
    EXPECT_EQ(r.central[3], 0.0);
    EXPECT_EQ(r.curve_count, 162);
    EXPECT_TRUE(r.within_support);
}

TEST(ZMoments, ZeroFunctionAndErrors) {
    const std::vector<std::vector<std::int64_t>> rows{{4, 1, -1, 2, 0}, {4, 0, 3, 0, 1}};
    const auto r = z_moments(rows, 3, 2, TestFunction::zero(), 2);
    EXPECT_EQ(r.raw[1], 0.0);
    EXPECT_EQ(r.raw_deviation(2), 0.0);
    EXPECT_THROW(z_moments({}, 3, 2, TestFunction::zero(), 2), std::invalid_argument);
    EXPECT_THROW(z_moments(rows, 3, 2, TestFunction::zero(), 0), std::invalid_argument);
    EXPECT_FALSE(z_moments(rows, 3, 2, TestFunction::triangular(2), 3).within_support);
}
