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

#include <map>
#include <random>
#include <set>
#include <vector>

#include "hyperell/extfield.hpp"
#include "hyperell/polyfield.hpp"
#include "hyperell/primes.hpp"

using namespace hyperell;

namespace {

const FieldSpec F3(3);
const FieldSpec F5(5);

Poly P3(std::initializer_list<std::int64_t> c) { return Poly(F3, c); }

// schoolbook product on plain integers, reduced at the end
std::vector<long> naive_product(const std::vector<long>& a, const std::vector<long>& b, long p) {
    std::vector<long> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    for (auto& x : r) x %= p;
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<long> as_longs(const Poly& f) {
    std::vector<long> v;
    for (int i = 0; i <= f.degree(); ++i) v.push_back(f.coeff(i));
    return v;
}

Poly random_poly(std::mt19937& rng, FieldSpec F, int max_degree) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<std::int64_t> c(0, F.p() - 1);
    const int d = deg(rng);
    std::vector<Residue> v(static_cast<std::size_t>(d) + 1);
    for (auto& x : v) x = static_cast<Residue>(c(rng));
    if (v.back() == 0) v.back() = 1;
    return Poly(F, v);
}

// irreducible iff no monic polynomial of degree 1..n/2 divides it
bool brute_irreducible(const Poly& f) {
    for (int d = 1; 2 * d <= f.degree(); ++d)
        for (std::uint64_t i = 0; i < checked_upow(f.field().p(), d); ++i)
            if ((f % Poly::monic_from_index(f.field(), d, i)).is_zero()) return false;
    return f.degree() >= 1;
}

}  // namespace

TEST(FieldSpec, RejectsNonOddPrimes) {
    for (std::uint32_t p : {0u, 1u, 2u, 4u, 9u, 15u, 65537u}) EXPECT_THROW(FieldSpec{p}, std::invalid_argument) << p;
    for (std::uint32_t p : {3u, 5u, 7u, 65521u}) EXPECT_NO_THROW(FieldSpec{p}) << p;
}

TEST(FieldSpec, InverseAndPow) {
    const FieldSpec F(7);
    for (Residue a = 1; a < 7; ++a) EXPECT_EQ(F.mul(a, F.inv(a)), 1u);
    EXPECT_THROW(F.inv(0), std::domain_error);
    EXPECT_EQ(F.pow(3, 6), 1u);
    EXPECT_EQ(F.reduce(-1), 6u);
}

TEST(Poly, ZeroAndDegree) {
    EXPECT_EQ(Poly(F3).degree(), -1);
    EXPECT_TRUE(P3({0, 0, 0}).is_zero());
    EXPECT_EQ(P3({1, 2, 3}).degree(), 1);  // 3 = 0 mod 3
    EXPECT_EQ(P3({-1}).coeff(0), 2u);
}

TEST(Poly, GcdIsMonic) {
    const Poly g = gcd(P3({-1, 0, 1}), P3({-1, 1}));
    EXPECT_EQ(g, P3({-1, 1}));
    EXPECT_TRUE(g.is_monic());
    EXPECT_EQ(gcd(P3({0, 2}), P3({0, 0, 2})), P3({0, 1}));
}

TEST(Poly, DerivativeInCharacteristicThree) {
    EXPECT_EQ(derivative(P3({1, 2, 0, 1})), P3({2}));
    EXPECT_TRUE(derivative(P3({1, 0, 0, 1})).is_zero());
}

TEST(Poly, ProductMatchesSchoolbookOracle) {
    const Poly a = P3({0, 1, 1}), b = P3({2, 1});
    EXPECT_EQ(as_longs(a * b), naive_product({0, 1, 1}, {2, 1}, 3));
    EXPECT_EQ(a * b, P3({0, 2, 0, 1}));  // x^3 + 2x
    std::mt19937 rng(7);
    for (int t = 0; t < 300; ++t) {
        const FieldSpec F = t % 2 ? F3 : F5;
        const Poly x = random_poly(rng, F, 8), y = random_poly(rng, F, 8);
        EXPECT_EQ(as_longs(x * y), naive_product(as_longs(x), as_longs(y), F.p()));
    }
}

TEST(Poly, DivisionProperty) {
    std::mt19937 rng(11);
    for (int t = 0; t < 300; ++t) {
        const Poly a = random_poly(rng, F5, 10), b = random_poly(rng, F5, 5);
        const auto [q, r] = divmod(a, b);
        EXPECT_EQ(q * b + r, a);
        EXPECT_LT(r.degree(), b.degree());
    }
}

TEST(Poly, Errors) {
    EXPECT_THROW(divmod(P3({1, 1}), Poly(F3)), std::domain_error);
    EXPECT_THROW(P3({1}) + Poly(F5, {1}), std::invalid_argument);
    EXPECT_THROW(gcd(P3({1}), Poly(F5, {1})), std::invalid_argument);
}

TEST(Poly, MonicIndexRoundTripAndOrder) {
    for (int d = 0; d <= 4; ++d) {
        Poly prev(F3);
        for (std::uint64_t i = 0; i < checked_upow(3, d); ++i) {
            const Poly f = Poly::monic_from_index(F3, d, i);
            EXPECT_EQ(f.monic_index(), i);
            if (i) {
                EXPECT_LT(prev, f);
            }
            prev = f;
        }
    }
    EXPECT_LT(P3({2, 2, 1}), P3({0, 0, 0, 1}));  // lower degree first
    EXPECT_LT(P3({2, 0, 1}), P3({0, 1, 1}));     // then highest coefficient first
}

TEST(Poly, PowMod) {
    const Poly m = P3({1, 0, 1});
    EXPECT_EQ(pow_mod(Poly::x(F3), 4, m), Poly::one(F3));
    EXPECT_EQ(pow(P3({1, 1}), 3), P3({1, 0, 0, 1}));  // Frobenius
}

TEST(Squarefree, Examples) {
    EXPECT_FALSE(is_squarefree(P3({0, 0, 1})));
    EXPECT_TRUE(is_squarefree(P3({1, 2, 0, 1})));
    EXPECT_FALSE(is_squarefree(P3({0, 0, 0, 1})));
    EXPECT_FALSE(is_squarefree(P3({1, 0, 0, 1})));  // (x+1)^3, f' = 0
    EXPECT_THROW(is_squarefree(Poly(F3)), std::domain_error);
}

TEST(Squarefree, AgreesWithFactorizationUpToDegreeSix) {
    for (int d = 1; d <= 6; ++d)
        for (std::uint64_t i = 0; i < checked_upow(3, d); ++i) {
            const Poly f = Poly::monic_from_index(F3, d, i);
            bool repeated = false;
            for (const auto& [P, e] : factorize(f).factors) repeated = repeated || e > 1;
            EXPECT_EQ(is_squarefree(f), !repeated) << f.to_string();
        }
}

TEST(Factorize, Examples) {
    const auto a = factorize(P3({-1, 0, 1}));
    ASSERT_EQ(a.factors.size(), 2u);
    EXPECT_EQ(a.unit, 1u);
    EXPECT_EQ(a.factors[0].first, P3({1, 1}));  // x+1 and x+2 = x-1
    EXPECT_EQ(a.factors[1].first, P3({2, 1}));
    const auto b = factorize(P3({1, 0, 1}));
    ASSERT_EQ(b.factors.size(), 1u);
    EXPECT_EQ(b.factors[0].second, 1);
    const auto c = factorize(P3({2, 2}));
    EXPECT_EQ(c.unit, 2u);
    ASSERT_EQ(c.factors.size(), 1u);
    EXPECT_EQ(c.factors[0].first, P3({1, 1}));
    EXPECT_THROW(factorize(Poly(F3)), std::domain_error);
}

TEST(Factorize, ReassembleIsIdentityOnRandomInputs) {
    std::mt19937 rng(2026);
    for (int t = 0; t < 1000; ++t) {
        const FieldSpec F = t % 3 ? F3 : F5;
        const Poly f = random_poly(rng, F, 10);
        const auto fz = factorize(f);
        EXPECT_EQ(reassemble(fz, F), f);
        std::set<std::vector<long>> seen;
        for (const auto& [P, e] : fz.factors) {
            EXPECT_TRUE(P.is_monic());
            EXPECT_TRUE(is_irreducible(P));
            EXPECT_GE(e, 1);
            EXPECT_TRUE(seen.insert(as_longs(P)).second);
        }
    }
}

TEST(Mobius, Examples) {
    EXPECT_EQ(mobius(P3({0, 1})), -1);
    EXPECT_EQ(mobius(P3({0, 0, 1})), 0);
    EXPECT_EQ(mobius(P3({0, 1, 1})), 1);
    EXPECT_EQ(mobius(Poly::one(F3)), 1);
    EXPECT_THROW(mobius(P3({0, 2})), std::invalid_argument);
}

TEST(Mobius, MultiplicativeOnCoprimePairs) {
    std::vector<Poly> all;
    for (int d = 0; d <= 3; ++d)
        for (std::uint64_t i = 0; i < checked_upow(3, d); ++i) all.push_back(Poly::monic_from_index(F3, d, i));
    for (const auto& f : all)
        for (const auto& g : all)
            if (gcd(f, g).is_one()) {
                EXPECT_EQ(mobius(f * g), mobius(f) * mobius(g));
            }
}

TEST(VonMangoldt, Examples) {
    EXPECT_EQ(von_mangoldt(P3({0, 0, 0, 1})), 1);
    EXPECT_EQ(von_mangoldt(P3({0, 1, 1})), 0);
    EXPECT_EQ(von_mangoldt(pow(P3({1, 0, 1}), 2)), 2);
    EXPECT_EQ(von_mangoldt(Poly::one(F3)), 0);
}

TEST(VonMangoldt, SumsToQToTheN) {
    for (const FieldSpec F : {F3, F5}) {
        const int top = F.p() == 3 ? 6 : 5;
        const PrimeTable table(F, top);
        for (int n = 1; n <= top; ++n) {
            std::int64_t total = 0;
            for (std::uint64_t i = 0; i < checked_upow(F.p(), n); ++i) total += von_mangoldt(Poly::monic_from_index(F, n, i), table);
            EXPECT_EQ(total, checked_pow(F.p(), n)) << "q=" << F.p() << " n=" << n;
        }
    }
}

TEST(PrimeTable, SmallDegrees) {
    const PrimeTable t(F3, 3);
    EXPECT_EQ(t.of_degree(1), (std::vector<Poly>{P3({0, 1}), P3({1, 1}), P3({2, 1})}));
    EXPECT_EQ(t.count(2), 3);
    EXPECT_EQ(t.count(3), 8);
    EXPECT_EQ(t.count(3), (27 - 3) / 3);
    EXPECT_THROW(t.of_degree(4), std::out_of_range);
}

TEST(PrimeTable, CountsMatchFormulaAndBruteForce) {
    for (const FieldSpec F : {F3, F5}) {
        const int top = F.p() == 3 ? 6 : 4;
        const PrimeTable t(F, top);
        for (int n = 1; n <= top; ++n) {
            EXPECT_EQ(t.count(n), prime_count_formula(F.p(), n));
            for (std::size_t i = 1; i < t.of_degree(n).size(); ++i) EXPECT_LT(t.of_degree(n)[i - 1], t.of_degree(n)[i]);
        }
        // independent trial-division oracle on the lower degrees
        for (int n = 1; n <= (F.p() == 3 ? 5 : 3); ++n) {
            std::vector<Poly> brute;
            for (std::uint64_t i = 0; i < checked_upow(F.p(), n); ++i) {
                const Poly f = Poly::monic_from_index(F, n, i);
                if (brute_irreducible(f)) brute.push_back(f);
            }
            EXPECT_EQ(t.of_degree(n), brute);
        }
    }
}

TEST(PrimeTable, PersistedListsAreRechecked) {
    const PrimeTable t(F3, 3);
    std::vector<std::vector<Poly>> lists{{}, t.of_degree(1), t.of_degree(2), t.of_degree(3)};
    EXPECT_NO_THROW(PrimeTable(F3, lists));
    lists[2].pop_back();
    EXPECT_THROW(PrimeTable(F3, lists), std::runtime_error);
}

TEST(ExtField, DegreeOneMatchesBaseField) {
    const ExtField E(F5, 1);
    const Poly f = Poly(F5, {3, 1, 4, 1});
    for (Residue a = 0; a < 5; ++a) EXPECT_EQ(E.evaluate(f, E.embed(a))[0], f(a));
}

TEST(ExtField, NineElementsModulusAndGroupOrder) {
    const ExtField E(F3, 2);
    EXPECT_EQ(E.modulus(), P3({1, 0, 1}));  // first irreducible quadratic in canonical order
    EXPECT_EQ(E.order(), 9u);
    for (std::uint64_t i = 1; i < 9; ++i) EXPECT_EQ(E.pow(E.from_index(i), 8), E.one());
    int squares = 0;
    for (std::uint64_t i = 1; i < 9; ++i) squares += E.quadratic_character(E.from_index(i)) == 1;
    EXPECT_EQ(squares, 4);
}

TEST(ExtField, RejectsReducibleModulus) { EXPECT_THROW(ExtField(F3, P3({-1, 0, 1})), std::invalid_argument); }
