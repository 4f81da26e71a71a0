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

#ifndef HYPERELL_FASTCHAR_HPP
#define HYPERELL_FASTCHAR_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "extfield.hpp"
#include "polyfield.hpp"
#include "primes.hpp"

namespace hyperell {

/// F_{q^n} in discrete-log form: exp/log tables for a primitive element and a
/// Zech table log(1 + g^i). The sentinel value order()-1 stands for zero.
class ZechField {
   public:
    ZechField(FieldSpec base, int n) : base_(base), n_(n) {
        const ExtField ef(base, n);
        size_ = ef.order();
        if (size_ > (std::uint64_t{1} << 26)) throw std::length_error("ZechField too large");
        ord_ = static_cast<std::uint32_t>(size_ - 1);
        zero_ = ord_;

        const auto primitive = find_primitive(ef);
        exp_.resize(ord_);
        log_.assign(size_, zero_);
        ExtField::Element cur = ef.one();
        for (std::uint32_t i = 0; i < ord_; ++i) {
            const auto idx = ef.index(cur);
            if (log_[idx] != zero_) throw std::logic_error("element is not primitive");
            exp_[i] = static_cast<std::uint32_t>(idx);
            log_[idx] = i;
            cur = ef.mul(cur, primitive);
        }
        zech_.resize(ord_);
        const std::uint32_t q = base_.p();
        for (std::uint32_t i = 0; i < ord_; ++i) {
            const std::uint32_t idx = exp_[i];
            const std::uint32_t d0 = idx % q;
            zech_[i] = log_[idx - d0 + (d0 + 1) % q];
        }
        const_log_.resize(q);
        for (Residue c = 0; c < q; ++c) const_log_[c] = log_[c];
    }

    FieldSpec base() const noexcept { return base_; }
    int degree() const noexcept { return n_; }
    std::uint32_t zero() const noexcept { return zero_; }
    std::uint32_t group_order() const noexcept { return ord_; }

    std::uint32_t log_of_index(std::uint64_t idx) const { return log_.at(idx); }
    std::uint32_t index_of_log(std::uint32_t l) const { return l == zero_ ? 0 : exp_[l]; }
    std::uint32_t log_of_constant(Residue c) const noexcept { return const_log_[c]; }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
        if (a == zero_ || b == zero_) return zero_;
        std::uint32_t s = a + b;
        return s >= ord_ ? s - ord_ : s;
    }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
        if (a == zero_) return b;
        if (b == zero_) return a;
        const std::uint32_t t = b >= a ? b - a : b + ord_ - a;
        const std::uint32_t z = zech_[t];
        if (z == zero_) return zero_;
        const std::uint32_t s = a + z;
        return s >= ord_ ? s - ord_ : s;
    }

    std::uint32_t neg(std::uint32_t a) const noexcept {
        if (a == zero_) return zero_;
        const std::uint32_t s = a + ord_ / 2;
        return s >= ord_ ? s - ord_ : s;
    }

    /// Quadratic character: squares are the even logarithms.
    int character(std::uint32_t a) const noexcept {
        if (a == zero_) return 0;
        return (a & 1) ? -1 : 1;
    }

   private:
    FieldSpec base_;
    int n_;
    std::uint64_t size_ = 0;
    std::uint32_t ord_ = 0;
    std::uint32_t zero_ = 0;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> zech_;
    std::vector<std::uint32_t> const_log_;

    static ExtField::Element find_primitive(const ExtField& ef) {
        const std::uint64_t ord = ef.order() - 1;
        std::vector<std::uint64_t> primes;
        std::uint64_t m = ord;
        for (std::uint64_t d = 2; d * d <= m; ++d) {
            if (m % d) continue;
            primes.push_back(d);
            while (m % d == 0) m /= d;
        }
        if (m > 1) primes.push_back(m);
        for (std::uint64_t idx = 1; idx < ef.order(); ++idx) {
            const auto cand = ef.from_index(idx);
            bool ok = true;
            for (auto l : primes)
                if (ef.pow(cand, ord / l) == ef.one()) {
                    ok = false;
                    break;
                }
            if (ok) return cand;
        }
        throw std::logic_error("no primitive element");
    }
};

/// Per-degree tally of chi_Q(P) over the primes P of that degree.
struct DegreeCounts {
    std::int32_t plus = 0;
    std::int32_t minus = 0;
    std::int32_t zero = 0;

    friend bool operator==(const DegreeCounts&, const DegreeCounts&) = default;
};

/// Evaluates chi_Q(P) = (Q/P) for every prime P up to a degree bound by
/// evaluating Q at a fixed root of P in F_{q^deg P} (log domain).
class PrimeCharacterEvaluator {
   public:
    PrimeCharacterEvaluator(const PrimeTable& table, int max_degree) : field_(table.field()), max_degree_(max_degree) {
        if (max_degree > table.max_degree()) throw std::out_of_range("evaluator degree exceeds prime table");
        fields_.reserve(static_cast<std::size_t>(max_degree));
        roots_.resize(static_cast<std::size_t>(max_degree) + 1);
        for (int d = 1; d <= max_degree; ++d) {
            fields_.emplace_back(field_, d);
            locate_roots(table, d);
        }
    }

    FieldSpec field() const noexcept { return field_; }
    int max_degree() const noexcept { return max_degree_; }

    /// chi_Q(P) for each prime of degree d, in prime table order.
    std::vector<int> characters(const Poly& Q, int d) const {
        std::vector<int> out;
        const auto& zf = fields_.at(static_cast<std::size_t>(d - 1));
        const auto logs = coefficient_logs(Q, zf);
        out.reserve(roots_[d].size());
        for (auto r : roots_[d]) out.push_back(zf.character(horner(zf, logs, r)));
        return out;
    }

    /// Counts of +1 / -1 / 0 values per degree 1..max_degree (index 0 unused).
    std::vector<DegreeCounts> profile(const Poly& Q) const {
        std::vector<DegreeCounts> out(static_cast<std::size_t>(max_degree_) + 1);
        for (int d = 1; d <= max_degree_; ++d) {
            const auto& zf = fields_[static_cast<std::size_t>(d - 1)];
            const auto logs = coefficient_logs(Q, zf);
            auto& c = out[d];
            for (auto r : roots_[d]) {
                const auto v = horner(zf, logs, r);
                if (v == zf.zero())
                    ++c.zero;
                else if (v & 1)
                    ++c.minus;
                else
                    ++c.plus;
            }
        }
        return out;
    }

   private:
    FieldSpec field_;
    int max_degree_;
    std::vector<ZechField> fields_;
    std::vector<std::vector<std::uint32_t>> roots_;  // per degree, log of a root of each prime

    static std::vector<std::uint32_t> coefficient_logs(const Poly& Q, const ZechField& zf) {
        if (!(Q.field() == zf.base())) throw std::invalid_argument("evaluator: polynomial over a different field");
        std::vector<std::uint32_t> logs;
        const auto c = Q.coeffs();
        logs.reserve(c.size());
        for (std::size_t i = c.size(); i-- > 0;) logs.push_back(zf.log_of_constant(c[i]));
        return logs;  // highest degree first
    }

    static std::uint32_t horner(const ZechField& zf, const std::vector<std::uint32_t>& logs, std::uint32_t root) {
        std::uint32_t acc = zf.zero();
        for (auto l : logs) acc = zf.add(zf.mul(acc, root), l);
        return acc;
    }

    // Walk Frobenius orbits {g^{i q^j}} of size d; each is the root set of one prime.
    void locate_roots(const PrimeTable& table, int d) {
        const auto& zf = fields_[static_cast<std::size_t>(d - 1)];
        const std::uint32_t ord = zf.group_order();
        const std::uint32_t q = field_.p();
        const auto& primes = table.of_degree(d);
        auto& roots = roots_[d];
        roots.assign(primes.size(), zf.zero());
        std::vector<bool> seen(ord, false);
        std::size_t found = 0;
        if (d == 1) {
            // x itself: root 0 lives outside the multiplicative group
            roots[static_cast<std::size_t>(table.position(Poly::x(field_)))] = zf.zero();
            ++found;
        }
        for (std::uint32_t i = 0; i < ord; ++i) {
            if (seen[i]) continue;
            std::vector<std::uint32_t> orbit{i};
            seen[i] = true;
            for (std::uint64_t j = (std::uint64_t{i} * q) % ord; j != i; j = (j * q) % ord) {
                orbit.push_back(static_cast<std::uint32_t>(j));
                seen[j] = true;
            }
            if (static_cast<int>(orbit.size()) != d) continue;
            // minimal polynomial prod (y - r), coefficients in log form, low degree first
            std::vector<std::uint32_t> mp{0};
            for (auto r : orbit) {
                const std::uint32_t neg_r = zf.neg(r);
                std::vector<std::uint32_t> next(mp.size() + 1, zf.zero());
                for (std::size_t k = 0; k < mp.size(); ++k) {
                    next[k + 1] = zf.add(next[k + 1], mp[k]);
                    next[k] = zf.add(next[k], zf.mul(mp[k], neg_r));
                }
                mp = std::move(next);
            }
            std::vector<Residue> coeffs(mp.size());
            for (std::size_t k = 0; k < mp.size(); ++k) {
                const auto idx = zf.index_of_log(mp[k]);
                if (idx >= q) throw std::logic_error("minimal polynomial left the base field");
                coeffs[k] = idx;
            }
            const auto pos = table.position(Poly(field_, std::move(coeffs)));
            if (pos < 0) throw std::logic_error("minimal polynomial missing from prime table");
            roots[static_cast<std::size_t>(pos)] = i;
            ++found;
        }
        if (found != primes.size()) throw std::logic_error("did not locate a root for every prime");
    }
};

}  // namespace hyperell

#endif  // HYPERELL_FASTCHAR_HPP
