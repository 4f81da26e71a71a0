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

#ifndef HYPERELL_MOMENT_HPP
#define HYPERELL_MOMENT_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperell {

/// The statistic prod_j (tr U^{k_j})^{a_j}, k_j pairwise distinct.
class MomentSpec {
   public:
    struct Term {
        int k;
        int a;
    };

    MomentSpec() = default;

    explicit MomentSpec(std::vector<Term> terms) : terms_(std::move(terms)) {
        std::set<int> seen;
        for (const auto& t : terms_) {
            if (t.k < 1 || t.a < 1) throw std::invalid_argument("moment terms need k >= 1 and a >= 1");
            if (!seen.insert(t.k).second) throw std::invalid_argument("moment powers k_j must be distinct; use the exponent for repeats");
        }
    }

    /// Parses "(k,a);(k,a)".
    static MomentSpec parse(const std::string& text) {
        std::vector<Term> terms;
        std::size_t pos = 0;
        auto skip_ws = [&] {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        };
        auto read_int = [&] {
            skip_ws();
            std::size_t used = 0;
            const int v = std::stoi(text.substr(pos), &used);
            pos += used;
            skip_ws();
            return v;
        };
        auto expect = [&](char c) {
            skip_ws();
            if (pos >= text.size() || text[pos] != c) throw std::invalid_argument("malformed moment spec '" + text + "'");
            ++pos;
        };
        skip_ws();
        while (pos < text.size()) {
            expect('(');
            const int k = read_int();
            expect(',');
            const int a = read_int();
            expect(')');
            terms.push_back({k, a});
            skip_ws();
            if (pos < text.size()) expect(';');
            skip_ws();
        }
        if (terms.empty()) throw std::invalid_argument("empty moment spec");
        return MomentSpec(std::move(terms));
    }

    const std::vector<Term>& terms() const noexcept { return terms_; }

    /// sum_j a_j k_j
    int weight() const noexcept {
        int w = 0;
        for (const auto& t : terms_) w += t.a * t.k;
        return w;
    }

    int max_power() const noexcept {
        int m = 0;
        for (const auto& t : terms_) m = std::max(m, t.k);
        return m;
    }

    static int eta(int k) noexcept { return k % 2 == 0 ? 1 : 0; }

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < terms_.size(); ++i) os << (i ? ";" : "") << "(" << terms_[i].k << "," << terms_[i].a << ")";
        return os.str();
    }

   private:
    std::vector<Term> terms_;
};

}  // namespace hyperell

#endif  // HYPERELL_MOMENT_HPP
