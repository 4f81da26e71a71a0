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

#ifndef HYPERELL_CACHE_HPP
#define HYPERELL_CACHE_HPP

#include <unistd.h>

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ensemble.hpp"
#include "polyfield.hpp"
#include "primes.hpp"

namespace hyperell {

class CacheError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCacheVersion = 1;
inline constexpr char kPrimeMagic[4] = {'H', 'Y', 'P', 'T'};
inline constexpr char kTraceMagic[4] = {'H', 'Y', 'T', 'R'};

/// $HYPERELL_CACHE_DIR if set, else ".hyperell-cache".
inline std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("HYPERELL_CACHE_DIR"); env && *env) return env;
    return ".hyperell-cache";
}

/// Readers never see a half-written file: write beside the target, then rename.
inline void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheError("cannot open " + tmp + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw CacheError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw CacheError("cannot rename " + tmp + ": " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheError("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

namespace detail {

class ByteWriter {
   public:
    template <class T>
    void put(T v) {
        static_assert(std::is_integral_v<T>);
        for (std::size_t i = 0; i < sizeof(T); ++i) buf_.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
    }
    void raw(const char* p, std::size_t n) { buf_.append(p, n); }
    const std::string& bytes() const noexcept { return buf_; }

   private:
    std::string buf_;
};

class ByteReader {
   public:
    explicit ByteReader(const std::string& s) : s_(s) {}
    template <class T>
    T get() {
        static_assert(std::is_integral_v<T>);
        if (pos_ + sizeof(T) > s_.size()) throw CacheError("cache file truncated");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s_[pos_ + i])) << (8 * i);
        pos_ += sizeof(T);
        return static_cast<T>(v);
    }
    void expect(const char* magic) {
        if (pos_ + 4 > s_.size() || std::memcmp(s_.data() + pos_, magic, 4) != 0) throw CacheError("bad cache magic");
        pos_ += 4;
    }
    bool done() const noexcept { return pos_ == s_.size(); }

   private:
    const std::string& s_;
    std::size_t pos_ = 0;
};

inline void put_poly(ByteWriter& w, const Poly& f, int degree) {
    for (int i = 0; i <= degree; ++i) w.put<std::uint16_t>(static_cast<std::uint16_t>(f.coeff(i)));
}

inline Poly get_poly(ByteReader& r, FieldSpec field, int degree) {
    std::vector<Residue> c(static_cast<std::size_t>(degree) + 1);
    for (auto& x : c) {
        x = r.get<std::uint16_t>();
        if (x >= field.p()) throw CacheError("cache coefficient out of range");
    }
    Poly f(field, c);
    if (f.degree() != degree || !f.is_monic()) throw CacheError("cache record is not monic of the expected degree");
    return f;
}

}  // namespace detail

inline std::filesystem::path prime_cache_path(const std::filesystem::path& dir, std::uint32_t q, int max_degree) {
    return dir / ("primes_q" + std::to_string(q) + "_d" + std::to_string(max_degree) + ".bin");
}

inline std::filesystem::path trace_cache_path(const std::filesystem::path& dir, std::uint32_t q, int g, int N) {
    return dir / ("traces_q" + std::to_string(q) + "_g" + std::to_string(g) + "_N" + std::to_string(N) + ".bin");
}

inline std::string serialize(const PrimeTable& t) {
    detail::ByteWriter w;
    w.raw(kPrimeMagic, 4);
    w.put<std::uint32_t>(kCacheVersion);
    w.put<std::uint32_t>(t.field().p());
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.max_degree()));
    for (int n = 1; n <= t.max_degree(); ++n) {
        w.put<std::uint64_t>(static_cast<std::uint64_t>(t.count(n)));
        for (const auto& P : t.of_degree(n)) detail::put_poly(w, P, n);
    }
    return w.bytes();
}

inline PrimeTable deserialize_prime_table(const std::string& bytes) {
    detail::ByteReader r(bytes);
    r.expect(kPrimeMagic);
    if (r.get<std::uint32_t>() != kCacheVersion) throw CacheError("prime cache version mismatch");
    const FieldSpec field(r.get<std::uint32_t>());
    const int max_degree = static_cast<int>(r.get<std::uint32_t>());
    std::vector<std::vector<Poly>> by_degree(static_cast<std::size_t>(max_degree) + 1);
    for (int n = 1; n <= max_degree; ++n) {
        const auto count = r.get<std::uint64_t>();
        for (std::uint64_t i = 0; i < count; ++i) by_degree[n].push_back(detail::get_poly(r, field, n));
        for (std::size_t i = 1; i < by_degree[n].size(); ++i)
            if (!(by_degree[n][i - 1] < by_degree[n][i])) throw CacheError("prime cache out of order");
    }
    if (!r.done()) throw CacheError("trailing bytes in prime cache");
    try {
        return PrimeTable(field, std::move(by_degree));
    } catch (const std::runtime_error& e) {
        throw CacheError(e.what());
    }
}

inline std::string serialize(const TraceTable& t) {
    detail::ByteWriter w;
    w.raw(kTraceMagic, 4);
    w.put<std::uint32_t>(kCacheVersion);
    w.put<std::uint32_t>(t.q);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.g));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.N));
    w.put<std::uint64_t>(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        detail::put_poly(w, t.curves[i], 2 * t.g + 1);
        for (int b = 0; b <= 2 * t.g; ++b) w.put<std::int64_t>(t.astar[i][b]);
        for (int n = 0; n <= t.N; ++n) w.put<std::int64_t>(t.s[i][n]);
    }
    return w.bytes();
}

inline TraceTable deserialize_trace_table(const std::string& bytes) {
    detail::ByteReader r(bytes);
    r.expect(kTraceMagic);
    if (r.get<std::uint32_t>() != kCacheVersion) throw CacheError("trace cache version mismatch");
    TraceTable t;
    t.q = r.get<std::uint32_t>();
    t.g = static_cast<int>(r.get<std::uint32_t>());
    t.N = static_cast<int>(r.get<std::uint32_t>());
    const FieldSpec field(t.q);
    const auto count = r.get<std::uint64_t>();
    const EnsembleSpec spec{field, t.g};
    if (static_cast<std::int64_t>(count) != spec.expected_count()) throw CacheError("trace cache has the wrong curve count");
    t.curves.reserve(count);
    t.s.reserve(count);
    t.astar.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        t.curves.push_back(detail::get_poly(r, field, 2 * t.g + 1));
        std::vector<std::int64_t> a(static_cast<std::size_t>(2 * t.g) + 1);
        for (auto& x : a) x = r.get<std::int64_t>();
        if (a[0] != 1) throw CacheError("trace cache record has a bad A*(0)");
        t.astar.push_back(std::move(a));
        std::vector<std::int64_t> s(static_cast<std::size_t>(t.N) + 1);
        for (auto& x : s) x = r.get<std::int64_t>();
        if (s[0] != 2 * t.g) throw CacheError("trace cache record has a bad s_0");
        t.s.push_back(std::move(s));
    }
    if (!r.done()) throw CacheError("trailing bytes in trace cache");
    return t;
}

/// Disk-backed source of prime tables and trace tables. An empty directory
/// disables caching. Unreadable or stale files are rebuilt; notices collects
/// one line per rebuild.
class CacheStore {
   public:
    explicit CacheStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const std::filesystem::path& dir() const noexcept { return dir_; }
    bool enabled() const noexcept { return !dir_.empty(); }
    const std::vector<std::string>& notices() const noexcept { return notices_; }

    PrimeTable prime_table(FieldSpec field, int max_degree) {
        if (!enabled()) return PrimeTable(field, max_degree);
        const auto path = prime_cache_path(dir_, field.p(), max_degree);
        if (std::filesystem::exists(path)) {
            try {
                auto t = deserialize_prime_table(read_file(path));
                if (t.field() == field && t.max_degree() == max_degree) return t;
                notices_.push_back("prime cache " + path.string() + " has a different key; rebuilding");
            } catch (const CacheError& e) {
                notices_.push_back("prime cache " + path.string() + " unusable (" + e.what() + "); rebuilding");
            }
        }
        PrimeTable t(field, max_degree);
        atomic_write(path, serialize(t));
        return t;
    }

    TraceTable traces(const EnsembleSpec& spec, int N, const CurveAnalyzer& analyzer, unsigned workers, std::uint64_t budget) {
        check_budget(spec, budget);
        if (!enabled()) return compute_traces(spec, N, analyzer, workers, budget);
        const auto path = trace_cache_path(dir_, spec.q.p(), spec.g, N);
        if (std::filesystem::exists(path)) {
            try {
                auto t = deserialize_trace_table(read_file(path));
                if (t.q == spec.q.p() && t.g == spec.g && t.N == N) return t;
                notices_.push_back("trace cache " + path.string() + " has a different key; rebuilding");
            } catch (const CacheError& e) {
                notices_.push_back("trace cache " + path.string() + " unusable (" + e.what() + "); rebuilding");
            }
        }
        auto t = compute_traces(spec, N, analyzer, workers, budget);
        atomic_write(path, serialize(t));
        return t;
    }

   private:
    std::filesystem::path dir_;
    std::vector<std::string> notices_;
};

/// Plain-text rendering of a cache file of either kind.
inline std::string dump_cache_file(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    std::ostringstream os;
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kPrimeMagic, 4) == 0) {
        const auto t = deserialize_prime_table(bytes);
        os << "# prime table q=" << t.field().p() << " max_degree=" << t.max_degree() << "\n";
        for (int n = 1; n <= t.max_degree(); ++n)
            for (const auto& P : t.of_degree(n)) os << n << "," << P.to_string() << "\n";
    } else if (bytes.size() >= 4 && std::memcmp(bytes.data(), kTraceMagic, 4) == 0) {
        const auto t = deserialize_trace_table(bytes);
        os << "# traces q=" << t.q << " g=" << t.g << " N=" << t.N << " curves=" << t.size() << "\n";
        os << "Q,Lstar";
        for (int n = 1; n <= t.N; ++n) os << ",s_" << n;
        os << "\n";
        for (std::size_t i = 0; i < t.size(); ++i) {
            os << t.curves[i].to_string() << ",";
            for (int b = 0; b <= 2 * t.g; ++b) os << (b ? " " : "") << t.astar[i][b];
            for (int n = 1; n <= t.N; ++n) os << "," << t.s[i][n];
            os << "\n";
        }
    } else {
        throw CacheError("not a hyperell cache file: " + path.string());
    }
    return os.str();
}

}  // namespace hyperell

#endif  // HYPERELL_CACHE_HPP
