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

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "hyperell/experiment.hpp"

using namespace hyperell;
namespace fs = std::filesystem;

namespace {

class TempDir {
   public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("hyperell_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

   private:
    static inline int counter_ = 0;
    fs::path path_;
};

ExperimentConfig config(const std::string& command) {
    ExperimentConfig c;
    c.command = command;
    return c;
}

std::string run_rendered(const ExperimentConfig& c, CacheStore& store, ReportFormat fmt = ReportFormat::Csv) {
    const auto r = run_experiment(c, store);
    return render(r.report, fmt, ReportMeta{1.5, c.workers, store.dir().string()});
}

}  // namespace

TEST(Config, Validation) {
    EXPECT_NO_THROW(validate(config("verify")));
    auto c = config("verify");
    c.q = 9;
    EXPECT_THROW(validate(c), ConfigError);
    c = config("nope");
    EXPECT_THROW(validate(c), ConfigError);
    c = config("moment");
    c.specs = {"(2,2"};
    EXPECT_THROW(validate(c), ConfigError);
    c.specs = {"(2,1);(2,3)"};
    EXPECT_THROW(validate(c), ConfigError);
    c = config("linstat");
    c.tf = "triangular:0";
    EXPECT_THROW(validate(c), ConfigError);
    c = config("sigma");
    EXPECT_THROW(validate(c), ConfigError);
    c = config("verify");
    c.workers = 0;
    EXPECT_THROW(validate(c), ConfigError);
    c = config("verify");
    c.format = "xml";
    EXPECT_THROW(validate(c), ConfigError);
    c = config("verify");
    c.g = 3;
    c.g_max = 2;
    EXPECT_THROW(validate(c), ConfigError);
    c = config("moment");
    c.g = 7;
    EXPECT_THROW(validate(c), BudgetExceeded);
    c.budget = 1;
    c.g = 1;
    EXPECT_THROW(validate(c), BudgetExceeded);
}

TEST(Cache, TraceRoundTripAndReuse) {
    TempDir dir;
    const FieldSpec F(3);
    const EnsembleSpec spec{F, 2};
    CacheStore store(dir.path());
    const auto table = store.prime_table(F, 5);
    const CurveAnalyzer an(table, 2, 5);
    const auto fresh = store.traces(spec, 5, an, 2, kDefaultBudget);
    EXPECT_TRUE(fs::exists(trace_cache_path(dir.path(), 3, 2, 5)));
    EXPECT_TRUE(fs::exists(prime_cache_path(dir.path(), 3, 5)));
    const auto loaded = deserialize_trace_table(read_file(trace_cache_path(dir.path(), 3, 2, 5)));
    EXPECT_EQ(loaded.curves, fresh.curves);
    EXPECT_EQ(loaded.s, fresh.s);
    EXPECT_EQ(loaded.astar, fresh.astar);
    const auto again = store.traces(spec, 5, an, 1, kDefaultBudget);
    EXPECT_EQ(again.s, fresh.s);
    EXPECT_TRUE(store.notices().empty());
    const auto primes = deserialize_prime_table(read_file(prime_cache_path(dir.path(), 3, 5)));
    for (int n = 1; n <= 5; ++n) EXPECT_EQ(primes.of_degree(n), table.of_degree(n));
}

TEST(Cache, CorruptionAndVersionMismatchRebuild) {
    TempDir dir;
    const FieldSpec F(3);
    const EnsembleSpec spec{F, 1};
    const PrimeTable table(F, 3);
    const CurveAnalyzer an(table, 1, 3);
    const auto path = trace_cache_path(dir.path(), 3, 1, 3);
    {
        CacheStore store(dir.path());
        store.traces(spec, 3, an, 1, kDefaultBudget);
    }
    const auto good = read_file(path);

    std::string truncated = good.substr(0, good.size() - 5);
    atomic_write(path, truncated);
    CacheStore s1(dir.path());
    const auto t1 = s1.traces(spec, 3, an, 1, kDefaultBudget);
    ASSERT_EQ(s1.notices().size(), 1u);
    EXPECT_NE(s1.notices()[0].find("rebuilding"), std::string::npos);
    EXPECT_EQ(read_file(path), good);

    std::string bumped = good;
    bumped[4] = 7;  // version field
    atomic_write(path, bumped);
    CacheStore s2(dir.path());
    s2.traces(spec, 3, an, 1, kDefaultBudget);
    ASSERT_EQ(s2.notices().size(), 1u);
    EXPECT_NE(s2.notices()[0].find("version"), std::string::npos);

    std::string flipped = good;
    flipped[flipped.size() - 1] ^= 0x40;  // a trace value no longer matches s_0 / A* checks or stays plausible
    atomic_write(path, flipped);
    CacheStore s3(dir.path());
    const auto t3 = s3.traces(spec, 3, an, 1, kDefaultBudget);
    EXPECT_EQ(t3.curves.size(), 18u);

    EXPECT_THROW(deserialize_trace_table("HYTR"), CacheError);
    EXPECT_THROW(deserialize_prime_table("XXXX\x01\0\0\0"), CacheError);
}

TEST(Cache, DisabledStoreWritesNothing) {
    TempDir dir;
    CacheStore store{fs::path()};
    EXPECT_FALSE(store.enabled());
    const auto t = store.prime_table(FieldSpec(3), 3);
    EXPECT_EQ(t.count(3), 8);
    EXPECT_TRUE(fs::is_empty(dir.path()));
}

TEST(Cache, DumpRendersBothKinds) {
    TempDir dir;
    CacheStore store(dir.path());
    const auto table = store.prime_table(FieldSpec(3), 2);
    const CurveAnalyzer an(table, 1, 2);
    store.traces(EnsembleSpec{FieldSpec(3), 1}, 2, an, 1, kDefaultBudget);
    const auto primes = dump_cache_file(prime_cache_path(dir.path(), 3, 2));
    EXPECT_EQ(primes.rfind("# prime table q=3 max_degree=2\n", 0), 0u);
    EXPECT_EQ(std::count(primes.begin(), primes.end(), '\n'), 1 + 3 + 3);
    const auto traces = dump_cache_file(trace_cache_path(dir.path(), 3, 1, 2));
    EXPECT_EQ(traces.rfind("# traces q=3 g=1 N=2 curves=18\nQ,Lstar,s_1,s_2\n", 0), 0u);
    std::ofstream(dir.path() / "junk.bin") << "garbage";
    EXPECT_THROW(dump_cache_file(dir.path() / "junk.bin"), CacheError);
}

TEST(Report, CsvEscapingAndMetaLine) {
    Report r;
    r.name = "demo";
    r.params = {{"q", "3"}};
    r.columns = {"a", "b"};
    r.add_row({"x,y", "say \"hi\""});
    r.notes = {"n1"};
    EXPECT_THROW(r.add_row({"1"}), std::logic_error);
    const auto text = render(r, ReportFormat::Csv, ReportMeta{0.25, 4, "c"});
    EXPECT_EQ(text.rfind("# generated ", 0), 0u);
    EXPECT_NE(text.substr(0, text.find('\n')).find("workers=4"), std::string::npos);
    EXPECT_EQ(strip_meta_line(text), "# report demo\n# q=3\n# note: n1\na,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
}

TEST(Report, JsonParsesAndKeepsMetaOnFirstLine) {
    Report r;
    r.name = "demo";
    r.columns = {"k", "value"};
    r.add_row({"1", "0.5"});
    const auto text = render(r, ReportFormat::Json, ReportMeta{2, 1, ""});
    const auto first = text.substr(0, text.find('\n'));
    EXPECT_EQ(first.rfind("{\"meta\":{\"generated\":", 0), 0u);
    const auto j = nlohmann::json::parse(text);
    EXPECT_EQ(j["report"]["rows"][0]["value"], "0.5");
    EXPECT_EQ(j["meta"]["workers"], 1);
    EXPECT_EQ(parse_format("json"), ReportFormat::Json);
    EXPECT_THROW(parse_format("yaml"), std::invalid_argument);
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Experiment, OutputsIndependentOfWorkers) {
    TempDir dir;
    std::vector<ExperimentConfig> cases;
    auto c = config("verify");
    c.g = 2;
    cases.push_back(c);
    c = config("moment");
    c.g = 2;
    c.specs = {"(2,1)", "(2,2)", "(1,2);(2,1)"};
    cases.push_back(c);
    c = config("decompose");
    c.g = 2;
    cases.push_back(c);
    c = config("linstat");
    c.g = 1;
    c.g_max = 2;
    c.tf = "bump:1";
    cases.push_back(c);
    c = config("sigma");
    c.degrees = {3, 4};
    cases.push_back(c);
    c = config("charsum");
    c.degrees = {1, 2};
    cases.push_back(c);
    c = config("rmt");
    c.g = 2;
    cases.push_back(c);
    for (auto base : cases) {
        std::string reference;
        for (unsigned w : {1u, 4u, 16u}) {
            base.workers = w;
            CacheStore cached(dir.path());
            CacheStore uncached{fs::path()};
            for (CacheStore* store : {&cached, &uncached}) {
                const auto body = strip_meta_line(run_rendered(base, *store));
                if (reference.empty()) reference = body;
                EXPECT_EQ(body, reference) << base.command << " workers=" << w;
            }
        }
        EXPECT_FALSE(reference.empty());
    }
}

TEST(Experiment, VerifyReportsAllInvariantsPassing) {
    CacheStore store{fs::path()};
    auto c = config("verify");
    c.q = 5;
    const auto r = run_experiment(c, store);
    EXPECT_EQ(r.status, kExitOk);
    EXPECT_FALSE(r.report.rows.empty());
    ASSERT_EQ(r.report.rows.size(), 6u);
    for (const auto& row : r.report.rows) EXPECT_EQ(row.back(), "0") << row.front();
    EXPECT_EQ(r.report.rows[1][1], "100");
}

TEST(Experiment, LfunSingleCurve) {
    CacheStore store{fs::path()};
    auto c = config("lfun");
    c.Q = "1,2,0,1";
    c.N = 6;
    const auto r = run_experiment(c, store);
    const auto text = strip_meta_line(render(r.report, ReportFormat::Csv, {}));
    EXPECT_NE(text.find("1 3 3"), std::string::npos) << text;
    c.Q = "0,1,2,1";  // x (x+1)^2
    EXPECT_THROW(run_experiment(c, store), ConfigError);
    c.Q = "1,2,1";
    EXPECT_THROW(run_experiment(c, store), ConfigError);
}
