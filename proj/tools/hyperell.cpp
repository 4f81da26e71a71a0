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

// Command-line front end for the hyperell experiments.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperell/cache.hpp"
#include "hyperell/experiment.hpp"
#include "hyperell/report.hpp"

int main(int argc, char** argv) {
    using namespace hyperell;
    ExperimentConfig cfg;
    std::string cache_dir = default_cache_dir().string();
    std::vector<std::string> args;

    CLI::App app{"Exact L-function and trace statistics for hyperelliptic ensembles over F_q"};
    app.set_config("--config", "", "flat key=value config file; command-line flags take precedence");
    app.add_option("command", cfg.command, "primes|verify|lfun|moment|decompose|sigma|charsum|rmt|linstat|dump-cache")->required();
    app.add_option("args", args, "dump-cache: cache files to print");
    app.add_option("--q", cfg.q, "odd prime field size")->capture_default_str();
    app.add_option("--g", cfg.g, "genus (first genus for ranges)")->capture_default_str();
    app.add_option("--g-max", cfg.g_max, "last genus of a range (linstat)");
    app.add_option("--N", cfg.N, "highest trace power / prime degree (default 2g)");
    app.add_option("--spec", cfg.specs, "moment spec \"(k,a);(k,a)\"; repeatable");
    app.add_option("--tf", cfg.tf, "test function: triangular:m, bump:r, zero, pw:b0,b1,..;c0,c1,..")->capture_default_str();
    app.add_option("--workers", cfg.workers, "worker threads")->capture_default_str();
    app.add_option("--cache-dir", cache_dir, "cache directory (env HYPERELL_CACHE_DIR; \"none\" disables)")->capture_default_str();
    app.add_option("--out", cfg.out, "report file (default stdout)");
    app.add_option("--format", cfg.format, "csv or json")->capture_default_str();
    app.add_option("--degrees", cfg.degrees, "prime degrees k_1,..,k_n")->delimiter(',');
    app.add_option("--alpha", cfg.alpha, "sigma: single alpha (default: table)");
    app.add_option("--beta", cfg.beta, "charsum: single beta (default: table)");
    app.add_option("--m", cfg.m, "linstat: number of moments")->capture_default_str();
    app.add_option("--l", cfg.l, "decompose: prime-term moment order")->capture_default_str();
    app.add_option("--budget", cfg.budget, "largest q^(2g+1) to enumerate")->capture_default_str();
    app.add_option("--Q", cfg.Q, "lfun: one curve, low-first coefficients \"1,2,0,1\"");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (cfg.command == "dump-cache") {
            if (args.empty()) throw ConfigError("dump-cache needs at least one cache file");
            for (const auto& a : args) std::cout << dump_cache_file(a);
            return kExitOk;
        }
        CacheStore store(cache_dir == "none" ? std::filesystem::path() : std::filesystem::path(cache_dir));
        const auto t0 = std::chrono::steady_clock::now();
        const auto result = run_experiment(cfg, store);
        ReportMeta meta;
        meta.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        meta.workers = cfg.workers;
        meta.cache_dir = store.dir().string();
        for (const auto& n : store.notices()) std::cerr << "notice: " << n << "\n";
        emit(result.report, parse_format(cfg.format), meta, cfg.out);
        if (result.status != kExitOk) std::cerr << "invariant failure in " << cfg.command << " report\n";
        return result.status;
    } catch (const BudgetExceeded& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CacheError& e) {
        std::cerr << "cache error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return kExitInvariant;
    }
}
