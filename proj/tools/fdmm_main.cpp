// SPDX-License-Identifier: Apache-2.0
//
// fdmm - link-level simulator for full-duplex millimeter-wave antenna arrays
// Copyright (C) 2026 the fdmm developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fdmm/experiments.hpp"
#include "fdmm/version.hpp"

namespace
{
    // Exit codes: 1 failed verification, 2 config parse, 3 invariant
    // violation, 4 I/O failure.
    constexpr int kExitVerifyFailed = 1;
    constexpr int kExitParse = 2;
    constexpr int kExitInvariant = 3;
    constexpr int kExitIo = 4;

    std::string default_out_dir(const std::string &flag_value, bool flag_given)
    {
        if (flag_given)
            return flag_value;
        if (const char *env = std::getenv("FDMM_OUT_DIR"); env && *env)
            return env;
        return ".";
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"fdmm: full-duplex mmWave link-level experiments"};
    app.set_version_flag("--version", std::string("fdmm ") + fdmm::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    unsigned threads = 0;
    bool no_svg = false;

    auto *run = app.add_subcommand("run", "run an experiment config and write its artifacts");
    run->add_option("config", config_path, "experiment config file")->required();
    auto *out_opt = run->add_option("--out", out_dir, "output directory (or FDMM_OUT_DIR)");
    run->add_option("--threads", threads, "worker threads (0 = machine parallelism)");
    run->add_flag("--no-svg", no_svg, "skip SVG rendering, CSV only");

    auto *verify = app.add_subcommand("verify", "run the acceptance assertions of an experiment");
    verify->add_option("config", config_path, "experiment config file")->required();
    verify->add_option("--threads", threads, "worker threads (0 = machine parallelism)");

    auto *list = app.add_subcommand("list-experiments", "list available experiment kinds");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (list->parsed())
        {
            for (const auto &name : fdmm::experiment_kind_names())
                std::cout << name << '\n';
            return 0;
        }

        const fdmm::KeyValueConfig cfg = fdmm::KeyValueConfig::parse_file(config_path);

        if (run->parsed())
        {
            fdmm::RunOptions opts;
            opts.out_dir = default_out_dir(out_dir, out_opt->count() > 0);
            opts.threads = threads;
            opts.emit_svg = !no_svg;
            fdmm::run_experiment(cfg, opts, std::cout);
            return 0;
        }

        const auto checks = fdmm::verify_experiment(cfg, threads, std::cout);
        std::size_t passed = 0;
        for (const auto &c : checks)
            passed += c.pass ? 1 : 0;
        std::cout << "result: " << passed << "/" << checks.size() << " assertions passed\n";
        return passed == checks.size() ? 0 : kExitVerifyFailed;
    }
    catch (const fdmm::ConfigParseError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitParse;
    }
    catch (const fdmm::IoError &e)
    {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kExitInvariant;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvariant;
    }
}
