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

#ifndef FDMM_EXPERIMENTS_HPP
#define FDMM_EXPERIMENTS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "fdmm/config.hpp"
#include "fdmm/multiuser.hpp"

namespace fdmm
{
    enum class ExperimentKind
    {
        sparsity_map,
        p2p_sweep,
        omega_sweep,
        multiuser_sweep,
        decompose_check
    };

    ExperimentKind parse_experiment_kind(const std::string &name);
    std::vector<std::string> experiment_kind_names();

    struct RunOptions
    {
        std::string out_dir = ".";
        unsigned threads = 0; // 0 = machine parallelism
        bool emit_svg = true;
    };

    // Executes the configured experiment and writes its CSV (and SVG)
    // artifacts. Returns the per-artifact summary lines, which are also
    // printed to `log`.
    std::vector<std::string> run_experiment(const KeyValueConfig &cfg, const RunOptions &opts,
                                            std::ostream &log);

    struct CheckResult
    {
        std::string name;
        bool pass = false;
        std::string detail;
    };

    // Runs the assertions bound to the configured experiment without writing
    // artifacts; one CheckResult per assertion.
    std::vector<CheckResult> verify_experiment(const KeyValueConfig &cfg, unsigned threads,
                                               std::ostream &log);

    // Assertion kernels shared between `verify` and the acceptance suite.

    // Fraction of gain-map cells within 10 dB of the maximum must shrink by
    // more than half when going from n_small to n_large elements.
    std::vector<CheckResult> check_sparsity_contrast(std::size_t n_small, std::size_t n_large,
                                                     double d, std::size_t grid);

    // The argmax-cell offset beta - alpha (wrapped into (-1, 1]) must be
    // strictly monotone across the given omegas.
    std::vector<CheckResult> check_ridge_monotone(std::size_t n, double d,
                                                  const std::vector<double> &omegas,
                                                  std::size_t grid);

    // Scheme ordering with paired-gap significance (gap > 3 standard errors
    // of the per-trial difference) at every SNR point, plus the
    // within-10%-of-upper-bound check at SNR >= 20 dB.
    std::vector<CheckResult> check_p2p_ordering(const LinkConfig &cfg,
                                                const std::vector<double> &snr_db,
                                                std::size_t trials, std::uint64_t seed,
                                                unsigned threads);

    // Angle-search ASR spread across omega exceeds 5% of its maximum.
    std::vector<CheckResult> check_omega_sensitivity(const LinkConfig &cfg,
                                                     const std::vector<double> &omegas,
                                                     std::size_t trials, std::uint64_t seed,
                                                     unsigned threads);

    // High-SNR floors: CA schemes grow < 15% from 30 to 40 dB, the no-CA
    // variant grows > 25% and leads both CA schemes at 30 dB.
    std::vector<CheckResult> check_mu_floor(const MultiuserConfig &cfg, std::size_t trials,
                                            std::uint64_t seed, unsigned threads);

    // Exact reconstruction of the two-vector CA decomposition over `count`
    // random vectors of length 1..max_len (per-element error <= 1e-12).
    std::vector<CheckResult> check_decompose(std::size_t count, std::size_t max_len,
                                             std::uint64_t seed);
}

#endif
