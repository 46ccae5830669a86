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

#ifndef FDMM_FDLINK_HPP
#define FDMM_FDLINK_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fdmm/beamforming.hpp"

namespace fdmm
{
    // Relative power bookkeeping: noise power is fixed at 1, the signal
    // power is P = 10^(snr_db/10) and the self-interference power is
    // P * 10^(si_db/10). si_db = -inf disables SI.
    struct LinkBudget
    {
        double snr_db = 10.0;
        double si_db = 25.0;

        double p() const;
        double p_si() const;
    };

    // Bidirectional full-duplex link between node 1 and node 2.
    struct FdLink
    {
        ChannelMatrix h12;  // node 1 -> node 2, (n_rx2 x n_tx1)
        ChannelMatrix h21;  // node 2 -> node 1, (n_rx1 x n_tx2)
        ChannelMatrix hsi1; // self-interference at node 1, (n_rx1 x n_tx1)
        ChannelMatrix hsi2; // self-interference at node 2, (n_rx2 x n_tx2)
        LinkBudget budget;

        FdLink(ChannelMatrix h12_, ChannelMatrix h21_, ChannelMatrix hsi1_,
               ChannelMatrix hsi2_, LinkBudget budget_);
    };

    struct LinkMetrics
    {
        double sinr1 = 0.0;
        double sinr2 = 0.0;
        double asr = 0.0; // log2(1+sinr1) + log2(1+sinr2), bits/s/Hz
    };

    // SINR_i = P |w_i^H H_ji f_j|^2 / (P_SI |w_i^H H_SI,i f_i|^2 + 1).
    // All four AWVs must be unit-norm within 1e-9.
    LinkMetrics link_metrics(const FdLink &link, const Awv &f1, const Awv &w1,
                             const Awv &f2, const Awv &w2);

    // Zero SI, no CA constraint: SINR_i = P * sigma_max(H_ji)^2.
    LinkMetrics upper_bound(const FdLink &link);

    // Scenario template shared by both nodes of a link.
    struct LinkConfig
    {
        Ula tx;
        Ula rx;
        double d = 5.0;
        double omega = 0.0;
        std::size_t n_paths = 4;
        LinkBudget budget;
        std::size_t angle_grid = 32;
    };

    // A drawn link plus the path sets behind its communication channels
    // (beam steering needs them).
    struct LinkRealization
    {
        FdLink link;
        std::vector<PathComponent> paths12;
        std::vector<PathComponent> paths21;
    };

    // Draws both communication channels and builds the deterministic LOS SI
    // channels from the placement. Bit-reproducible under the seed.
    LinkRealization build_link(const LinkConfig &cfg, std::uint64_t seed);

    enum class Scheme
    {
        upper_bound,
        beam_steering,
        angle_search,
        zf_mf_ca,
        zf_mf_noca
    };

    Scheme parse_scheme(const std::string &name); // rejects unknown identifiers
    std::string scheme_name(Scheme s);

    // ASR of one scheme on one drawn link.
    double scheme_asr(const LinkRealization &lr, Scheme s, std::size_t angle_grid);

    struct SweepRow
    {
        double sweep_var = 0.0;
        std::string scheme;
        double mean_asr = 0.0;
        double std_asr = 0.0;
        std::size_t trials = 0;
        std::uint64_t seed = 0;
        std::optional<std::size_t> k_users;
    };

    struct SweepTable
    {
        std::string sweep_var_name; // "snr_db" or "omega"
        std::vector<SweepRow> rows;

        void write_csv(std::ostream &os) const;
        std::string to_csv() const;
    };

    // Per-trial ASR values, [point][trial]; the per-trial seed depends only
    // on (master seed, trial index), so schemes evaluated with the same
    // master seed see identical links and support paired statistics.
    struct TrialResults
    {
        std::vector<double> points;
        std::vector<std::vector<double>> asr;
    };

    TrialResults sweep_snr_trials(const LinkConfig &cfg, Scheme s,
                                  const std::vector<double> &snr_db, std::size_t trials,
                                  std::uint64_t seed, unsigned threads = 1);
    TrialResults sweep_omega_trials(const LinkConfig &cfg, Scheme s,
                                    const std::vector<double> &omegas, std::size_t trials,
                                    std::uint64_t seed, unsigned threads = 1);

    SweepTable sweep_snr(const LinkConfig &cfg, Scheme s, const std::vector<double> &snr_db,
                         std::size_t trials, std::uint64_t seed, unsigned threads = 1);
    SweepTable sweep_omega(const LinkConfig &cfg, Scheme s, const std::vector<double> &omegas,
                           std::size_t trials, std::uint64_t seed, unsigned threads = 1);

    // mean/std over trials in index order (sample standard deviation)
    std::pair<double, double> mean_std(const std::vector<double> &values);
}

#endif
