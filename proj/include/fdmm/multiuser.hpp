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

#ifndef FDMM_MULTIUSER_HPP
#define FDMM_MULTIUSER_HPP

#include "fdmm/fdlink.hpp"

namespace fdmm
{
    // Base station serving k_users full-duplex users over hybrid precoding.
    struct MultiuserConfig
    {
        Ula bs_tx;
        Ula bs_rx;
        Ula user_tx;
        Ula user_rx;
        double d = 5.0;
        double omega = 0.0;
        std::size_t k_users = 2;
        std::size_t n_paths = 4;
        LinkBudget budget{30.0, 20.0};
        std::size_t m_rf = 0; // downlink RF chains; 0 defaults to k_users
        std::size_t n_rf = 0; // uplink RF chains; 0 defaults to k_users
        std::size_t angle_grid = 32;
    };

    struct MultiuserScenario
    {
        ArrayPlacement bs_placement;
        std::vector<ArrayPlacement> user_placements;
        std::vector<ChannelMatrix> h_dl; // user k downlink, (n_rx_user x n_tx_bs)
        std::vector<ChannelMatrix> h_ul; // user k uplink, (n_rx_bs x n_tx_user)
        ChannelMatrix hsi_bs;
        std::vector<ChannelMatrix> hsi_user;
        std::size_t m_rf = 0;
        std::size_t n_rf = 0;
        LinkBudget budget;

        std::size_t k_users() const { return h_dl.size(); }
    };

    // Draws all per-user channels; deterministic under the seed.
    // Requires m_rf == n_rf == k_users (one RF chain per served stream).
    MultiuserScenario build_scenario(const MultiuserConfig &cfg, std::uint64_t seed);

    enum class AnalogMethod
    {
        zf_mf,
        angle_search
    };

    struct HybridPrecoders
    {
        arma::cx_mat f_rf; // BS analog precoder, (n_bs_tx x m_rf)
        arma::cx_mat w_rf; // BS analog combiner, (n_bs_rx x n_rf)
        arma::cx_mat f_bb; // digital precoder, (m_rf x K)
        arma::cx_mat w_bb; // digital combiner, (n_rf x n_rf), unit-norm rows
        arma::cx_mat f_eff; // f_rf * f_bb with unit-norm columns
        std::vector<Awv> user_f;
        std::vector<Awv> user_w;
        bool ca = true;
        bool rank_deficient = false; // a digital stage fell back to the ridge pinv
    };

    // Designs each (BS, user) pair independently as a point-to-point FD link
    // and stacks the BS-side AWVs as analog columns.
    HybridPrecoders analog_stage(const MultiuserScenario &sc, AnalogMethod method, bool ca,
                                 std::size_t angle_grid);

    // Digital ZF: downlink inverts the effective user/beam matrix; uplink
    // takes the first n_rf rows of the pseudo-inverse of [G_ul | S], nulling
    // multi-user interference together with the residual multi-dimensional
    // self-interference. Rank-deficient effective matrices are flagged and
    // served by a ridge-regularized pseudo-inverse (ridge 1e-8).
    void digital_stage(const MultiuserScenario &sc, HybridPrecoders &hp);

    struct MuMetrics
    {
        std::vector<double> sinr_dl;
        std::vector<double> sinr_ul;
        double asr = 0.0;
    };

    MuMetrics mu_metrics(const MultiuserScenario &sc, const HybridPrecoders &hp);

    enum class MuScheme
    {
        zf_mf_muser,
        angle_search_muser,
        zf_mf_noca_muser
    };

    MuScheme parse_mu_scheme(const std::string &name);
    std::string mu_scheme_name(MuScheme s);

    // Full pipeline (analog + digital + metrics) for one scenario draw.
    double mu_scheme_asr(MultiuserScenario &sc, MuScheme s, std::size_t angle_grid);

    TrialResults mu_sweep_trials(const MultiuserConfig &cfg, MuScheme s,
                                 const std::vector<double> &snr_db, std::size_t trials,
                                 std::uint64_t seed, unsigned threads = 1);

    SweepTable mu_sweep(const MultiuserConfig &cfg, const std::vector<MuScheme> &schemes,
                        const std::vector<double> &snr_db, std::size_t trials,
                        std::uint64_t seed, unsigned threads = 1);
}

#endif
