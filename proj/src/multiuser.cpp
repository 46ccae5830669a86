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

#include "fdmm/multiuser.hpp"

#include <cmath>
#include <stdexcept>

#include "fdmm/parallel.hpp"
#include "fdmm/rng.hpp"

namespace fdmm
{
    namespace
    {
        constexpr double kRidge = 1e-8;

        // SVD pseudo-inverse, falling back to a ridge-regularized form when
        // the matrix is rank-deficient.
        arma::cx_mat pinv_or_ridge(const arma::cx_mat &a, bool &flag)
        {
            const arma::uword full = std::min(a.n_rows, a.n_cols);
            if (arma::rank(a) < full)
            {
                flag = true;
                if (a.n_rows <= a.n_cols)
                {
                    arma::cx_mat gram = a * a.t() + kRidge * arma::eye<arma::cx_mat>(a.n_rows, a.n_rows);
                    return a.t() * arma::inv(gram);
                }
                arma::cx_mat gram = a.t() * a + kRidge * arma::eye<arma::cx_mat>(a.n_cols, a.n_cols);
                return arma::inv(gram) * a.t();
            }
            return arma::pinv(a);
        }
    }

    MultiuserScenario build_scenario(const MultiuserConfig &cfg, std::uint64_t seed)
    {
        if (cfg.k_users < 1)
            throw std::invalid_argument("build_scenario: k_users must be >= 1");

        const std::size_t m_rf = cfg.m_rf == 0 ? cfg.k_users : cfg.m_rf;
        const std::size_t n_rf = cfg.n_rf == 0 ? cfg.k_users : cfg.n_rf;
        if (m_rf != cfg.k_users || n_rf != cfg.k_users)
            throw std::invalid_argument(
                "build_scenario: this pipeline serves one stream per RF chain (m_rf = n_rf = k_users)");

        MultiuserScenario sc{ArrayPlacement(cfg.bs_tx, cfg.bs_rx, cfg.d, cfg.omega),
                             {}, {}, {}, {}, {}, m_rf, n_rf, cfg.budget};
        sc.hsi_bs = los_si_channel(sc.bs_placement);

        for (std::size_t k = 0; k < cfg.k_users; ++k)
        {
            sc.user_placements.emplace_back(cfg.user_tx, cfg.user_rx, cfg.d, cfg.omega);
            sc.hsi_user.push_back(los_si_channel(sc.user_placements.back()));
            sc.h_dl.push_back(sparse_channel(cfg.bs_tx.n_elements, cfg.user_rx.n_elements,
                                             random_paths(cfg.n_paths, derive_seed(seed, 2 * k))));
            sc.h_ul.push_back(sparse_channel(cfg.user_tx.n_elements, cfg.bs_rx.n_elements,
                                             random_paths(cfg.n_paths, derive_seed(seed, 2 * k + 1))));
        }
        return sc;
    }

    HybridPrecoders analog_stage(const MultiuserScenario &sc, AnalogMethod method, bool ca,
                                 std::size_t angle_grid)
    {
        if (method == AnalogMethod::angle_search && !ca)
            throw std::invalid_argument("analog_stage: angle_search always produces CA columns");

        const std::size_t n_bs_tx = sc.hsi_bs.n_tx();
        const std::size_t n_bs_rx = sc.hsi_bs.n_rx();

        HybridPrecoders hp;
        hp.ca = ca;
        hp.f_rf.set_size(n_bs_tx, sc.m_rf);
        hp.w_rf.set_size(n_bs_rx, sc.n_rf);

        for (std::size_t k = 0; k < sc.k_users(); ++k)
        {
            // the pair (BS, user k) as a point-to-point FD link; BS is node 1
            FdLink pair(sc.h_dl[k], sc.h_ul[k], sc.hsi_bs, sc.hsi_user[k], sc.budget);
            LinkBeamformers b = (method == AnalogMethod::zf_mf)
                                    ? zf_mf(pair, ca)
                                    : angle_search(pair, angle_grid).beams;
            hp.f_rf.col(k) = b.f1.weights;
            hp.w_rf.col(k) = b.w1.weights;
            hp.user_f.push_back(b.f2);
            hp.user_w.push_back(b.w2);
        }
        return hp;
    }

    void digital_stage(const MultiuserScenario &sc, HybridPrecoders &hp)
    {
        const std::size_t k_users = sc.k_users();
        if (hp.user_f.size() != k_users || hp.user_w.size() != k_users)
            throw std::invalid_argument("digital_stage: analog stage incomplete");

        // Downlink: invert the effective (user, beam) matrix, then normalize
        // each composite stream to unit transmit norm.
        arma::cx_mat g_dl(k_users, sc.m_rf);
        for (std::size_t k = 0; k < k_users; ++k)
            for (std::size_t j = 0; j < sc.m_rf; ++j)
                g_dl(k, j) = arma::cdot(hp.user_w[k].weights, sc.h_dl[k].gains * hp.f_rf.col(j));

        hp.f_bb = pinv_or_ridge(g_dl, hp.rank_deficient);
        hp.f_eff = hp.f_rf * hp.f_bb;
        for (std::size_t k = 0; k < k_users; ++k)
        {
            double nrm = arma::norm(hp.f_eff.col(k));
            if (!(nrm > 1e-14))
            {
                hp.rank_deficient = true;
                nrm = 1.0;
            }
            hp.f_eff.col(k) /= nrm;
            hp.f_bb.col(k) /= nrm;
        }

        // Uplink: stack the effective uplink matrix with the residual SI
        // block and zero-force both at once.
        arma::cx_mat g_ul(sc.n_rf, k_users);
        for (std::size_t i = 0; i < sc.n_rf; ++i)
            for (std::size_t k = 0; k < k_users; ++k)
                g_ul(i, k) = arma::cdot(hp.w_rf.col(i), sc.h_ul[k].gains * hp.user_f[k].weights);

        arma::cx_mat s_res = hp.w_rf.t() * sc.hsi_bs.gains * hp.f_eff; // n_rf x m_rf
        arma::cx_mat stacked = arma::join_rows(g_ul, s_res);
        arma::cx_mat stacked_pinv = pinv_or_ridge(stacked, hp.rank_deficient);

        hp.w_bb = stacked_pinv.rows(0, sc.n_rf - 1);
        for (std::size_t i = 0; i < sc.n_rf; ++i)
        {
            double nrm = arma::norm(hp.w_bb.row(i));
            if (!(nrm > 1e-14))
            {
                hp.rank_deficient = true;
                nrm = 1.0;
            }
            hp.w_bb.row(i) /= nrm;
        }
    }

    MuMetrics mu_metrics(const MultiuserScenario &sc, const HybridPrecoders &hp)
    {
        const std::size_t k_users = sc.k_users();
        if (hp.f_eff.n_cols != k_users || hp.w_bb.n_rows != sc.n_rf)
            throw std::invalid_argument("mu_metrics: precoders incomplete or mismatched");

        const double p = sc.budget.p();
        const double p_si = sc.budget.p_si();

        const arma::cx_mat w_combined = hp.w_bb * hp.w_rf.t(); // n_rf x n_bs_rx

        MuMetrics m;
        m.sinr_dl.resize(k_users);
        m.sinr_ul.resize(k_users);
        for (std::size_t k = 0; k < k_users; ++k)
        {
            const arma::cx_vec &w_k = hp.user_w[k].weights;
            const arma::cx_mat &h_k = sc.h_dl[k].gains;

            const double sig_dl = p * std::norm(arma::cdot(w_k, h_k * hp.f_eff.col(k)));
            double denom_dl = std::real(arma::cdot(w_k, w_k)); // receive noise
            for (std::size_t j = 0; j < k_users; ++j)
                if (j != k)
                    denom_dl += p * std::norm(arma::cdot(w_k, h_k * hp.f_eff.col(j)));
            denom_dl += p_si * std::norm(arma::cdot(w_k, sc.hsi_user[k].gains * hp.user_f[k].weights));
            m.sinr_dl[k] = sig_dl / denom_dl;

            const arma::cx_rowvec row = w_combined.row(k);
            const double sig_ul =
                p * std::norm(arma::as_scalar(row * (sc.h_ul[k].gains * hp.user_f[k].weights)));
            double denom_ul = std::pow(arma::norm(row), 2);
            for (std::size_t j = 0; j < k_users; ++j)
                if (j != k)
                    denom_ul +=
                        p * std::norm(arma::as_scalar(row * (sc.h_ul[j].gains * hp.user_f[j].weights)));
            denom_ul += p_si * std::pow(arma::norm(row * sc.hsi_bs.gains * hp.f_eff), 2);
            m.sinr_ul[k] = sig_ul / denom_ul;
        }

        m.asr = 0.0;
        for (std::size_t k = 0; k < k_users; ++k)
            m.asr += std::log2(1.0 + m.sinr_dl[k]) + std::log2(1.0 + m.sinr_ul[k]);
        return m;
    }

    MuScheme parse_mu_scheme(const std::string &name)
    {
        if (name == "zf_mf_muser")
            return MuScheme::zf_mf_muser;
        if (name == "angle_search_muser")
            return MuScheme::angle_search_muser;
        if (name == "zf_mf_noca_muser")
            return MuScheme::zf_mf_noca_muser;
        throw std::invalid_argument("unknown multiuser scheme identifier '" + name + "'");
    }

    std::string mu_scheme_name(MuScheme s)
    {
        switch (s)
        {
        case MuScheme::zf_mf_muser:
            return "zf_mf_muser";
        case MuScheme::angle_search_muser:
            return "angle_search_muser";
        case MuScheme::zf_mf_noca_muser:
            return "zf_mf_noca_muser";
        }
        throw std::invalid_argument("unknown multiuser scheme value");
    }

    double mu_scheme_asr(MultiuserScenario &sc, MuScheme s, std::size_t angle_grid)
    {
        AnalogMethod method = AnalogMethod::zf_mf;
        bool ca = true;
        switch (s)
        {
        case MuScheme::zf_mf_muser:
            break;
        case MuScheme::angle_search_muser:
            method = AnalogMethod::angle_search;
            break;
        case MuScheme::zf_mf_noca_muser:
            ca = false;
            break;
        }
        HybridPrecoders hp = analog_stage(sc, method, ca, angle_grid);
        digital_stage(sc, hp);
        return mu_metrics(sc, hp).asr;
    }

    TrialResults mu_sweep_trials(const MultiuserConfig &cfg, MuScheme s,
                                 const std::vector<double> &snr_db, std::size_t trials,
                                 std::uint64_t seed, unsigned threads)
    {
        if (trials < 1)
            throw std::invalid_argument("mu_sweep: trials must be >= 1");
        if (snr_db.empty())
            throw std::invalid_argument("mu_sweep: empty SNR list");

        TrialResults res;
        res.points = snr_db;
        res.asr.assign(snr_db.size(), std::vector<double>(trials, 0.0));

        parallel_for(trials, threads, [&](std::size_t t)
                     {
            MultiuserScenario sc = build_scenario(cfg, derive_seed(seed, t));
            for (std::size_t pi = 0; pi < snr_db.size(); ++pi)
            {
                sc.budget.snr_db = snr_db[pi];
                res.asr[pi][t] = mu_scheme_asr(sc, s, cfg.angle_grid);
            } });
        return res;
    }

    SweepTable mu_sweep(const MultiuserConfig &cfg, const std::vector<MuScheme> &schemes,
                        const std::vector<double> &snr_db, std::size_t trials,
                        std::uint64_t seed, unsigned threads)
    {
        SweepTable table;
        table.sweep_var_name = "snr_db";
        for (MuScheme s : schemes)
        {
            TrialResults tr = mu_sweep_trials(cfg, s, snr_db, trials, seed, threads);
            for (std::size_t pi = 0; pi < tr.points.size(); ++pi)
            {
                auto [mean, sd] = mean_std(tr.asr[pi]);
                table.rows.push_back(
                    {tr.points[pi], mu_scheme_name(s), mean, sd, trials, seed, cfg.k_users});
            }
        }
        return table;
    }
}
