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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "fdmm/multiuser.hpp"
#include "fdmm/rng.hpp"

using namespace fdmm;

namespace
{
    constexpr double kInf = std::numeric_limits<double>::infinity();

    MultiuserConfig fig5_config()
    {
        MultiuserConfig cfg;
        cfg.bs_tx = cfg.bs_rx = cfg.user_tx = cfg.user_rx = Ula(16);
        cfg.d = 5.0;
        cfg.omega = M_PI / 8.0;
        cfg.k_users = 2;
        cfg.n_paths = 4;
        cfg.budget = LinkBudget{30.0, 20.0};
        cfg.angle_grid = 32;
        return cfg;
    }

    // the same draw as a point-to-point link (BS = node 1, user = node 2)
    FdLink pair_link(const MultiuserScenario &sc, std::size_t k)
    {
        return FdLink(sc.h_dl[k], sc.h_ul[k], sc.hsi_bs, sc.hsi_user[k], sc.budget);
    }
}

TEST_SUITE_BEGIN("multiuser");

TEST_CASE("analog CA columns satisfy the constant-amplitude invariant")
{
    MultiuserScenario sc = build_scenario(fig5_config(), 1);
    for (AnalogMethod method : {AnalogMethod::zf_mf, AnalogMethod::angle_search})
    {
        const HybridPrecoders hp = analog_stage(sc, method, true, 16);
        const double amp = 1.0 / std::sqrt(16.0);
        for (arma::uword j = 0; j < hp.f_rf.n_cols; ++j)
            for (arma::uword i = 0; i < hp.f_rf.n_rows; ++i)
            {
                CHECK(std::fabs(std::abs(hp.f_rf(i, j)) - amp) < 1e-12);
                CHECK(std::fabs(std::abs(hp.w_rf(i, j)) - amp) < 1e-12);
            }
    }
    CHECK_THROWS_AS(analog_stage(sc, AnalogMethod::angle_search, false, 16),
                    std::invalid_argument);
}

TEST_CASE("K = 1 without SI power reduces to the point-to-point pipeline")
{
    MultiuserConfig cfg = fig5_config();
    cfg.k_users = 1;
    cfg.budget.si_db = -kInf;

    for (std::uint64_t s = 0; s < 10; ++s)
    {
        MultiuserScenario sc = build_scenario(cfg, derive_seed(9000, s));
        const FdLink link = pair_link(sc, 0);

        // zf_mf with and without CA
        for (bool ca : {true, false})
        {
            HybridPrecoders hp = analog_stage(sc, AnalogMethod::zf_mf, ca, cfg.angle_grid);
            digital_stage(sc, hp);
            const MuMetrics mu = mu_metrics(sc, hp);
            const LinkBeamformers b = zf_mf(link, ca);
            const LinkMetrics p2p = link_metrics(link, b.f1, b.w1, b.f2, b.w2);
            CHECK(std::fabs(mu.asr - p2p.asr) <= 1e-9);
            CHECK(mu.sinr_dl[0] == doctest::Approx(p2p.sinr2).epsilon(1e-9));
            CHECK(mu.sinr_ul[0] == doctest::Approx(p2p.sinr1).epsilon(1e-9));
        }

        // angle search
        HybridPrecoders hp = analog_stage(sc, AnalogMethod::angle_search, true, cfg.angle_grid);
        digital_stage(sc, hp);
        const MuMetrics mu = mu_metrics(sc, hp);
        CHECK(std::fabs(mu.asr - angle_search(link, cfg.angle_grid).asr) <= 1e-9);
    }
}

TEST_CASE("digital stage zero-forces downlink MUI when columns are unconstrained")
{
    MultiuserScenario sc = build_scenario(fig5_config(), 77);
    HybridPrecoders hp = analog_stage(sc, AnalogMethod::zf_mf, false, sc.m_rf);
    digital_stage(sc, hp);

    for (std::size_t k = 0; k < sc.k_users(); ++k)
    {
        const double diag =
            std::abs(arma::cdot(hp.user_w[k].weights, sc.h_dl[k].gains * hp.f_eff.col(k)));
        for (std::size_t j = 0; j < sc.k_users(); ++j)
        {
            if (j == k)
                continue;
            const double off =
                std::abs(arma::cdot(hp.user_w[k].weights, sc.h_dl[k].gains * hp.f_eff.col(j)));
            CHECK(off <= 1e-8 * diag);
        }
    }
    // per-stream power normalization
    for (arma::uword c = 0; c < hp.f_eff.n_cols; ++c)
        CHECK(arma::norm(hp.f_eff.col(c)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("stacking the SI block into the uplink ZF lowers residual SI")
{
    // Per-stream residual SI per unit combiner norm (the ratio that enters
    // the uplink SINR), stacked [G_ul | S] pseudo-inverse versus an SI-blind
    // digital stage that only inverts G_ul.
    const MultiuserConfig cfg = fig5_config();
    std::size_t wins = 0;
    const std::size_t trials = 100;
    for (std::uint64_t t = 0; t < trials; ++t)
    {
        MultiuserScenario sc = build_scenario(cfg, derive_seed(5757, t));
        HybridPrecoders hp = analog_stage(sc, AnalogMethod::zf_mf, true, cfg.angle_grid);
        digital_stage(sc, hp);

        arma::cx_mat g_ul(sc.n_rf, sc.k_users());
        for (std::size_t i = 0; i < sc.n_rf; ++i)
            for (std::size_t k = 0; k < sc.k_users(); ++k)
                g_ul(i, k) = arma::cdot(hp.w_rf.col(i), sc.h_ul[k].gains * hp.user_f[k].weights);
        arma::cx_mat w_blind = arma::pinv(g_ul);
        for (arma::uword k = 0; k < w_blind.n_rows; ++k)
            w_blind.row(k) /= arma::norm(w_blind.row(k));

        auto residual_si = [&](const arma::cx_mat &w_bb)
        {
            const arma::cx_mat comb = w_bb * hp.w_rf.t();
            double acc = 0.0;
            for (arma::uword k = 0; k < comb.n_rows; ++k)
                acc += std::pow(arma::norm(comb.row(k) * sc.hsi_bs.gains * hp.f_eff), 2) /
                       std::pow(arma::norm(comb.row(k)), 2);
            return acc;
        };
        wins += (residual_si(hp.w_bb) < residual_si(w_blind));
    }
    CHECK(wins == trials);
}

TEST_CASE("mu_metrics reduces to pure beamforming gains without interference")
{
    // scalar everything: 1 user, all channels 1x1 with unit gain, SI off
    MultiuserScenario sc{ArrayPlacement(Ula(1), Ula(1), 5.0, 0.0),
                         {ArrayPlacement(Ula(1), Ula(1), 5.0, 0.0)},
                         {},
                         {},
                         {},
                         {},
                         1,
                         1,
                         LinkBudget{10.0, -kInf}};
    ChannelMatrix unit;
    unit.gains = arma::cx_mat(1, 1, arma::fill::ones);
    sc.h_dl = {unit};
    sc.h_ul = {unit};
    sc.hsi_bs = unit;
    sc.hsi_user = {unit};

    HybridPrecoders hp = analog_stage(sc, AnalogMethod::zf_mf, false, 8);
    digital_stage(sc, hp);
    const MuMetrics m = mu_metrics(sc, hp);
    CHECK(m.sinr_dl[0] == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(m.sinr_ul[0] == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("lifting the CA constraint improves the sum rate at 30 dB")
{
    const MultiuserConfig cfg = fig5_config();
    double ca = 0.0, noca = 0.0, ca_as = 0.0;
    const std::size_t trials = 100;
    for (std::uint64_t t = 0; t < trials; ++t)
    {
        MultiuserScenario sc = build_scenario(cfg, derive_seed(8181, t));
        sc.budget.snr_db = 30.0;
        const double a = mu_scheme_asr(sc, MuScheme::zf_mf_muser, cfg.angle_grid);
        const double b = mu_scheme_asr(sc, MuScheme::angle_search_muser, cfg.angle_grid);
        const double c = mu_scheme_asr(sc, MuScheme::zf_mf_noca_muser, cfg.angle_grid);
        for (double v : {a, b, c})
        {
            CHECK(std::isfinite(v));
            CHECK(v > 0.0);
        }
        ca += a;
        ca_as += b;
        noca += c;
    }
    CHECK(noca / trials > ca / trials);
    CHECK(noca / trials > ca_as / trials);
}

TEST_CASE("mu_sweep single cell matches a direct evaluation and stays finite")
{
    const MultiuserConfig cfg = fig5_config();
    const SweepTable t =
        mu_sweep(cfg, {MuScheme::zf_mf_muser}, {20.0}, 5, 3456);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].k_users.has_value());
    CHECK(*t.rows[0].k_users == 2);

    double acc = 0.0;
    for (std::uint64_t tr = 0; tr < 5; ++tr)
    {
        MultiuserScenario sc = build_scenario(cfg, derive_seed(3456, tr));
        sc.budget.snr_db = 20.0;
        acc += mu_scheme_asr(sc, MuScheme::zf_mf_muser, cfg.angle_grid);
    }
    CHECK(t.rows[0].mean_asr == doctest::Approx(acc / 5.0).epsilon(1e-12));
    CHECK(std::isfinite(t.rows[0].mean_asr));
    CHECK(t.rows[0].mean_asr >= 0.0);
}

TEST_CASE("multiuser sweeps are deterministic across thread counts")
{
    const MultiuserConfig cfg = fig5_config();
    const std::vector<MuScheme> schemes{MuScheme::zf_mf_muser, MuScheme::zf_mf_noca_muser};
    const SweepTable one = mu_sweep(cfg, schemes, {10.0, 30.0}, 8, 99, 1);
    const SweepTable four = mu_sweep(cfg, schemes, {10.0, 30.0}, 8, 99, 4);
    CHECK(one.to_csv() == four.to_csv());
    CHECK(one.to_csv().rfind("sweep_var,scheme,mean_asr,std_asr,trials,seed,k_users\n", 0) == 0);
}

TEST_CASE("scenario invariants")
{
    MultiuserConfig cfg = fig5_config();
    cfg.k_users = 0;
    CHECK_THROWS_AS(build_scenario(cfg, 1), std::invalid_argument);

    MultiuserConfig mismatch = fig5_config();
    mismatch.m_rf = 3; // != k_users
    CHECK_THROWS_AS(build_scenario(mismatch, 1), std::invalid_argument);

    CHECK_THROWS_AS(parse_mu_scheme("dirty_paper"), std::invalid_argument);
    for (MuScheme s :
         {MuScheme::zf_mf_muser, MuScheme::angle_search_muser, MuScheme::zf_mf_noca_muser})
        CHECK(parse_mu_scheme(mu_scheme_name(s)) == s);
}

TEST_SUITE_END();
