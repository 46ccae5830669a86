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
#include <complex>
#include <limits>

#include "fdmm/fdlink.hpp"
#include "fdmm/rng.hpp"

using namespace fdmm;
using cd = std::complex<double>;

namespace
{
    constexpr double kInf = std::numeric_limits<double>::infinity();

    ChannelMatrix scalar_channel(cd gain)
    {
        ChannelMatrix h;
        h.gains = arma::cx_mat(1, 1);
        h.gains(0, 0) = gain;
        return h;
    }

    FdLink scalar_link(double snr_db, double si_db)
    {
        return FdLink(scalar_channel(1.0), scalar_channel(1.0), scalar_channel(1.0),
                      scalar_channel(1.0), LinkBudget{snr_db, si_db});
    }

    LinkConfig fig4_left_config()
    {
        LinkConfig cfg;
        cfg.tx = Ula(16);
        cfg.rx = Ula(8);
        cfg.d = 5.0;
        cfg.omega = M_PI;
        cfg.n_paths = 4;
        cfg.budget = LinkBudget{10.0, 25.0};
        cfg.angle_grid = 32;
        return cfg;
    }

    Awv unit_awv(std::size_t n, std::uint64_t seed)
    {
        Rng rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        arma::cx_vec v(n);
        for (auto &x : v)
            x = cd(gauss(rng), gauss(rng));
        return make_unconstrained(v);
    }
}

TEST_SUITE_BEGIN("fdlink");

TEST_CASE("scalar link sanity: SINR equals P without interference")
{
    const FdLink link = scalar_link(10.0, -kInf);
    const Awv one = make_unconstrained(arma::cx_vec{cd(1.0, 0.0)});
    const LinkMetrics m = link_metrics(link, one, one, one, one);
    CHECK(m.sinr1 == doctest::Approx(10.0));
    CHECK(m.sinr2 == doctest::Approx(10.0));
    CHECK(m.asr == doctest::Approx(2.0 * std::log2(11.0)));
    CHECK(m.asr == doctest::Approx(std::log2(1.0 + m.sinr1) + std::log2(1.0 + m.sinr2)));
}

TEST_CASE("orthogonal receive weights zero out a direction")
{
    // 2x2 identity-like channels; w1 orthogonal to both signal and SI
    ChannelMatrix h;
    h.gains = arma::cx_mat(2, 2, arma::fill::zeros);
    h.gains(0, 0) = 1.0;
    const FdLink link(h, h, h, h, LinkBudget{10.0, 0.0});
    const Awv f = make_unconstrained(arma::cx_vec{cd(1, 0), cd(0, 0)});
    const Awv w_orth = make_unconstrained(arma::cx_vec{cd(0, 0), cd(1, 0)});
    const LinkMetrics m = link_metrics(link, f, w_orth, f, w_orth);
    CHECK(m.sinr1 == doctest::Approx(0.0));
    CHECK(m.sinr2 == doctest::Approx(0.0));
    CHECK(m.asr == doctest::Approx(0.0));
}

TEST_CASE("link_metrics rejects non-unit AWVs and wrong lengths")
{
    const FdLink link = scalar_link(0.0, 0.0);
    Awv bad;
    bad.weights = arma::cx_vec{cd(0.5, 0.0)};
    const Awv one = make_unconstrained(arma::cx_vec{cd(1.0, 0.0)});
    CHECK_THROWS_AS(link_metrics(link, bad, one, one, one), std::invalid_argument);

    const Awv wrong_len = unit_awv(3, 8);
    CHECK_THROWS_AS(link_metrics(link, wrong_len, one, one, one), std::invalid_argument);
}

TEST_CASE("FdLink validates SI channel dimensions")
{
    ChannelMatrix h12, h21, si_good, si_bad;
    h12.gains = arma::cx_mat(8, 16, arma::fill::ones);  // node1 16 tx -> node2 8 rx
    h21.gains = arma::cx_mat(8, 16, arma::fill::ones);  // node2 16 tx -> node1 8 rx
    si_good.gains = arma::cx_mat(8, 16, arma::fill::ones);
    si_bad.gains = arma::cx_mat(16, 8, arma::fill::ones);
    CHECK_NOTHROW(FdLink(h12, h21, si_good, si_good, LinkBudget{}));
    CHECK_THROWS_AS(FdLink(h12, h21, si_bad, si_good, LinkBudget{}), std::invalid_argument);
}

TEST_CASE("upper bound on scalar and rank-one links")
{
    const FdLink link = scalar_link(10.0, 25.0);
    CHECK(upper_bound(link).asr == doctest::Approx(2.0 * std::log2(11.0)));

    // rank-one H with ||H||_F^2 = nt*nr has sigma_max^2 = nt*nr
    std::vector<PathComponent> one_path{{1.0, SteeringAngle(0.3), SteeringAngle(-0.2)}};
    const ChannelMatrix h = sparse_channel(16, 8, one_path);
    const ChannelMatrix si = los_si_channel(ArrayPlacement(Ula(16), Ula(8), 5.0, M_PI));
    const FdLink l2(h, h, si, si, LinkBudget{0.0, 25.0});
    CHECK(upper_bound(l2).sinr1 == doctest::Approx(128.0).epsilon(1e-9));
}

TEST_CASE("upper bound dominates every AWV choice")
{
    const LinkRealization lr = build_link(fig4_left_config(), 2211);
    const double bound = upper_bound(lr.link).asr;
    for (std::uint64_t s = 0; s < 1000; ++s)
    {
        const Awv f1 = unit_awv(16, derive_seed(1, 4 * s + 0));
        const Awv w1 = unit_awv(8, derive_seed(1, 4 * s + 1));
        const Awv f2 = unit_awv(16, derive_seed(1, 4 * s + 2));
        const Awv w2 = unit_awv(8, derive_seed(1, 4 * s + 3));
        CHECK(link_metrics(lr.link, f1, w1, f2, w2).asr <= bound + 1e-9);
    }
}

TEST_CASE("upper bound ignores the SI budget")
{
    LinkRealization lr = build_link(fig4_left_config(), 5);
    const double a = upper_bound(lr.link).asr;
    lr.link.budget.si_db = -kInf;
    CHECK(upper_bound(lr.link).asr == doctest::Approx(a));
}

TEST_CASE("build_link is deterministic and dimensioned per the captions")
{
    const LinkConfig cfg = fig4_left_config();
    const LinkRealization a = build_link(cfg, 42);
    const LinkRealization b = build_link(cfg, 42);
    CHECK(arma::abs(a.link.h12.gains - b.link.h12.gains).max() == 0.0);
    CHECK(arma::abs(a.link.h21.gains - b.link.h21.gains).max() == 0.0);
    CHECK(arma::abs(a.link.hsi1.gains - b.link.hsi1.gains).max() == 0.0);

    // 16 Tx / 8 Rx at both nodes
    CHECK(a.link.h12.n_rx() == 8);
    CHECK(a.link.h12.n_tx() == 16);
    CHECK(a.link.hsi1.n_rx() == 8);
    CHECK(a.link.hsi1.n_tx() == 16);

    // all-16 configuration (omega = pi/8; at d = 5 collinear 16x16 arrays
    // would overlap, which los_si_channel rejects)
    LinkConfig sixteen = cfg;
    sixteen.rx = Ula(16);
    sixteen.omega = M_PI / 8.0;
    const LinkRealization c = build_link(sixteen, 42);
    CHECK(c.link.h12.n_rx() == 16);
    CHECK(c.link.hsi1.n_tx() == 16);
}

TEST_CASE("zf_mf nulls SI exactly without CA and degrades gracefully with CA")
{
    const LinkRealization lr = build_link(fig4_left_config(), 99);

    const LinkBeamformers noca = zf_mf(lr.link, false);
    const double resid1 = std::abs(arma::cdot(noca.w1.weights, lr.link.hsi1.gains * noca.f1.weights));
    const double resid2 = std::abs(arma::cdot(noca.w2.weights, lr.link.hsi2.gains * noca.f2.weights));
    CHECK(resid1 <= 1e-10);
    CHECK(resid2 <= 1e-10);

    // with the SI channel zeroed the ZF step degenerates into matched receive
    ChannelMatrix zero_si;
    zero_si.gains = arma::cx_mat(8, 16, arma::fill::zeros);
    const FdLink no_si(lr.link.h12, lr.link.h21, zero_si, zero_si, lr.link.budget);
    const LinkBeamformers mf = zf_mf(no_si, false);
    const arma::cx_vec expect = no_si.h21.gains * mf.f2.weights;
    CHECK(std::abs(arma::cdot(mf.w1.weights, expect)) == doctest::Approx(arma::norm(expect)));
}

TEST_CASE("CA projection costs rate: zf_mf with CA stays below zf_mf without CA")
{
    const LinkConfig cfg = fig4_left_config();
    double ca_mean = 0.0, noca_mean = 0.0;
    const std::size_t trials = 100;
    for (std::uint64_t t = 0; t < trials; ++t)
    {
        const LinkRealization lr = build_link(cfg, derive_seed(606, t));
        ca_mean += scheme_asr(lr, Scheme::zf_mf_ca, cfg.angle_grid);
        noca_mean += scheme_asr(lr, Scheme::zf_mf_noca, cfg.angle_grid);
        // CA residual SI is nonzero
        const LinkBeamformers ca = zf_mf(lr.link, true);
        CHECK(std::abs(arma::cdot(ca.w1.weights, lr.link.hsi1.gains * ca.f1.weights)) > 0.0);
    }
    CHECK(ca_mean / trials < noca_mean / trials);
}

TEST_CASE("angle_search matches a brute-force grid enumeration on small instances")
{
    LinkConfig cfg;
    cfg.tx = Ula(4);
    cfg.rx = Ula(4);
    cfg.d = 2.5;
    cfg.omega = 0.6;
    cfg.n_paths = 2;
    cfg.budget = LinkBudget{8.0, 15.0};

    const std::size_t g = 6;
    const arma::vec grid = cosine_grid(g);
    for (std::uint64_t s = 0; s < 4; ++s)
    {
        const LinkRealization lr = build_link(cfg, derive_seed(17, s));
        const AngleSearchResult found = angle_search(lr.link, g);

        double brute_best = -1.0;
        for (std::size_t i1 = 0; i1 < g; ++i1)
            for (std::size_t j1 = 0; j1 < g; ++j1)
                for (std::size_t i2 = 0; i2 < g; ++i2)
                    for (std::size_t j2 = 0; j2 < g; ++j2)
                    {
                        const LinkMetrics m = link_metrics(
                            lr.link, make_steering(4, SteeringAngle(grid(i1))),
                            make_steering(4, SteeringAngle(grid(j1))),
                            make_steering(4, SteeringAngle(grid(i2))),
                            make_steering(4, SteeringAngle(grid(j2))));
                        brute_best = std::max(brute_best, m.asr);
                    }
        // refinement never loses to the grid optimum
        CHECK(found.asr >= brute_best - 1e-9);
    }
}

TEST_CASE("angle_search reduces to beam steering on single-path channels without SI")
{
    LinkConfig cfg;
    cfg.tx = Ula(16);
    cfg.rx = Ula(16);
    cfg.d = 5.0;
    cfg.omega = 0.0;
    cfg.n_paths = 1;
    cfg.budget = LinkBudget{10.0, -kInf};
    cfg.angle_grid = 32;

    const LinkRealization lr = build_link(cfg, 31337);
    const AngleSearchResult res = angle_search(lr.link, cfg.angle_grid);

    const double tol = 1.0 / static_cast<double>(cfg.angle_grid) + 1e-9;
    CHECK(std::fabs(res.omega1 - lr.paths12[0].aod.value) <= tol);
    CHECK(std::fabs(res.psi2 - lr.paths12[0].aoa.value) <= tol);
    CHECK(std::fabs(res.omega2 - lr.paths21[0].aod.value) <= tol);
    CHECK(std::fabs(res.psi1 - lr.paths21[0].aoa.value) <= tol);
}

TEST_CASE("angle_search dominates on-grid beam steering pointwise")
{
    // place the strongest path angles exactly on the search grid so the
    // beam-steering point belongs to the feasible set
    const std::size_t g = 16;
    const arma::vec grid = cosine_grid(g);
    LinkConfig cfg;
    cfg.tx = Ula(8);
    cfg.rx = Ula(8);
    cfg.d = 4.0;
    cfg.omega = M_PI / 8.0;
    cfg.budget = LinkBudget{10.0, 25.0};

    LinkRealization lr = build_link(cfg, 9090);
    std::vector<PathComponent> p12{{2.0, SteeringAngle(grid(3)), SteeringAngle(grid(10))}};
    std::vector<PathComponent> p21{{2.0, SteeringAngle(grid(12)), SteeringAngle(grid(5))}};
    lr.paths12 = p12;
    lr.paths21 = p21;
    lr.link = FdLink(sparse_channel(8, 8, p12), sparse_channel(8, 8, p21), lr.link.hsi1,
                     lr.link.hsi2, cfg.budget);

    const double as = angle_search(lr.link, g).asr;
    const double bs = scheme_asr(lr, Scheme::beam_steering, g);
    CHECK(as >= bs - 1e-12);
}

TEST_CASE("angle_search beats beam steering when its angles are reachable")
{
    const LinkConfig cfg = fig4_left_config();
    std::size_t wins = 0;
    const std::size_t trials = 100;
    double acc_as = 0.0, acc_bs = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t)
    {
        const LinkRealization lr = build_link(cfg, derive_seed(4242, t));
        const double as = scheme_asr(lr, Scheme::angle_search, cfg.angle_grid);
        const double bs = scheme_asr(lr, Scheme::beam_steering, cfg.angle_grid);
        acc_as += as;
        acc_bs += bs;
        wins += (as >= bs);
    }
    CHECK(acc_as / trials > acc_bs / trials);
    CHECK(wins >= trials * 9 / 10);
}

TEST_CASE("angle_search rejects degenerate grids")
{
    const LinkRealization lr = build_link(fig4_left_config(), 3);
    CHECK_THROWS_AS(angle_search(lr.link, 1), std::invalid_argument);
}

TEST_CASE("scheme identifiers round-trip and reject unknowns")
{
    for (Scheme s : {Scheme::upper_bound, Scheme::beam_steering, Scheme::angle_search,
                     Scheme::zf_mf_ca, Scheme::zf_mf_noca})
        CHECK(parse_scheme(scheme_name(s)) == s);
    CHECK_THROWS_AS(parse_scheme("waterfilling"), std::invalid_argument);
}

TEST_CASE("sweep_snr: upper bound is monotone and dominates zf_mf_noca")
{
    LinkConfig cfg = fig4_left_config();
    const std::vector<double> snrs{0.0, 5.0, 10.0, 15.0, 20.0};
    const SweepTable ub = sweep_snr(cfg, Scheme::upper_bound, snrs, 1, 3131);
    for (std::size_t i = 1; i < ub.rows.size(); ++i)
        CHECK(ub.rows[i].mean_asr >= ub.rows[i - 1].mean_asr);

    const SweepTable noca = sweep_snr(cfg, Scheme::zf_mf_noca, snrs, 20, 3131);
    const SweepTable ub20 = sweep_snr(cfg, Scheme::upper_bound, snrs, 20, 3131);
    for (std::size_t i = 0; i < snrs.size(); ++i)
        CHECK(noca.rows[i].mean_asr <= ub20.rows[i].mean_asr);
}

TEST_CASE("ASR additivity and phase invariance")
{
    const LinkRealization lr = build_link(fig4_left_config(), 808);
    const LinkBeamformers b = zf_mf(lr.link, true);
    const LinkMetrics m = link_metrics(lr.link, b.f1, b.w1, b.f2, b.w2);
    CHECK(m.asr ==
          doctest::Approx(std::log2(1.0 + m.sinr1) + std::log2(1.0 + m.sinr2)).epsilon(1e-12));

    Awv f1_rot = b.f1;
    f1_rot.weights *= std::polar(1.0, 1.234);
    const LinkMetrics m2 = link_metrics(lr.link, f1_rot, b.w1, b.f2, b.w2);
    CHECK(m2.asr == doctest::Approx(m.asr).epsilon(1e-12));
}

TEST_CASE("stronger SI strictly lowers the rate for fixed AWVs")
{
    LinkRealization lr = build_link(fig4_left_config(), 515);
    const LinkBeamformers b = zf_mf(lr.link, true); // nonzero residual coupling
    lr.link.budget.si_db = 20.0;
    const double asr20 = link_metrics(lr.link, b.f1, b.w1, b.f2, b.w2).asr;
    lr.link.budget.si_db = 30.0;
    const double asr30 = link_metrics(lr.link, b.f1, b.w1, b.f2, b.w2).asr;
    CHECK(asr30 < asr20);
}

TEST_CASE("omega sweep: single point matches the SNR sweep cell and is 2*pi periodic")
{
    LinkConfig cfg = fig4_left_config();
    cfg.d = 1.0;
    cfg.rx = Ula(16);
    cfg.budget.snr_db = 10.0;

    const double w0 = M_PI / 8.0;
    LinkConfig at_w0 = cfg;
    at_w0.omega = w0;

    const SweepTable via_omega = sweep_omega(cfg, Scheme::zf_mf_ca, {w0}, 10, 161);
    const SweepTable via_snr = sweep_snr(at_w0, Scheme::zf_mf_ca, {10.0}, 10, 161);
    CHECK(via_omega.rows[0].mean_asr == doctest::Approx(via_snr.rows[0].mean_asr).epsilon(1e-12));

    // w0 + 2*pi normalizes back onto w0 up to the fmod rounding of 2*pi
    const SweepTable wrapped =
        sweep_omega(cfg, Scheme::zf_mf_ca, {w0 + 2.0 * M_PI}, 10, 161);
    CHECK(wrapped.rows[0].mean_asr ==
          doctest::Approx(via_omega.rows[0].mean_asr).epsilon(1e-12));
}

TEST_CASE("sweeps are byte-identical across thread counts")
{
    LinkConfig cfg = fig4_left_config();
    const std::vector<double> snrs{0.0, 10.0};
    const SweepTable one = sweep_snr(cfg, Scheme::angle_search, snrs, 16, 2020, 1);
    const SweepTable four = sweep_snr(cfg, Scheme::angle_search, snrs, 16, 2020, 4);
    CHECK(one.to_csv() == four.to_csv());

    const SweepTable again = sweep_snr(cfg, Scheme::angle_search, snrs, 16, 2020, 4);
    CHECK(again.to_csv() == four.to_csv());
}

TEST_CASE("geometry violations inside a parallel sweep surface as exceptions")
{
    // omega = pi at d = 1 lands Rx elements exactly on Tx elements; the
    // failure must propagate out of the worker pool
    LinkConfig cfg;
    cfg.tx = Ula(16);
    cfg.rx = Ula(16);
    cfg.d = 1.0;
    cfg.budget = LinkBudget{10.0, 25.0};
    CHECK_THROWS_AS(sweep_omega(cfg, Scheme::upper_bound, {0.0, M_PI}, 8, 5, 4),
                    std::invalid_argument);
}

TEST_CASE("sweep CSV schema")
{
    LinkConfig cfg = fig4_left_config();
    const SweepTable t = sweep_snr(cfg, Scheme::upper_bound, {0.0, 10.0}, 3, 7);
    const std::string csv = t.to_csv();
    CHECK(csv.rfind("sweep_var,scheme,mean_asr,std_asr,trials,seed\n", 0) == 0);
    CHECK(csv.find("upper_bound") != std::string::npos);
    CHECK(csv.find(",3,7") != std::string::npos);
}

TEST_SUITE_END();
