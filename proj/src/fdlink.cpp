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

#include "fdmm/fdlink.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fdmm/csv.hpp"
#include "fdmm/parallel.hpp"
#include "fdmm/rng.hpp"

namespace fdmm
{
    namespace
    {
        void require_unit(const Awv &a, const char *name)
        {
            if (std::fabs(arma::norm(a.weights) - 1.0) > 1e-9)
                throw std::invalid_argument(std::string("link_metrics: AWV ") + name +
                                            " is not unit-norm");
        }

        double sinr(double p, double p_si, std::complex<double> signal, std::complex<double> si)
        {
            return p * std::norm(signal) / (p_si * std::norm(si) + 1.0);
        }
    }

    double LinkBudget::p() const { return std::pow(10.0, snr_db / 10.0); }

    double LinkBudget::p_si() const
    {
        if (std::isinf(si_db) && si_db < 0.0)
            return 0.0;
        return p() * std::pow(10.0, si_db / 10.0);
    }

    FdLink::FdLink(ChannelMatrix h12_, ChannelMatrix h21_, ChannelMatrix hsi1_,
                   ChannelMatrix hsi2_, LinkBudget budget_)
        : h12(std::move(h12_)), h21(std::move(h21_)), hsi1(std::move(hsi1_)),
          hsi2(std::move(hsi2_)), budget(budget_)
    {
        // node 1: n_tx1 = h12 cols, n_rx1 = h21 rows; node 2 mirrored
        if (hsi1.n_rx() != h21.n_rx() || hsi1.n_tx() != h12.n_tx())
            throw std::invalid_argument("FdLink: hsi1 must be (n_rx1 x n_tx1)");
        if (hsi2.n_rx() != h12.n_rx() || hsi2.n_tx() != h21.n_tx())
            throw std::invalid_argument("FdLink: hsi2 must be (n_rx2 x n_tx2)");
    }

    LinkMetrics link_metrics(const FdLink &link, const Awv &f1, const Awv &w1,
                             const Awv &f2, const Awv &w2)
    {
        require_unit(f1, "f1");
        require_unit(w1, "w1");
        require_unit(f2, "f2");
        require_unit(w2, "w2");
        if (f1.size() != link.h12.n_tx() || w1.size() != link.h21.n_rx() ||
            f2.size() != link.h21.n_tx() || w2.size() != link.h12.n_rx())
            throw std::invalid_argument("link_metrics: AWV lengths do not match the link");

        const double p = link.budget.p();
        const double p_si = link.budget.p_si();

        const std::complex<double> g1 = arma::cdot(w1.weights, link.h21.gains * f2.weights);
        const std::complex<double> q1 = arma::cdot(w1.weights, link.hsi1.gains * f1.weights);
        const std::complex<double> g2 = arma::cdot(w2.weights, link.h12.gains * f1.weights);
        const std::complex<double> q2 = arma::cdot(w2.weights, link.hsi2.gains * f2.weights);

        LinkMetrics m;
        m.sinr1 = sinr(p, p_si, g1, q1);
        m.sinr2 = sinr(p, p_si, g2, q2);
        m.asr = std::log2(1.0 + m.sinr1) + std::log2(1.0 + m.sinr2);
        return m;
    }

    LinkMetrics upper_bound(const FdLink &link)
    {
        const double p = link.budget.p();
        const double s21 = arma::svd(link.h21.gains).max();
        const double s12 = arma::svd(link.h12.gains).max();

        LinkMetrics m;
        m.sinr1 = p * s21 * s21;
        m.sinr2 = p * s12 * s12;
        m.asr = std::log2(1.0 + m.sinr1) + std::log2(1.0 + m.sinr2);
        return m;
    }

    LinkRealization build_link(const LinkConfig &cfg, std::uint64_t seed)
    {
        ArrayPlacement placement(cfg.tx, cfg.rx, cfg.d, cfg.omega);

        auto paths12 = random_paths(cfg.n_paths, derive_seed(seed, 0));
        auto paths21 = random_paths(cfg.n_paths, derive_seed(seed, 1));

        ChannelMatrix h12 = sparse_channel(cfg.tx.n_elements, cfg.rx.n_elements, paths12);
        ChannelMatrix h21 = sparse_channel(cfg.tx.n_elements, cfg.rx.n_elements, paths21);
        ChannelMatrix hsi = los_si_channel(placement);

        return {FdLink(std::move(h12), std::move(h21), hsi, hsi, cfg.budget),
                std::move(paths12), std::move(paths21)};
    }

    Scheme parse_scheme(const std::string &name)
    {
        if (name == "upper_bound")
            return Scheme::upper_bound;
        if (name == "beam_steering")
            return Scheme::beam_steering;
        if (name == "angle_search")
            return Scheme::angle_search;
        if (name == "zf_mf_ca")
            return Scheme::zf_mf_ca;
        if (name == "zf_mf_noca")
            return Scheme::zf_mf_noca;
        throw std::invalid_argument("unknown scheme identifier '" + name + "'");
    }

    std::string scheme_name(Scheme s)
    {
        switch (s)
        {
        case Scheme::upper_bound:
            return "upper_bound";
        case Scheme::beam_steering:
            return "beam_steering";
        case Scheme::angle_search:
            return "angle_search";
        case Scheme::zf_mf_ca:
            return "zf_mf_ca";
        case Scheme::zf_mf_noca:
            return "zf_mf_noca";
        }
        throw std::invalid_argument("unknown scheme value");
    }

    double scheme_asr(const LinkRealization &lr, Scheme s, std::size_t angle_grid)
    {
        switch (s)
        {
        case Scheme::upper_bound:
            return upper_bound(lr.link).asr;
        case Scheme::beam_steering:
        {
            // paths12 set f1/w2, paths21 set f2/w1
            auto [f1, w2] = beam_steering_pair(lr.paths12, lr.link.h12.n_tx(), lr.link.h12.n_rx());
            auto [f2, w1] = beam_steering_pair(lr.paths21, lr.link.h21.n_tx(), lr.link.h21.n_rx());
            return link_metrics(lr.link, f1, w1, f2, w2).asr;
        }
        case Scheme::angle_search:
            return angle_search(lr.link, angle_grid).asr;
        case Scheme::zf_mf_ca:
        case Scheme::zf_mf_noca:
        {
            auto b = zf_mf(lr.link, s == Scheme::zf_mf_ca);
            return link_metrics(lr.link, b.f1, b.w1, b.f2, b.w2).asr;
        }
        }
        throw std::invalid_argument("unknown scheme value");
    }

    std::pair<double, double> mean_std(const std::vector<double> &values)
    {
        const std::size_t n = values.size();
        if (n == 0)
            return {0.0, 0.0};
        double sum = 0.0;
        for (double v : values)
            sum += v;
        const double mean = sum / static_cast<double>(n);
        if (n == 1)
            return {mean, 0.0};
        double ss = 0.0;
        for (double v : values)
            ss += (v - mean) * (v - mean);
        return {mean, std::sqrt(ss / static_cast<double>(n - 1))};
    }

    namespace
    {
        // Shared sweep driver: `point_cfg` maps (cfg, point) to the config a
        // trial link is built from; SNR sweeps reuse one link per trial.
        TrialResults sweep_core(const LinkConfig &cfg, Scheme s, const std::vector<double> &points,
                                std::size_t trials, std::uint64_t seed, unsigned threads,
                                bool vary_omega)
        {
            if (trials < 1)
                throw std::invalid_argument("sweep: trials must be >= 1");
            if (points.empty())
                throw std::invalid_argument("sweep: empty point list");

            TrialResults res;
            res.points = points;
            res.asr.assign(points.size(), std::vector<double>(trials, 0.0));

            parallel_for(trials, threads, [&](std::size_t t)
                         {
                const std::uint64_t trial_seed = derive_seed(seed, t);
                if (vary_omega)
                {
                    for (std::size_t pi = 0; pi < points.size(); ++pi)
                    {
                        LinkConfig c = cfg;
                        c.omega = points[pi];
                        LinkRealization lr = build_link(c, trial_seed);
                        res.asr[pi][t] = scheme_asr(lr, s, c.angle_grid);
                    }
                }
                else
                {
                    LinkRealization lr = build_link(cfg, trial_seed);
                    for (std::size_t pi = 0; pi < points.size(); ++pi)
                    {
                        lr.link.budget.snr_db = points[pi];
                        res.asr[pi][t] = scheme_asr(lr, s, cfg.angle_grid);
                    }
                } });
            return res;
        }

        SweepTable aggregate(const TrialResults &tr, const std::string &var_name, Scheme s,
                             std::size_t trials, std::uint64_t seed)
        {
            SweepTable table;
            table.sweep_var_name = var_name;
            for (std::size_t pi = 0; pi < tr.points.size(); ++pi)
            {
                auto [mean, sd] = mean_std(tr.asr[pi]);
                table.rows.push_back({tr.points[pi], scheme_name(s), mean, sd, trials, seed, std::nullopt});
            }
            return table;
        }
    }

    TrialResults sweep_snr_trials(const LinkConfig &cfg, Scheme s, const std::vector<double> &snr_db,
                                  std::size_t trials, std::uint64_t seed, unsigned threads)
    {
        return sweep_core(cfg, s, snr_db, trials, seed, threads, false);
    }

    TrialResults sweep_omega_trials(const LinkConfig &cfg, Scheme s, const std::vector<double> &omegas,
                                    std::size_t trials, std::uint64_t seed, unsigned threads)
    {
        return sweep_core(cfg, s, omegas, trials, seed, threads, true);
    }

    SweepTable sweep_snr(const LinkConfig &cfg, Scheme s, const std::vector<double> &snr_db,
                         std::size_t trials, std::uint64_t seed, unsigned threads)
    {
        return aggregate(sweep_snr_trials(cfg, s, snr_db, trials, seed, threads), "snr_db", s,
                         trials, seed);
    }

    SweepTable sweep_omega(const LinkConfig &cfg, Scheme s, const std::vector<double> &omegas,
                           std::size_t trials, std::uint64_t seed, unsigned threads)
    {
        return aggregate(sweep_omega_trials(cfg, s, omegas, trials, seed, threads), "omega", s,
                         trials, seed);
    }

    void SweepTable::write_csv(std::ostream &os) const
    {
        bool with_k = false;
        for (const auto &row : rows)
            if (row.k_users)
                with_k = true;

        os << "sweep_var,scheme,mean_asr,std_asr,trials,seed";
        if (with_k)
            os << ",k_users";
        os << '\n';
        for (const auto &row : rows)
        {
            os << format_double(row.sweep_var) << ',' << row.scheme << ','
               << format_double(row.mean_asr) << ',' << format_double(row.std_asr) << ','
               << row.trials << ',' << row.seed;
            if (with_k)
                os << ',' << (row.k_users ? *row.k_users : 0);
            os << '\n';
        }
    }

    std::string SweepTable::to_csv() const
    {
        std::ostringstream oss;
        write_csv(oss);
        return oss.str();
    }
}
