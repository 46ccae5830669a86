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

#include "fdmm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fdmm/csv.hpp"
#include "fdmm/rng.hpp"

namespace fdmm
{
    namespace
    {
        // ---- typed experiment parameters -------------------------------

        struct SparsityMapParams
        {
            std::vector<std::size_t> n_elements;
            double d = 5.0;
            double omega = 0.0;
            double spacing = 0.5;
            std::size_t grid = 64;
            std::uint64_t seed = 0;
        };

        struct P2pSweepParams
        {
            LinkConfig link;
            std::vector<double> snr_db;
            std::vector<Scheme> schemes;
            std::size_t trials = 1;
            std::uint64_t seed = 0;
        };

        struct OmegaSweepParams
        {
            LinkConfig link;
            std::vector<double> omegas;
            std::vector<Scheme> schemes;
            std::size_t trials = 1;
            std::uint64_t seed = 0;
        };

        struct MuSweepParams
        {
            MultiuserConfig mu;
            std::vector<double> snr_db;
            std::vector<MuScheme> schemes;
            std::size_t trials = 1;
            std::uint64_t seed = 0;
        };

        struct DecomposeParams
        {
            std::size_t count = 100000;
            std::size_t max_len = 64;
            std::uint64_t seed = 0;
        };

        std::size_t required_trials(const KeyValueConfig &cfg)
        {
            const std::size_t trials = cfg.get_size("experiment.trials");
            if (trials < 1)
                throw std::invalid_argument("field 'experiment.trials': must be >= 1");
            return trials;
        }

        LinkConfig link_from_config(const KeyValueConfig &cfg)
        {
            LinkConfig lc{Ula(cfg.get_size("link.tx"), cfg.get_double_or("link.spacing", 0.5)),
                          Ula(cfg.get_size("link.rx"), cfg.get_double_or("link.spacing", 0.5)),
                          cfg.get_double("link.d"),
                          cfg.get_double_or("link.omega", 0.0),
                          cfg.get_size_or("link.paths", 4),
                          LinkBudget{cfg.get_double_or("link.snr_db", 10.0),
                                     cfg.get_double("link.si_db")},
                          cfg.get_size_or("link.angle_grid", 32)};
            if (lc.n_paths < 1)
                throw std::invalid_argument("field 'link.paths': must be >= 1");
            return lc;
        }

        SparsityMapParams sparsity_params(const KeyValueConfig &cfg)
        {
            SparsityMapParams p;
            for (double v : cfg.get_double_list("map.n_elements"))
            {
                if (!(v >= 1.0) || v != std::floor(v))
                    throw std::invalid_argument("field 'map.n_elements': entries must be positive integers");
                p.n_elements.push_back(static_cast<std::size_t>(v));
            }
            p.d = cfg.get_double("map.d");
            p.omega = cfg.get_double_or("map.omega", 0.0);
            p.spacing = cfg.get_double_or("map.spacing", 0.5);
            p.grid = cfg.get_size_or("map.grid", 64);
            p.seed = cfg.get_u64("experiment.seed");
            if (p.grid < 2)
                throw std::invalid_argument("field 'map.grid': must be >= 2");
            return p;
        }

        P2pSweepParams p2p_params(const KeyValueConfig &cfg)
        {
            P2pSweepParams p;
            p.link = link_from_config(cfg);
            p.snr_db = cfg.get_double_list("sweep.snr_db");
            for (const auto &name : cfg.get_string_list("sweep.schemes"))
                p.schemes.push_back(parse_scheme(name));
            p.trials = required_trials(cfg);
            p.seed = cfg.get_u64("experiment.seed");
            return p;
        }

        OmegaSweepParams omega_params(const KeyValueConfig &cfg)
        {
            OmegaSweepParams p;
            p.link = link_from_config(cfg);
            p.omegas = cfg.get_double_list("sweep.omega");
            for (const auto &name : cfg.get_string_list("sweep.schemes"))
                p.schemes.push_back(parse_scheme(name));
            p.trials = required_trials(cfg);
            p.seed = cfg.get_u64("experiment.seed");
            return p;
        }

        MuSweepParams mu_params(const KeyValueConfig &cfg)
        {
            MuSweepParams p;
            const double spacing = cfg.get_double_or("scenario.spacing", 0.5);
            p.mu.bs_tx = Ula(cfg.get_size("scenario.bs_tx"), spacing);
            p.mu.bs_rx = Ula(cfg.get_size("scenario.bs_rx"), spacing);
            p.mu.user_tx = Ula(cfg.get_size("scenario.user_tx"), spacing);
            p.mu.user_rx = Ula(cfg.get_size("scenario.user_rx"), spacing);
            p.mu.d = cfg.get_double("scenario.d");
            p.mu.omega = cfg.get_double_or("scenario.omega", 0.0);
            p.mu.k_users = cfg.get_size("scenario.k_users");
            p.mu.n_paths = cfg.get_size_or("scenario.paths", 4);
            p.mu.budget = LinkBudget{30.0, cfg.get_double("scenario.si_db")};
            p.mu.angle_grid = cfg.get_size_or("scenario.angle_grid", 32);
            p.snr_db = cfg.get_double_list("sweep.snr_db");
            for (const auto &name : cfg.get_string_list("sweep.methods"))
                p.schemes.push_back(parse_mu_scheme(name));
            p.trials = required_trials(cfg);
            p.seed = cfg.get_u64("experiment.seed");
            if (p.mu.k_users < 1)
                throw std::invalid_argument("field 'scenario.k_users': must be >= 1");
            return p;
        }

        DecomposeParams decompose_params(const KeyValueConfig &cfg)
        {
            DecomposeParams p;
            p.count = cfg.get_size_or("decompose.count", 100000);
            p.max_len = cfg.get_size_or("decompose.max_len", 64);
            p.seed = cfg.get_u64("experiment.seed");
            if (p.count < 1)
                throw std::invalid_argument("field 'decompose.count': must be >= 1");
            if (p.max_len < 1)
                throw std::invalid_argument("field 'decompose.max_len': must be >= 1");
            return p;
        }

        // ---- artifact helpers -------------------------------------------

        void write_file(const std::string &path, const std::string &content)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw IoError("cannot open '" + path + "' for writing");
            out << content;
            if (!out)
                throw IoError("write failed for '" + path + "'");
        }

        std::string summary_line(const std::string &path, const std::string &content)
        {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "fnv64=0x%016llx",
                          static_cast<unsigned long long>(fnv1a64(content)));
            return "wrote " + path + " (" + std::string(buf) + ", " +
                   std::to_string(content.size()) + " bytes)";
        }

        // ---- SVG rendering ----------------------------------------------

        struct Rgb
        {
            int r, g, b;
        };

        Rgb ramp(double t) // 0 -> dark blue, 1 -> warm yellow
        {
            t = std::clamp(t, 0.0, 1.0);
            return {static_cast<int>(16 + t * (255 - 16)),
                    static_cast<int>(28 + t * (210 - 28)),
                    static_cast<int>(80 + t * (74 - 80))};
        }

        std::string svg_heatmap(const arma::mat &m)
        {
            const int cell = 8, margin = 24;
            const int w = margin * 2 + cell * static_cast<int>(m.n_cols);
            const int h = margin * 2 + cell * static_cast<int>(m.n_rows);
            const double mx = m.max();
            std::ostringstream svg;
            svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
                << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
            for (arma::uword i = 0; i < m.n_rows; ++i)
                for (arma::uword j = 0; j < m.n_cols; ++j)
                {
                    const double v = std::max(m(i, j), mx * 1e-8);
                    const double db = 20.0 * std::log10(v / mx); // [-160, 0]
                    const Rgb c = ramp(1.0 + std::max(db, -40.0) / 40.0);
                    svg << "<rect x='" << margin + cell * static_cast<int>(j) << "' y='"
                        << margin + cell * static_cast<int>(m.n_rows - 1 - i) << "' width='" << cell
                        << "' height='" << cell << "' fill='rgb(" << c.r << ',' << c.g << ',' << c.b
                        << ")'/>\n";
                }
            svg << "<text x='" << margin << "' y='14' font-size='12'>beta (tx angle) -&gt; ; "
                << "alpha (rx angle) up; 0 dB bright, -40 dB dark</text>\n</svg>\n";
            return svg.str();
        }

        std::string svg_linechart(const std::string &x_label,
                                  const std::vector<std::string> &names,
                                  const std::vector<std::vector<double>> &xs,
                                  const std::vector<std::vector<double>> &ys)
        {
            const int w = 640, h = 420, ml = 56, mr = 140, mt = 20, mb = 44;
            double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
            for (std::size_t s = 0; s < xs.size(); ++s)
                for (std::size_t i = 0; i < xs[s].size(); ++i)
                {
                    xmin = std::min(xmin, xs[s][i]);
                    xmax = std::max(xmax, xs[s][i]);
                    ymax = std::max(ymax, ys[s][i]);
                }
            if (!(xmax > xmin))
                xmax = xmin + 1.0;
            if (!(ymax > 0.0))
                ymax = 1.0;
            ymax *= 1.05;

            auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
            auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

            const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
            std::ostringstream svg;
            svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
                << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
            svg << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='"
                << h - mb << "' stroke='black'/>\n";
            svg << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
                << "' stroke='black'/>\n";
            for (int t = 0; t <= 4; ++t)
            {
                const double xv = xmin + (xmax - xmin) * t / 4.0;
                const double yv = ymin + (ymax - ymin) * t / 4.0;
                svg << "<text x='" << px(xv) - 8 << "' y='" << h - mb + 16
                    << "' font-size='10'>" << format_double(std::round(xv * 100) / 100) << "</text>\n";
                svg << "<text x='4' y='" << py(yv) + 4 << "' font-size='10'>"
                    << format_double(std::round(yv * 10) / 10) << "</text>\n";
            }
            svg << "<text x='" << (ml + w - mr) / 2 << "' y='" << h - 8 << "' font-size='11'>"
                << x_label << "</text>\n";
            svg << "<text x='10' y='14' font-size='11'>mean ASR (bits/s/Hz)</text>\n";
            for (std::size_t s = 0; s < names.size(); ++s)
            {
                svg << "<polyline fill='none' stroke='" << palette[s % 6] << "' stroke-width='1.5' points='";
                for (std::size_t i = 0; i < xs[s].size(); ++i)
                    svg << px(xs[s][i]) << ',' << py(ys[s][i]) << ' ';
                svg << "'/>\n";
                svg << "<text x='" << w - mr + 8 << "' y='" << mt + 14 * (s + 1) << "' fill='"
                    << palette[s % 6] << "' font-size='11'>" << names[s] << "</text>\n";
            }
            svg << "</svg>\n";
            return svg.str();
        }

        std::string table_csv(const SweepTable &table, std::uint64_t cfg_hash, std::uint64_t seed)
        {
            std::ostringstream out;
            write_csv_preamble(out, cfg_hash, seed);
            table.write_csv(out);
            return out.str();
        }

        std::string sweep_svg(const SweepTable &table, const std::string &x_label)
        {
            std::vector<std::string> names;
            std::vector<std::vector<double>> xs, ys;
            for (const auto &row : table.rows)
            {
                std::size_t idx = names.size();
                for (std::size_t i = 0; i < names.size(); ++i)
                    if (names[i] == row.scheme)
                        idx = i;
                if (idx == names.size())
                {
                    names.push_back(row.scheme);
                    xs.emplace_back();
                    ys.emplace_back();
                }
                xs[idx].push_back(row.sweep_var);
                ys[idx].push_back(row.mean_asr);
            }
            return svg_linechart(x_label, names, xs, ys);
        }

        // ---- statistics helpers ------------------------------------------

        struct Gap
        {
            double mean = 0.0;
            double se = 0.0;
            bool significant() const { return mean > 0.0 && (se == 0.0 || mean > 3.0 * se); }
        };

        Gap paired_gap(const std::vector<double> &a, const std::vector<double> &b)
        {
            std::vector<double> diff(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                diff[i] = a[i] - b[i];
            auto [mean, sd] = mean_std(diff);
            Gap g;
            g.mean = mean;
            g.se = a.empty() ? 0.0 : sd / std::sqrt(static_cast<double>(a.size()));
            return g;
        }

        std::string gap_detail(const Gap &g)
        {
            std::ostringstream out;
            out << "gap=" << format_double(g.mean) << " 3se=" << format_double(3.0 * g.se);
            return out.str();
        }

        double fraction_within_10db(const arma::mat &m)
        {
            const double floor_mag = m.max() * std::pow(10.0, -0.5); // 10 dB below max
            std::size_t count = 0;
            for (double v : m)
                if (v >= floor_mag)
                    ++count;
            return static_cast<double>(count) / static_cast<double>(m.n_elem);
        }

        // argmax-cell offset beta - alpha, wrapped into (-1, 1]
        double argmax_offset(const arma::mat &m)
        {
            const arma::uword idx = m.index_max();
            const arma::uword i_alpha = idx % m.n_rows;
            const arma::uword j_beta = idx / m.n_rows;
            const arma::vec alpha = cosine_grid(m.n_rows);
            const arma::vec beta = cosine_grid(m.n_cols);
            double off = beta(j_beta) - alpha(i_alpha);
            while (off > 1.0)
                off -= 2.0;
            while (off <= -1.0)
                off += 2.0;
            return off;
        }
    }

    ExperimentKind parse_experiment_kind(const std::string &name)
    {
        if (name == "sparsity-map")
            return ExperimentKind::sparsity_map;
        if (name == "p2p-sweep")
            return ExperimentKind::p2p_sweep;
        if (name == "omega-sweep")
            return ExperimentKind::omega_sweep;
        if (name == "multiuser-sweep")
            return ExperimentKind::multiuser_sweep;
        if (name == "decompose-check")
            return ExperimentKind::decompose_check;
        throw ConfigParseError("field 'experiment.kind': unknown experiment '" + name + "'");
    }

    std::vector<std::string> experiment_kind_names()
    {
        return {"sparsity-map", "p2p-sweep", "omega-sweep", "multiuser-sweep", "decompose-check"};
    }

    std::vector<std::string> run_experiment(const KeyValueConfig &cfg, const RunOptions &opts,
                                            std::ostream &log)
    {
        const ExperimentKind kind = parse_experiment_kind(cfg.get_string("experiment.kind"));
        const std::uint64_t seed = cfg.get_u64("experiment.seed");
        const std::uint64_t hash = cfg.content_hash();

        std::error_code ec;
        std::filesystem::create_directories(opts.out_dir, ec);
        if (ec)
            throw IoError("cannot create output directory '" + opts.out_dir + "': " + ec.message());
        auto out_path = [&](const std::string &name)
        { return (std::filesystem::path(opts.out_dir) / name).string(); };

        std::vector<std::string> summaries;
        auto emit = [&](const std::string &name, const std::string &content)
        {
            const std::string path = out_path(name);
            write_file(path, content);
            summaries.push_back(summary_line(path, content));
            log << summaries.back() << '\n';
        };

        switch (kind)
        {
        case ExperimentKind::sparsity_map:
        {
            const SparsityMapParams p = sparsity_params(cfg);
            for (std::size_t n : p.n_elements)
            {
                ArrayPlacement placement(Ula(n, p.spacing), Ula(n, p.spacing), p.d, p.omega);
                const arma::mat map = gain_map(los_si_channel(placement), p.grid);
                std::ostringstream csv;
                write_csv_preamble(csv, hash, seed);
                write_gain_map_csv(csv, map);
                emit("sparsity_map_n" + std::to_string(n) + ".csv", csv.str());
                if (opts.emit_svg)
                    emit("sparsity_map_n" + std::to_string(n) + ".svg", svg_heatmap(map));
            }
            break;
        }
        case ExperimentKind::p2p_sweep:
        {
            const P2pSweepParams p = p2p_params(cfg);
            SweepTable table;
            table.sweep_var_name = "snr_db";
            for (Scheme s : p.schemes)
            {
                SweepTable one = sweep_snr(p.link, s, p.snr_db, p.trials, p.seed, opts.threads);
                table.rows.insert(table.rows.end(), one.rows.begin(), one.rows.end());
            }
            emit("p2p_sweep.csv", table_csv(table, hash, seed));
            if (opts.emit_svg)
                emit("p2p_sweep.svg", sweep_svg(table, "SNR (dB)"));
            break;
        }
        case ExperimentKind::omega_sweep:
        {
            const OmegaSweepParams p = omega_params(cfg);
            SweepTable table;
            table.sweep_var_name = "omega";
            for (Scheme s : p.schemes)
            {
                SweepTable one = sweep_omega(p.link, s, p.omegas, p.trials, p.seed, opts.threads);
                table.rows.insert(table.rows.end(), one.rows.begin(), one.rows.end());
            }
            emit("omega_sweep.csv", table_csv(table, hash, seed));
            if (opts.emit_svg)
                emit("omega_sweep.svg", sweep_svg(table, "omega (rad)"));
            break;
        }
        case ExperimentKind::multiuser_sweep:
        {
            const MuSweepParams p = mu_params(cfg);
            const SweepTable table =
                mu_sweep(p.mu, p.schemes, p.snr_db, p.trials, p.seed, opts.threads);
            emit("multiuser_sweep.csv", table_csv(table, hash, seed));
            if (opts.emit_svg)
                emit("multiuser_sweep.svg", sweep_svg(table, "SNR (dB)"));
            break;
        }
        case ExperimentKind::decompose_check:
        {
            const DecomposeParams p = decompose_params(cfg);
            std::ostringstream csv;
            write_csv_preamble(csv, hash, seed);
            csv << "n,count,max_abs_err\n";
            std::vector<double> max_err(p.max_len + 1, 0.0);
            std::vector<std::size_t> counts(p.max_len + 1, 0);
            for (std::size_t i = 0; i < p.count; ++i)
            {
                const std::size_t len = 1 + (i % p.max_len);
                Rng rng(derive_seed(p.seed, i));
                std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
                arma::cx_vec v(len);
                for (std::size_t k = 0; k < len; ++k)
                    v(k) = std::complex<double>(gauss(rng), gauss(rng));
                const CaDecomposition dec = ca_decompose(v);
                const double err = arma::abs(dec.v1 + dec.v2 - v).max();
                max_err[len] = std::max(max_err[len], err);
                ++counts[len];
            }
            for (std::size_t len = 1; len <= p.max_len; ++len)
                if (counts[len] > 0)
                    csv << len << ',' << counts[len] << ',' << format_double(max_err[len]) << '\n';
            emit("decompose_check.csv", csv.str());
            break;
        }
        }
        return summaries;
    }

    std::vector<CheckResult> check_sparsity_contrast(std::size_t n_small, std::size_t n_large,
                                                     double d, std::size_t grid)
    {
        auto map_for = [&](std::size_t n)
        {
            const Ula arr(n);
            return gain_map(los_si_channel(ArrayPlacement(arr, arr, d, 0.0)), grid);
        };
        const double f_small = fraction_within_10db(map_for(n_small));
        const double f_large = fraction_within_10db(map_for(n_large));

        CheckResult res;
        res.name = "sparsity contrast n=" + std::to_string(n_large) + " vs n=" + std::to_string(n_small);
        res.pass = f_large < 0.5 * f_small;
        res.detail = "frac" + std::to_string(n_large) + "=" + format_double(f_large) + " frac" +
                     std::to_string(n_small) + "=" + format_double(f_small) + " (need < half)";
        return {res};
    }

    std::vector<CheckResult> check_ridge_monotone(std::size_t n, double d,
                                                  const std::vector<double> &omegas,
                                                  std::size_t grid)
    {
        std::vector<double> offsets;
        std::string trace;
        const Ula arr(n);
        for (double w : omegas)
        {
            offsets.push_back(
                argmax_offset(gain_map(los_si_channel(ArrayPlacement(arr, arr, d, w)), grid)));
            trace += (trace.empty() ? "" : " ") + format_double(offsets.back());
        }
        bool increasing = true, decreasing = true;
        for (std::size_t i = 1; i < offsets.size(); ++i)
        {
            increasing = increasing && offsets[i] > offsets[i - 1];
            decreasing = decreasing && offsets[i] < offsets[i - 1];
        }
        CheckResult res;
        res.name = "argmax-band offset monotone in omega";
        res.pass = (offsets.size() >= 2) && (increasing || decreasing);
        res.detail = "offsets: " + trace;
        return {res};
    }

    std::vector<CheckResult> check_p2p_ordering(const LinkConfig &cfg,
                                                const std::vector<double> &snr_db,
                                                std::size_t trials, std::uint64_t seed,
                                                unsigned threads)
    {
        const Scheme all[] = {Scheme::upper_bound, Scheme::zf_mf_noca, Scheme::angle_search,
                              Scheme::zf_mf_ca, Scheme::beam_steering};
        std::map<Scheme, TrialResults> results;
        for (Scheme s : all)
            results[s] = sweep_snr_trials(cfg, s, snr_db, trials, seed, threads);

        std::vector<CheckResult> checks;
        auto add_gap = [&](std::size_t pi, Scheme hi, Scheme lo)
        {
            const Gap g = paired_gap(results[hi].asr[pi], results[lo].asr[pi]);
            CheckResult res;
            res.name = "snr=" + format_double(snr_db[pi]) + ": " + scheme_name(hi) + " > " +
                       scheme_name(lo);
            res.pass = g.significant();
            res.detail = gap_detail(g);
            checks.push_back(res);
        };

        for (std::size_t pi = 0; pi < snr_db.size(); ++pi)
        {
            add_gap(pi, Scheme::upper_bound, Scheme::zf_mf_noca);
            add_gap(pi, Scheme::zf_mf_noca, Scheme::angle_search);
            add_gap(pi, Scheme::zf_mf_noca, Scheme::zf_mf_ca);
            add_gap(pi, Scheme::angle_search, Scheme::beam_steering);
            add_gap(pi, Scheme::zf_mf_ca, Scheme::beam_steering);

            if (snr_db[pi] >= 20.0)
            {
                const double m_ub = mean_std(results[Scheme::upper_bound].asr[pi]).first;
                const double m_noca = mean_std(results[Scheme::zf_mf_noca].asr[pi]).first;
                CheckResult res;
                res.name = "snr=" + format_double(snr_db[pi]) + ": zf_mf_noca within 10% of upper_bound";
                res.pass = m_noca >= 0.9 * m_ub;
                res.detail = "noca=" + format_double(m_noca) + " ub=" + format_double(m_ub);
                checks.push_back(res);
            }
        }
        return checks;
    }

    std::vector<CheckResult> check_omega_sensitivity(const LinkConfig &cfg,
                                                     const std::vector<double> &omegas,
                                                     std::size_t trials, std::uint64_t seed,
                                                     unsigned threads)
    {
        const TrialResults tr =
            sweep_omega_trials(cfg, Scheme::angle_search, omegas, trials, seed, threads);
        double lo = 1e300, hi = -1e300;
        for (std::size_t pi = 0; pi < tr.points.size(); ++pi)
        {
            const double m = mean_std(tr.asr[pi]).first;
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        CheckResult res;
        res.name = "angle_search ASR spread over omega > 5% of max";
        res.pass = (hi - lo) > 0.05 * hi;
        res.detail = "max=" + format_double(hi) + " min=" + format_double(lo) +
                     " spread=" + format_double(hi - lo);
        return {res};
    }

    std::vector<CheckResult> check_mu_floor(const MultiuserConfig &cfg, std::size_t trials,
                                            std::uint64_t seed, unsigned threads)
    {
        const std::vector<double> snr{30.0, 40.0};
        auto mean_at = [&](const TrialResults &tr, std::size_t pi)
        { return mean_std(tr.asr[pi]).first; };

        const TrialResults ca_zf =
            mu_sweep_trials(cfg, MuScheme::zf_mf_muser, snr, trials, seed, threads);
        const TrialResults ca_as =
            mu_sweep_trials(cfg, MuScheme::angle_search_muser, snr, trials, seed, threads);
        const TrialResults noca =
            mu_sweep_trials(cfg, MuScheme::zf_mf_noca_muser, snr, trials, seed, threads);

        const double zf30 = mean_at(ca_zf, 0), zf40 = mean_at(ca_zf, 1);
        const double as30 = mean_at(ca_as, 0), as40 = mean_at(ca_as, 1);
        const double no30 = mean_at(noca, 0), no40 = mean_at(noca, 1);

        std::vector<CheckResult> checks;
        auto growth = [](double a, double b) { return (b - a) / a; };
        checks.push_back({"zf_mf_muser growth 30->40 dB < 15%", growth(zf30, zf40) < 0.15,
                          "asr30=" + format_double(zf30) + " asr40=" + format_double(zf40) +
                              " growth=" + format_double(growth(zf30, zf40))});
        checks.push_back({"angle_search_muser growth 30->40 dB < 15%", growth(as30, as40) < 0.15,
                          "asr30=" + format_double(as30) + " asr40=" + format_double(as40) +
                              " growth=" + format_double(growth(as30, as40))});
        checks.push_back({"zf_mf_noca_muser growth 30->40 dB > 25%", growth(no30, no40) > 0.25,
                          "asr30=" + format_double(no30) + " asr40=" + format_double(no40) +
                              " growth=" + format_double(growth(no30, no40))});
        checks.push_back({"no-CA leads zf_mf_muser at 30 dB", no30 > zf30,
                          "noca=" + format_double(no30) + " ca=" + format_double(zf30)});
        checks.push_back({"no-CA leads angle_search_muser at 30 dB", no30 > as30,
                          "noca=" + format_double(no30) + " ca=" + format_double(as30)});
        return checks;
    }

    std::vector<CheckResult> check_decompose(std::size_t count, std::size_t max_len,
                                             std::uint64_t seed)
    {
        double worst = 0.0;
        double worst_mag_spread = 0.0;
        for (std::size_t i = 0; i < count; ++i)
        {
            const std::size_t len = 1 + (i % max_len);
            Rng rng(derive_seed(seed, i));
            std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
            arma::cx_vec v(len);
            for (std::size_t k = 0; k < len; ++k)
                v(k) = std::complex<double>(gauss(rng), gauss(rng));
            const CaDecomposition dec = ca_decompose(v);
            worst = std::max(worst, arma::abs(dec.v1 + dec.v2 - v).max());
            const arma::vec mags = arma::abs(dec.v1);
            worst_mag_spread = std::max(worst_mag_spread, mags.max() - mags.min());
        }
        CheckResult res;
        res.name = "ca_decompose reconstruction <= 1e-12 over " + std::to_string(count) + " vectors";
        res.pass = worst <= 1e-12 && worst_mag_spread <= 1e-12;
        res.detail = "max_err=" + format_double(worst) +
                     " max_amp_spread=" + format_double(worst_mag_spread);
        return {res};
    }

    std::vector<CheckResult> verify_experiment(const KeyValueConfig &cfg, unsigned threads,
                                               std::ostream &log)
    {
        const ExperimentKind kind = parse_experiment_kind(cfg.get_string("experiment.kind"));
        std::vector<CheckResult> checks;
        switch (kind)
        {
        case ExperimentKind::sparsity_map:
        {
            const SparsityMapParams p = sparsity_params(cfg);
            if (p.n_elements.size() < 2)
                throw std::invalid_argument(
                    "field 'map.n_elements': the sparsity check needs two array sizes");
            const auto [lo, hi] =
                std::minmax_element(p.n_elements.begin(), p.n_elements.end());
            checks = check_sparsity_contrast(*lo, *hi, p.d, p.grid);
            auto ridge = check_ridge_monotone(*hi, p.d, {0.0, M_PI / 8.0, M_PI / 4.0}, p.grid);
            checks.insert(checks.end(), ridge.begin(), ridge.end());
            break;
        }
        case ExperimentKind::p2p_sweep:
        {
            const P2pSweepParams p = p2p_params(cfg);
            checks = check_p2p_ordering(p.link, p.snr_db, p.trials, p.seed, threads);
            break;
        }
        case ExperimentKind::omega_sweep:
        {
            const OmegaSweepParams p = omega_params(cfg);
            checks = check_omega_sensitivity(p.link, p.omegas, p.trials, p.seed, threads);
            break;
        }
        case ExperimentKind::multiuser_sweep:
        {
            const MuSweepParams p = mu_params(cfg);
            checks = check_mu_floor(p.mu, p.trials, p.seed, threads);
            break;
        }
        case ExperimentKind::decompose_check:
        {
            const DecomposeParams p = decompose_params(cfg);
            checks = check_decompose(p.count, p.max_len, p.seed);
            break;
        }
        }
        for (const auto &c : checks)
            log << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  (" << c.detail << ")\n";
        return checks;
    }
}
