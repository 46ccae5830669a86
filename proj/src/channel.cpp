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

#include "fdmm/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "fdmm/csv.hpp"
#include "fdmm/rng.hpp"

namespace fdmm
{
    namespace
    {
        constexpr double kMinElementDistance = 1e-6; // wavelengths

        void scale_to_frobenius(arma::cx_mat &m, double target)
        {
            const double fro2 = std::pow(arma::norm(m, "fro"), 2);
            if (!(fro2 > 0.0))
                throw std::invalid_argument("channel normalization undefined for an all-zero matrix");
            m *= std::sqrt(target / fro2);
        }
    }

    arma::cx_mat near_field_gains(const ArrayPlacement &p)
    {
        const auto tx_pos = element_positions(p, Side::tx);
        const auto rx_pos = element_positions(p, Side::rx);

        arma::cx_mat h(rx_pos.size(), tx_pos.size());
        for (std::size_t n = 0; n < rx_pos.size(); ++n)
            for (std::size_t m = 0; m < tx_pos.size(); ++m)
            {
                const double r = std::hypot(rx_pos[n].x - tx_pos[m].x, rx_pos[n].y - tx_pos[m].y);
                if (r < kMinElementDistance)
                    throw std::invalid_argument(
                        "near_field_gains: Tx element " + std::to_string(m) + " and Rx element " +
                        std::to_string(n) + " are closer than 1e-6 wavelengths (overlapping arrays)");
                h(n, m) = std::polar(1.0 / r, -2.0 * M_PI * r);
            }
        return h;
    }

    ChannelMatrix los_si_channel(const ArrayPlacement &p)
    {
        ChannelMatrix h;
        h.gains = near_field_gains(p);
        h.kind = ChannelKind::los_si;
        const double target = static_cast<double>(p.tx.n_elements) * static_cast<double>(p.rx.n_elements);
        scale_to_frobenius(h.gains, target);
        h.norm_target = target;
        return h;
    }

    ChannelMatrix sparse_channel(std::size_t n_tx, std::size_t n_rx,
                                 const std::vector<PathComponent> &paths)
    {
        if (n_tx < 1 || n_rx < 1)
            throw std::invalid_argument("sparse_channel: array sizes must be >= 1");
        if (paths.empty())
            throw std::invalid_argument("sparse_channel: at least one path is required");

        bool any_nonzero = false;
        for (const auto &path : paths)
            if (std::abs(path.coeff) > 0.0)
                any_nonzero = true;
        if (!any_nonzero)
            throw std::invalid_argument("sparse_channel: all path coefficients are zero");

        arma::cx_mat h(n_rx, n_tx, arma::fill::zeros);
        for (const auto &path : paths)
            h += path.coeff * steering_vector(n_rx, path.aoa) * steering_vector(n_tx, path.aod).t();

        ChannelMatrix cm;
        cm.gains = std::move(h);
        cm.kind = ChannelKind::communication;
        const double target = static_cast<double>(n_tx) * static_cast<double>(n_rx);
        scale_to_frobenius(cm.gains, target);
        cm.norm_target = target;
        return cm;
    }

    std::vector<PathComponent> random_paths(std::size_t l, std::uint64_t seed)
    {
        if (l < 1)
            throw std::invalid_argument("random_paths: l must be >= 1");

        Rng rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0)); // CN(0,1) per component
        std::uniform_real_distribution<double> angle(-1.0, 1.0);

        std::vector<PathComponent> paths;
        paths.reserve(l);
        for (std::size_t i = 0; i < l; ++i)
        {
            const double re = gauss(rng);
            const double im = gauss(rng);
            const double aod = angle(rng);
            const double aoa = angle(rng);
            paths.push_back({std::complex<double>(re, im), SteeringAngle(aod), SteeringAngle(aoa)});
        }
        return paths;
    }

    ChannelMatrix mix_si(const ChannelMatrix &los, const ChannelMatrix &nlos, double epsilon)
    {
        if (!(epsilon >= 0.0))
            throw std::invalid_argument("mix_si: epsilon must be >= 0");

        const double target = static_cast<double>(los.n_tx()) * static_cast<double>(los.n_rx());

        ChannelMatrix out;
        out.kind = ChannelKind::composite_si;
        out.norm_target = target;

        if (epsilon == 0.0)
        {
            out.gains = los.gains;
            return out;
        }
        if (nlos.gains.n_rows != los.gains.n_rows || nlos.gains.n_cols != los.gains.n_cols)
            throw std::invalid_argument("mix_si: LOS and NLOS dimensions differ");

        arma::cx_mat hl = los.gains;
        arma::cx_mat hn = nlos.gains;
        scale_to_frobenius(hl, target);
        scale_to_frobenius(hn, target);

        out.gains = hl + std::sqrt(epsilon) * hn;
        scale_to_frobenius(out.gains, target);
        return out;
    }

    ChannelMatrix composite_si(const ArrayPlacement &p,
                               const std::vector<PathComponent> &nlos_paths,
                               double epsilon)
    {
        ChannelMatrix los = los_si_channel(p);
        if (epsilon == 0.0 || nlos_paths.empty())
            return mix_si(los, los, 0.0);

        ChannelMatrix nlos = sparse_channel(p.tx.n_elements, p.rx.n_elements, nlos_paths);
        nlos.kind = ChannelKind::nlos_si;
        return mix_si(los, nlos, epsilon);
    }

    arma::mat gain_map(const ChannelMatrix &h, std::size_t grid_size)
    {
        if (grid_size < 2)
            throw std::invalid_argument("gain_map: grid_size must be >= 2");

        const arma::vec grid = cosine_grid(grid_size);
        arma::cx_mat a_rx(h.n_rx(), grid_size);
        arma::cx_mat a_tx(h.n_tx(), grid_size);
        for (std::size_t i = 0; i < grid_size; ++i)
        {
            a_rx.col(i) = steering_vector(h.n_rx(), SteeringAngle(grid(i)));
            a_tx.col(i) = steering_vector(h.n_tx(), SteeringAngle(grid(i)));
        }
        return arma::abs(a_rx.t() * h.gains * a_tx);
    }

    void write_gain_map_csv(std::ostream &os, const arma::mat &map)
    {
        const arma::vec alpha = cosine_grid(map.n_rows);
        const arma::vec beta = cosine_grid(map.n_cols);

        os << "alpha\\beta";
        for (arma::uword j = 0; j < map.n_cols; ++j)
            os << ',' << format_double(beta(j));
        os << '\n';
        for (arma::uword i = 0; i < map.n_rows; ++i)
        {
            os << format_double(alpha(i));
            for (arma::uword j = 0; j < map.n_cols; ++j)
                os << ',' << format_double(map(i, j));
            os << '\n';
        }
    }

    void write_channel_csv(std::ostream &os, const ChannelMatrix &h)
    {
        os << "rx,tx,re,im\n";
        for (arma::uword n = 0; n < h.gains.n_rows; ++n)
            for (arma::uword m = 0; m < h.gains.n_cols; ++m)
                os << n << ',' << m << ',' << format_double(h.gains(n, m).real()) << ','
                   << format_double(h.gains(n, m).imag()) << '\n';
    }
}
