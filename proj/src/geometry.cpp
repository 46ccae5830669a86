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

#include "fdmm/geometry.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace fdmm
{

    Ula::Ula(std::size_t n, double spacing_wl) : n_elements(n), spacing(spacing_wl)
    {
        if (n_elements < 1)
            throw std::invalid_argument("Ula: n_elements must be >= 1");
        if (!(spacing > 0.0))
            throw std::invalid_argument("Ula: spacing must be > 0");
    }

    ArrayPlacement::ArrayPlacement(Ula tx_array, Ula rx_array, double d_wl, double omega_rad)
        : tx(tx_array), rx(rx_array), d(d_wl), omega(omega_rad)
    {
        if (!(d > 0.0))
            throw std::invalid_argument("ArrayPlacement: d must be > 0 (coincident first elements)");
        if (!std::isfinite(omega))
            throw std::invalid_argument("ArrayPlacement: omega must be finite");
        const double two_pi = 2.0 * M_PI;
        omega = std::fmod(omega, two_pi);
        if (omega < 0.0)
            omega += two_pi;
    }

    SteeringAngle::SteeringAngle(double v) : value(v)
    {
        if (!(std::fabs(value) <= 1.0))
            throw std::invalid_argument("SteeringAngle: |value| must be <= 1, got " + std::to_string(v));
    }

    arma::cx_vec steering_vector(std::size_t n, SteeringAngle omega)
    {
        if (n < 1)
            throw std::invalid_argument("steering_vector: n must be >= 1");
        arma::cx_vec a(n);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::size_t k = 0; k < n; ++k)
            a(k) = std::polar(scale, M_PI * static_cast<double>(k) * omega.value);
        return a;
    }

    std::vector<Point2> element_positions(const ArrayPlacement &p, Side side)
    {
        std::vector<Point2> pts;
        if (side == Side::tx)
        {
            pts.reserve(p.tx.n_elements);
            for (std::size_t m = 0; m < p.tx.n_elements; ++m)
                pts.push_back({-static_cast<double>(m) * p.tx.spacing, 0.0});
        }
        else
        {
            pts.reserve(p.rx.n_elements);
            const double cw = std::cos(p.omega);
            const double sw = std::sin(p.omega);
            for (std::size_t n = 0; n < p.rx.n_elements; ++n)
            {
                const double t = static_cast<double>(n) * p.rx.spacing;
                pts.push_back({p.d + t * cw, t * sw});
            }
        }
        return pts;
    }

    bool far_field_ok(double r, double aperture_d)
    {
        return r >= 2.0 * aperture_d * aperture_d;
    }

    double si_far_field_range(const Ula &tx, const Ula &rx)
    {
        const double dt = tx.aperture();
        const double dr = rx.aperture();
        return 2.0 * (dt * dt + dr * dr);
    }

    arma::vec cosine_grid(std::size_t g)
    {
        if (g < 1)
            throw std::invalid_argument("cosine_grid: g must be >= 1");
        arma::vec grid(g);
        for (std::size_t i = 0; i < g; ++i)
            grid(i) = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(g);
        return grid;
    }
}
