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

#ifndef FDMM_CHANNEL_HPP
#define FDMM_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fdmm/geometry.hpp"

namespace fdmm
{
    // One multipath component of a far-field channel.
    struct PathComponent
    {
        std::complex<double> coeff; // complex path gain
        SteeringAngle aod;          // cosine-domain departure angle
        SteeringAngle aoa;          // cosine-domain arrival angle
    };

    enum class ChannelKind
    {
        los_si,
        nlos_si,
        composite_si,
        communication
    };

    // Complex n_rx x n_tx gain matrix with provenance and a normalization
    // record. When norm_target is set, |gains|_F^2 equals that target
    // (relative error < 1e-9); nullopt marks a raw/unnormalized matrix.
    struct ChannelMatrix
    {
        arma::cx_mat gains;
        ChannelKind kind = ChannelKind::communication;
        std::optional<double> norm_target;

        std::size_t n_rx() const { return gains.n_rows; }
        std::size_t n_tx() const { return gains.n_cols; }
    };

    // Raw spherical-wavefront gains between every Tx/Rx element pair:
    // entry (n, m) = (1/r_nm) * exp(-j*2*pi*r_nm). No normalization.
    // Rejects placements where any element pair comes closer than 1e-6
    // wavelengths.
    arma::cx_mat near_field_gains(const ArrayPlacement &p);

    // Near-field LOS self-interference channel, Frobenius-normalized so
    // that |H|_F^2 = n_tx * n_rx.
    ChannelMatrix los_si_channel(const ArrayPlacement &p);

    // Far-field sparse multipath channel: sum of rank-one outer products
    //   sum_l coeff_l * a(n_rx, aoa_l) * a(n_tx, aod_l)^H,
    // Frobenius-normalized to n_tx * n_rx.
    ChannelMatrix sparse_channel(std::size_t n_tx, std::size_t n_rx,
                                 const std::vector<PathComponent> &paths);

    // l i.i.d. paths: circularly-symmetric complex Gaussian coefficients of
    // unit variance, angles uniform in the cosine domain. Deterministic
    // under the seed.
    std::vector<PathComponent> random_paths(std::size_t l, std::uint64_t seed);

    // H = H_los + sqrt(epsilon) * H_nlos with both terms individually
    // normalized to n_tx * n_rx first, then the mixture re-normalized.
    // epsilon = 0 returns the LOS gains unchanged.
    ChannelMatrix mix_si(const ChannelMatrix &los, const ChannelMatrix &nlos, double epsilon);

    // Composite SI channel of a placement; nlos_paths may be empty
    // (equivalent to epsilon = 0).
    ChannelMatrix composite_si(const ArrayPlacement &p,
                               const std::vector<PathComponent> &nlos_paths,
                               double epsilon);

    // Beamforming-gain magnitude |a(n_rx, alpha_i)^H H a(n_tx, beta_j)| on
    // the uniform cosine grid; row index i follows alpha (receive angle),
    // column index j follows beta (transmit angle).
    arma::mat gain_map(const ChannelMatrix &h, std::size_t grid_size);

    // CSV exports for external plotting. Gain maps are row-major with a
    // header row carrying the transmit grid angles and a leading column of
    // receive grid angles; channels are long-format rx,tx,re,im.
    void write_gain_map_csv(std::ostream &os, const arma::mat &map);
    void write_channel_csv(std::ostream &os, const ChannelMatrix &h);
}

#endif
