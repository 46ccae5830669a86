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

#ifndef FDMM_BEAMFORMING_HPP
#define FDMM_BEAMFORMING_HPP

#include <optional>
#include <utility>
#include <vector>

#include "fdmm/channel.hpp"

namespace fdmm
{
    enum class AwvConstraint
    {
        unconstrained,
        constant_amplitude,
        steering
    };

    // Antenna weight vector. Always unit-norm after construction;
    // constant-amplitude weights have elementwise magnitude 1/sqrt(n).
    struct Awv
    {
        arma::cx_vec weights;
        AwvConstraint constraint = AwvConstraint::unconstrained;
        std::optional<double> steer_angle; // recorded for steering AWVs

        std::size_t size() const { return weights.n_elem; }
    };

    Awv make_unconstrained(arma::cx_vec v); // normalizes; rejects the zero vector
    Awv make_steering(std::size_t n, SteeringAngle omega);

    // Euclidean-nearest constant-amplitude vector: keeps each element phase,
    // fixes magnitudes to 1/sqrt(n). Zero entries map to phase 0.
    Awv ca_project(const arma::cx_vec &v);

    // v = v1 + v2 with |v1_k| = |v2_k| = scale_c / 2 for every element.
    struct CaDecomposition
    {
        arma::cx_vec v1;
        arma::cx_vec v2;
        double scale_c;
    };

    // Splits an arbitrary vector into two constant-amplitude vectors.
    // Default c is max_k |v_k| (the smallest feasible per-chain amplitude);
    // a caller-supplied c must satisfy c >= max_k |v_k|.
    CaDecomposition ca_decompose(const arma::cx_vec &v, std::optional<double> c = std::nullopt);

    // Transmit matched filter: dominant right singular vector of the gains.
    Awv mf_tx(const ChannelMatrix &h);

    struct ZfResult
    {
        Awv awv;
        bool degenerate = false; // interference absent or spanning the target
    };

    // Receive zero-forcing: projects the target response onto the orthogonal
    // complement of the interference vector, then normalizes. Falls back to
    // the normalized target (degenerate flag) when there is nothing to null.
    ZfResult zf_rx(const arma::cx_vec &target, const arma::cx_vec &interference);

    // Steers Tx/Rx along the strongest path (ties: lowest index).
    // Returns (f, w) = (Tx steering at aod, Rx steering at aoa).
    std::pair<Awv, Awv> beam_steering_pair(const std::vector<PathComponent> &paths,
                                           std::size_t n_tx, std::size_t n_rx);

    struct FdLink; // fdlink.hpp

    struct LinkBeamformers
    {
        Awv f1, w1, f2, w2;
    };

    // Matched filter at both transmitters, then zero-forcing of the local
    // self-interference at both receivers. With apply_ca, the Tx filters are
    // CA-projected before the receivers null the interference they actually
    // produce, and the Rx filters are CA-projected last.
    LinkBeamformers zf_mf(const FdLink &link, bool apply_ca);

    struct AngleSearchResult
    {
        double omega1, psi1, omega2, psi2; // steering angles of (f1, w1, f2, w2)
        LinkBeamformers beams;
        double asr;
    };

    // Joint search over the g^4 grid of steering angles for the four AWVs,
    // maximizing link ASR, followed by one coordinate-refinement pass on a
    // 4x finer local grid around the winner. Grid ties resolve to the
    // lexicographically smallest index tuple, so the result is independent
    // of evaluation order.
    AngleSearchResult angle_search(const FdLink &link, std::size_t grid_size);
}

#endif
