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

#ifndef FDMM_GEOMETRY_HPP
#define FDMM_GEOMETRY_HPP

#include <armadillo>
#include <cstddef>
#include <vector>

namespace fdmm
{
    // All lengths are in carrier wavelengths, so the wavelength itself never
    // appears in any formula.

    // Uniform linear array.
    struct Ula
    {
        std::size_t n_elements = 1;
        double spacing = 0.5; // element pitch in wavelengths

        Ula() = default;
        explicit Ula(std::size_t n, double spacing_wl = 0.5);

        // Aperture used for range bookkeeping: n_elements * spacing.
        double aperture() const { return static_cast<double>(n_elements) * spacing; }
    };

    // Relative placement of the Tx and Rx arrays of one node.
    //
    // Coordinate frame: the Tx array lies on the x-axis with its first
    // element at the origin and elements extending towards -x; the Rx first
    // element sits at (d, 0) and the Rx axis points along (cos omega,
    // sin omega). The segment between the two first elements is therefore
    // never crossed by either aperture, so d > 0 keeps all element pairs
    // separated.
    struct ArrayPlacement
    {
        Ula tx;
        Ula rx;
        double d;     // first-element separation in wavelengths, > 0
        double omega; // angle between the array axes in radians, stored in [0, 2*pi)

        ArrayPlacement(Ula tx_array, Ula rx_array, double d_wl, double omega_rad);
    };

    // Cosine-domain steering angle, |value| <= 1.
    struct SteeringAngle
    {
        double value;
        explicit SteeringAngle(double v);
    };

    struct Point2
    {
        double x;
        double y;
    };

    enum class Side
    {
        tx,
        rx
    };

    // Array response a(n, omega), element k = exp(j*pi*k*omega) / sqrt(n).
    // Unit Euclidean norm by construction.
    arma::cx_vec steering_vector(std::size_t n, SteeringAngle omega);

    // Element coordinates (wavelengths) of one side of a placement.
    std::vector<Point2> element_positions(const ArrayPlacement &p, Side side);

    // Fraunhofer check: true iff r >= 2 * aperture_d^2 (lambda = 1 units).
    bool far_field_ok(double r, double aperture_d);

    // Fraunhofer range of the coupled Tx/Rx pair of a single node; both
    // apertures contribute: 2 * (D_tx^2 + D_rx^2).
    double si_far_field_range(const Ula &tx, const Ula &rx);

    // g points uniform on [-1, 1) in the cosine domain.
    arma::vec cosine_grid(std::size_t g);
}

#endif
