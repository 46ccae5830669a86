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

#include "fdmm/beamforming.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "fdmm/fdlink.hpp"

namespace fdmm
{

    Awv make_unconstrained(arma::cx_vec v)
    {
        const double n = arma::norm(v);
        if (!(n > 0.0))
            throw std::invalid_argument("make_unconstrained: zero vector");
        Awv a;
        a.weights = v / n;
        a.constraint = AwvConstraint::unconstrained;
        return a;
    }

    Awv make_steering(std::size_t n, SteeringAngle omega)
    {
        Awv a;
        a.weights = steering_vector(n, omega);
        a.constraint = AwvConstraint::steering;
        a.steer_angle = omega.value;
        return a;
    }

    Awv ca_project(const arma::cx_vec &v)
    {
        if (v.n_elem < 1)
            throw std::invalid_argument("ca_project: empty vector");
        const double amp = 1.0 / std::sqrt(static_cast<double>(v.n_elem));
        Awv a;
        a.weights.set_size(v.n_elem);
        for (arma::uword k = 0; k < v.n_elem; ++k)
        {
            const double phase = (std::abs(v(k)) > 0.0) ? std::arg(v(k)) : 0.0;
            a.weights(k) = std::polar(amp, phase);
        }
        a.constraint = AwvConstraint::constant_amplitude;
        return a;
    }

    CaDecomposition ca_decompose(const arma::cx_vec &v, std::optional<double> c)
    {
        if (v.n_elem < 1)
            throw std::invalid_argument("ca_decompose: empty vector");
        const double vmax = arma::abs(v).max();
        if (!(vmax > 0.0))
            throw std::invalid_argument("ca_decompose: all-zero vector");

        const double amp = c.value_or(vmax);
        if (amp < vmax)
            throw std::invalid_argument("ca_decompose: c must be >= max |v_k|");

        CaDecomposition dec;
        dec.scale_c = amp;
        dec.v1.set_size(v.n_elem);
        dec.v2.set_size(v.n_elem);
        for (arma::uword k = 0; k < v.n_elem; ++k)
        {
            const double mag = std::abs(v(k));
            const double base = (mag > 0.0) ? std::arg(v(k)) : 0.0;
            // clamp guards |v_k| == c against rounding above 1
            const double split = std::acos(std::min(mag / amp, 1.0));
            dec.v1(k) = std::polar(amp / 2.0, base + split);
            dec.v2(k) = std::polar(amp / 2.0, base - split);
        }
        return dec;
    }

    Awv mf_tx(const ChannelMatrix &h)
    {
        if (!(arma::norm(h.gains, "fro") > 0.0))
            throw std::invalid_argument("mf_tx: zero channel matrix");
        arma::cx_mat u, v;
        arma::vec s;
        if (!arma::svd_econ(u, s, v, h.gains))
            throw std::runtime_error("mf_tx: SVD failed to converge");
        return make_unconstrained(v.col(0));
    }

    ZfResult zf_rx(const arma::cx_vec &target, const arma::cx_vec &interference)
    {
        if (!(arma::norm(target) > 0.0))
            throw std::invalid_argument("zf_rx: zero target vector");
        if (target.n_elem != interference.n_elem)
            throw std::invalid_argument("zf_rx: target and interference lengths differ");

        ZfResult res;
        const double u2 = std::real(arma::cdot(interference, interference));
        if (!(u2 > 0.0))
        {
            res.awv = make_unconstrained(target);
            res.degenerate = true;
            return res;
        }

        arma::cx_vec w = target - (arma::cdot(interference, target) / u2) * interference;
        if (arma::norm(w) < 1e-12)
        {
            // target lies in the interference span; nothing survives the null
            res.awv = make_unconstrained(target);
            res.degenerate = true;
            return res;
        }
        res.awv = make_unconstrained(w);
        return res;
    }

    std::pair<Awv, Awv> beam_steering_pair(const std::vector<PathComponent> &paths,
                                           std::size_t n_tx, std::size_t n_rx)
    {
        if (paths.empty())
            throw std::invalid_argument("beam_steering_pair: empty path set");

        std::size_t best = 0;
        for (std::size_t i = 1; i < paths.size(); ++i)
            if (std::abs(paths[i].coeff) > std::abs(paths[best].coeff))
                best = i;

        return {make_steering(n_tx, paths[best].aod), make_steering(n_rx, paths[best].aoa)};
    }

    LinkBeamformers zf_mf(const FdLink &link, bool apply_ca)
    {
        Awv f1 = mf_tx(link.h12);
        Awv f2 = mf_tx(link.h21);
        if (apply_ca)
        {
            f1 = ca_project(f1.weights);
            f2 = ca_project(f2.weights);
        }

        // each receiver nulls the interference the local Tx actually radiates
        Awv w1 = zf_rx(link.h21.gains * f2.weights, link.hsi1.gains * f1.weights).awv;
        Awv w2 = zf_rx(link.h12.gains * f1.weights, link.hsi2.gains * f2.weights).awv;
        if (apply_ca)
        {
            w1 = ca_project(w1.weights);
            w2 = ca_project(w2.weights);
        }
        return {f1, w1, f2, w2};
    }

    AngleSearchResult angle_search(const FdLink &link, std::size_t grid_size)
    {
        if (grid_size < 2)
            throw std::invalid_argument("angle_search: grid_size must be >= 2");

        const double p = link.budget.p();
        const double p_si = link.budget.p_si();

        const std::size_t n_t1 = link.h12.n_tx(), n_r1 = link.h21.n_rx();
        const std::size_t n_t2 = link.h21.n_tx(), n_r2 = link.h12.n_rx();

        const arma::vec grid = cosine_grid(grid_size);
        auto steering_matrix = [&](std::size_t n)
        {
            arma::cx_mat a(n, grid_size);
            for (std::size_t i = 0; i < grid_size; ++i)
                a.col(i) = steering_vector(n, SteeringAngle(grid(i)));
            return a;
        };
        const arma::cx_mat a_t1 = steering_matrix(n_t1);
        const arma::cx_mat a_r1 = steering_matrix(n_r1);
        const arma::cx_mat a_t2 = steering_matrix(n_t2);
        const arma::cx_mat a_r2 = steering_matrix(n_r2);

        // squared bilinear gains on the grid, indexed (rx angle, tx angle)
        const arma::mat p21 = arma::square(arma::abs(a_r1.t() * link.h21.gains * a_t2)); // (psi1, omega2)
        const arma::mat ps1 = arma::square(arma::abs(a_r1.t() * link.hsi1.gains * a_t1)); // (psi1, omega1)
        const arma::mat p12 = arma::square(arma::abs(a_r2.t() * link.h12.gains * a_t1)); // (psi2, omega1)
        const arma::mat ps2 = arma::square(arma::abs(a_r2.t() * link.hsi2.gains * a_t2)); // (psi2, omega2)

        // For fixed transmit angles the two receive angles decouple, so the
        // g^4 joint optimum is found by maximizing each receive angle inside
        // the (omega1, omega2) double loop. Any combination matching the
        // maximum ASR must maximize both SINRs, so picking the smallest
        // maximizing receive indices reproduces the lexicographic tie-break
        // of a full g^4 enumeration over (omega1, psi1, omega2, psi2).
        double best_asr = -1.0;
        std::array<std::size_t, 4> best{0, 0, 0, 0};
        for (std::size_t i1 = 0; i1 < grid_size; ++i1)
            for (std::size_t i2 = 0; i2 < grid_size; ++i2)
            {
                std::size_t b1 = 0;
                double s1 = -1.0;
                for (std::size_t j = 0; j < grid_size; ++j)
                {
                    const double v = p * p21(j, i2) / (p_si * ps1(j, i1) + 1.0);
                    if (v > s1)
                    {
                        s1 = v;
                        b1 = j;
                    }
                }
                std::size_t b2 = 0;
                double s2 = -1.0;
                for (std::size_t j = 0; j < grid_size; ++j)
                {
                    const double v = p * p12(j, i1) / (p_si * ps2(j, i2) + 1.0);
                    if (v > s2)
                    {
                        s2 = v;
                        b2 = j;
                    }
                }
                const double asr = std::log2(1.0 + s1) + std::log2(1.0 + s2);
                const std::array<std::size_t, 4> cand{i1, b1, i2, b2};
                if (asr > best_asr || (asr == best_asr && cand < best))
                {
                    best_asr = asr;
                    best = cand;
                }
            }

        std::array<double, 4> ang{grid(best[0]), grid(best[1]), grid(best[2]), grid(best[3])};
        auto evaluate = [&](const std::array<double, 4> &a)
        {
            return link_metrics(link,
                                make_steering(n_t1, SteeringAngle(a[0])),
                                make_steering(n_r1, SteeringAngle(a[1])),
                                make_steering(n_t2, SteeringAngle(a[2])),
                                make_steering(n_r2, SteeringAngle(a[3])))
                .asr;
        };

        // one refinement pass per coordinate on a 4x finer local grid
        double current = evaluate(ang);
        const double step = 2.0 / static_cast<double>(grid_size);
        for (std::size_t coord = 0; coord < 4; ++coord)
        {
            const double center = ang[coord];
            double best_angle = center;
            double best_value = current;
            for (int k = -4; k <= 4; ++k)
            {
                if (k == 0)
                    continue;
                const double cand = std::clamp(center + k * step / 4.0, -1.0, 1.0);
                ang[coord] = cand;
                const double v = evaluate(ang);
                if (v > best_value)
                {
                    best_value = v;
                    best_angle = cand;
                }
            }
            ang[coord] = best_angle;
            current = best_value;
        }

        AngleSearchResult res;
        res.omega1 = ang[0];
        res.psi1 = ang[1];
        res.omega2 = ang[2];
        res.psi2 = ang[3];
        res.beams = {make_steering(n_t1, SteeringAngle(ang[0])),
                     make_steering(n_r1, SteeringAngle(ang[1])),
                     make_steering(n_t2, SteeringAngle(ang[2])),
                     make_steering(n_r2, SteeringAngle(ang[3]))};
        res.asr = current;
        return res;
    }
}
