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

#ifndef FDMM_RNG_HPP
#define FDMM_RNG_HPP

#include <cstdint>
#include <random>

namespace fdmm
{
    using Rng = std::mt19937_64;

    // Stateless 64-bit mixer (splitmix64 finalizer).
    constexpr std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Sub-seed for trial/draw `index` under a master seed. Every simulation
    // draw is keyed this way, so results never depend on evaluation order.
    constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
    {
        return splitmix64(splitmix64(master) ^ (0x9e3779b97f4a7c15ULL * (index + 1ULL)));
    }
}

#endif
