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

#ifndef FDMM_CSV_HPP
#define FDMM_CSV_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace fdmm
{
    // Shortest round-trip-exact decimal form (%.17g trimmed), locale-free.
    std::string format_double(double v);

    std::uint64_t fnv1a64(const void *data, std::size_t n);
    std::uint64_t fnv1a64(const std::string &s);

    // Comment header carrying provenance; every emitted CSV starts with it.
    void write_csv_preamble(std::ostream &os, std::uint64_t config_hash, std::uint64_t seed);
}

#endif
