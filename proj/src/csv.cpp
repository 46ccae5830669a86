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

#include "fdmm/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "fdmm/version.hpp"

namespace fdmm
{

    std::string format_double(double v)
    {
        char buf[40];
        if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15)
        {
            std::snprintf(buf, sizeof(buf), "%.0f", v);
            return buf;
        }
        // try increasing precision until the value round-trips exactly
        for (int prec = 1; prec <= 17; ++prec)
        {
            std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
            double parsed = 0.0;
            std::sscanf(buf, "%lf", &parsed);
            if (parsed == v || (std::isnan(parsed) && std::isnan(v)))
                break;
        }
        return buf;
    }

    std::uint64_t fnv1a64(const void *data, std::size_t n)
    {
        const auto *bytes = static_cast<const unsigned char *>(data);
        std::uint64_t hash = 0xcbf29ce484222325ULL;
        for (std::size_t i = 0; i < n; ++i)
        {
            hash ^= bytes[i];
            hash *= 0x100000001b3ULL;
        }
        return hash;
    }

    std::uint64_t fnv1a64(const std::string &s) { return fnv1a64(s.data(), s.size()); }

    void write_csv_preamble(std::ostream &os, std::uint64_t config_hash, std::uint64_t seed)
    {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "# fdmm version=%s config=0x%016llx seed=%llu\n", kVersion,
                      static_cast<unsigned long long>(config_hash),
                      static_cast<unsigned long long>(seed));
        os << buf;
    }
}
