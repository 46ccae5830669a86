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

#ifndef FDMM_CONFIG_HPP
#define FDMM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdmm
{
    // Malformed or incomplete configuration text.
    struct ConfigParseError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Filesystem failures (unreadable config, unwritable output).
    struct IoError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Flat key-value experiment configuration with [section] headers.
    // Keys are addressed as "section.key"; values are scalars or
    // comma-separated lists. '#' and ';' start comments.
    class KeyValueConfig
    {
    public:
        static KeyValueConfig parse_file(const std::string &path);
        static KeyValueConfig parse_string(const std::string &text,
                                           const std::string &origin = "<string>");

        bool has(const std::string &key) const;

        // Typed getters; a missing or malformed value raises ConfigParseError
        // naming the offending field.
        std::string get_string(const std::string &key) const;
        double get_double(const std::string &key) const;
        std::uint64_t get_u64(const std::string &key) const;
        std::size_t get_size(const std::string &key) const;
        std::vector<double> get_double_list(const std::string &key) const;
        std::vector<std::string> get_string_list(const std::string &key) const;

        std::string get_string_or(const std::string &key, const std::string &dflt) const;
        double get_double_or(const std::string &key, double dflt) const;
        std::size_t get_size_or(const std::string &key, std::size_t dflt) const;

        // Canonical "[section]\nkey = value" form; parsing it again yields
        // the same key-value map.
        std::string serialize() const;

        const std::map<std::string, std::string> &entries() const { return values_; }
        const std::string &raw_text() const { return raw_; }
        std::uint64_t content_hash() const;

    private:
        std::map<std::string, std::string> values_;
        std::string raw_;
        std::string origin_;
    };
}

#endif
