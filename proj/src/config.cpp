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

#include "fdmm/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fdmm/csv.hpp"

namespace fdmm
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const char *ws = " \t\r\n";
            const auto begin = s.find_first_not_of(ws);
            if (begin == std::string::npos)
                return "";
            const auto end = s.find_last_not_of(ws);
            return s.substr(begin, end - begin + 1);
        }

        std::string strip_comment(const std::string &line)
        {
            const auto pos = line.find_first_of("#;");
            return pos == std::string::npos ? line : line.substr(0, pos);
        }

        double parse_double_token(const std::string &key, const std::string &token)
        {
            errno = 0;
            char *end = nullptr;
            const double v = std::strtod(token.c_str(), &end);
            if (end == token.c_str() || *end != '\0' || errno == ERANGE)
                throw ConfigParseError("field '" + key + "': '" + token + "' is not a number");
            return v;
        }
    }

    KeyValueConfig KeyValueConfig::parse_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_string(buf.str(), path);
    }

    KeyValueConfig KeyValueConfig::parse_string(const std::string &text, const std::string &origin)
    {
        KeyValueConfig cfg;
        cfg.raw_ = text;
        cfg.origin_ = origin;

        std::istringstream in(text);
        std::string line;
        std::string section;
        std::size_t line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            line = trim(strip_comment(line));
            if (line.empty())
                continue;
            if (line.front() == '[')
            {
                if (line.back() != ']' || line.size() < 3)
                    throw ConfigParseError(origin + ":" + std::to_string(line_no) +
                                           ": malformed section header '" + line + "'");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigParseError(origin + ":" + std::to_string(line_no) +
                                       ": expected 'key = value', got '" + line + "'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigParseError(origin + ":" + std::to_string(line_no) + ": empty key");
            const std::string full = section.empty() ? key : section + "." + key;
            if (cfg.values_.count(full))
                throw ConfigParseError(origin + ":" + std::to_string(line_no) +
                                       ": duplicate field '" + full + "'");
            cfg.values_[full] = value;
        }
        return cfg;
    }

    bool KeyValueConfig::has(const std::string &key) const { return values_.count(key) != 0; }

    std::string KeyValueConfig::get_string(const std::string &key) const
    {
        const auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigParseError("missing required field '" + key + "' in " + origin_);
        return it->second;
    }

    double KeyValueConfig::get_double(const std::string &key) const
    {
        return parse_double_token(key, get_string(key));
    }

    std::uint64_t KeyValueConfig::get_u64(const std::string &key) const
    {
        const std::string token = get_string(key);
        errno = 0;
        char *end = nullptr;
        const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
        if (end == token.c_str() || *end != '\0' || errno == ERANGE || token.find('-') != std::string::npos)
            throw ConfigParseError("field '" + key + "': '" + token + "' is not an unsigned integer");
        return v;
    }

    std::size_t KeyValueConfig::get_size(const std::string &key) const
    {
        return static_cast<std::size_t>(get_u64(key));
    }

    std::vector<double> KeyValueConfig::get_double_list(const std::string &key) const
    {
        std::vector<double> out;
        for (const auto &tok : get_string_list(key))
            out.push_back(parse_double_token(key, tok));
        return out;
    }

    std::vector<std::string> KeyValueConfig::get_string_list(const std::string &key) const
    {
        const std::string value = get_string(key);
        std::vector<std::string> out;
        std::string item;
        std::istringstream ss(value);
        while (std::getline(ss, item, ','))
        {
            item = trim(item);
            if (!item.empty())
                out.push_back(item);
        }
        if (out.empty())
            throw ConfigParseError("field '" + key + "': empty list");
        return out;
    }

    std::string KeyValueConfig::get_string_or(const std::string &key, const std::string &dflt) const
    {
        return has(key) ? get_string(key) : dflt;
    }

    double KeyValueConfig::get_double_or(const std::string &key, double dflt) const
    {
        return has(key) ? get_double(key) : dflt;
    }

    std::size_t KeyValueConfig::get_size_or(const std::string &key, std::size_t dflt) const
    {
        return has(key) ? get_size(key) : dflt;
    }

    std::string KeyValueConfig::serialize() const
    {
        std::ostringstream out;
        std::string current_section;
        bool first = true;
        for (const auto &[full, value] : values_)
        {
            const auto dot = full.find('.');
            const std::string section = dot == std::string::npos ? "" : full.substr(0, dot);
            const std::string key = dot == std::string::npos ? full : full.substr(dot + 1);
            if (section != current_section || first)
            {
                if (!first)
                    out << '\n';
                if (!section.empty())
                    out << '[' << section << "]\n";
                current_section = section;
                first = false;
            }
            out << key << " = " << value << '\n';
        }
        return out.str();
    }

    std::uint64_t KeyValueConfig::content_hash() const { return fnv1a64(raw_); }
}
