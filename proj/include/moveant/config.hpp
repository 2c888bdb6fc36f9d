// SPDX-License-Identifier: Apache-2.0
//
// moveant: movable-antenna wideband multi-user MIMO simulation
// Copyright (C) 2026 The moveant authors
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

#pragma once

#include "moveant/io.hpp"

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace moveant
{

class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` configuration; `#` starts a comment, keys are unique.
class KeyValueConfig
{
  public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::istream &in)
    {
        KeyValueConfig cfg;
        int line_no = 0;
        for (std::string line; std::getline(in, line);)
        {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            if (trim(line).empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
            if (!cfg.values_.emplace(key, value).second)
                throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        return cfg;
    }

    void set(const std::string &key, const std::string &value) { values_[key] = value; }
    [[nodiscard]] bool has(const std::string &key) const { return values_.count(key) != 0; }
    [[nodiscard]] const std::map<std::string, std::string> &values() const { return values_; }

    [[nodiscard]] std::string get(const std::string &key) const
    {
        const auto it = values_.find(key);
        if (it == values_.end())
            throw ConfigError("missing config key '" + key + "'");
        return it->second;
    }

    [[nodiscard]] double get_double(const std::string &key) const
    {
        try
        {
            return parse_double(get(key));
        }
        catch (const std::invalid_argument &)
        {
            throw ConfigError("config key '" + key + "' is not a number");
        }
    }

    template <class Int>
    [[nodiscard]] Int get_int(const std::string &key) const
    {
        const std::string s = get(key);
        Int v{};
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw ConfigError("config key '" + key + "' is not an integer");
        return v;
    }

    [[nodiscard]] bool get_bool(const std::string &key) const
    {
        const std::string s = get(key);
        if (s == "true" || s == "1" || s == "yes")
            return true;
        if (s == "false" || s == "0" || s == "no")
            return false;
        throw ConfigError("config key '" + key + "' is not a boolean");
    }

    [[nodiscard]] std::vector<double> get_list(const std::string &key) const
    {
        std::vector<double> out;
        for (const auto &item : split_list(get(key)))
        {
            try
            {
                out.push_back(parse_double(item));
            }
            catch (const std::invalid_argument &)
            {
                throw ConfigError("config key '" + key + "' has a non-numeric entry '" + item + "'");
            }
        }
        return out;
    }

    static std::vector<std::string> split_list(const std::string &s)
    {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start <= s.size())
        {
            const auto comma = s.find(',', start);
            const std::string item = trim(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (!item.empty())
                out.push_back(item);
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        return out;
    }

    static std::string trim(const std::string &s)
    {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos)
            return {};
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

  private:
    std::map<std::string, std::string> values_;
};

} // namespace moveant
