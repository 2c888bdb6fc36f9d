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

#include "moveant/array_geometry.hpp"
#include "moveant/channel_model.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace moveant
{

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s)
{
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("parse_double: not a number: '" + std::string(s) + "'");
    return x;
}

namespace detail
{
inline std::vector<std::string> split_ws(const std::string &line)
{
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;)
        out.push_back(tok);
    return out;
}

inline bool is_blank_or_comment(const std::string &line)
{
    const auto p = line.find_first_not_of(" \t\r");
    return p == std::string::npos || line[p] == '#';
}
} // namespace detail

/*!MD
# Layout table
```
# moveant layout
# wavelength <meters>
# index x y z
0 0 -0.5 -0.5
...
```
One antenna per row; coordinates in meters, written in shortest round-trip form.
MD!*/
inline void write_layout(std::ostream &out, const ArrayLayout &layout)
{
    out << "# moveant layout\n# wavelength " << format_double(layout.wavelength()) << "\n# index x y z\n";
    for (Eigen::Index m = 0; m < layout.size(); ++m)
    {
        const auto p = layout.position(m);
        out << m << ' ' << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
    }
}

inline ArrayLayout read_layout(std::istream &in)
{
    double wavelength = 0.0;
    std::vector<Position3> positions;
    for (std::string line; std::getline(in, line);)
    {
        if (detail::is_blank_or_comment(line))
        {
            const auto tok = detail::split_ws(line);
            if (tok.size() == 3 && tok[0] == "#" && tok[1] == "wavelength")
                wavelength = parse_double(tok[2]);
            continue;
        }
        const auto tok = detail::split_ws(line);
        if (tok.size() != 4)
            throw std::invalid_argument("read_layout: expected 'index x y z', got '" + line + "'");
        if (std::stoul(tok[0]) != positions.size())
            throw std::invalid_argument("read_layout: antenna indices must be consecutive from 0");
        positions.emplace_back(parse_double(tok[1]), parse_double(tok[2]), parse_double(tok[3]));
    }
    if (!(wavelength > 0.0))
        throw std::invalid_argument("read_layout: missing '# wavelength' header");
    return ArrayLayout(positions, wavelength);
}

/*!MD
# Path table
```
# moveant paths
# user amplitude delay azimuth elevation phase
0 3.1e-07 6.7e-07 0.12 -0.013 2.2
```
Amplitude is linear, delay in seconds, angles and the scatterer phase in radians.
MD!*/
inline void write_paths(std::ostream &out, const std::vector<UserPaths> &users)
{
    out << "# moveant paths\n# user amplitude delay azimuth elevation phase\n";
    for (std::size_t i = 0; i < users.size(); ++i)
        for (const auto &p : users[i])
            out << i << ' ' << format_double(p.amplitude) << ' ' << format_double(p.delay) << ' '
                << format_double(p.azimuth) << ' ' << format_double(p.elevation) << ' ' << format_double(p.phase)
                << '\n';
}

inline std::vector<UserPaths> read_paths(std::istream &in)
{
    std::vector<UserPaths> users;
    for (std::string line; std::getline(in, line);)
    {
        if (detail::is_blank_or_comment(line))
            continue;
        const auto tok = detail::split_ws(line);
        if (tok.size() != 6)
            throw std::invalid_argument("read_paths: expected 6 columns, got '" + line + "'");
        const auto user = std::stoul(tok[0]);
        if (user + 1 < users.size() || user > users.size())
            throw std::invalid_argument("read_paths: rows must be grouped by ascending user index");
        if (user == users.size())
            users.emplace_back();
        users[user].push_back({parse_double(tok[1]), parse_double(tok[2]), parse_double(tok[3]), parse_double(tok[4]),
                               parse_double(tok[5])});
    }
    for (const auto &u : users)
        validate_paths(u);
    return users;
}

/// Per-iteration global best value as `iteration,best_value` CSV.
inline void write_trace(std::ostream &out, const std::vector<double> &best_values)
{
    out << "iteration,best_value\n";
    for (std::size_t i = 0; i < best_values.size(); ++i)
        out << i << ',' << format_double(best_values[i]) << '\n';
}

} // namespace moveant
