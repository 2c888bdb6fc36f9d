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


#include "moveant/config.hpp"
#include "moveant/io.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace moveant;

TEST(FormatDouble, RoundTrips)
{
    Rng rng = make_rng({61});
    for (int i = 0; i < 1000; ++i)
    {
        const double x = uniform(rng, -1.0, 1.0) * std::pow(10.0, uniform(rng, -20, 20));
        EXPECT_EQ(parse_double(format_double(x)), x);
    }
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_THROW(parse_double("1.0x"), std::invalid_argument);
    EXPECT_THROW(parse_double(""), std::invalid_argument);
}

TEST(LayoutTable, RoundTrip)
{
    Rng rng = make_rng({62});
    std::vector<Position3> pos;
    for (int m = 0; m < 9; ++m)
        pos.emplace_back(0.0, uniform(rng, -1, 1), uniform(rng, -1, 1));
    const ArrayLayout layout(pos, 0.09993081933333334);
    std::stringstream buf;
    write_layout(buf, layout);
    EXPECT_EQ(buf.str().rfind("# moveant layout\n# wavelength 0.09993081933333334\n# index x y z\n0 0 ", 0), 0u);
    const auto back = read_layout(buf);
    EXPECT_EQ(back.positions(), layout.positions());
    EXPECT_EQ(back.wavelength(), layout.wavelength());
}

TEST(LayoutTable, Malformed)
{
    std::istringstream missing("0 0 0 0\n");
    EXPECT_THROW(read_layout(missing), std::invalid_argument);
    std::istringstream gap("# wavelength 0.1\n0 0 0 0\n2 0 0 0\n");
    EXPECT_THROW(read_layout(gap), std::invalid_argument);
    std::istringstream short_row("# wavelength 0.1\n0 0 0\n");
    EXPECT_THROW(read_layout(short_row), std::invalid_argument);
}

TEST(PathTable, RoundTrip)
{
    Rng rng = make_rng({63});
    const std::vector<UserPaths> users{oracle::random_paths(3, 1e-6, rng), oracle::random_paths(5, 1e-6, rng)};
    std::stringstream buf;
    write_paths(buf, users);
    const auto back = read_paths(buf);
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i)
    {
        ASSERT_EQ(back[i].size(), users[i].size());
        for (std::size_t n = 0; n < users[i].size(); ++n)
        {
            EXPECT_EQ(back[i][n].amplitude, users[i][n].amplitude);
            EXPECT_EQ(back[i][n].delay, users[i][n].delay);
            EXPECT_EQ(back[i][n].azimuth, users[i][n].azimuth);
            EXPECT_EQ(back[i][n].elevation, users[i][n].elevation);
            EXPECT_EQ(back[i][n].phase, users[i][n].phase);
        }
    }
}

TEST(PathTable, Malformed)
{
    std::istringstream unordered("1 1 0 0 0 0\n0 1 0 0 0 0\n");
    EXPECT_THROW(read_paths(unordered), std::invalid_argument);
    std::istringstream columns("0 1 0 0 0\n");
    EXPECT_THROW(read_paths(columns), std::invalid_argument);
    std::istringstream negative("0 -1 0 0 0 0\n");
    EXPECT_THROW(read_paths(negative), std::invalid_argument);
}

TEST(Trace, Csv)
{
    std::ostringstream out;
    write_trace(out, {1.5, 2.0, 2.0});
    EXPECT_EQ(out.str(), "iteration,best_value\n0,1.5\n1,2\n2,2\n");
}

TEST(KeyValueConfig, ParsesCommentsAndLists)
{
    std::istringstream in("# header\nevm = 0.04  # trailing\n\n grid = 1, 20 ,100\nflag = yes\n");
    const auto kv = KeyValueConfig::parse(in);
    EXPECT_EQ(kv.get_double("evm"), 0.04);
    EXPECT_EQ(kv.get_list("grid"), (std::vector<double>{1, 20, 100}));
    EXPECT_TRUE(kv.get_bool("flag"));
    EXPECT_FALSE(kv.has("missing"));
    EXPECT_THROW((void)kv.get("missing"), ConfigError);
}

TEST(KeyValueConfig, Errors)
{
    std::istringstream dup("a = 1\na = 2\n");
    EXPECT_THROW(KeyValueConfig::parse(dup), ConfigError);
    std::istringstream noeq("just a line\n");
    EXPECT_THROW(KeyValueConfig::parse(noeq), ConfigError);
    std::istringstream bad("n = 3.5\nx = abc\nb = maybe\nl = 1,two\n");
    const auto kv = KeyValueConfig::parse(bad);
    EXPECT_THROW((void)kv.get_int<int>("n"), ConfigError);
    EXPECT_THROW((void)kv.get_double("x"), ConfigError);
    EXPECT_THROW((void)kv.get_bool("b"), ConfigError);
    EXPECT_THROW((void)kv.get_list("l"), ConfigError);
}
