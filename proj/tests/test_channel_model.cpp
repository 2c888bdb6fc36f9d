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


#include "moveant/channel_model.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace moveant;

namespace
{
constexpr double pi = std::numbers::pi;

OfdmConfig ofdm(int S, double spacing = 15e3)
{
    OfdmConfig cfg;
    cfg.subcarriers = S;
    cfg.subcarrier_spacing = spacing;
    return cfg;
}

ArrayLayout random_layout(int M, double lambda, Rng &rng)
{
    std::vector<Position3> pos;
    for (int m = 0; m < M; ++m)
        pos.emplace_back(0.0, uniform(rng, -1, 1), uniform(rng, -1, 1));
    return {pos, lambda};
}

double max_abs_diff(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b)
{
    return (a - b).cwiseAbs().maxCoeff();
}
} // namespace

TEST(Pulse, TriangleValues)
{
    EXPECT_EQ(pulse_triangle(0.0), 1.0);
    EXPECT_EQ(pulse_triangle(1.0), 0.0);
    EXPECT_EQ(pulse_triangle(-1.0), 0.0);
    EXPECT_EQ(pulse_triangle(0.5), 0.5);
    EXPECT_EQ(pulse_triangle(-0.25), 0.75);
    EXPECT_EQ(pulse_triangle(3.0), 0.0);
}

TEST(Pulse, RaisedCosineShape)
{
    for (double beta : {0.0, 0.25, 1.0})
    {
        EXPECT_NEAR(pulse_raised_cosine(0.0, beta), 1.0, 1e-15);
        EXPECT_EQ(pulse_raised_cosine(1.0, beta), 0.0);
        EXPECT_EQ(pulse_raised_cosine(-1.5, beta), 0.0);
        EXPECT_NEAR(pulse_raised_cosine(0.3, beta), pulse_raised_cosine(-0.3, beta), 1e-15);
    }
    // Removable singularity at |t| = 1 / (2 beta) stays finite and continuous.
    const double t0 = 1.0 / (2.0 * 0.75);
    EXPECT_NEAR(pulse_raised_cosine(t0, 0.75), pulse_raised_cosine(t0 + 1e-7, 0.75), 1e-5);
    EXPECT_THROW(pulse_raised_cosine(0.0, 1.5), std::invalid_argument);
}

TEST(Sync, SinglePath)
{
    const std::vector<UserPaths> users{{{1.0, 3.3e-7, 0.0, 0.0, 0.0}}};
    const auto s = sync_and_tap_count(users, ofdm(200));
    EXPECT_EQ(s.eta, 3.3e-7);
    EXPECT_EQ(s.taps, 0);
}

TEST(Sync, TwoPathsThreeTaps)
{
    // S * Delta = 200 * 15 kHz = 3 MHz.
    const std::vector<UserPaths> users{{{1.0, 1e-6, 0.0, 0.0, 0.0}}, {{1.0, 2e-6, 0.0, 0.0, 0.0}}};
    const auto s = sync_and_tap_count(users, ofdm(200));
    EXPECT_EQ(s.eta, 1e-6);
    EXPECT_EQ(s.taps, 3);
}

TEST(Sync, EqualDelaysGiveOneTap)
{
    const std::vector<UserPaths> users{{{1.0, 5e-7, 0.1, 0.0, 0.0}, {0.5, 5e-7, -0.4, 0.2, 1.0}}};
    EXPECT_EQ(sync_and_tap_count(users, ofdm(300)).taps, 0);
}

TEST(Sync, EmptyPathSetThrows)
{
    EXPECT_THROW(sync_and_tap_count({}, ofdm(4)), std::invalid_argument);
    EXPECT_THROW(sync_and_tap_count({UserPaths{}}, ofdm(4)), std::invalid_argument);
}

TEST(Sync, TapCountNondecreasingInSubcarriers)
{
    Rng rng = make_rng({21});
    const std::vector<UserPaths> users{oracle::random_paths(5, 3e-6, rng), oracle::random_paths(3, 3e-6, rng)};
    int prev = -1;
    for (int S = 1; S <= 300; ++S)
    {
        const int T = sync_and_tap_count(users, ofdm(S)).taps;
        EXPECT_GE(T, prev);
        prev = T;
    }
}

TEST(FirTaps, AlignedPathOccupiesFirstTap)
{
    const auto cfg = ofdm(64);
    const ArrayLayout layout = make_compact_upa(4, cfg.wavelength());
    const UserPaths user{{0.7, 2e-6, 0.3, -0.1, 0.0}};
    const TapSync sync{2e-6, 3};
    const auto fir = fir_taps(user, layout, cfg, sync);
    ASSERT_EQ(fir.taps.size(), 4u);
    const Eigen::VectorXcd a = array_response(layout, 0.3, -0.1);
    EXPECT_LT(max_abs_diff(fir.taps[0], 0.7 * a), 1e-14);
    for (int l = 1; l <= 3; ++l)
        EXPECT_TRUE(fir.taps[static_cast<std::size_t>(l)].isZero(0.0));
}

TEST(FirTaps, HalfTapDelaySplitsEvenly)
{
    auto cfg = ofdm(100, 10e3); // 1 MHz
    cfg.carrier_frequency = 2e9; // carrier phase over 0.5 us is a whole number of cycles
    const ArrayLayout layout(std::vector<Position3>{Position3::Zero()}, cfg.wavelength());
    const UserPaths user{{1.0, 0.0, 0.0, 0.0, 0.0}, {1.0, 0.5e-6, 0.0, 0.0, 0.0}};
    const auto sync = sync_and_tap_count({user}, cfg);
    ASSERT_EQ(sync.taps, 1);
    // Second path alone contributes 0.5 to each of the two taps.
    const auto fir = fir_taps({user[1]}, layout, cfg, sync);
    EXPECT_NEAR(std::abs(fir.taps[0][0]), 0.5, 1e-12);
    EXPECT_NEAR(std::abs(fir.taps[1][0]), 0.5, 1e-12);
    EXPECT_NEAR(std::abs(tap_coefficient(user[1], 0, sync, cfg)), 0.5, 1e-12);
}

TEST(FirTaps, ZeroAmplitudeContributesNothing)
{
    Rng rng = make_rng({22});
    const auto cfg = ofdm(32);
    const auto layout = random_layout(4, cfg.wavelength(), rng);
    UserPaths base = oracle::random_paths(3, 4e-6, rng);
    UserPaths with_zero = base;
    with_zero.push_back({0.0, base[1].delay, 1.0, 0.5, 2.0});
    const auto sync = sync_and_tap_count({with_zero}, cfg);
    const auto a = fir_taps(base, layout, cfg, sync);
    const auto b = fir_taps(with_zero, layout, cfg, sync);
    for (std::size_t l = 0; l < a.taps.size(); ++l)
        EXPECT_EQ(a.taps[l], b.taps[l]);
}

TEST(FirTaps, MatchesScalarOracle)
{
    Rng rng = make_rng({23});
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto cfg = ofdm(1 + static_cast<int>(rng() % 64));
        const auto layout = random_layout(3, cfg.wavelength(), rng);
        const auto user = oracle::random_paths(4, 8e-6, rng);
        const auto sync = sync_and_tap_count({user}, cfg);
        const auto fir = fir_taps(user, layout, cfg, sync);
        const auto want = oracle::taps(user, layout, cfg, sync.eta, sync.taps);
        for (std::size_t l = 0; l < want.size(); ++l)
            EXPECT_LT(max_abs_diff(fir.taps[l], want[l]), 1e-10 * (1.0 + want[l].norm()));
    }
}

TEST(FreqResponse, SingleTapIsFlat)
{
    Rng rng = make_rng({24});
    const auto cfg = ofdm(16);
    const auto layout = random_layout(4, cfg.wavelength(), rng);
    const UserPaths user{{0.9, 1e-6, 0.2, 0.1, 0.4}, {0.3, 1e-6, -1.0, 0.3, 2.0}};
    const auto sync = sync_and_tap_count({user}, cfg);
    ASSERT_EQ(sync.taps, 0);
    const auto h = freq_response(fir_taps(user, layout, cfg, sync), cfg.subcarriers);
    for (int nu = 1; nu < cfg.subcarriers; ++nu)
        EXPECT_LT(max_abs_diff(h[static_cast<std::size_t>(nu)], h[0]), 1e-14);
}

TEST(FreqResponse, TwoPathMatchesDftOracle)
{
    Rng rng = make_rng({25});
    const auto cfg = ofdm(8);
    const auto layout = random_layout(4, cfg.wavelength(), rng);
    const auto user = oracle::random_paths(2, 2e-6, rng);
    const auto sync = sync_and_tap_count({user}, cfg);
    const auto fir = fir_taps(user, layout, cfg, sync);
    const auto got = freq_response(fir, cfg.subcarriers);
    const auto want = oracle::dft(fir.taps, cfg.subcarriers);
    for (int nu = 0; nu < cfg.subcarriers; ++nu)
        EXPECT_LE((got[nu] - want[nu]).norm(), 1e-10 * want[nu].norm());
}

TEST(FreqResponse, Parseval)
{
    Rng rng = make_rng({26});
    for (int trial = 0; trial < 30; ++trial)
    {
        const int S = 8 + static_cast<int>(rng() % 57);
        const auto cfg = ofdm(S);
        const auto layout = random_layout(5, cfg.wavelength(), rng);
        // Keep T + 1 <= S so the tap sequence is not aliased.
        const double max_delay = 0.9 * (S - 1) / cfg.bandwidth();
        const auto user = oracle::random_paths(6, max_delay, rng);
        const auto sync = sync_and_tap_count({user}, cfg);
        ASSERT_LT(sync.taps, S);
        const auto fir = fir_taps(user, layout, cfg, sync);
        const auto h = freq_response(fir, S);
        double freq = 0.0;
        double time = 0.0;
        for (const auto &v : h)
            freq += v.squaredNorm();
        for (const auto &v : fir.taps)
            time += v.squaredNorm();
        EXPECT_NEAR(freq / S, time, 1e-10 * time);
    }
}

TEST(PathSpectrum, MatchesFirDftRoute)
{
    Rng rng = make_rng({27});
    for (int trial = 0; trial < 20; ++trial)
    {
        // Include S smaller than T + 1, where the DFT folds taps.
        const int S = 1 + static_cast<int>(rng() % 64);
        const auto cfg = ofdm(S);
        const auto layout = random_layout(4, cfg.wavelength(), rng);
        std::vector<UserPaths> users{oracle::random_paths(5, 2e-5, rng), oracle::random_paths(3, 2e-5, rng)};
        users[1].push_back(users[1][0]); // repeated delay shares a group
        users[1].back().azimuth = -users[1].back().azimuth;
        const auto sync = sync_and_tap_count(users, cfg);
        const auto ch = PathSpectrum(users, cfg).synthesize(layout);
        ASSERT_EQ(ch.subcarriers(), S);
        ASSERT_EQ(ch.users(), 2);
        for (std::size_t i = 0; i < users.size(); ++i)
        {
            const auto want = oracle::dft(oracle::taps(users[i], layout, cfg, sync.eta, sync.taps), S);
            for (int nu = 0; nu < S; ++nu)
                EXPECT_LE((ch[nu].col(static_cast<Eigen::Index>(i)) - want[nu]).norm(), 1e-10 * (1.0 + want[nu].norm()));
        }
    }
}

TEST(PathSpectrum, RawPathRouteAgreesWithColumn)
{
    Rng rng = make_rng({28});
    const auto cfg = ofdm(20);
    const auto layout = random_layout(4, cfg.wavelength(), rng);
    const std::vector<UserPaths> users{oracle::random_paths(4, 3e-6, rng), oracle::random_paths(4, 3e-6, rng)};
    const auto sync = sync_and_tap_count(users, cfg);
    const auto ch = frequency_channel(users, layout, cfg);
    const auto h1 = freq_response(users[1], layout, cfg, sync);
    for (int nu = 0; nu < 20; ++nu)
        EXPECT_LT(max_abs_diff(ch[nu].col(1), h1[nu]), 1e-12);
}

TEST(PathSpectrum, LinearInAmplitudes)
{
    Rng rng = make_rng({29});
    const auto cfg = ofdm(12);
    const auto layout = random_layout(3, cfg.wavelength(), rng);
    auto users = std::vector<UserPaths>{oracle::random_paths(4, 3e-6, rng)};
    const auto base = frequency_channel(users, layout, cfg);
    for (auto &p : users[0])
        p.amplitude *= 2.5;
    const auto scaled = frequency_channel(users, layout, cfg);
    for (int nu = 0; nu < 12; ++nu)
        EXPECT_LT((scaled[nu] - 2.5 * base[nu]).norm(), 1e-12 * (1.0 + scaled[nu].norm()));
}

TEST(PathSpectrum, WavelengthScaledPhaseDiffers)
{
    Rng rng = make_rng({30});
    auto cfg = ofdm(4);
    const auto layout = random_layout(2, cfg.wavelength(), rng);
    const std::vector<UserPaths> users{oracle::random_paths(3, 1e-6, rng)};
    const auto a = frequency_channel(users, layout, cfg);
    cfg.phase = PhaseConvention::wavelength_scaled;
    const auto b = frequency_channel(users, layout, cfg);
    EXPECT_GT((a[0] - b[0]).norm(), 1e-6);
}

TEST(OfdmConfig, Validation)
{
    EXPECT_THROW(ofdm(0).validate(), std::invalid_argument);
    EXPECT_THROW(ofdm(4, 0.0).validate(), std::invalid_argument);
    EXPECT_THROW(freq_response(FirChannel{}, 0), std::invalid_argument);
}

TEST(Paths, InvalidPathsRejected)
{
    const auto cfg = ofdm(4);
    const ArrayLayout layout = make_compact_upa(4, cfg.wavelength());
    const TapSync sync{0.0, 0};
    EXPECT_THROW(fir_taps({{-1.0, 0.0, 0.0, 0.0, 0.0}}, layout, cfg, sync), std::invalid_argument);
    EXPECT_THROW(fir_taps({{1.0, -1e-9, 0.0, 0.0, 0.0}}, layout, cfg, sync), std::invalid_argument);
    EXPECT_THROW(fir_taps({{1.0, 0.0, 4.0, 0.0, 0.0}}, layout, cfg, sync), std::invalid_argument);
}
