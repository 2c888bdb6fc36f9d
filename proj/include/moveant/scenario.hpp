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
#include "moveant/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace moveant
{

enum class ScenarioKind
{
    los_dominant,
    rich_nlos
};

enum class PathlossModel
{
    umi_nlos, // 34.53 + 38 log10(d)
    umi_los   // -35.4 + 26 log10(d) + 20 log10(f_c / MHz)
};

/*!MD
# ScenarioConfig
Parameters of one propagation scenario. Angles are in degrees where the name
says so, radians otherwise; distances in meters.

| scenario     | clusters x paths | cluster centers                    | kappa |
|--------------|------------------|------------------------------------|-------|
| los_dominant | 6 x 20           | +-40 deg az, +-20 deg el around LOS | 10 dB |
| rich_nlos    | 100 x 2          | uniform over all directions        | 0 dB  |

Both scenarios default to the urban-microcell LOS pathloss evaluated at the
carrier frequency; the NLOS form is selectable through `pathloss`.
MD!*/
struct ScenarioConfig
{
    ScenarioKind kind = ScenarioKind::los_dominant;
    int users = 10;
    double kappa_db = 10.0;
    int clusters = 6;
    int paths_per_cluster = 20;
    double cluster_azimuth_spread_deg = 40.0;
    double cluster_elevation_spread_deg = 20.0;
    double path_spread_deg = 5.0;
    double delay_stretch = 10.0; // scattered delays in (tau_los, stretch * tau_los]
    double cluster_decay = 1.0;  // exponential power decay over the normalized excess delay
    double radius_min = 100.0;
    double radius_max = 300.0;
    double azimuth_min = -std::numbers::pi / 3.0;
    double azimuth_max = std::numbers::pi / 3.0;
    double bs_height = 4.0;
    double user_height = 1.25;
    PathlossModel pathloss = PathlossModel::umi_los;
    double carrier_frequency = 3e9; // only used by the LOS pathloss form

    static ScenarioConfig los_dominant() { return {}; }

    static ScenarioConfig rich_nlos()
    {
        ScenarioConfig cfg;
        cfg.kind = ScenarioKind::rich_nlos;
        cfg.kappa_db = 0.0;
        cfg.clusters = 100;
        cfg.paths_per_cluster = 2;
        return cfg;
    }

    [[nodiscard]] double kappa() const { return std::pow(10.0, kappa_db / 10.0); }
    [[nodiscard]] int paths_per_user() const { return 1 + clusters * paths_per_cluster; }

    void validate() const
    {
        if (users < 1)
            throw std::invalid_argument("ScenarioConfig: at least one user is required");
        if (clusters < 0 || paths_per_cluster < 1)
            throw std::invalid_argument("ScenarioConfig: invalid cluster layout");
        if (!(radius_min >= 0.0 && radius_max >= radius_min))
            throw std::invalid_argument("ScenarioConfig: invalid radial range");
        if (!(azimuth_max >= azimuth_min))
            throw std::invalid_argument("ScenarioConfig: invalid azimuth range");
        if (!(delay_stretch > 1.0))
            throw std::invalid_argument("ScenarioConfig: delay stretch must exceed 1");
        if (cluster_decay < 0.0 || path_spread_deg < 0.0 || cluster_azimuth_spread_deg < 0.0 ||
            cluster_elevation_spread_deg < 0.0)
            throw std::invalid_argument("ScenarioConfig: spreads and decay must be nonnegative");
    }
};

/// User positions relative to the array center (the coordinate origin).
struct UserDrop
{
    std::vector<Position3> users;
};

/// K users at (r cos phi, r sin phi, h_user - h_bs) with r and phi uniform.
inline UserDrop place_users(const ScenarioConfig &cfg, Rng &rng)
{
    cfg.validate();
    UserDrop drop;
    drop.users.reserve(static_cast<std::size_t>(cfg.users));
    for (int k = 0; k < cfg.users; ++k)
    {
        const double r = uniform(rng, cfg.radius_min, cfg.radius_max);
        const double phi = uniform(rng, cfg.azimuth_min, cfg.azimuth_max);
        drop.users.emplace_back(r * std::cos(phi), r * std::sin(phi), cfg.user_height - cfg.bs_height);
    }
    return drop;
}

/// Urban-microcell NLOS pathloss 34.53 + 38 log10(d) [dB].
inline double pathloss_db(double distance)
{
    if (!(distance >= 1.0))
        throw std::invalid_argument("pathloss_db: distance must be at least 1 m");
    return 34.53 + 38.0 * std::log10(distance);
}

/// Urban-microcell LOS pathloss -35.4 + 26 log10(d) + 20 log10(f_c / MHz) [dB].
inline double pathloss_los_db(double distance, double carrier_frequency)
{
    if (!(distance >= 1.0))
        throw std::invalid_argument("pathloss_los_db: distance must be at least 1 m");
    return -35.4 + 26.0 * std::log10(distance) + 20.0 * std::log10(carrier_frequency / 1e6);
}

inline double pathloss_db(double distance, const ScenarioConfig &cfg)
{
    return cfg.pathloss == PathlossModel::umi_nlos ? pathloss_db(distance)
                                                   : pathloss_los_db(distance, cfg.carrier_frequency);
}

namespace detail
{
inline double wrap_azimuth(double a)
{
    a = std::remainder(a, 2.0 * std::numbers::pi);
    return std::clamp(a, -std::numbers::pi, std::numbers::pi);
}

inline double clamp_elevation(double e)
{
    return std::clamp(e, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
}

inline double deg(double d)
{
    return d * std::numbers::pi / 180.0;
}

/*
 * One LOS path plus clusters of sub-paths. Every cluster draws one excess
 * delay uniformly in (tau_los, stretch * tau_los]; its sub-paths share that
 * delay. Cluster powers decay exponentially with the normalized excess delay
 * and are split evenly across sub-paths; the scattered total is G / (1 + kappa)
 * and the LOS path carries G kappa / (1 + kappa), where G = 10^(-PL/10).
 */
inline UserPaths generate_user_paths(const Position3 &user, const ScenarioConfig &cfg, bool isotropic, Rng &rng)
{
    const double distance = user.norm();
    const double ground = std::hypot(user.x(), user.y());
    const double los_az = std::atan2(user.y(), user.x());
    const double los_el = std::atan2(user.z(), ground);
    const double tau_los = distance / kSpeedOfLight;
    const double gain = std::pow(10.0, -pathloss_db(std::max(distance, 1.0), cfg) / 10.0);
    const double kappa = cfg.kappa();

    UserPaths paths;
    paths.reserve(static_cast<std::size_t>(cfg.paths_per_user()));
    paths.push_back({std::sqrt(gain * kappa / (1.0 + kappa)), tau_los, wrap_azimuth(los_az),
                     clamp_elevation(los_el), uniform(rng, 0.0, 2.0 * std::numbers::pi)});

    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(cfg.clusters));
    for (int c = 0; c < cfg.clusters; ++c)
    {
        // 1 - u lies in (0, 1], so the delay lies in (tau_los, stretch * tau_los].
        const double excess = 1.0 - uniform01(rng);
        const double delay = tau_los * (1.0 + (cfg.delay_stretch - 1.0) * excess);
        double center_az = 0.0;
        double center_el = 0.0;
        if (isotropic)
        {
            center_az = uniform(rng, -std::numbers::pi, std::numbers::pi);
            center_el = uniform(rng, -0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
        }
        else
        {
            center_az = los_az + deg(uniform(rng, -cfg.cluster_azimuth_spread_deg, cfg.cluster_azimuth_spread_deg));
            center_el = los_el + deg(uniform(rng, -cfg.cluster_elevation_spread_deg, cfg.cluster_elevation_spread_deg));
        }
        weights.push_back(std::exp(-cfg.cluster_decay * excess));
        for (int s = 0; s < cfg.paths_per_cluster; ++s)
        {
            const double az = center_az + deg(uniform(rng, -cfg.path_spread_deg, cfg.path_spread_deg));
            const double el = center_el + deg(uniform(rng, -cfg.path_spread_deg, cfg.path_spread_deg));
            paths.push_back({0.0, delay, wrap_azimuth(az), clamp_elevation(el), uniform(rng, 0.0, 2.0 * std::numbers::pi)});
        }
    }

    double weight_sum = 0.0;
    for (double w : weights)
        weight_sum += w;
    const double scattered = gain / (1.0 + kappa);
    for (int c = 0; c < cfg.clusters; ++c)
    {
        const double path_power = scattered * weights[static_cast<std::size_t>(c)] / weight_sum / cfg.paths_per_cluster;
        for (int s = 0; s < cfg.paths_per_cluster; ++s)
            paths[static_cast<std::size_t>(1 + c * cfg.paths_per_cluster + s)].amplitude = std::sqrt(path_power);
    }
    if (cfg.clusters == 0)
        paths.front().amplitude = std::sqrt(gain);
    return paths;
}

inline std::vector<UserPaths> generate_paths(const UserDrop &drop, const ScenarioConfig &cfg, bool isotropic, Rng &rng)
{
    cfg.validate();
    std::vector<UserPaths> out;
    out.reserve(drop.users.size());
    for (const auto &u : drop.users)
        out.push_back(generate_user_paths(u, cfg, isotropic, rng));
    return out;
}
} // namespace detail

/// LOS-dominant multipath: clusters concentrated around the LOS direction.
inline std::vector<UserPaths> gen_los_scenario(const UserDrop &drop, const ScenarioConfig &cfg, Rng &rng)
{
    if (cfg.kind != ScenarioKind::los_dominant)
        throw std::invalid_argument("gen_los_scenario: configuration is not LOS-dominant");
    return detail::generate_paths(drop, cfg, false, rng);
}

/// Rich scattering: cluster centers uniform over all azimuth and elevation angles.
inline std::vector<UserPaths> gen_nlos_scenario(const UserDrop &drop, const ScenarioConfig &cfg, Rng &rng)
{
    if (cfg.kind != ScenarioKind::rich_nlos)
        throw std::invalid_argument("gen_nlos_scenario: configuration is not rich-NLOS");
    return detail::generate_paths(drop, cfg, true, rng);
}

inline std::vector<UserPaths> generate_scenario(const UserDrop &drop, const ScenarioConfig &cfg, Rng &rng)
{
    return cfg.kind == ScenarioKind::los_dominant ? gen_los_scenario(drop, cfg, rng) : gen_nlos_scenario(drop, cfg, rng);
}

/// Independent stream for drop `index` of a run seeded with `seed`.
inline Rng drop_rng(std::uint64_t seed, std::uint64_t index)
{
    return make_rng({seed, index, 0x64726f70ULL});
}

} // namespace moveant
