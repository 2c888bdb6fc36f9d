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
#include "moveant/config.hpp"
#include "moveant/io.hpp"
#include "moveant/pso_optimizer.hpp"
#include "moveant/random.hpp"
#include "moveant/rate_metrics.hpp"
#include "moveant/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace moveant
{

enum class Strategy
{
    movable,
    sparse_ula,
    sparse_upa,
    compact_upa,
    interference_free
};

enum class SweepVariable
{
    subcarriers,
    evm,
    power
};

enum class PowerMode
{
    psd,  // total power = psd * noise bandwidth
    total // total power given directly
};

inline std::string to_string(Strategy s)
{
    switch (s)
    {
    case Strategy::movable: return "movable";
    case Strategy::sparse_ula: return "sparse_ula";
    case Strategy::sparse_upa: return "sparse_upa";
    case Strategy::compact_upa: return "compact_upa";
    case Strategy::interference_free: return "interference_free";
    }
    return "?";
}

inline std::string to_string(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::subcarriers: return "subcarriers";
    case SweepVariable::evm: return "evm";
    case SweepVariable::power: return "power";
    }
    return "?";
}

inline Strategy parse_strategy(const std::string &s)
{
    for (auto v : {Strategy::movable, Strategy::sparse_ula, Strategy::sparse_upa, Strategy::compact_upa,
                   Strategy::interference_free})
        if (to_string(v) == s)
            return v;
    throw ConfigError("unknown strategy '" + s + "'");
}

inline SweepVariable parse_sweep(const std::string &s)
{
    for (auto v : {SweepVariable::subcarriers, SweepVariable::evm, SweepVariable::power})
        if (to_string(v) == s)
            return v;
    throw ConfigError("unknown sweep variable '" + s + "'");
}

/*!MD
# Power bookkeeping
`noise_variance` is the receiver noise power over `noise_bandwidth` (by default
3.98 pW over 100 MHz). Transmit power is either a spectral density
(`psd_mw_per_mhz`) or a total power over the same bandwidth. Both are scaled
to one subcarrier of width Delta:

    rho     = P_total * Delta / noise_bandwidth
    sigma^2 = noise_variance * Delta / noise_bandwidth

so the per-subcarrier SNR P_total / noise_variance does not depend on S.
MD!*/
struct PowerConfig
{
    PowerMode mode = PowerMode::psd;
    double psd_mw_per_mhz = 1.0;
    double total_power_mw = 316.0;
    double noise_variance_pw = 3.98;
    double noise_bandwidth_mhz = 100.0;

    [[nodiscard]] double total_power_w() const
    {
        return mode == PowerMode::psd ? psd_mw_per_mhz * 1e-3 * noise_bandwidth_mhz : total_power_mw * 1e-3;
    }

    [[nodiscard]] RateParams rate_params(double total_power_w_value, double subcarrier_spacing, double evm) const
    {
        const double share = subcarrier_spacing / (noise_bandwidth_mhz * 1e6);
        return {total_power_w_value * share, noise_variance_pw * 1e-12 * share, evm};
    }
};

struct ExperimentSpec
{
    ScenarioConfig scenario = ScenarioConfig::los_dominant();
    SweepVariable sweep = SweepVariable::subcarriers;
    std::vector<double> grid{1, 20, 50, 100, 200, 300};
    std::vector<Strategy> strategies{Strategy::movable, Strategy::sparse_ula, Strategy::sparse_upa,
                                     Strategy::compact_upa, Strategy::interference_free};
    int drops = 20;
    PsoConfig pso = PsoConfig::full();
    bool seed_sparse_upa = true;       // elitist seeding of the swarm with the sparse UPA
    int optimization_realizations = 1; // channel draws the optimizer averages over
    std::uint64_t seed = 1;
    unsigned threads = 0;              // 0: hardware concurrency

    int antennas = 16;
    int grid_rows = 4;
    int grid_cols = 4;
    double region_side_wavelengths = 5.0;
    double region_pitch_wavelengths = 5.0;

    int subcarriers = 200; // used when the sweep is not over S
    double subcarrier_spacing = 15e3;
    double carrier_frequency = 3e9;
    PhaseConvention phase = PhaseConvention::carrier;
    Pulse pulse{};
    double evm = 0.02;     // used when the sweep is not over EVM
    PowerConfig power{};

    /// Defaults for each sweep: S sweep at EVM 0.02 and 1 mW/MHz; EVM sweep at
    /// 316 mW and S = 200; power sweep at EVM 0.04 and S = 200.
    static ExperimentSpec defaults(SweepVariable sweep)
    {
        ExperimentSpec spec;
        spec.sweep = sweep;
        if (sweep == SweepVariable::evm)
        {
            spec.grid = {0.01, 0.02, 0.04, 0.08, 0.16, 0.32, 0.64, 1.0};
            spec.power.mode = PowerMode::total;
            spec.power.total_power_mw = 316.0;
        }
        else if (sweep == SweepVariable::power)
        {
            spec.grid = {1, 3.16, 10, 31.6, 100, 316, 1000, 3160, 10000, 31600, 100000};
            spec.power.mode = PowerMode::total;
            spec.evm = 0.04;
        }
        return spec;
    }

    [[nodiscard]] double wavelength() const { return kSpeedOfLight / carrier_frequency; }

    [[nodiscard]] RegionGrid region_grid() const
    {
        const double lambda = wavelength();
        return make_region_grid(grid_rows, grid_cols, region_side_wavelengths * lambda, region_pitch_wavelengths * lambda);
    }

    /// Total aperture spanned by the movement regions.
    [[nodiscard]] double aperture_width() const
    {
        return wavelength() * ((grid_cols - 1) * region_pitch_wavelengths + region_side_wavelengths);
    }
    [[nodiscard]] double aperture_height() const
    {
        return wavelength() * ((grid_rows - 1) * region_pitch_wavelengths + region_side_wavelengths);
    }

    void validate() const
    {
        if (grid.empty())
            throw ConfigError("experiment: the sweep grid is empty");
        if (strategies.empty())
            throw ConfigError("experiment: no strategies selected");
        if (drops < 1)
            throw ConfigError("experiment: drop count must be at least 1");
        if (optimization_realizations < 1)
            throw ConfigError("experiment: optimization_realizations must be at least 1");
        if (grid_rows * grid_cols != antennas)
            throw ConfigError("experiment: grid_rows * grid_cols must equal antennas");
        for (double v : grid)
        {
            if (sweep == SweepVariable::subcarriers && (v < 1 || v != std::floor(v)))
                throw ConfigError("experiment: subcarrier grid entries must be positive integers");
            if (sweep == SweepVariable::evm && !(v >= 0.0 && v <= 1.0))
                throw ConfigError("experiment: EVM grid entries must lie in [0, 1]");
            if (sweep == SweepVariable::power && !(v >= 0.0))
                throw ConfigError("experiment: power grid entries must be nonnegative");
        }
        if (!(evm >= 0.0 && evm <= 1.0))
            throw ConfigError("experiment: EVM must lie in [0, 1]");
        if (subcarriers < 1)
            throw ConfigError("experiment: subcarriers must be positive");
        try
        {
            scenario.validate();
            pso.validate();
            (void)region_grid();
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(e.what());
        }
    }

    /// Settings of one sweep point.
    struct Point
    {
        OfdmConfig ofdm;
        RateParams rate;
    };

    [[nodiscard]] Point point(double value) const
    {
        Point p;
        p.ofdm.subcarriers = sweep == SweepVariable::subcarriers ? static_cast<int>(value) : subcarriers;
        p.ofdm.subcarrier_spacing = subcarrier_spacing;
        p.ofdm.carrier_frequency = carrier_frequency;
        p.ofdm.phase = phase;
        p.ofdm.pulse = pulse;
        const double e = sweep == SweepVariable::evm ? value : evm;
        const double watts = sweep == SweepVariable::power ? value * 1e-3 : power.total_power_w();
        p.rate = power.rate_params(watts, subcarrier_spacing, e);
        return p;
    }
};

/// Reads an experiment from `key = value` pairs; keys not present keep `base` values.
inline ExperimentSpec spec_from_config(const KeyValueConfig &kv, ExperimentSpec base)
{
    static const std::vector<std::string> known = {
        "sweep", "grid", "strategies", "drops", "seed", "threads", "scenario", "users", "antennas", "grid_rows",
        "grid_cols", "region_side_wavelengths", "region_pitch_wavelengths", "kappa_db", "clusters",
        "paths_per_cluster", "cluster_azimuth_spread_deg", "cluster_elevation_spread_deg", "path_spread_deg",
        "delay_stretch", "cluster_decay", "radius_min_m", "radius_max_m", "azimuth_min_rad", "azimuth_max_rad",
        "bs_height_m", "user_height_m", "pathloss", "carrier_ghz", "subcarrier_spacing_khz", "subcarriers", "evm",
        "power_mode", "psd_mw_per_mhz", "total_power_mw", "noise_variance_pw", "noise_bandwidth_mhz", "particles",
        "iterations", "inertia_start", "inertia_end", "cognitive", "social", "velocity_clamp", "penalty",
        "penalty_weight", "seed_sparse_upa", "optimization_realizations", "pulse", "rolloff", "phase_convention"};
    for (const auto &[key, value] : kv.values())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config key '" + key + "'");

    ExperimentSpec s = std::move(base);
    if (kv.has("scenario"))
    {
        const std::string v = kv.get("scenario");
        if (v == "los")
            s.scenario = ScenarioConfig::los_dominant();
        else if (v == "nlos")
            s.scenario = ScenarioConfig::rich_nlos();
        else
            throw ConfigError("scenario must be 'los' or 'nlos'");
    }
    if (kv.has("sweep"))
    {
        const auto sweep = parse_sweep(kv.get("sweep"));
        if (sweep != s.sweep && !kv.has("grid"))
            s.grid = ExperimentSpec::defaults(sweep).grid;
        s.sweep = sweep;
    }
    if (kv.has("grid"))
        s.grid = kv.get_list("grid");
    if (kv.has("strategies"))
    {
        s.strategies.clear();
        for (const auto &item : KeyValueConfig::split_list(kv.get("strategies")))
            s.strategies.push_back(parse_strategy(item));
    }
    auto set_int = [&](const char *key, int &dst) { if (kv.has(key)) dst = kv.get_int<int>(key); };
    auto set_dbl = [&](const char *key, double &dst, double scale = 1.0) { if (kv.has(key)) dst = kv.get_double(key) * scale; };

    set_int("drops", s.drops);
    if (kv.has("seed"))
        s.seed = kv.get_int<std::uint64_t>("seed");
    if (kv.has("threads"))
        s.threads = kv.get_int<unsigned>("threads");
    set_int("users", s.scenario.users);
    set_int("antennas", s.antennas);
    set_int("grid_rows", s.grid_rows);
    set_int("grid_cols", s.grid_cols);
    set_dbl("region_side_wavelengths", s.region_side_wavelengths);
    set_dbl("region_pitch_wavelengths", s.region_pitch_wavelengths);
    set_dbl("kappa_db", s.scenario.kappa_db);
    set_int("clusters", s.scenario.clusters);
    set_int("paths_per_cluster", s.scenario.paths_per_cluster);
    set_dbl("cluster_azimuth_spread_deg", s.scenario.cluster_azimuth_spread_deg);
    set_dbl("cluster_elevation_spread_deg", s.scenario.cluster_elevation_spread_deg);
    set_dbl("path_spread_deg", s.scenario.path_spread_deg);
    set_dbl("delay_stretch", s.scenario.delay_stretch);
    set_dbl("cluster_decay", s.scenario.cluster_decay);
    set_dbl("radius_min_m", s.scenario.radius_min);
    set_dbl("radius_max_m", s.scenario.radius_max);
    set_dbl("azimuth_min_rad", s.scenario.azimuth_min);
    set_dbl("azimuth_max_rad", s.scenario.azimuth_max);
    set_dbl("bs_height_m", s.scenario.bs_height);
    set_dbl("user_height_m", s.scenario.user_height);
    if (kv.has("pathloss"))
    {
        const std::string v = kv.get("pathloss");
        if (v == "umi_nlos")
            s.scenario.pathloss = PathlossModel::umi_nlos;
        else if (v == "umi_los")
            s.scenario.pathloss = PathlossModel::umi_los;
        else
            throw ConfigError("pathloss must be 'umi_nlos' or 'umi_los'");
    }
    set_dbl("carrier_ghz", s.carrier_frequency, 1e9);
    s.scenario.carrier_frequency = s.carrier_frequency;
    set_dbl("subcarrier_spacing_khz", s.subcarrier_spacing, 1e3);
    set_int("subcarriers", s.subcarriers);
    set_dbl("evm", s.evm);
    if (kv.has("power_mode"))
    {
        const std::string v = kv.get("power_mode");
        if (v == "psd")
            s.power.mode = PowerMode::psd;
        else if (v == "total")
            s.power.mode = PowerMode::total;
        else
            throw ConfigError("power_mode must be 'psd' or 'total'");
    }
    set_dbl("psd_mw_per_mhz", s.power.psd_mw_per_mhz);
    set_dbl("total_power_mw", s.power.total_power_mw);
    set_dbl("noise_variance_pw", s.power.noise_variance_pw);
    set_dbl("noise_bandwidth_mhz", s.power.noise_bandwidth_mhz);
    set_int("particles", s.pso.particles);
    set_int("iterations", s.pso.iterations);
    set_dbl("inertia_start", s.pso.inertia_start);
    set_dbl("inertia_end", s.pso.inertia_end);
    set_dbl("cognitive", s.pso.cognitive);
    set_dbl("social", s.pso.social);
    set_dbl("velocity_clamp", s.pso.velocity_clamp);
    if (kv.has("penalty"))
    {
        const std::string v = kv.get("penalty");
        if (v == "dominant")
            s.pso.penalty = PenaltyPolicy::dominant;
        else if (v == "additive")
            s.pso.penalty = PenaltyPolicy::additive;
        else
            throw ConfigError("penalty must be 'dominant' or 'additive'");
    }
    set_dbl("penalty_weight", s.pso.penalty_weight);
    if (kv.has("seed_sparse_upa"))
        s.seed_sparse_upa = kv.get_bool("seed_sparse_upa");
    set_int("optimization_realizations", s.optimization_realizations);
    if (kv.has("pulse"))
    {
        const std::string v = kv.get("pulse");
        if (v == "triangle")
            s.pulse.kind = Pulse::Kind::triangle;
        else if (v == "raised_cosine")
            s.pulse.kind = Pulse::Kind::raised_cosine;
        else
            throw ConfigError("pulse must be 'triangle' or 'raised_cosine'");
    }
    set_dbl("rolloff", s.pulse.rolloff);
    if (kv.has("phase_convention"))
    {
        const std::string v = kv.get("phase_convention");
        if (v == "carrier")
            s.phase = PhaseConvention::carrier;
        else if (v == "wavelength_scaled")
            s.phase = PhaseConvention::wavelength_scaled;
        else
            throw ConfigError("phase_convention must be 'carrier' or 'wavelength_scaled'");
    }
    s.validate();
    return s;
}

/// Canonical `key = value` text of every setting that influences results.
inline std::string canonical_config(const ExperimentSpec &s)
{
    std::ostringstream out;
    auto kv = [&](const char *k, const std::string &v) { out << k << " = " << v << '\n'; };
    auto d = [](double x) { return format_double(x); };
    std::string grid;
    for (std::size_t i = 0; i < s.grid.size(); ++i)
        grid += (i ? "," : "") + d(s.grid[i]);
    std::string strategies;
    for (std::size_t i = 0; i < s.strategies.size(); ++i)
        strategies += (i ? "," : "") + to_string(s.strategies[i]);
    kv("sweep", to_string(s.sweep));
    kv("grid", grid);
    kv("strategies", strategies);
    kv("drops", std::to_string(s.drops));
    kv("seed", std::to_string(s.seed));
    kv("scenario", s.scenario.kind == ScenarioKind::los_dominant ? "los" : "nlos");
    kv("users", std::to_string(s.scenario.users));
    kv("antennas", std::to_string(s.antennas));
    kv("grid_rows", std::to_string(s.grid_rows));
    kv("grid_cols", std::to_string(s.grid_cols));
    kv("region_side_wavelengths", d(s.region_side_wavelengths));
    kv("region_pitch_wavelengths", d(s.region_pitch_wavelengths));
    kv("kappa_db", d(s.scenario.kappa_db));
    kv("clusters", std::to_string(s.scenario.clusters));
    kv("paths_per_cluster", std::to_string(s.scenario.paths_per_cluster));
    kv("cluster_azimuth_spread_deg", d(s.scenario.cluster_azimuth_spread_deg));
    kv("cluster_elevation_spread_deg", d(s.scenario.cluster_elevation_spread_deg));
    kv("path_spread_deg", d(s.scenario.path_spread_deg));
    kv("delay_stretch", d(s.scenario.delay_stretch));
    kv("cluster_decay", d(s.scenario.cluster_decay));
    kv("radius_min_m", d(s.scenario.radius_min));
    kv("radius_max_m", d(s.scenario.radius_max));
    kv("azimuth_min_rad", d(s.scenario.azimuth_min));
    kv("azimuth_max_rad", d(s.scenario.azimuth_max));
    kv("bs_height_m", d(s.scenario.bs_height));
    kv("user_height_m", d(s.scenario.user_height));
    kv("pathloss", s.scenario.pathloss == PathlossModel::umi_nlos ? "umi_nlos" : "umi_los");
    kv("carrier_ghz", d(s.carrier_frequency / 1e9));
    kv("subcarrier_spacing_khz", d(s.subcarrier_spacing / 1e3));
    kv("subcarriers", std::to_string(s.subcarriers));
    kv("evm", d(s.evm));
    kv("power_mode", s.power.mode == PowerMode::psd ? "psd" : "total");
    kv("psd_mw_per_mhz", d(s.power.psd_mw_per_mhz));
    kv("total_power_mw", d(s.power.total_power_mw));
    kv("noise_variance_pw", d(s.power.noise_variance_pw));
    kv("noise_bandwidth_mhz", d(s.power.noise_bandwidth_mhz));
    kv("particles", std::to_string(s.pso.particles));
    kv("iterations", std::to_string(s.pso.iterations));
    kv("inertia_start", d(s.pso.inertia_start));
    kv("inertia_end", d(s.pso.inertia_end));
    kv("cognitive", d(s.pso.cognitive));
    kv("social", d(s.pso.social));
    kv("velocity_clamp", d(s.pso.velocity_clamp));
    kv("penalty", s.pso.penalty == PenaltyPolicy::dominant ? "dominant" : "additive");
    kv("penalty_weight", d(s.pso.penalty_weight));
    kv("seed_sparse_upa", s.seed_sparse_upa ? "true" : "false");
    kv("optimization_realizations", std::to_string(s.optimization_realizations));
    kv("pulse", s.pulse.kind == Pulse::Kind::triangle ? "triangle" : "raised_cosine");
    kv("rolloff", d(s.pulse.rolloff));
    kv("phase_convention", s.phase == PhaseConvention::carrier ? "carrier" : "wavelength_scaled");
    return out.str();
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string &text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct ResultRow
{
    double sweep_value = 0.0;
    Strategy strategy = Strategy::movable;
    double mean = 0.0;
    double std_error = 0.0;
    int drops = 0;
    double limit = 0.0; // K log2(1/EVM^2) at this point
};

struct ResultTable
{
    SweepVariable sweep = SweepVariable::subcarriers;
    std::vector<ResultRow> rows;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::string scenario;

    [[nodiscard]] const ResultRow &at(double sweep_value, Strategy strategy) const
    {
        for (const auto &r : rows)
            if (r.sweep_value == sweep_value && r.strategy == strategy)
                return r;
        throw std::out_of_range("ResultTable: no row for " + format_double(sweep_value) + "/" + to_string(strategy));
    }
};

/// Sum rates of one drop at one sweep point, indexed like `spec.strategies`.
struct DropOutcome
{
    std::vector<double> rates;
    ArrayLayout movable_layout;
};

namespace detail
{
inline bool needs_optimization(const ExperimentSpec &spec)
{
    return std::any_of(spec.strategies.begin(), spec.strategies.end(), [](Strategy s) {
        return s == Strategy::movable || s == Strategy::interference_free;
    });
}

inline std::uint64_t pso_seed(const ExperimentSpec &spec, std::size_t drop, std::size_t point)
{
    Rng rng = make_rng({spec.seed, drop, point, 0x70736f73ULL});
    return rng();
}
} // namespace detail

/// Channels of one drop: the evaluated realization first, then any extra
/// optimization-only realizations for the same user positions.
inline std::vector<std::vector<UserPaths>> drop_channels(const ExperimentSpec &spec, std::size_t drop)
{
    Rng rng = drop_rng(spec.seed, drop);
    const UserDrop users = place_users(spec.scenario, rng);
    std::vector<std::vector<UserPaths>> out;
    for (int r = 0; r < spec.optimization_realizations; ++r)
        out.push_back(generate_scenario(users, spec.scenario, rng));
    return out;
}

/// Evaluates every strategy of `spec` on one drop at one sweep point.
inline DropOutcome run_drop_point(const ExperimentSpec &spec, const std::vector<std::vector<UserPaths>> &channels,
                                  std::size_t drop, std::size_t point)
{
    const auto settings = spec.point(spec.grid[point]);
    const double lambda = spec.wavelength();
    std::vector<PathSpectrum> spectra;
    spectra.reserve(channels.size());
    for (const auto &c : channels)
        spectra.emplace_back(c, settings.ofdm);

    DropOutcome outcome;
    if (detail::needs_optimization(spec))
    {
        PsoConfig pso = spec.pso;
        pso.seed = detail::pso_seed(spec, drop, point);
        std::vector<ArrayLayout> seeds;
        if (spec.seed_sparse_upa)
            seeds.push_back(make_sparse_upa(spec.antennas, spec.aperture_width(), spec.aperture_height(), lambda));
        const RegionGrid regions = spec.region_grid();
        if (!seeds.empty() && !check_feasible(seeds.front(), regions))
            seeds.clear();
        SumRateObjective objective(spectra, settings.rate);
        outcome.movable_layout = optimize(regions, lambda, objective, pso, seeds).best_layout;
    }

    const auto evaluate_layout = [&](const ArrayLayout &layout) {
        return sum_rate(spectra.front().synthesize(layout), settings.rate).average;
    };
    for (Strategy s : spec.strategies)
    {
        switch (s)
        {
        case Strategy::movable:
            outcome.rates.push_back(evaluate_layout(outcome.movable_layout));
            break;
        case Strategy::sparse_ula:
            outcome.rates.push_back(evaluate_layout(make_sparse_ula(spec.antennas, spec.aperture_width(), lambda)));
            break;
        case Strategy::sparse_upa:
            outcome.rates.push_back(
                evaluate_layout(make_sparse_upa(spec.antennas, spec.aperture_width(), spec.aperture_height(), lambda)));
            break;
        case Strategy::compact_upa:
            outcome.rates.push_back(evaluate_layout(make_compact_upa(spec.antennas, lambda)));
            break;
        case Strategy::interference_free:
            outcome.rates.push_back(
                interference_free_bound(spectra.front().synthesize(outcome.movable_layout), settings.rate));
            break;
        }
    }
    return outcome;
}

/*!MD
# run_experiment
Paired Monte-Carlo comparison. Every drop draws user positions and multipath
once; every strategy and sweep point of that drop is evaluated on the same
channels, and the movable array is optimized per (drop, sweep point). Drops run
on worker threads; results are stored by drop index and reduced in index order,
so the table does not depend on scheduling.
MD!*/
inline ResultTable run_experiment(const ExperimentSpec &spec)
{
    spec.validate();
    const auto n_drops = static_cast<std::size_t>(spec.drops);
    const std::size_t n_points = spec.grid.size();
    std::vector<std::vector<std::vector<double>>> rates(n_drops); // [drop][point][strategy]

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t d = next++; d < n_drops; d = next++)
        {
            try
            {
                const auto channels = drop_channels(spec, d);
                rates[d].resize(n_points);
                for (std::size_t p = 0; p < n_points; ++p)
                    rates[d][p] = run_drop_point(spec, channels, d, p).rates;
            }
            catch (...)
            {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = n_drops;
            }
        }
    };
    unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_drops));
    if (threads <= 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    ResultTable table;
    table.sweep = spec.sweep;
    table.seed = spec.seed;
    table.config_hash = fnv1a(canonical_config(spec));
    table.scenario = spec.scenario.kind == ScenarioKind::los_dominant ? "los" : "nlos";
    for (std::size_t p = 0; p < n_points; ++p)
    {
        const double evm = spec.point(spec.grid[p]).rate.evm;
        for (std::size_t s = 0; s < spec.strategies.size(); ++s)
        {
            double sum = 0.0;
            for (std::size_t d = 0; d < n_drops; ++d)
                sum += rates[d][p][s];
            const double mean = sum / static_cast<double>(n_drops);
            double sq = 0.0;
            for (std::size_t d = 0; d < n_drops; ++d)
                sq += (rates[d][p][s] - mean) * (rates[d][p][s] - mean);
            const double se =
                n_drops > 1 ? std::sqrt(sq / static_cast<double>(n_drops - 1) / static_cast<double>(n_drops)) : 0.0;
            table.rows.push_back({spec.grid[p], spec.strategies[s], mean, se, spec.drops,
                                  asymptotic_limit(spec.scenario.users, evm)});
        }
    }
    return table;
}

inline ResultTable sweep_subcarriers(ExperimentSpec spec)
{
    spec.sweep = SweepVariable::subcarriers;
    return run_experiment(spec);
}

inline ResultTable sweep_evm(ExperimentSpec spec)
{
    spec.sweep = SweepVariable::evm;
    return run_experiment(spec);
}

inline ResultTable sweep_power(ExperimentSpec spec)
{
    spec.sweep = SweepVariable::power;
    return run_experiment(spec);
}

/*!MD
# Result CSV
```
# moveant results
# sweep=subcarriers scenario=los seed=1
# config_hash=0123456789abcdef
sweep_value,strategy,mean_rate,std_error,drops,limit
1,movable,41.2,0.8,20,112.87712379549449
```
Rates and limits in bit/s/Hz. The hash covers the canonical configuration.
MD!*/
inline void write_csv(std::ostream &out, const ResultTable &table)
{
    char hash[17];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(table.config_hash));
    out << "# moveant results\n# sweep=" << to_string(table.sweep) << " scenario=" << table.scenario
        << " seed=" << table.seed << "\n# config_hash=" << hash << '\n';
    out << "sweep_value,strategy,mean_rate,std_error,drops,limit\n";
    for (const auto &r : table.rows)
        out << format_double(r.sweep_value) << ',' << to_string(r.strategy) << ',' << format_double(r.mean) << ','
            << format_double(r.std_error) << ',' << r.drops << ',' << format_double(r.limit) << '\n';
}

} // namespace moveant
