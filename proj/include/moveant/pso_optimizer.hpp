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
#include "moveant/rate_metrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace moveant
{

/// How candidates that break the lambda/2 spacing constraint are scored.
enum class PenaltyPolicy
{
    /// -mu * depth: every infeasible candidate scores below every feasible one.
    dominant,
    /// objective - mu * depth.
    additive
};

struct PsoConfig
{
    int particles = 180;
    int iterations = 100;
    double inertia_start = 0.9; // linearly decayed ...
    double inertia_end = 0.4;   // ... to this value at the last iteration
    double cognitive = 1.5;     // c1
    double social = 1.5;        // c2
    double velocity_clamp = 0.1; // fraction of each box width
    PenaltyPolicy penalty = PenaltyPolicy::dominant;
    double penalty_weight = 1e6; // mu, applied to sum of squared spacing deficits [1/m^2]
    int init_retries = 200;
    std::uint64_t seed = 1;

    void validate() const
    {
        if (particles < 1)
            throw std::invalid_argument("PsoConfig: at least one particle is required");
        if (iterations < 1)
            throw std::invalid_argument("PsoConfig: at least one iteration is required");
        if (inertia_start < 0.0 || inertia_end < 0.0 || cognitive < 0.0 || social < 0.0)
            throw std::invalid_argument("PsoConfig: coefficients must be nonnegative");
        if (!(velocity_clamp > 0.0))
            throw std::invalid_argument("PsoConfig: velocity clamp must be positive");
        if (!(penalty_weight > 0.0))
            throw std::invalid_argument("PsoConfig: penalty weight must be positive");
    }

    static PsoConfig full() { return {}; }

    static PsoConfig smoke()
    {
        PsoConfig cfg;
        cfg.particles = 30;
        cfg.iterations = 25;
        return cfg;
    }
};

/// Thrown when no particle can satisfy the movement and spacing constraints.
class SetupError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct BoxBounds
{
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    [[nodiscard]] Eigen::Index dims() const { return lower.size(); }
    [[nodiscard]] Eigen::VectorXd width() const { return upper - lower; }
    [[nodiscard]] Eigen::VectorXd clamp(const Eigen::VectorXd &x) const { return x.cwiseMax(lower).cwiseMin(upper); }
    [[nodiscard]] bool contains(const Eigen::VectorXd &x, double tol = kGeometryTolerance) const
    {
        return ((x - lower).array() >= -tol).all() && ((upper - x).array() >= -tol).all();
    }
};

struct Particle
{
    Eigen::VectorXd position;
    Eigen::VectorXd velocity;
    Eigen::VectorXd best_position;
    double value = -std::numeric_limits<double>::infinity();
    double best_value = -std::numeric_limits<double>::infinity();
};

struct Swarm
{
    std::vector<Particle> particles;
    Eigen::VectorXd global_best_position;
    double global_best_value = -std::numeric_limits<double>::infinity();
    int iteration = 0;
};

struct SwarmTrace
{
    std::vector<double> best_values; // global best after each iteration
    Eigen::VectorXd best_position;
    ArrayLayout best_layout;         // set by the antenna-position optimizer
};

/// Uniform initial positions inside the box, velocities in +-(clamp * width).
inline Swarm initialize_swarm(const BoxBounds &bounds, const PsoConfig &cfg, Rng &rng)
{
    cfg.validate();
    Swarm swarm;
    swarm.particles.resize(static_cast<std::size_t>(cfg.particles));
    const Eigen::VectorXd vmax = cfg.velocity_clamp * bounds.width();
    for (auto &p : swarm.particles)
    {
        p.position.resize(bounds.dims());
        p.velocity.resize(bounds.dims());
        for (Eigen::Index d = 0; d < bounds.dims(); ++d)
            p.position[d] = uniform(rng, bounds.lower[d], bounds.upper[d]);
        for (Eigen::Index d = 0; d < bounds.dims(); ++d)
            p.velocity[d] = uniform(rng, -vmax[d], vmax[d]);
        p.best_position = p.position;
    }
    return swarm;
}

/// Scores every particle and refreshes the personal and global bests.
template <class Fitness>
    requires std::invocable<Fitness &, const Eigen::VectorXd &>
void evaluate(Swarm &swarm, Fitness &&fitness)
{
    for (auto &p : swarm.particles)
    {
        p.value = fitness(p.position);
        if (p.value > p.best_value)
        {
            p.best_value = p.value;
            p.best_position = p.position;
        }
        if (p.value > swarm.global_best_value)
        {
            swarm.global_best_value = p.value;
            swarm.global_best_position = p.position;
        }
    }
}

/// Inertia weight at the given iteration (linear decay).
inline double inertia_at(const PsoConfig &cfg, int iteration)
{
    if (cfg.iterations <= 1)
        return cfg.inertia_start;
    const double t = static_cast<double>(iteration) / static_cast<double>(cfg.iterations - 1);
    return cfg.inertia_start + (cfg.inertia_end - cfg.inertia_start) * t;
}

/// v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x); x <- clamp(x + v).
inline void step(Swarm &swarm, const BoxBounds &bounds, const PsoConfig &cfg, Rng &rng)
{
    if (swarm.global_best_position.size() != bounds.dims())
        throw std::logic_error("step: swarm has not been evaluated");
    const double w = inertia_at(cfg, swarm.iteration);
    const Eigen::VectorXd vmax = cfg.velocity_clamp * bounds.width();
    for (auto &p : swarm.particles)
    {
        for (Eigen::Index d = 0; d < bounds.dims(); ++d)
        {
            const double r1 = uniform01(rng);
            const double r2 = uniform01(rng);
            double v = w * p.velocity[d] + cfg.cognitive * r1 * (p.best_position[d] - p.position[d]) +
                       cfg.social * r2 * (swarm.global_best_position[d] - p.position[d]);
            v = std::clamp(v, -vmax[d], vmax[d]);
            p.velocity[d] = v;
            p.position[d] = std::clamp(p.position[d] + v, bounds.lower[d], bounds.upper[d]);
        }
    }
    ++swarm.iteration;
}

namespace detail
{
template <class Fitness>
SwarmTrace run_swarm(Swarm &swarm, const BoxBounds &bounds, Fitness &&fitness, const PsoConfig &cfg, Rng &rng)
{
    SwarmTrace trace;
    trace.best_values.reserve(static_cast<std::size_t>(cfg.iterations));
    for (int it = 0; it < cfg.iterations; ++it)
    {
        swarm.iteration = it;
        evaluate(swarm, fitness);
        trace.best_values.push_back(swarm.global_best_value);
        if (it + 1 < cfg.iterations)
            step(swarm, bounds, cfg, rng);
    }
    trace.best_position = swarm.global_best_position;
    return trace;
}
} // namespace detail

/// Box-constrained maximization of an arbitrary fitness function.
///
/// `seeds` overwrite the first particles' initial positions (clamped into the box).
template <class Fitness>
SwarmTrace optimize_box(const BoxBounds &bounds, Fitness &&fitness, const PsoConfig &cfg,
                        const std::vector<Eigen::VectorXd> &seeds = {})
{
    cfg.validate();
    Rng rng = make_rng({cfg.seed, 0x70736fULL});
    Swarm swarm = initialize_swarm(bounds, cfg, rng);
    for (std::size_t i = 0; i < seeds.size() && i < swarm.particles.size(); ++i)
    {
        swarm.particles[i].position = bounds.clamp(seeds[i]);
        swarm.particles[i].best_position = swarm.particles[i].position;
    }
    return detail::run_swarm(swarm, bounds, fitness, cfg, rng);
}

// ---------------------------------------------------------------------------
// Antenna positions
// ---------------------------------------------------------------------------

/*!MD
# Position encoding
A particle stores the 2M coordinates (y_0, z_0, y_1, z_1, ...) of the antennas;
x is always 0. Coordinate 2m and 2m+1 are boxed by movement region m, so box
clamping enforces region containment exactly while the pairwise lambda/2
spacing is handled by the penalty policy and a final projection repair.
MD!*/
inline BoxBounds region_bounds(const RegionGrid &grid)
{
    const auto n = static_cast<Eigen::Index>(grid.size());
    BoxBounds b{Eigen::VectorXd(2 * n), Eigen::VectorXd(2 * n)};
    for (Eigen::Index m = 0; m < n; ++m)
    {
        const auto &r = grid[static_cast<std::size_t>(m)];
        b.lower[2 * m] = r.y_min();
        b.upper[2 * m] = r.y_max();
        b.lower[2 * m + 1] = r.z_min();
        b.upper[2 * m + 1] = r.z_max();
    }
    return b;
}

inline ArrayLayout decode_layout(const Eigen::VectorXd &x, double wavelength)
{
    const Eigen::Index n = x.size() / 2;
    Eigen::Matrix3Xd p(3, n);
    for (Eigen::Index m = 0; m < n; ++m)
        p.col(m) = Position3(0.0, x[2 * m], x[2 * m + 1]);
    return ArrayLayout(std::move(p), wavelength);
}

inline Eigen::VectorXd encode_layout(const ArrayLayout &layout)
{
    Eigen::VectorXd x(2 * layout.size());
    for (Eigen::Index m = 0; m < layout.size(); ++m)
    {
        x[2 * m] = layout.positions()(1, m);
        x[2 * m + 1] = layout.positions()(2, m);
    }
    return x;
}

/// Sum over antenna pairs of max(0, lambda/2 - d)^2 [m^2].
inline double spacing_deficit(const ArrayLayout &layout)
{
    const double dmin = 0.5 * layout.wavelength();
    double total = 0.0;
    const auto &p = layout.positions();
    for (Eigen::Index m = 0; m < layout.size(); ++m)
        for (Eigen::Index j = m + 1; j < layout.size(); ++j)
        {
            const double gap = dmin - (p.col(m) - p.col(j)).norm();
            if (gap > kGeometryTolerance)
                total += gap * gap;
        }
    return total;
}

/// Pushes violating antenna pairs apart along their joining line, clamping to the regions.
inline ArrayLayout repair_spacing(const ArrayLayout &layout, const RegionGrid &grid, int max_rounds = 500)
{
    const BoxBounds bounds = region_bounds(grid);
    Eigen::VectorXd x = bounds.clamp(encode_layout(layout));
    const double dmin = 0.5 * layout.wavelength();
    const Eigen::Index n = layout.size();
    for (int round = 0; round < max_rounds; ++round)
    {
        bool moved = false;
        for (Eigen::Index m = 0; m < n; ++m)
            for (Eigen::Index j = m + 1; j < n; ++j)
            {
                Eigen::Vector2d u(x[2 * m] - x[2 * j], x[2 * m + 1] - x[2 * j + 1]);
                const double d = u.norm();
                if (d + kGeometryTolerance >= dmin)
                    continue;
                // Blend the joining line with the line between the region centers, so a
                // pair lying along a region edge can still separate across it.
                const auto &rm = grid[static_cast<std::size_t>(m)];
                const auto &rj = grid[static_cast<std::size_t>(j)];
                Eigen::Vector2d c(rm.center_y - rj.center_y, rm.center_z - rj.center_z);
                c = c.norm() > 0.0 ? Eigen::Vector2d(c / c.norm()) : Eigen::Vector2d(1.0, 0.0);
                if (d > 1e-15)
                    u = u / d + c;
                else
                    u = c;
                u = u.norm() > 1e-12 ? Eigen::Vector2d(u / u.norm()) : c;
                const double push = 0.5 * (dmin - d) + 1e-9 * dmin;
                x.segment<2>(2 * m) += push * u;
                x.segment<2>(2 * j) -= push * u;
                moved = true;
            }
        x = bounds.clamp(x);
        if (!moved)
            break;
    }
    return decode_layout(x, layout.wavelength());
}

namespace detail
{
inline void check_geometry_feasible(const RegionGrid &grid, double wavelength)
{
    const double dmin = 0.5 * wavelength;
    for (std::size_t m = 0; m < grid.size(); ++m)
        for (std::size_t j = m + 1; j < grid.size(); ++j)
        {
            const double dy = std::abs(grid[m].center_y - grid[j].center_y) + 0.5 * (grid[m].side + grid[j].side);
            const double dz = std::abs(grid[m].center_z - grid[j].center_z) + 0.5 * (grid[m].side + grid[j].side);
            if (std::hypot(dy, dz) + kGeometryTolerance < dmin)
                throw SetupError("initialize_swarm: regions " + std::to_string(m) + " and " + std::to_string(j) +
                                 " are too small to hold antennas lambda/2 apart");
        }
}

inline std::vector<Eigen::Index> spacing_offenders(const Eigen::VectorXd &x, double dmin)
{
    const Eigen::Index n = x.size() / 2;
    std::vector<Eigen::Index> out;
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index j = m + 1; j < n; ++j)
            if (std::hypot(x[2 * m] - x[2 * j], x[2 * m + 1] - x[2 * j + 1]) + kGeometryTolerance < dmin)
            {
                out.push_back(m);
                out.push_back(j);
            }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}
} // namespace detail

/// Random feasible swarm: antenna m uniform over region m, offenders re-sampled, then repaired.
inline Swarm initialize_swarm(const RegionGrid &grid, double wavelength, const PsoConfig &cfg, Rng &rng)
{
    cfg.validate();
    if (grid.size() == 0)
        throw SetupError("initialize_swarm: empty region grid");
    detail::check_geometry_feasible(grid, wavelength);
    const BoxBounds bounds = region_bounds(grid);
    Swarm swarm = initialize_swarm(bounds, cfg, rng);
    const double dmin = 0.5 * wavelength;
    for (auto &p : swarm.particles)
    {
        for (int attempt = 0; attempt < cfg.init_retries; ++attempt)
        {
            const auto offenders = detail::spacing_offenders(p.position, dmin);
            if (offenders.empty())
                break;
            for (Eigen::Index m : offenders)
            {
                p.position[2 * m] = uniform(rng, bounds.lower[2 * m], bounds.upper[2 * m]);
                p.position[2 * m + 1] = uniform(rng, bounds.lower[2 * m + 1], bounds.upper[2 * m + 1]);
            }
        }
        if (!detail::spacing_offenders(p.position, dmin).empty())
            p.position = encode_layout(repair_spacing(decode_layout(p.position, wavelength), grid));
        if (!check_feasible(decode_layout(p.position, wavelength), grid))
            throw SetupError("initialize_swarm: could not construct a feasible particle");
        p.best_position = p.position;
    }
    return swarm;
}

/// Penalized fitness of one encoded layout under the configured penalty policy.
template <class Objective>
    requires std::invocable<Objective &, const ArrayLayout &>
double evaluate_position(const Eigen::VectorXd &x, double wavelength, Objective &objective, const PsoConfig &cfg)
{
    const ArrayLayout layout = decode_layout(x, wavelength);
    const double deficit = spacing_deficit(layout);
    if (deficit == 0.0)
        return objective(layout);
    const double penalty = cfg.penalty_weight * deficit;
    if (cfg.penalty == PenaltyPolicy::dominant)
        return -penalty;
    return objective(layout) - penalty;
}

/// Maximizes `objective(layout)` over antenna positions inside the region grid.
///
/// Seed layouts (e.g. a fixed baseline that fits the regions) replace the
/// first particles, so the result is never worse than any feasible seed.
template <class Objective>
    requires std::invocable<Objective &, const ArrayLayout &>
SwarmTrace optimize(const RegionGrid &grid, double wavelength, Objective &&objective, const PsoConfig &cfg,
                    const std::vector<ArrayLayout> &seeds = {})
{
    cfg.validate();
    Rng rng = make_rng({cfg.seed, 0x616e74ULL});
    Swarm swarm = initialize_swarm(grid, wavelength, cfg, rng);
    const BoxBounds bounds = region_bounds(grid);
    for (std::size_t i = 0; i < seeds.size() && i < swarm.particles.size(); ++i)
    {
        if (seeds[i].size() != static_cast<Eigen::Index>(grid.size()))
            throw std::invalid_argument("optimize: seed layout size differs from the region grid");
        swarm.particles[i].position = bounds.clamp(encode_layout(seeds[i]));
        swarm.particles[i].best_position = swarm.particles[i].position;
    }
    auto fitness = [&](const Eigen::VectorXd &x) { return evaluate_position(x, wavelength, objective, cfg); };
    SwarmTrace trace = detail::run_swarm(swarm, bounds, fitness, cfg, rng);
    ArrayLayout best = decode_layout(trace.best_position, wavelength);
    if (!check_feasible(best, grid))
    {
        best = repair_spacing(best, grid);
        if (!check_feasible(best, grid))
            throw SetupError("optimize: best layout could not be repaired to feasibility");
        trace.best_position = encode_layout(best);
    }
    trace.best_layout = std::move(best);
    return trace;
}

/// Mean sum rate over a frozen set of channel realizations, as a function of the layout.
class SumRateObjective
{
  public:
    SumRateObjective(std::vector<PathSpectrum> realizations, RateParams params)
        : realizations_(std::move(realizations)), params_(params)
    {
        if (realizations_.empty())
            throw std::invalid_argument("SumRateObjective: at least one realization is required");
        params_.validate();
    }

    double operator()(const ArrayLayout &layout) const
    {
        double total = 0.0;
        for (const auto &r : realizations_)
            total += sum_rate(r.synthesize(layout), params_).average;
        return total / static_cast<double>(realizations_.size());
    }

    [[nodiscard]] const RateParams &params() const { return params_; }
    [[nodiscard]] const std::vector<PathSpectrum> &realizations() const { return realizations_; }

  private:
    std::vector<PathSpectrum> realizations_;
    RateParams params_;
};

} // namespace moveant
