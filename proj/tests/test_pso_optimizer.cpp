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


#include "moveant/pso_optimizer.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstring>

using namespace moveant;

namespace
{
constexpr double kLambda = 0.09993081933333334;

RegionGrid grid_4x4()
{
    return make_region_grid(4, 4, 5.0 * kLambda, 5.0 * kLambda);
}

// Two users, few paths, one subcarrier: cheap but layout dependent.
SumRateObjective small_objective(std::uint64_t seed)
{
    Rng rng = make_rng({seed});
    OfdmConfig cfg;
    cfg.subcarriers = 1;
    std::vector<UserPaths> users{oracle::random_paths(3, 1e-6, rng), oracle::random_paths(3, 1e-6, rng)};
    return SumRateObjective({PathSpectrum(users, cfg)}, {100.0, 1.0, 0.02});
}

// Concave, separable, maximum sum(peak) at `center`.
struct Surrogate
{
    Eigen::VectorXd center;
    double peak = 1.0;
    double operator()(const Eigen::VectorXd &x) const { return center.size() * peak - (x - center).squaredNorm(); }
};

bool same_bits(const Eigen::VectorXd &a, const Eigen::VectorXd &b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}
} // namespace

TEST(PsoConfig, Profiles)
{
    EXPECT_EQ(PsoConfig::full().particles, 180);
    EXPECT_EQ(PsoConfig::full().iterations, 100);
    EXPECT_EQ(PsoConfig::smoke().particles, 30);
    EXPECT_EQ(PsoConfig::full().velocity_clamp, 0.1);
    PsoConfig bad;
    bad.particles = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(InertiaSchedule, LinearDecay)
{
    const PsoConfig cfg;
    EXPECT_DOUBLE_EQ(inertia_at(cfg, 0), 0.9);
    EXPECT_DOUBLE_EQ(inertia_at(cfg, 99), 0.4);
    EXPECT_NEAR(inertia_at(cfg, 33), 0.9 - 0.5 * 33.0 / 99.0, 1e-15);
}

TEST(InitializeSwarm, SingleParticleFeasible)
{
    PsoConfig cfg;
    cfg.particles = 1;
    Rng rng = make_rng({1});
    const auto swarm = initialize_swarm(grid_4x4(), kLambda, cfg, rng);
    ASSERT_EQ(swarm.particles.size(), 1u);
    EXPECT_TRUE(check_feasible(decode_layout(swarm.particles[0].position, kLambda), grid_4x4()).feasible);
}

TEST(InitializeSwarm, FullSwarmFeasible)
{
    const PsoConfig cfg;
    Rng rng = make_rng({2});
    const auto grid = grid_4x4();
    const auto swarm = initialize_swarm(grid, kLambda, cfg, rng);
    ASSERT_EQ(swarm.particles.size(), 180u);
    const Eigen::VectorXd vmax = cfg.velocity_clamp * region_bounds(grid).width();
    for (const auto &p : swarm.particles)
    {
        ASSERT_EQ(p.position.size(), 32);
        EXPECT_TRUE(check_feasible(decode_layout(p.position, kLambda), grid).feasible);
        EXPECT_TRUE((p.velocity.cwiseAbs().array() <= vmax.array()).all());
    }
}

TEST(InitializeSwarm, CrowdedRegionsStillFeasible)
{
    // Regions of side lambda/2 abutting: random draws collide often.
    const auto grid = make_region_grid(3, 3, 0.5 * kLambda, 0.5 * kLambda);
    PsoConfig cfg;
    cfg.particles = 50;
    Rng rng = make_rng({3});
    const auto swarm = initialize_swarm(grid, kLambda, cfg, rng);
    for (const auto &p : swarm.particles)
        EXPECT_TRUE(check_feasible(decode_layout(p.position, kLambda), grid).feasible);
}

TEST(InitializeSwarm, Deterministic)
{
    const PsoConfig cfg;
    Rng a = make_rng({4});
    Rng b = make_rng({4});
    const auto s1 = initialize_swarm(grid_4x4(), kLambda, cfg, a);
    const auto s2 = initialize_swarm(grid_4x4(), kLambda, cfg, b);
    for (std::size_t i = 0; i < s1.particles.size(); ++i)
    {
        EXPECT_TRUE(same_bits(s1.particles[i].position, s2.particles[i].position));
        EXPECT_TRUE(same_bits(s1.particles[i].velocity, s2.particles[i].velocity));
    }
}

TEST(InitializeSwarm, InfeasibleGeometryIsSetupError)
{
    const auto grid = make_region_grid(2, 2, 0.1 * kLambda, 0.1 * kLambda);
    Rng rng = make_rng({5});
    EXPECT_THROW(initialize_swarm(grid, kLambda, PsoConfig{}, rng), SetupError);
}

TEST(Encoding, RoundTrip)
{
    const auto layout = make_sparse_upa(16, 20 * kLambda, 20 * kLambda, kLambda);
    const auto back = decode_layout(encode_layout(layout), kLambda);
    EXPECT_EQ(back.positions(), layout.positions());
}

TEST(Evaluate, SparseUpaParticleEqualsFixedLayoutRate)
{
    const auto objective = small_objective(6);
    const auto layout = make_sparse_upa(16, 20 * kLambda, 20 * kLambda, kLambda);
    const double got = evaluate_position(encode_layout(layout), kLambda, objective, PsoConfig{});
    EXPECT_EQ(got, objective(layout));
    EXPECT_EQ(got, sum_rate(objective.realizations()[0].synthesize(layout), objective.params()).average);
}

TEST(Evaluate, Pure)
{
    const auto objective = small_objective(7);
    Rng rng = make_rng({7});
    const auto swarm = initialize_swarm(grid_4x4(), kLambda, PsoConfig{}, rng);
    const auto &x = swarm.particles[3].position;
    EXPECT_EQ(evaluate_position(x, kLambda, objective, PsoConfig{}),
              evaluate_position(x, kLambda, objective, PsoConfig{}));
}

TEST(Evaluate, CoincidentAntennasScoreBelowEveryFeasibleParticle)
{
    const auto objective = small_objective(8);
    const auto grid = grid_4x4();
    Rng rng = make_rng({8});
    const auto swarm = initialize_swarm(grid, kLambda, PsoConfig{}, rng);
    for (auto policy : {PenaltyPolicy::dominant, PenaltyPolicy::additive})
    {
        PsoConfig cfg;
        cfg.penalty = policy;
        // Antennas 0 and 1 meet on their shared edge.
        Eigen::VectorXd bad = swarm.particles[0].position;
        bad.segment<2>(0) = Eigen::Vector2d(grid[0].y_max(), grid[0].center_z);
        bad.segment<2>(2) = bad.segment<2>(0);
        const double bad_value = evaluate_position(bad, kLambda, objective, cfg);
        for (const auto &p : swarm.particles)
            EXPECT_LT(bad_value, evaluate_position(p.position, kLambda, objective, cfg));
    }
}

TEST(Step, ZeroCoefficientsFreezePositions)
{
    PsoConfig cfg;
    cfg.particles = 10;
    cfg.inertia_start = cfg.inertia_end = 0.0;
    cfg.cognitive = cfg.social = 0.0;
    const auto bounds = region_bounds(grid_4x4());
    Rng rng = make_rng({9});
    auto swarm = initialize_swarm(bounds, cfg, rng);
    evaluate(swarm, Surrogate{Eigen::VectorXd::Zero(32)});
    const auto before = swarm;
    step(swarm, bounds, cfg, rng);
    for (std::size_t i = 0; i < swarm.particles.size(); ++i)
        EXPECT_EQ(swarm.particles[i].position, before.particles[i].position);
}

TEST(Step, ParticleAtBestWithZeroVelocityIsStationary)
{
    PsoConfig cfg;
    cfg.particles = 1;
    const BoxBounds bounds{Eigen::VectorXd::Constant(3, -1.0), Eigen::VectorXd::Constant(3, 1.0)};
    Rng rng = make_rng({10});
    auto swarm = initialize_swarm(bounds, cfg, rng);
    swarm.particles[0].velocity.setZero();
    evaluate(swarm, Surrogate{Eigen::VectorXd::Zero(3)});
    const Eigen::VectorXd x = swarm.particles[0].position;
    step(swarm, bounds, cfg, rng);
    EXPECT_EQ(swarm.particles[0].position, x);
}

TEST(Step, OutputStaysInRegions)
{
    PsoConfig cfg;
    cfg.particles = 40;
    cfg.velocity_clamp = 1.0;
    cfg.cognitive = cfg.social = 3.0;
    const auto grid = grid_4x4();
    const auto bounds = region_bounds(grid);
    Rng rng = make_rng({11});
    auto swarm = initialize_swarm(grid, kLambda, cfg, rng);
    // Attractor far outside the aperture drives particles against the walls.
    Surrogate pull{Eigen::VectorXd::Constant(32, 10.0)};
    for (int it = 0; it < 30; ++it)
    {
        evaluate(swarm, pull);
        step(swarm, bounds, cfg, rng);
        for (const auto &p : swarm.particles)
        {
            const auto layout = decode_layout(p.position, kLambda);
            for (Eigen::Index m = 0; m < 16; ++m)
                EXPECT_TRUE(grid[static_cast<std::size_t>(m)].contains(layout.position(m)));
            EXPECT_TRUE(((p.velocity.cwiseAbs() - bounds.width()).array() <= 1e-15).all());
        }
    }
}

TEST(OptimizeBox, SeparableConcaveSurrogate)
{
    Rng rng = make_rng({12});
    const int n = 8;
    BoxBounds bounds{Eigen::VectorXd::Constant(n, -1.0), Eigen::VectorXd::Constant(n, 1.0)};
    Surrogate f{Eigen::VectorXd(n), 1.0};
    for (int d = 0; d < n; ++d)
        f.center[d] = uniform(rng, -0.8, 0.8);
    const auto trace = optimize_box(bounds, f, PsoConfig{});
    EXPECT_GE(trace.best_values.back(), 0.99 * n);
    for (std::size_t i = 1; i < trace.best_values.size(); ++i)
        EXPECT_GE(trace.best_values[i], trace.best_values[i - 1]);
}

TEST(Optimize, SingleParticleSingleIteration)
{
    PsoConfig cfg;
    cfg.particles = 1;
    cfg.iterations = 1;
    const auto objective = small_objective(13);
    const auto trace = optimize(grid_4x4(), kLambda, objective, cfg);
    Rng rng = make_rng({cfg.seed, 0x616e74ULL});
    const auto swarm = initialize_swarm(grid_4x4(), kLambda, cfg, rng);
    EXPECT_EQ(trace.best_position, swarm.particles[0].position);
    EXPECT_EQ(trace.best_values.size(), 1u);
    EXPECT_EQ(trace.best_values[0], objective(trace.best_layout));
}

TEST(Optimize, TraceNondecreasingAndFinalFeasible)
{
    PsoConfig cfg;
    cfg.particles = 20;
    cfg.iterations = 30;
    const auto grid = grid_4x4();
    const auto objective = small_objective(14);
    const auto trace = optimize(grid, kLambda, objective, cfg);
    ASSERT_EQ(trace.best_values.size(), 30u);
    for (std::size_t i = 1; i < trace.best_values.size(); ++i)
        EXPECT_GE(trace.best_values[i], trace.best_values[i - 1]);
    EXPECT_TRUE(check_feasible(trace.best_layout, grid).feasible);
    EXPECT_EQ(trace.best_values.back(), objective(trace.best_layout));
}

TEST(Optimize, SeededBaselineIsNeverBeaten)
{
    PsoConfig cfg;
    cfg.particles = 10;
    cfg.iterations = 5;
    const auto objective = small_objective(15);
    const auto upa = make_sparse_upa(16, 20 * kLambda, 20 * kLambda, kLambda);
    const auto trace = optimize(grid_4x4(), kLambda, objective, cfg, {upa});
    EXPECT_GE(objective(trace.best_layout), objective(upa));
}

TEST(Optimize, DeterministicForFixedSeed)
{
    PsoConfig cfg;
    cfg.particles = 12;
    cfg.iterations = 6;
    cfg.seed = 99;
    const auto objective = small_objective(16);
    const auto a = optimize(grid_4x4(), kLambda, objective, cfg);
    const auto b = optimize(grid_4x4(), kLambda, objective, cfg);
    EXPECT_TRUE(same_bits(a.best_position, b.best_position));
    EXPECT_EQ(a.best_values, b.best_values);
}

TEST(RepairSpacing, SeparatesCoincidentAntennas)
{
    const auto grid = make_region_grid(2, 2, 0.5 * kLambda, 0.5 * kLambda);
    const ArrayLayout crowded(Eigen::Matrix3Xd::Zero(3, 4), kLambda);
    EXPECT_GT(spacing_deficit(crowded), 0.0);
    const auto fixed = repair_spacing(crowded, grid);
    EXPECT_TRUE(check_feasible(fixed, grid).feasible);
    EXPECT_EQ(spacing_deficit(fixed), 0.0);
}

TEST(SumRateObjectiveTest, AveragesRealizations)
{
    Rng rng = make_rng({17});
    OfdmConfig cfg;
    const std::vector<UserPaths> u1{oracle::random_paths(2, 1e-6, rng)};
    const std::vector<UserPaths> u2{oracle::random_paths(2, 1e-6, rng)};
    const RateParams p{10.0, 1.0, 0.1};
    const SumRateObjective both({PathSpectrum(u1, cfg), PathSpectrum(u2, cfg)}, p);
    const auto layout = make_compact_upa(4, kLambda);
    const double want = 0.5 * (sum_rate(frequency_channel(u1, layout, cfg), p).average +
                               sum_rate(frequency_channel(u2, layout, cfg), p).average);
    EXPECT_NEAR(both(layout), want, 1e-12);
    EXPECT_THROW(SumRateObjective({}, p), std::invalid_argument);
}
