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

#include "moveant/moveant.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace
{

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string profile = "full";
    std::string strategies;
    std::optional<int> drops;
    std::optional<unsigned> threads;
};

void add_common(CLI::App *cmd, CommonOptions &o)
{
    cmd->add_option("--config", o.config, "key = value configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out, "output path (default: stdout)");
    cmd->add_option("--profile", o.profile, "PSO budget: full (180 x 100) or smoke (30 x 25)")
        ->check(CLI::IsMember({"full", "smoke"}));
    cmd->add_option("--strategies", o.strategies,
                    "comma list of movable,sparse_ula,sparse_upa,compact_upa,interference_free");
    cmd->add_option("--drops", o.drops, "Monte-Carlo drop count");
    cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
}

moveant::ExperimentSpec build_spec(moveant::SweepVariable sweep, const CommonOptions &o)
{
    using namespace moveant;
    KeyValueConfig kv;
    if (!o.config.empty())
    {
        std::ifstream in(o.config);
        if (!in)
            throw ConfigError("cannot open config file '" + o.config + "'");
        kv = KeyValueConfig::parse(in);
    }
    if (kv.has("sweep") && parse_sweep(kv.get("sweep")) != sweep)
        throw ConfigError("config sweep '" + kv.get("sweep") + "' does not match the subcommand");
    ExperimentSpec base = ExperimentSpec::defaults(sweep);
    // Profile first, so explicit particle/iteration keys in the config still win.
    if (o.profile == "smoke")
        base.pso = PsoConfig::smoke();
    ExperimentSpec spec = spec_from_config(kv, std::move(base));
    if (o.seed)
        spec.seed = *o.seed;
    if (o.drops)
        spec.drops = *o.drops;
    if (o.threads)
        spec.threads = *o.threads;
    if (!o.strategies.empty())
    {
        spec.strategies.clear();
        for (const auto &s : KeyValueConfig::split_list(o.strategies))
            spec.strategies.push_back(parse_strategy(s));
    }
    spec.validate();
    return spec;
}

template <class Writer>
void emit(const std::string &path, Writer &&write)
{
    if (path.empty() || path == "-")
    {
        write(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw moveant::ConfigError("cannot open output file '" + path + "'");
    write(out);
}

} // namespace

int main(int argc, char **argv)
{
    using namespace moveant;
    CLI::App app{"moveant: movable-antenna wideband multi-user MIMO experiments"};
    app.require_subcommand(1);

    CommonOptions sub_opts, evm_opts, pow_opts, opt_opts, path_opts;
    auto *sub = app.add_subcommand("sweep-subcarriers", "average sum rate versus subcarrier count");
    auto *evm = app.add_subcommand("sweep-evm", "average sum rate versus transmitter EVM");
    auto *pow = app.add_subcommand("sweep-power", "average sum rate versus transmit power");
    add_common(sub, sub_opts);
    add_common(evm, evm_opts);
    add_common(pow, pow_opts);

    auto *opt = app.add_subcommand("optimize", "optimize antenna positions for one drop");
    add_common(opt, opt_opts);
    std::size_t opt_drop = 0;
    int opt_subcarriers = 1;
    std::string trace_out, layout_out;
    opt->add_option("--drop", opt_drop, "drop index");
    opt->add_option("--subcarriers", opt_subcarriers, "subcarrier count S")->check(CLI::PositiveNumber);
    opt->add_option("--trace-out", trace_out, "per-iteration best value CSV (default: stdout)");
    opt->add_option("--layout-out", layout_out, "optimized layout table");

    auto *paths = app.add_subcommand("paths", "export the multipath table of one drop");
    add_common(paths, path_opts);
    std::size_t path_drop = 0;
    paths->add_option("--drop", path_drop, "drop index");

    auto *layout = app.add_subcommand("layout", "export a fixed baseline layout");
    std::string layout_kind = "sparse-upa", layout_file;
    layout->add_option("kind", layout_kind, "compact-upa | sparse-upa | sparse-ula")
        ->check(CLI::IsMember({"compact-upa", "sparse-upa", "sparse-ula"}));
    layout->add_option("--out", layout_file, "output path (default: stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kExitConfig;
    }

    try
    {
        const auto run_sweep = [&](SweepVariable v, const CommonOptions &o) {
            const ExperimentSpec spec = build_spec(v, o);
            const ResultTable table = run_experiment(spec);
            emit(o.out, [&](std::ostream &out) { write_csv(out, table); });
        };
        if (sub->parsed())
            run_sweep(SweepVariable::subcarriers, sub_opts);
        else if (evm->parsed())
            run_sweep(SweepVariable::evm, evm_opts);
        else if (pow->parsed())
            run_sweep(SweepVariable::power, pow_opts);
        else if (opt->parsed())
        {
            ExperimentSpec spec = build_spec(SweepVariable::subcarriers, opt_opts);
            spec.grid = {static_cast<double>(opt_subcarriers)};
            const auto channels = drop_channels(spec, opt_drop);
            const auto point = spec.point(spec.grid.front());
            std::vector<PathSpectrum> spectra;
            for (const auto &c : channels)
                spectra.emplace_back(c, point.ofdm);
            PsoConfig pso = spec.pso;
            pso.seed = spec.seed;
            std::vector<ArrayLayout> seeds;
            if (spec.seed_sparse_upa)
                seeds.push_back(
                    make_sparse_upa(spec.antennas, spec.aperture_width(), spec.aperture_height(), spec.wavelength()));
            const RegionGrid regions = spec.region_grid();
            if (!seeds.empty() && !check_feasible(seeds.front(), regions))
                seeds.clear();
            const SwarmTrace trace =
                optimize(regions, spec.wavelength(), SumRateObjective(spectra, point.rate), pso, seeds);
            emit(trace_out, [&](std::ostream &out) { write_trace(out, trace.best_values); });
            if (!layout_out.empty())
                emit(layout_out, [&](std::ostream &out) { write_layout(out, trace.best_layout); });
        }
        else if (paths->parsed())
        {
            const ExperimentSpec spec = build_spec(SweepVariable::subcarriers, path_opts);
            const auto channels = drop_channels(spec, path_drop);
            emit(path_opts.out, [&](std::ostream &out) { write_paths(out, channels.front()); });
        }
        else if (layout->parsed())
        {
            const ExperimentSpec spec;
            const ArrayLayout l = layout_kind == "compact-upa"
                                      ? make_compact_upa(spec.antennas, spec.wavelength())
                                  : layout_kind == "sparse-upa"
                                      ? make_sparse_upa(spec.antennas, spec.aperture_width(), spec.aperture_height(),
                                                        spec.wavelength())
                                      : make_sparse_ula(spec.antennas, spec.aperture_width(), spec.wavelength());
            emit(layout_file, [&](std::ostream &out) { write_layout(out, l); });
        }
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const SetupError &e)
    {
        std::cerr << "setup error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
