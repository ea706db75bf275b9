// SPDX-License-Identifier: Apache-2.0
//
// omnisim: simulator and optimizer for intelligent omni-surface assisted links
// Copyright (C) 2026 The omnisim authors
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

#include "omnisim/cli.hpp"

#include "omnisim/analysis.hpp"
#include "omnisim/beamforming.hpp"
#include "omnisim/error.hpp"
#include "omnisim/scene_io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace omnisim::cli
{

namespace
{

using nlohmann::json;

std::string format_g6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string format_f2(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

/// Writes `content` to `path`, or to `out` when no path was given.
void emit(const std::string &path, const std::string &content, std::ostream &out)
{
    if (path.empty())
    {
        out << content;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw ValidationError("cannot write " + path, "io");
    file << content;
    if (!file)
        throw ValidationError("failed writing " + path, "io");
}

Granularity parse_granularity(const std::string &text)
{
    return text == "element" ? Granularity::PerElement : Granularity::PerGroup;
}

json config_json(const ElementLayout &layout, const Configuration &config)
{
    json j = {{"granularity", std::string(to_string(config.granularity))}, {"element_states", config.state_index}};
    if (config.granularity == Granularity::PerGroup)
        j["group_states"] = group_states(layout, config);
    return j;
}

/// The configuration a pattern/coverage run evaluates: a simulate report's
/// element states when given, otherwise a uniform state.
Configuration load_configuration(const std::string &report_path, StateIndex uniform_state,
                                 const ElementLayout &layout, const StateTable &table)
{
    Configuration config;
    if (report_path.empty())
    {
        config = uniform_configuration(layout, uniform_state, Granularity::PerElement);
    }
    else
    {
        std::ifstream in(report_path, std::ios::binary);
        if (!in)
            throw ValidationError("cannot read report " + report_path, "io");
        json report;
        try
        {
            report = json::parse(in);
        }
        catch (const json::parse_error &e)
        {
            throw ValidationError(report_path + ": " + e.what(), "json_syntax");
        }
        const json *states = nullptr;
        if (report.contains("outcome") && report["outcome"].contains("element_states"))
            states = &report["outcome"]["element_states"];
        if (states == nullptr || !states->is_array())
            throw ValidationError(report_path + ": at /outcome/element_states: missing state array", "schema");
        for (const auto &s : *states)
        {
            if (!s.is_number_unsigned())
                throw ValidationError(report_path + ": element states must be non-negative integers", "schema");
            config.state_index.push_back(s.get<StateIndex>());
        }
    }
    validate_configuration(config, layout, table);
    return config;
}

CoverageGrid parse_grid(const std::string &text)
{
    std::vector<std::string> fields;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (fields.size() != 6)
        throw ValidationError("--grid expects x0,x1,y0,y1,nx,ny", "flags");

    auto number = [&](std::size_t i) {
        try
        {
            std::size_t used = 0;
            const double v = std::stod(fields[i], &used);
            if (used != fields[i].size())
                throw std::invalid_argument(fields[i]);
            return v;
        }
        catch (const std::exception &)
        {
            throw ValidationError("--grid field '" + fields[i] + "' is not a number", "flags");
        }
    };
    auto count = [&](std::size_t i) {
        const double v = number(i);
        if (!(v >= 1.0) || v != std::floor(v))
            throw ValidationError("--grid cell counts must be positive integers", "flags");
        return static_cast<std::size_t>(v);
    };

    CoverageGrid grid;
    grid.x0 = number(0);
    grid.x1 = number(1);
    grid.y0 = number(2);
    grid.y1 = number(3);
    grid.nx = count(4);
    grid.ny = count(5);
    return grid;
}

/// Binary 8-bit PGM scaled to the unmasked [min, max]; masked cells are black.
std::string coverage_pgm(const CoverageMap &map)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto &c : map.cells)
    {
        if (!c.side)
            continue;
        lo = std::min(lo, c.se);
        hi = std::max(hi, c.se);
    }

    std::string pgm = "P5\n" + std::to_string(map.grid.nx) + " " + std::to_string(map.grid.ny) + "\n255\n";
    for (std::size_t row = 0; row < map.grid.ny; ++row)
    {
        const std::size_t j = map.grid.ny - 1 - row; // top row is the largest y
        for (std::size_t i = 0; i < map.grid.nx; ++i)
        {
            const auto &c = map.at(i, j);
            unsigned char level = 0;
            if (c.side && hi > lo)
                level = static_cast<unsigned char>(std::lround(255.0 * (c.se - lo) / (hi - lo)));
            pgm.push_back(static_cast<char>(level));
        }
    }
    return pgm;
}

struct CommonFlags
{
    std::string config;
    std::string out;
};

struct SimulateFlags
{
    std::string optimizer = "greedy";
    std::string granularity = "group";
    std::uint64_t seed = 0;
    std::size_t sweeps = 10;
    std::size_t trials = 100;
    std::size_t samples = 200;
    double k_factor_db = 10.0;
    double epsilon = 1e-9;
    bool wall_time = false;
};

int simulate(const CommonFlags &common, const SimulateFlags &flags, std::ostream &out)
{
    const auto start = std::chrono::steady_clock::now();
    const LoadedScene loaded = parse_scene(common.config);
    const ElementLayout layout = build_layout(loaded.scene.panel);
    const Granularity granularity = parse_granularity(flags.granularity);
    const GreedyOptions greedy{flags.sweeps, flags.epsilon};

    OptimizationOutcome outcome;
    if (flags.optimizer == "greedy")
        outcome = greedy_optimize(loaded.scene, layout, loaded.table, granularity, greedy);
    else if (flags.optimizer == "exhaustive")
        outcome = exhaustive_optimize(loaded.scene, layout, loaded.table, granularity);
    else if (flags.optimizer == "random")
        outcome = random_baseline(loaded.scene, layout, loaded.table, granularity, flags.trials, flags.seed);
    else
        outcome = statistical_optimize(loaded.scene, layout, loaded.table,
                                       RicianFading{db_to_linear(flags.k_factor_db)}, flags.samples, flags.seed,
                                       granularity, greedy);

    const RateEvaluation rates = sum_rate(loaded.scene, layout, loaded.table, outcome.config);

    json trace = json::array();
    for (const auto &t : outcome.trace)
        trace.push_back({{"step", t.step}, {"objective", t.objective}});

    json result = config_json(layout, outcome.config);
    result["objective"] = outcome.objective;
    result["sum_rate"] = rates.sum_rate;
    result["per_user_rates"] = rates.per_user_rate;
    result["degenerate"] = rates.degenerate;
    result["evaluations"] = outcome.evaluations;
    result["trace"] = std::move(trace);
    result["relaxed_upper_bound"] = relaxed_upper_bound(loaded.scene, layout, loaded.table);

    json report = {
        {"command", "simulate"},
        {"optimizer", flags.optimizer},
        {"granularity", flags.granularity},
        {"seed", flags.seed},
        {"rng", "mt19937_64"},
        {"parameters",
         {{"sweeps", flags.sweeps},
          {"epsilon", flags.epsilon},
          {"trials", flags.trials},
          {"samples", flags.samples},
          {"k_factor_db", flags.k_factor_db}}},
        {"scene", scene_to_json(loaded.scene, loaded.table)},
        {"outcome", std::move(result)},
    };
    if (flags.wall_time)
        report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    emit(common.out, report.dump(2) + "\n", out);
    return kExitOk;
}

struct ViewFlags
{
    std::string report;
    StateIndex state = 0;
};

struct PatternFlags
{
    std::string side = "both";
    std::string cut = "horizontal";
    double step_deg = 1.0;
    double radius_m = 100.0;
};

int pattern(const CommonFlags &common, const ViewFlags &view, const PatternFlags &flags, std::ostream &out,
            std::ostream &err)
{
    const LoadedScene loaded = parse_scene(common.config);
    const ElementLayout layout = build_layout(loaded.scene.panel);
    const Configuration config = load_configuration(view.report, view.state, layout, loaded.table);

    PatternOptions options;
    options.cut = flags.cut == "vertical" ? PatternCut::Vertical : PatternCut::Horizontal;
    options.step_deg = flags.step_deg;
    options.eval_radius = flags.radius_m;

    std::vector<Side> sides;
    if (flags.side != "refraction")
        sides.push_back(Side::Reflection);
    if (flags.side != "reflection")
        sides.push_back(Side::Refraction);

    std::string csv = "angle_deg,power_db,side\n";
    std::size_t skipped = 0;
    for (Side side : sides)
    {
        const RadiationPattern p = radiation_pattern(loaded.scene, layout, loaded.table, config, side, options);
        skipped += p.skipped;
        for (const auto &s : p.samples)
            csv += format_g6(s.angle_deg) + "," + format_g6(s.power_db) + "," + std::string(to_string(s.side)) + "\n";
    }
    if (skipped > 0)
        err << "warning: skipped " << skipped << " probe angle(s) in the panel plane\n";

    emit(common.out, csv, out);
    return kExitOk;
}

int coverage(const CommonFlags &common, const ViewFlags &view, const std::string &grid_text,
             const std::string &pgm_path, std::ostream &out)
{
    const LoadedScene loaded = parse_scene(common.config);
    const ElementLayout layout = build_layout(loaded.scene.panel);
    const Configuration config = load_configuration(view.report, view.state, layout, loaded.table);
    const CoverageMap map = coverage_map(loaded.scene, layout, loaded.table, config, parse_grid(grid_text));

    std::string csv = "x_m,y_m,se_bps_hz,side\n";
    for (const auto &c : map.cells)
        csv += format_g6(c.x) + "," + format_g6(c.y) + "," + format_g6(c.se) + "," +
               (c.side ? std::string(to_string(*c.side)) : std::string("masked")) + "\n";

    emit(common.out, csv, out);
    if (!pgm_path.empty())
        emit(pgm_path, coverage_pgm(map), out);
    return kExitOk;
}

int linkbudget(const CommonFlags &common, double ios_gain_db, std::size_t user, std::ostream &out)
{
    const LoadedScene loaded = parse_scene(common.config);
    const LinkBudget budget = link_budget(scene_link_chain(loaded.scene, ios_gain_db, user));

    std::string text = "tx_power_dbm " + format_f2(budget.tx_power_dbm) + "\n";
    for (const auto &item : budget.items)
        text += item.name + " " + format_f2(item.gain_db) + "\n";
    text += "received_dbm " + format_f2(budget.received_dbm) + "\n";
    emit(common.out, text, out);
    return kExitOk;
}

int oracle(const CommonFlags &common, const std::string &granularity_text, std::ostream &out)
{
    const LoadedScene loaded = parse_scene(common.config);
    const ElementLayout layout = build_layout(loaded.scene.panel);
    const OptimizationOutcome outcome =
        exhaustive_optimize(loaded.scene, layout, loaded.table, parse_granularity(granularity_text));

    json result = config_json(layout, outcome.config);
    result["objective"] = outcome.objective;
    result["evaluations"] = outcome.evaluations;
    result["relaxed_upper_bound"] = relaxed_upper_bound(loaded.scene, layout, loaded.table);
    const json report = {{"command", "oracle"}, {"outcome", std::move(result)}};
    emit(common.out, report.dump(2) + "\n", out);
    return kExitOk;
}

std::string_view kind_name(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::Validation:
        return "validation";
    case ErrorKind::Numerical:
        return "numerical";
    case ErrorKind::Guard:
        return "guard";
    }
    return "validation";
}

int exit_code(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::Validation:
        return kExitValidation;
    case ErrorKind::Numerical:
        return kExitNumerical;
    case ErrorKind::Guard:
        return kExitGuard;
    }
    return kExitValidation;
}

int report_error(std::ostream &err, std::string_view code, std::string_view kind, const std::string &message,
                 int status)
{
    const json j = {{"error", code}, {"kind", kind}, {"message", message}, {"exit_code", status}};
    err << j.dump() << "\n";
    return status;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Intelligent omni-surface link simulator", "omnisim"};
    app.require_subcommand(1);

    CommonFlags common;
    auto add_common = [&](CLI::App *sub, bool has_out) {
        sub->add_option("--config", common.config, "Scene file (JSON)")->required();
        if (has_out)
            sub->add_option("--out", common.out, "Output file (default: standard output)");
    };

    SimulateFlags sim;
    auto *simulate_cmd = app.add_subcommand("simulate", "Optimize the surface configuration");
    add_common(simulate_cmd, true);
    simulate_cmd->add_option("--optimizer", sim.optimizer)
        ->check(CLI::IsMember({"greedy", "exhaustive", "random", "statistical"}));
    simulate_cmd->add_option("--granularity", sim.granularity)->check(CLI::IsMember({"element", "group"}));
    simulate_cmd->add_option("--seed", sim.seed);
    simulate_cmd->add_option("--sweeps", sim.sweeps)->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--trials", sim.trials)->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--samples", sim.samples)->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--k-factor-db", sim.k_factor_db, "Rician K-factor for --optimizer statistical");
    simulate_cmd->add_option("--epsilon", sim.epsilon, "Relative sweep improvement that stops greedy search");
    simulate_cmd->add_flag("--wall-time", sim.wall_time, "Record elapsed time in the report");

    ViewFlags view;
    auto add_view = [&](CLI::App *sub) {
        sub->add_option("--report", view.report, "Take the configuration from a simulate report");
        sub->add_option("--state", view.state, "Uniform state for every element (default 0)");
    };

    PatternFlags pat;
    auto *pattern_cmd = app.add_subcommand("pattern", "Radiation pattern sweep to CSV");
    add_common(pattern_cmd, true);
    add_view(pattern_cmd);
    pattern_cmd->add_option("--side", pat.side)->check(CLI::IsMember({"reflection", "refraction", "both"}));
    pattern_cmd->add_option("--cut", pat.cut)->check(CLI::IsMember({"horizontal", "vertical"}));
    pattern_cmd->add_option("--step-deg", pat.step_deg)->check(CLI::PositiveNumber);
    pattern_cmd->add_option("--radius-m", pat.radius_m)->check(CLI::PositiveNumber);

    std::string grid_text = "-2,2,-2,2,41,41";
    std::string pgm_path;
    auto *coverage_cmd = app.add_subcommand("coverage", "Spectral-efficiency map to CSV (and PGM)");
    add_common(coverage_cmd, true);
    add_view(coverage_cmd);
    coverage_cmd->add_option("--grid", grid_text, "x0,x1,y0,y1,nx,ny");
    coverage_cmd->add_option("--pgm", pgm_path, "Also write an 8-bit PGM heatmap");

    double ios_gain_db = 0.0;
    std::size_t budget_user = 0;
    auto *linkbudget_cmd = app.add_subcommand("linkbudget", "Itemized link budget");
    add_common(linkbudget_cmd, false);
    linkbudget_cmd->add_option("--ios-gain-db", ios_gain_db);
    linkbudget_cmd->add_option("--user", budget_user, "User index for free-space channel predictions");

    std::string oracle_granularity = "group";
    auto *oracle_cmd = app.add_subcommand("oracle", "Exhaustive optimum (guarded)");
    add_common(oracle_cmd, true);
    oracle_cmd->add_option("--granularity", oracle_granularity)->check(CLI::IsMember({"element", "group"}));

    std::vector<const char *> argv{"omnisim"};
    for (const auto &a : args)
        argv.push_back(a.c_str());

    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e, out, err);
    }
    catch (const CLI::ParseError &e)
    {
        return report_error(err, "flags", "validation", e.what(), kExitValidation);
    }

    try
    {
        if (app.got_subcommand(simulate_cmd))
            return simulate(common, sim, out);
        if (app.got_subcommand(pattern_cmd))
            return pattern(common, view, pat, out, err);
        if (app.got_subcommand(coverage_cmd))
            return coverage(common, view, grid_text, pgm_path, out);
        if (app.got_subcommand(linkbudget_cmd))
            return linkbudget(common, ios_gain_db, budget_user, out);
        return oracle(common, oracle_granularity, out);
    }
    catch (const Error &e)
    {
        return report_error(err, e.code(), kind_name(e.kind()), e.what(), exit_code(e.kind()));
    }
    catch (const json::exception &e)
    {
        return report_error(err, "json", "validation", e.what(), kExitValidation);
    }
    catch (const std::exception &e)
    {
        return report_error(err, "internal", "numerical", e.what(), kExitNumerical);
    }
}

} // namespace omnisim::cli
