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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero when any criterion fails.

#include "omnisim/analysis.hpp"
#include "omnisim/beamforming.hpp"
#include "omnisim/cli.hpp"
#include "omnisim/error.hpp"
#include "omnisim/scene_io.hpp"

#include "scenes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace omnisim;
using omnisim::testing::data_path;
using omnisim::testing::random_group_scene;
namespace fs = std::filesystem;

namespace
{

struct Verdict
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

LoadedScene prototype()
{
    return parse_scene(data_path("prototype.json"));
}

template <typename E, typename Fn>
bool throws(Fn &&fn)
{
    try
    {
        fn();
    }
    catch (const E &)
    {
        return true;
    }
    catch (...)
    {
        return false;
    }
    return false;
}

Verdict table_consistency()
{
    const auto start = std::chrono::steady_clock::now();
    const LoadedScene loaded = prototype();
    const ValidationReport report = validate_table(loaded.table);
    double worst = 0.0;
    std::size_t checked = 0;
    std::string residuals;
    for (const auto &s : report.states)
        for (const auto &r : {s.reflection_residual, s.refraction_residual})
        {
            if (!r)
                continue;
            ++checked;
            worst = std::max(worst, std::abs(*r));
            residuals += fmt(" %+.4f", *r);
        }
    const double elapsed = seconds_since(start);
    return {checked == 4 && worst <= kDeclaredPowerTolerance && report.ok() && elapsed < 1.0,
            fmt("residuals%s, max %.4f <= %.3f, %.3f s", residuals.c_str(), worst, kDeclaredPowerTolerance,
                elapsed)};
}

Verdict passivity()
{
    const LoadedScene loaded = prototype();
    const ValidationReport report = validate_table(loaded.table);
    bool passive = true;
    std::string sums;
    for (const auto &s : report.states)
    {
        passive = passive && s.power_sum <= 1.0;
        sums += fmt(" %.4f", s.power_sum);
    }
    const StateTable active({{0.9, 0.0, 0.9, 0.0}}, 1);
    const bool rejected = !validate_table(active).ok();
    return {passive && report.ok() && rejected,
            fmt("power sums%s; prototype table %s; (0.9, 0.9) %s", sums.c_str(), report.ok() ? "accepted" : "rejected",
                rejected ? "rejected" : "accepted")};
}

Verdict zf_properties()
{
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260101);
    std::normal_distribution<double> g;
    double worst_leak = 0.0;
    double worst_power = 0.0;
    std::size_t failures = 0;
    for (int trial = 0; trial < 1000; ++trial)
    {
        const std::size_t nt = 1 + rng() % 8;
        const std::size_t k = 1 + rng() % nt;
        ChannelMatrix h(k, nt);
        for (Eigen::Index r = 0; r < h.rows(); ++r)
            for (Eigen::Index c = 0; c < h.cols(); ++c)
                h(r, c) = Complex(g(rng), g(rng));
        const double p = std::exp(g(rng));
        try
        {
            const BeamformerResult bf = zf_precoder(h, p, 1e-2);
            const Eigen::MatrixXcd hw = h * bf.precoder;
            double used = 0.0;
            for (std::size_t i = 0; i < k; ++i)
            {
                used += bf.power_allocation[i] * bf.precoder.col(i).squaredNorm();
                for (std::size_t j = 0; j < k; ++j)
                    if (i != j)
                        worst_leak = std::max(worst_leak, std::abs(hw(i, j)));
            }
            worst_power = std::max(worst_power, std::abs(used - p) / p);
        }
        catch (const Error &)
        {
            ++failures;
        }
    }

    ChannelMatrix tall = ChannelMatrix::Ones(3, 2);
    ChannelMatrix colinear(2, 3);
    colinear << 1.0, 2.0, Complex(0, 1), 2.0, 4.0, Complex(0, 2);
    const bool too_many = throws<TooManyUsersError>([&] { zf_precoder(tall, 1.0, 1.0); });
    const bool rank = throws<RankError>([&] { zf_precoder(colinear, 1.0, 1.0); });
    const double elapsed = seconds_since(start);
    return {failures == 0 && worst_leak < 1e-9 && worst_power <= 1e-9 && too_many && rank && elapsed < 10.0,
            fmt("max |off-diag| %.2e, max power error %.2e, %zu unexpected errors, K>Nt %s, rank-deficient %s, "
                "%.2f s",
                worst_leak, worst_power, failures, too_many ? "raised" : "missing", rank ? "raised" : "missing",
                elapsed)};
}

Verdict optimizer_oracle()
{
    const auto start = std::chrono::steady_clock::now();
    const StateTable table = prototype_table();
    std::size_t close = 0, exact = 0, dominated = 0, monotone = 0, bounded = 0;
    double worst_ratio = 1.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const Scene scene = random_group_scene(seed, 8 + seed % 9);
        const ElementLayout layout = build_layout(scene.panel);
        const OptimizationOutcome greedy = greedy_optimize(scene, layout, table, Granularity::PerGroup);
        const OptimizationOutcome best = exhaustive_optimize(scene, layout, table, Granularity::PerGroup);
        const double bound = relaxed_upper_bound(scene, layout, table);

        dominated += best.objective >= greedy.objective;
        close += greedy.objective >= 0.95 * best.objective;
        exact += greedy.objective == best.objective;
        bounded += bound >= best.objective;
        bool up = true;
        for (std::size_t i = 1; i < greedy.trace.size(); ++i)
            up = up && greedy.trace[i].objective >= greedy.trace[i - 1].objective;
        monotone += up;
        if (best.objective > 0.0)
            worst_ratio = std::min(worst_ratio, greedy.objective / best.objective);
    }
    const double elapsed = seconds_since(start);
    return {dominated == 100 && close >= 95 && monotone == 100 && bounded == 100 && elapsed < 300.0,
            fmt("exhaustive>=greedy %zu/100, greedy>=95%% %zu/100 (exact optimum %zu/100, worst ratio %.3f), "
                "monotone traces %zu/100, bound>=optimum %zu/100, %.1f s",
                dominated, close, exact, worst_ratio, monotone, bounded, elapsed)};
}

Verdict link_budget_total()
{
    const LoadedScene loaded = prototype();
    const LinkBudget b = link_budget(scene_link_chain(loaded.scene, 0.0, 0));
    return {std::abs(b.received_dbm - (-55.99)) <= 0.01, fmt("received %.4f dBm, expected -55.99", b.received_dbm)};
}

Verdict friis_desk_check()
{
    const double lambda = prototype().scene.wavelength();
    auto predicted = [&](double d) { return 20.0 * std::log10(std::abs(friis_gain(d, lambda))); };
    const double tx = predicted(1.16);
    const double rx = predicted(0.7);
    const double tx_residual = -47.76 - tx;
    const double rx_residual = -43.53 - rx;
    const bool pass = std::abs(tx - (-44.86)) <= 0.01 && std::abs(rx - (-40.47)) <= 0.01 &&
                      std::abs(tx_residual) <= 4.0 && std::abs(rx_residual) <= 4.0;
    return {pass, fmt("1.16 m: %.3f dB (measured -47.76, residual %+.2f dB); 0.7 m: %.3f dB (measured -43.53, "
                      "residual %+.2f dB)",
                      tx, tx_residual, rx, rx_residual)};
}

Verdict two_sided_service()
{
    const LoadedScene loaded = prototype();
    const ElementLayout layout = build_layout(loaded.scene.panel);
    const OptimizationOutcome greedy = greedy_optimize(loaded.scene, layout, loaded.table, Granularity::PerGroup);
    const RateEvaluation rates = sum_rate(loaded.scene, layout, loaded.table, greedy.config);

    const CascadeModel model(loaded.scene, layout, loaded.table);
    const auto sides = model.sides();
    const bool both_sides = sides.size() == 2 && sides[0] != sides[1];
    const std::size_t kr = sides[0] == Side::Reflection ? 0 : 1;
    const std::size_t kt = 1 - kr;

    // per-element powers recovered from the channel terms, for every element and state
    double worst_power = 0.0;
    double worst_ratio = 0.0;
    std::vector<double> ratio_by_state(loaded.table.size(), 0.0);
    for (std::size_t m = 0; m < model.elements(); ++m)
        for (StateIndex s = 0; s < loaded.table.size(); ++s)
        {
            const double reflected = std::norm(model.term(m, s, kr, 0)) / std::norm(model.base_term(m, kr, 0));
            const double refracted = std::norm(model.term(m, s, kt, 0)) / std::norm(model.base_term(m, kt, 0));
            const DeclaredPower &d = loaded.table.declared()[s];
            worst_power =
                std::max({worst_power, std::abs(reflected - *d.reflection), std::abs(refracted - *d.refraction)});
            const CoefficientPair &c = loaded.table.state(s);
            const double constant = (c.refraction_amp * c.refraction_amp) / (c.reflection_amp * c.reflection_amp);
            worst_ratio = std::max(worst_ratio, std::abs(refracted / reflected - constant) / constant);
            ratio_by_state[s] = refracted / reflected;
        }
    std::string quotients;
    for (StateIndex s = 0; s < loaded.table.size(); ++s)
    {
        const DeclaredPower &d = loaded.table.declared()[s];
        quotients += fmt(" state %zu quotient %.4f (declared pair gives %.4f)", s, ratio_by_state[s], *d.refraction / *d.reflection);
    }

    const bool positive = !rates.degenerate && rates.per_user_rate.size() == 2 && rates.per_user_rate[0] > 0.0 &&
                          rates.per_user_rate[1] > 0.0;
    return {both_sides && positive && worst_power <= 0.01 && worst_ratio <= 1e-9,
            fmt("SE reflection-side %.3f, refraction-side %.3f bit/s/Hz; per-element powers within %.4f of the "
                "declared pairs; refracted/reflected constant per state to %.1e;%s",
                rates.per_user_rate[kr], rates.per_user_rate[kt], worst_power, worst_ratio, quotients.c_str())};
}

Verdict specular_peak()
{
    Scene scene = prototype().scene;
    scene.options.plane_wave_incidence = true;
    scene.bs_antennas = {scene.panel.center + 10.0 * scene.panel.normal};
    scene.users = {scene.panel.center + 1.0 * scene.panel.normal};
    const ElementLayout layout = build_layout(scene.panel);
    const StateTable table = prototype().table;

    double worst = 0.0;
    for (StateIndex s = 0; s < table.size(); ++s)
        for (PatternCut cut : {PatternCut::Horizontal, PatternCut::Vertical})
        {
            const RadiationPattern p = radiation_pattern(scene, layout, table,
                                                         uniform_configuration(layout, s, Granularity::PerElement),
                                                         Side::Reflection, {cut, 1.0, 100.0});
            const auto peak = std::max_element(p.samples.begin(), p.samples.end(), [](const auto &a, const auto &b) {
                return a.power_linear < b.power_linear;
            });
            worst = std::max(worst, std::abs(peak->angle_deg));
        }
    return {worst <= 1.0, fmt("largest peak offset from broadside %.1f deg over both states and cuts", worst)};
}

Verdict configuration_contrast()
{
    const LoadedScene loaded = prototype();
    const Scene &scene = loaded.scene;
    const ElementLayout layout = build_layout(scene.panel);

    // Binary gratings over the 4x4 group grid: period two groups vs period four groups along u.
    std::vector<StateIndex> fine(16), coarse(16);
    for (std::size_t g = 0; g < 16; ++g)
    {
        fine[g] = (g % 4) % 2;
        coarse[g] = (g % 4) / 2;
    }
    const Configuration a = configuration_from_groups(layout, fine);
    const Configuration b = configuration_from_groups(layout, coarse);

    auto peak_angle = [&](const Configuration &c) {
        const RadiationPattern p = radiation_pattern(scene, layout, loaded.table, c, Side::Reflection);
        return std::max_element(p.samples.begin(), p.samples.end(),
                                [](const auto &x, const auto &y) { return x.power_linear < y.power_linear; })
            ->angle_deg;
    };
    const double peak_a = peak_angle(a);
    const double peak_b = peak_angle(b);

    const CoverageGrid grid;
    const CoverageMap map_a = coverage_map(scene, layout, loaded.table, a, grid);
    const CoverageMap map_b = coverage_map(scene, layout, loaded.table, b, grid);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < map_a.cells.size(); ++i)
        differing += std::abs(map_a.cells[i].se - map_b.cells[i].se) > 0.1;
    const double fraction = static_cast<double>(differing) / static_cast<double>(map_a.cells.size());

    Scene noisier = scene;
    noisier.noise.noise_figure_db += 10.0 * std::log10(2.0);
    std::size_t not_lower = 0, compared = 0;
    for (const Configuration *c : {&a, &b})
    {
        const CoverageMap base = coverage_map(scene, layout, loaded.table, *c, grid);
        const CoverageMap worse = coverage_map(noisier, layout, loaded.table, *c, grid);
        for (std::size_t i = 0; i < base.cells.size(); ++i)
        {
            if (!base.cells[i].side)
                continue;
            ++compared;
            not_lower += !(worse.cells[i].se < base.cells[i].se);
        }
    }

    return {std::abs(peak_a - peak_b) >= 2.0 && fraction >= 0.10 && not_lower == 0,
            fmt("reflection peaks at %+.0f and %+.0f deg; %.1f%% of cells differ by > 0.1 bit/s/Hz; "
                "%zu of %zu cells failed to drop when the noise power doubled",
                peak_a, peak_b, 100.0 * fraction, not_lower, compared)};
}

Verdict determinism()
{
    const fs::path dir = fs::temp_directory_path() / ("omnisim_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string config = data_path("prototype.json");

    struct Case
    {
        std::string name;
        std::vector<std::string> args;
        std::vector<std::string> artifacts;
    };
    const std::vector<Case> cases = {
        {"simulate-greedy", {"simulate", "--config", config}, {"out"}},
        {"simulate-random", {"simulate", "--config", config, "--optimizer", "random", "--seed", "11"}, {"out"}},
        {"simulate-statistical",
         {"simulate", "--config", config, "--optimizer", "statistical", "--seed", "11", "--samples", "16"},
         {"out"}},
        {"simulate-exhaustive", {"simulate", "--config", config, "--optimizer", "exhaustive"}, {"out"}},
        {"pattern", {"pattern", "--config", config, "--side", "both", "--state", "1"}, {"out"}},
        {"coverage", {"coverage", "--config", config, "--grid", "-2,2,-2,2,31,31"}, {"out", "pgm"}},
        {"linkbudget", {"linkbudget", "--config", config, "--ios-gain-db", "0"}, {}},
        {"oracle", {"oracle", "--config", config}, {"out"}},
    };

    auto run_once = [&](const Case &c, const std::string &tag, const char *threads) {
        ::setenv("OMNISIM_THREADS", threads, 1);
        std::vector<std::string> args = c.args;
        for (const auto &a : c.artifacts)
        {
            args.push_back("--" + a);
            args.push_back((dir / (c.name + "." + tag + "." + a)).string());
        }
        std::ostringstream out, err;
        const int status = cli::run(args, out, err);
        std::string bytes = std::to_string(status) + "\n" + out.str();
        for (const auto &a : c.artifacts)
        {
            std::ifstream in(dir / (c.name + "." + tag + "." + a), std::ios::binary);
            std::ostringstream s;
            s << in.rdbuf();
            bytes += s.str();
        }
        return bytes;
    };

    std::size_t identical = 0;
    std::string mismatched;
    for (const auto &c : cases)
    {
        const std::string first = run_once(c, "a", "1");
        const std::string second = run_once(c, "b", "1");
        const std::string threaded = run_once(c, "c", "4");
        const bool same = first == second && first == threaded && first.rfind("0\n", 0) == 0;
        identical += same;
        if (!same)
            mismatched += " " + c.name;
    }
    ::unsetenv("OMNISIM_THREADS");
    fs::remove_all(dir);
    return {identical == cases.size(),
            fmt("%zu/%zu subcommand runs byte-identical across repeats and thread counts%s%s", identical,
                cases.size(), mismatched.empty() ? "" : "; differing:", mismatched.c_str())};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria = {
        {"state table consistency", table_consistency},
        {"passivity", passivity},
        {"zero-forcing properties", zf_properties},
        {"optimizer oracle suite", optimizer_oracle},
        {"link budget", link_budget_total},
        {"free-space desk check", friis_desk_check},
        {"two-sided service", two_sided_service},
        {"specular peak", specular_peak},
        {"configuration contrast", configuration_contrast},
        {"determinism", determinism},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        Verdict v;
        try
        {
            v = criteria[i].second();
        }
        catch (const std::exception &e)
        {
            v = {false, std::string("threw: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
