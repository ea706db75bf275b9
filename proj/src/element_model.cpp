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

#include "omnisim/element_model.hpp"

#include "omnisim/error.hpp"

#include <cmath>
#include <limits>

namespace omnisim
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string state_label(StateIndex i)
{
    return "state " + std::to_string(i);
}

} // namespace

double wrap_phase(double radians)
{
    double wrapped = std::fmod(radians, kTwoPi);
    if (wrapped < 0.0)
        wrapped += kTwoPi;
    // fmod of a tiny negative value can round up to exactly 2pi
    if (wrapped >= kTwoPi)
        wrapped = 0.0;
    return wrapped;
}

double exact_degrees(double radians)
{
    const double guess = rad_to_deg(radians);
    if (deg_to_rad(guess) == radians)
        return guess;
    double up = guess;
    double down = guess;
    for (int i = 0; i < 64; ++i)
    {
        up = std::nextafter(up, std::numeric_limits<double>::infinity());
        if (deg_to_rad(up) == radians)
            return up;
        down = std::nextafter(down, -std::numeric_limits<double>::infinity());
        if (deg_to_rad(down) == radians)
            return down;
    }
    return guess;
}

StateTable::StateTable(std::vector<CoefficientPair> states, std::size_t diode_count,
                       std::vector<DeclaredPower> declared)
    : states_(std::move(states)), diode_count_(diode_count), declared_(std::move(declared))
{
    if (states_.empty())
        throw ValidationError("state table needs at least one state");
    if (diode_count_ == 0 || diode_count_ >= 63)
        throw ValidationError("diode count must be in [1, 62]");
    if (states_.size() > (std::size_t{1} << diode_count_))
        throw ValidationError("state table has " + std::to_string(states_.size()) + " states but " +
                              std::to_string(diode_count_) + " diodes allow at most " +
                              std::to_string(std::size_t{1} << diode_count_));
    if (!declared_.empty() && declared_.size() != states_.size())
        throw ValidationError("declared power list must match the number of states");
    if (declared_.empty())
        declared_.resize(states_.size());

    normalized_.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i)
    {
        auto &s = states_[i];
        for (double amp : {s.reflection_amp, s.refraction_amp})
        {
            if (!std::isfinite(amp) || amp < 0.0 || amp > 1.0)
                throw ValidationError(state_label(i) + ": amplitude " + std::to_string(amp) +
                                      " outside [0, 1]");
        }
        if (!std::isfinite(s.reflection_phase) || !std::isfinite(s.refraction_phase))
            throw ValidationError(state_label(i) + ": phase must be finite");
        const double r = wrap_phase(s.reflection_phase);
        const double t = wrap_phase(s.refraction_phase);
        normalized_.push_back(r != s.reflection_phase || t != s.refraction_phase);
        s.reflection_phase = r;
        s.refraction_phase = t;
    }
}

const CoefficientPair &StateTable::state(StateIndex index) const
{
    if (index >= states_.size())
        throw StateIndexError(state_label(index) + " out of range for a table of " + std::to_string(states_.size()) +
                              " states");
    return states_[index];
}

double StateTable::max_amp(Side side) const
{
    double best = 0.0;
    for (const auto &s : states_)
        best = std::max(best, s.amp(side));
    return best;
}

StateTable prototype_table()
{
    // Phases and amplitudes at 3.6 GHz under normal illumination; power
    // columns are the solver's reflected/refracted power fractions.
    std::vector<CoefficientPair> states{
        {0.46, deg_to_rad(20.0), 0.58, deg_to_rad(300.0)},
        {0.55, deg_to_rad(215.0), 0.81, deg_to_rad(123.0)},
    };
    std::vector<DeclaredPower> declared{
        {0.21, 0.34},
        {0.30, 0.66},
    };
    return StateTable(std::move(states), 2, std::move(declared));
}

ValidationReport validate_table(const StateTable &table)
{
    ValidationReport report;
    for (StateIndex i = 0; i < table.size(); ++i)
    {
        const auto &s = table.state(i);
        const auto &d = table.declared()[i];
        StateCheck check;
        check.state = i;
        const double pr = s.reflection_amp * s.reflection_amp;
        const double pt = s.refraction_amp * s.refraction_amp;
        check.power_sum = pr + pt;
        check.passive = check.power_sum <= 1.0;
        check.phase_normalized = table.phase_was_normalized(i);
        if (!check.passive)
            report.failures.push_back(state_label(i) + ": not passive, reflected + refracted power " +
                                      std::to_string(check.power_sum) + " > 1");
        if (d.reflection)
        {
            check.reflection_residual = pr - *d.reflection;
            if (std::abs(*check.reflection_residual) > kDeclaredPowerTolerance)
            {
                check.declared_ok = false;
                report.failures.push_back(state_label(i) + ": reflection amp^2 differs from declared power by " +
                                          std::to_string(*check.reflection_residual));
            }
        }
        if (d.refraction)
        {
            check.refraction_residual = pt - *d.refraction;
            if (std::abs(*check.refraction_residual) > kDeclaredPowerTolerance)
            {
                check.declared_ok = false;
                report.failures.push_back(state_label(i) + ": refraction amp^2 differs from declared power by " +
                                          std::to_string(*check.refraction_residual));
            }
        }
        report.states.push_back(check);
    }
    return report;
}

std::complex<double> response(const StateTable &table, StateIndex state, Side side)
{
    const auto &s = table.state(state);
    return std::polar(s.amp(side), s.phase(side));
}

double circular_distance(double a, double b)
{
    const double d = wrap_phase(a - b);
    return std::min(d, kTwoPi - d);
}

StateIndex quantize_phase(const StateTable &table, Side side, double target)
{
    StateIndex best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (StateIndex i = 0; i < table.size(); ++i)
    {
        const double d = circular_distance(table.state(i).phase(side), target);
        if (d < best_distance)
        {
            best_distance = d;
            best = i;
        }
    }
    return best;
}

std::string_view to_string(Granularity g)
{
    return g == Granularity::PerElement ? "element" : "group";
}

Configuration uniform_configuration(const ElementLayout &layout, StateIndex state, Granularity granularity)
{
    return Configuration{std::vector<StateIndex>(layout.size(), state), granularity};
}

Configuration configuration_from_groups(const ElementLayout &layout, std::span<const StateIndex> group_states)
{
    if (group_states.size() != layout.group_count)
        throw ValidationError("expected " + std::to_string(layout.group_count) + " group states, got " +
                              std::to_string(group_states.size()));
    Configuration config;
    config.granularity = Granularity::PerGroup;
    config.state_index.reserve(layout.size());
    for (std::size_t g : layout.group_of)
        config.state_index.push_back(group_states[g]);
    return config;
}

std::vector<StateIndex> group_states(const ElementLayout &layout, const Configuration &config)
{
    if (config.state_index.size() != layout.size())
        throw ValidationError("configuration length does not match the layout");
    std::vector<StateIndex> states(layout.group_count, 0);
    std::vector<bool> seen(layout.group_count, false);
    for (std::size_t m = 0; m < layout.size(); ++m)
    {
        const std::size_t g = layout.group_of[m];
        if (!seen[g])
        {
            seen[g] = true;
            states[g] = config.state_index[m];
        }
        else if (states[g] != config.state_index[m])
        {
            throw ValidationError("group " + std::to_string(g) + " has elements in different states");
        }
    }
    return states;
}

void validate_configuration(const Configuration &config, const ElementLayout &layout, const StateTable &table)
{
    if (config.state_index.size() != layout.size())
        throw ValidationError("configuration has " + std::to_string(config.state_index.size()) +
                              " entries for " + std::to_string(layout.size()) + " elements");
    for (StateIndex s : config.state_index)
    {
        if (s >= table.size())
            throw StateIndexError("configuration uses state " + std::to_string(s) + " but the table has " +
                                  std::to_string(table.size()));
    }
    if (config.granularity == Granularity::PerGroup)
        (void)group_states(layout, config);
}

} // namespace omnisim
