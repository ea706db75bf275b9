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

#ifndef OMNISIM_ELEMENT_MODEL_HPP
#define OMNISIM_ELEMENT_MODEL_HPP

#include "omnisim/geometry.hpp"

#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace omnisim
{

using StateIndex = std::size_t;

/// Wraps any finite angle into [0, 2pi).
double wrap_phase(double radians);

inline constexpr double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

/// Degree value that converts back to exactly `radians` under deg_to_rad,
/// so scene files survive a write/read cycle bit-for-bit.
double exact_degrees(double radians);

/// Complex response of one element state. Phases are radians in [0, 2pi).
struct CoefficientPair
{
    double reflection_amp = 0.0;
    double reflection_phase = 0.0;
    double refraction_amp = 0.0;
    double refraction_phase = 0.0;

    double amp(Side side) const { return side == Side::Reflection ? reflection_amp : refraction_amp; }
    double phase(Side side) const { return side == Side::Reflection ? reflection_phase : refraction_phase; }

    bool operator==(const CoefficientPair &) const = default;
};

/// Optional reference powers (e.g. from an EM solver) for cross-checking amp^2.
struct DeclaredPower
{
    std::optional<double> reflection;
    std::optional<double> refraction;

    bool operator==(const DeclaredPower &) const = default;
};

/// Finite set of states an element can realize.
///
/// Construction normalizes phases and rejects structural problems
/// (empty table, amplitudes outside [0,1], more states than 2^diodes).
/// Passivity and declared-power agreement are checked by `validate_table`
/// so that a failing table can still be inspected.
class StateTable
{
public:
    StateTable(std::vector<CoefficientPair> states, std::size_t diode_count,
               std::vector<DeclaredPower> declared = {});

    std::size_t size() const { return states_.size(); }
    std::size_t diode_count() const { return diode_count_; }
    const CoefficientPair &state(StateIndex index) const;
    std::span<const CoefficientPair> states() const { return states_; }
    std::span<const DeclaredPower> declared() const { return declared_; }
    bool phase_was_normalized(StateIndex index) const { return normalized_[index]; }

    /// Largest amplitude any state offers on `side`.
    double max_amp(Side side) const;

    bool operator==(const StateTable &other) const
    {
        return states_ == other.states_ && diode_count_ == other.diode_count_ && declared_ == other.declared_;
    }

private:
    std::vector<CoefficientPair> states_;
    std::size_t diode_count_;
    std::vector<DeclaredPower> declared_;
    std::vector<bool> normalized_;
};

/// Two-state table of the 640-element prototype at 3.6 GHz.
/// State index 0 is both diodes OFF, index 1 both ON.
StateTable prototype_table();

/// Accepted |amp^2 - declared power|.
inline constexpr double kDeclaredPowerTolerance = 0.005;

struct StateCheck
{
    StateIndex state = 0;
    double power_sum = 0.0; ///< amp_r^2 + amp_t^2
    bool passive = true;
    std::optional<double> reflection_residual; ///< amp_r^2 - declared
    std::optional<double> refraction_residual;
    bool declared_ok = true;
    bool phase_normalized = false;
};

struct ValidationReport
{
    std::vector<StateCheck> states;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

ValidationReport validate_table(const StateTable &table);

/// amp * exp(j phase) of `state` on `side`.
std::complex<double> response(const StateTable &table, StateIndex state, Side side);

/// Shortest angular distance between two phases, in [0, pi].
double circular_distance(double a, double b);

/// State whose `side` phase is circularly nearest to `target`; lowest index on ties.
StateIndex quantize_phase(const StateTable &table, Side side, double target);

enum class Granularity
{
    PerElement,
    PerGroup
};

std::string_view to_string(Granularity g);

/// One state index per element. Under PerGroup, elements of a group agree.
struct Configuration
{
    std::vector<StateIndex> state_index;
    Granularity granularity = Granularity::PerElement;

    bool operator==(const Configuration &) const = default;
};

Configuration uniform_configuration(const ElementLayout &layout, StateIndex state, Granularity granularity);

/// Expands one state per group into a per-element configuration.
Configuration configuration_from_groups(const ElementLayout &layout, std::span<const StateIndex> group_states);

/// Per-group states of a PerGroup configuration.
std::vector<StateIndex> group_states(const ElementLayout &layout, const Configuration &config);

/// Throws ValidationError on length mismatch, out-of-range states, or
/// inconsistent groups.
void validate_configuration(const Configuration &config, const ElementLayout &layout, const StateTable &table);

} // namespace omnisim

#endif
