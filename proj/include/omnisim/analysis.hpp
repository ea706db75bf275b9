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

#ifndef OMNISIM_ANALYSIS_HPP
#define OMNISIM_ANALYSIS_HPP

#include "omnisim/channel.hpp"
#include "omnisim/element_model.hpp"
#include "omnisim/geometry.hpp"

#include <optional>
#include <vector>

namespace omnisim
{

/// Plane of a pattern sweep: the panel normal together with u (Horizontal)
/// or v (Vertical).
enum class PatternCut
{
    Horizontal,
    Vertical
};

struct PatternOptions
{
    PatternCut cut = PatternCut::Horizontal;
    double step_deg = 1.0;
    double eval_radius = 100.0; ///< meters from the panel center
};

struct PatternSample
{
    double angle_deg = 0.0;    ///< from the side's outward normal, toward +u (or +v)
    double power_db = 0.0;     ///< relative to the sweep maximum
    double power_linear = 0.0; ///< |field|^2 before normalization
    Side side = Side::Reflection;
};

struct RadiationPattern
{
    std::vector<PatternSample> samples;
    std::size_t skipped = 0; ///< probes that fell in the panel plane
};

/// Scattered power on one side of the panel, swept over the angles k * step
/// with |k * step| <= 90 deg. The field at each probe is the coherent sum of
/// the wave from BS antenna 0 (or a unit plane wave) re-radiated by every
/// element. Samples are normalized to the sweep's own maximum.
RadiationPattern radiation_pattern(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                                   const Configuration &config, Side side, const PatternOptions &options = {});

/// Cells of a coverage map lie in the plane through the panel center spanned
/// by u and the normal: a cell (x, y) is at center + x u + y normal.
struct CoverageGrid
{
    double x0 = -2.0;
    double x1 = 2.0;
    double y0 = -2.0;
    double y1 = 2.0;
    std::size_t nx = 41;
    std::size_t ny = 41;

    double x(std::size_t i) const;
    double y(std::size_t j) const;
};

/// SE written for cells within the plane tolerance of the panel.
inline constexpr double kMaskedSe = -1.0;

struct CoverageCell
{
    double x = 0.0;
    double y = 0.0;
    double se = 0.0; ///< bits/s/Hz, or kMaskedSe
    std::optional<Side> side;
};

struct CoverageMap
{
    CoverageGrid grid;
    std::vector<CoverageCell> cells; ///< index j * nx + i

    const CoverageCell &at(std::size_t i, std::size_t j) const { return cells[j * grid.nx + i]; }
};

/// Spectral efficiency log2(1 + P |h|^2 / sigma^2) of a virtual
/// single-antenna user with unit antenna gain at every cell.
CoverageMap coverage_map(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                         const Configuration &config, const CoverageGrid &grid);

/// Received SNR in dB at `point` including the scene's antenna and LNA gains.
double snr_at(const Scene &scene, const ElementLayout &layout, const StateTable &table, const Configuration &config,
              const Vec3 &point);

} // namespace omnisim

#endif
