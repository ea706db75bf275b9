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

#ifndef OMNISIM_GEOMETRY_HPP
#define OMNISIM_GEOMETRY_HPP

#include "omnisim/vec3.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace omnisim
{

/// Points closer than this to the panel plane have no defined side.
inline constexpr double kPlaneTolerance = 1e-9;

/// Flat rectangular surface of rows x cols identical elements, tiled into
/// equal rectangular groups that share a state.
///
/// Columns run along the panel axis u and rows along v (see `panel_basis`),
/// with pitch dx and dy respectively.
struct PanelSpec
{
    Vec3 center{0.0, 0.0, 0.0};
    Vec3 normal{0.0, 0.0, 1.0};
    std::size_t rows = 20;
    std::size_t cols = 32;
    double dx = 0.0287;
    double dy = 0.0142;
    std::size_t group_rows = 5;
    std::size_t group_cols = 8;

    std::size_t element_count() const { return rows * cols; }
    std::size_t group_count() const;

    bool operator==(const PanelSpec &) const = default;
};

/// 640 elements of 2.87 cm x 1.42 cm, 16 groups of 5 x 8, at the origin facing +z.
PanelSpec prototype_panel();

/// Throws ValidationError if the spec breaks any invariant (unit normal,
/// divisible tiling, positive pitch, finite center).
void validate_panel(const PanelSpec &spec);

/// In-plane orthonormal axes. u is +x projected onto the plane (or +y when
/// the normal is parallel to x); v = normal x u.
struct PanelBasis
{
    Vec3 u;
    Vec3 v;
};

PanelBasis panel_basis(const Vec3 &normal);

struct ElementLayout
{
    std::vector<Vec3> positions;       ///< element centers, row-major
    std::vector<std::size_t> group_of; ///< group index per element
    Vec3 u;
    Vec3 v;
    std::size_t group_count = 0;

    std::size_t size() const { return positions.size(); }
};

ElementLayout build_layout(const PanelSpec &spec);

enum class Side
{
    Reflection, ///< the half-space containing the BS
    Refraction
};

std::string_view to_string(Side side);

/// Signed distance of `point` from the panel plane along the normal.
double signed_distance(const PanelSpec &spec, const Vec3 &point);

/// Throws InvalidSceneError when the BS lies in the panel plane and
/// SideUndefinedError when `point` does.
Side side_of(const PanelSpec &spec, const Vec3 &bs_position, const Vec3 &point);

/// Mirror-law direction d - 2 (d.n) n.
Vec3 specular_direction(const Vec3 &incident_dir, const Vec3 &normal);

} // namespace omnisim

#endif
