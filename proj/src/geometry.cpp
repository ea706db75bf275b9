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

#include "omnisim/geometry.hpp"

#include "omnisim/error.hpp"

#include <cmath>
#include <string>

namespace omnisim
{

std::size_t PanelSpec::group_count() const
{
    if (group_rows == 0 || group_cols == 0)
        return 0;
    return (rows / group_rows) * (cols / group_cols);
}

PanelSpec prototype_panel()
{
    return PanelSpec{};
}

void validate_panel(const PanelSpec &spec)
{
    if (!spec.center.is_finite() || !spec.normal.is_finite())
        throw ValidationError("panel center and normal must be finite");
    if (std::abs(norm(spec.normal) - 1.0) > 1e-12)
        throw ValidationError("panel normal must have unit length (|n| = " + std::to_string(norm(spec.normal)) + ")");
    if (spec.rows == 0 || spec.cols == 0)
        throw ValidationError("panel must have at least one row and one column");
    if (spec.group_rows == 0 || spec.group_cols == 0)
        throw ValidationError("group dimensions must be positive");
    if (spec.rows % spec.group_rows != 0 || spec.cols % spec.group_cols != 0)
        throw ValidationError("group tiling " + std::to_string(spec.group_rows) + "x" + std::to_string(spec.group_cols) +
                              " does not divide panel " + std::to_string(spec.rows) + "x" + std::to_string(spec.cols));
    if (!(spec.dx > 0.0) || !(spec.dy > 0.0) || !std::isfinite(spec.dx) || !std::isfinite(spec.dy))
        throw ValidationError("element pitch must be positive and finite");
}

PanelBasis panel_basis(const Vec3 &normal)
{
    Vec3 axis{1.0, 0.0, 0.0};
    Vec3 projected = axis - dot(axis, normal) * normal;
    if (norm(projected) < 1e-9)
    {
        axis = Vec3{0.0, 1.0, 0.0};
        projected = axis - dot(axis, normal) * normal;
    }
    const Vec3 u = normalized(projected);
    return {u, cross(normal, u)};
}

ElementLayout build_layout(const PanelSpec &spec)
{
    validate_panel(spec);

    const auto [u, v] = panel_basis(spec.normal);
    ElementLayout layout;
    layout.u = u;
    layout.v = v;
    layout.group_count = spec.group_count();
    layout.positions.reserve(spec.element_count());
    layout.group_of.reserve(spec.element_count());

    const double col_mid = 0.5 * static_cast<double>(spec.cols - 1);
    const double row_mid = 0.5 * static_cast<double>(spec.rows - 1);
    const std::size_t groups_per_row = spec.cols / spec.group_cols;

    for (std::size_t r = 0; r < spec.rows; ++r)
    {
        const double along_v = (static_cast<double>(r) - row_mid) * spec.dy;
        for (std::size_t c = 0; c < spec.cols; ++c)
        {
            const double along_u = (static_cast<double>(c) - col_mid) * spec.dx;
            layout.positions.push_back(spec.center + along_u * u + along_v * v);
            layout.group_of.push_back((r / spec.group_rows) * groups_per_row + c / spec.group_cols);
        }
    }
    return layout;
}

std::string_view to_string(Side side)
{
    return side == Side::Reflection ? "reflection" : "refraction";
}

double signed_distance(const PanelSpec &spec, const Vec3 &point)
{
    return dot(point - spec.center, spec.normal);
}

Side side_of(const PanelSpec &spec, const Vec3 &bs_position, const Vec3 &point)
{
    const double bs_offset = signed_distance(spec, bs_position);
    if (std::abs(bs_offset) <= kPlaneTolerance)
        throw InvalidSceneError("base station lies in the panel plane");
    const double offset = signed_distance(spec, point);
    if (std::abs(offset) <= kPlaneTolerance)
        throw SideUndefinedError("point lies in the panel plane; side is undefined");
    return std::signbit(offset) == std::signbit(bs_offset) ? Side::Reflection : Side::Refraction;
}

Vec3 specular_direction(const Vec3 &incident_dir, const Vec3 &normal)
{
    return incident_dir - 2.0 * dot(incident_dir, normal) * normal;
}

} // namespace omnisim
