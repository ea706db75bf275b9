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

#include "omnisim/analysis.hpp"

#include "omnisim/error.hpp"
#include "omnisim/parallel.hpp"

#include <cmath>
#include <numbers>

namespace omnisim
{

namespace
{

/// Field from the BS at arbitrary points through a fixed configuration.
class PointEvaluator
{
public:
    PointEvaluator(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                   const Configuration &config)
        : scene_(scene), layout_(layout)
    {
        validate_scene(scene);
        validate_configuration(config, layout, table);
        for (std::size_t n = 0; n < scene.bs_antennas.size(); ++n)
            incident_.push_back(incident_field(scene, layout, n));
        reflection_.reserve(layout.size());
        refraction_.reserve(layout.size());
        for (StateIndex s : config.state_index)
        {
            reflection_.push_back(response(table, s, Side::Reflection));
            refraction_.push_back(response(table, s, Side::Refraction));
        }
    }

    Side side(const Vec3 &point) const { return side_of(scene_.panel, scene_.bs_reference(), point); }

    /// Channel from antenna n to `point`, scattered by the panel (+ direct path).
    Complex channel(std::size_t antenna, const Vec3 &point, Side side) const
    {
        const auto &gamma = side == Side::Reflection ? reflection_ : refraction_;
        const auto &incident = incident_[antenna];
        Complex sum{};
        for (std::size_t m = 0; m < layout_.size(); ++m)
            sum += gamma[m] * (incident[m] * element_to_point(scene_, layout_.positions[m], point));
        if (scene_.options.direct_path && side == Side::Reflection)
            sum += friis_gain(distance(scene_.bs_antennas[antenna], point), scene_.wavelength());
        return sum;
    }

    /// Sum over antennas of |h_n|^2.
    double channel_power(const Vec3 &point, Side side) const
    {
        double power = 0.0;
        for (std::size_t n = 0; n < incident_.size(); ++n)
            power += std::norm(channel(n, point, side));
        return power;
    }

private:
    const Scene &scene_;
    const ElementLayout &layout_;
    std::vector<std::vector<Complex>> incident_;
    std::vector<Complex> reflection_;
    std::vector<Complex> refraction_;
};

} // namespace

RadiationPattern radiation_pattern(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                                   const Configuration &config, Side side, const PatternOptions &options)
{
    if (!(options.step_deg > 0.0) || !std::isfinite(options.step_deg))
        throw ValidationError("pattern step must be positive");
    if (!(options.eval_radius > 0.0) || !std::isfinite(options.eval_radius))
        throw ValidationError("pattern radius must be positive");

    const PointEvaluator field(scene, layout, table, config);
    const double toward_bs = std::signbit(signed_distance(scene.panel, scene.bs_reference())) ? -1.0 : 1.0;
    const Vec3 outward = scene.panel.normal * (side == Side::Reflection ? toward_bs : -toward_bs);
    const Vec3 tangent = options.cut == PatternCut::Horizontal ? layout.u : layout.v;

    const auto half = static_cast<long>(std::floor(90.0 / options.step_deg + 1e-9));
    const std::size_t count = static_cast<std::size_t>(2 * half + 1);

    struct Slot
    {
        double angle = 0.0;
        double power = 0.0;
        bool valid = false;
    };
    std::vector<Slot> slots(count);
    parallel_for(count, [&](std::size_t i) {
        const double angle = static_cast<double>(static_cast<long>(i) - half) * options.step_deg;
        const double theta = deg_to_rad(angle);
        const Vec3 probe =
            scene.panel.center + options.eval_radius * (std::sin(theta) * tangent + std::cos(theta) * outward);
        slots[i].angle = angle;
        if (std::abs(signed_distance(scene.panel, probe)) <= kPlaneTolerance)
            return;
        slots[i].power = std::norm(field.channel(0, probe, side));
        slots[i].valid = true;
    });

    RadiationPattern pattern;
    double peak = 0.0;
    for (const auto &s : slots)
    {
        if (!s.valid)
        {
            ++pattern.skipped;
            continue;
        }
        peak = std::max(peak, s.power);
        pattern.samples.push_back({s.angle, 0.0, s.power, side});
    }
    if (pattern.samples.empty())
        return pattern;
    if (!(peak > 0.0))
        throw NumericalError("no power is scattered toward the " + std::string(to_string(side)) + " side",
                             "zero_pattern");
    for (auto &s : pattern.samples)
        s.power_db = s.power_linear == peak ? 0.0 : linear_to_db(s.power_linear / peak);
    return pattern;
}

double CoverageGrid::x(std::size_t i) const
{
    return nx > 1 ? x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(nx - 1) : x0;
}

double CoverageGrid::y(std::size_t j) const
{
    return ny > 1 ? y0 + (y1 - y0) * static_cast<double>(j) / static_cast<double>(ny - 1) : y0;
}

CoverageMap coverage_map(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                         const Configuration &config, const CoverageGrid &grid)
{
    if (grid.nx == 0 || grid.ny == 0)
        throw ValidationError("coverage grid must have at least one cell");
    for (double v : {grid.x0, grid.x1, grid.y0, grid.y1})
        if (!std::isfinite(v))
            throw ValidationError("coverage grid bounds must be finite");

    const PointEvaluator field(scene, layout, table, config);
    const double signal = scene.tx_power_w() / scene.noise_power_w();

    CoverageMap map;
    map.grid = grid;
    map.cells.resize(grid.nx * grid.ny);
    parallel_for(map.cells.size(), [&](std::size_t idx) {
        const std::size_t i = idx % grid.nx;
        const std::size_t j = idx / grid.nx;
        CoverageCell &cell = map.cells[idx];
        cell.x = grid.x(i);
        cell.y = grid.y(j);
        const Vec3 point = scene.panel.center + cell.x * layout.u + cell.y * scene.panel.normal;
        if (std::abs(signed_distance(scene.panel, point)) <= kPlaneTolerance)
        {
            cell.se = kMaskedSe;
            return;
        }
        const Side side = field.side(point);
        cell.side = side;
        cell.se = std::log2(1.0 + signal * field.channel_power(point, side));
    });
    return map;
}

double snr_at(const Scene &scene, const ElementLayout &layout, const StateTable &table, const Configuration &config,
              const Vec3 &point)
{
    const PointEvaluator field(scene, layout, table, config);
    const Side side = field.side(point);
    const double gain = db_to_linear(scene.gains.total_db());
    return linear_to_db(scene.tx_power_w() * field.channel_power(point, side) * gain / scene.noise_power_w());
}

} // namespace omnisim
