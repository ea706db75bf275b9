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

#include "omnisim/error.hpp"
#include "omnisim/geometry.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace omnisim;

TEST_CASE("prototype layout has 640 elements in 16 groups")
{
    const ElementLayout layout = build_layout(prototype_panel());
    CHECK(layout.size() == 640);
    CHECK(layout.group_count == 16);
    CHECK(std::set<std::size_t>(layout.group_of.begin(), layout.group_of.end()).size() == 16);
    for (std::size_t g = 0; g < 16; ++g)
        CHECK(std::count(layout.group_of.begin(), layout.group_of.end(), g) == 40);
}

TEST_CASE("element positions are row-major and centered")
{
    const ElementLayout layout = build_layout(prototype_panel());
    // u = +x, v = n x u = +y for a +z normal
    CHECK(layout.u == Vec3{1.0, 0.0, 0.0});
    CHECK(layout.v == Vec3{0.0, 1.0, 0.0});

    const Vec3 &first = layout.positions.front();
    CHECK(first.x == doctest::Approx(-15.5 * 0.0287).epsilon(1e-12));
    CHECK(first.y == doctest::Approx(-9.5 * 0.0142).epsilon(1e-12));
    CHECK(first.z == 0.0);

    const Vec3 &next = layout.positions[1];
    CHECK(next.x - first.x == doctest::Approx(0.0287).epsilon(1e-12));
    const Vec3 &below = layout.positions[32];
    CHECK(below.y - first.y == doctest::Approx(0.0142).epsilon(1e-12));

    Vec3 sum{};
    for (const auto &p : layout.positions)
        sum = sum + p;
    CHECK(norm(sum) < 1e-12);
}

TEST_CASE("group index follows the group grid")
{
    const ElementLayout layout = build_layout(prototype_panel());
    auto index = [](std::size_t r, std::size_t c) { return r * 32 + c; };
    CHECK(layout.group_of[index(0, 0)] == 0);
    CHECK(layout.group_of[index(4, 7)] == 0);
    CHECK(layout.group_of[index(0, 8)] == 1);
    CHECK(layout.group_of[index(5, 8)] == 5);
    CHECK(layout.group_of[index(19, 31)] == 15);
}

TEST_CASE("panel validation")
{
    PanelSpec p = prototype_panel();
    CHECK_NOTHROW(validate_panel(p));

    SUBCASE("groups must tile the panel")
    {
        p.group_rows = 3;
        CHECK_THROWS_AS(validate_panel(p), ValidationError);
    }
    SUBCASE("pitch must be positive")
    {
        p.dx = 0.0;
        CHECK_THROWS_AS(validate_panel(p), ValidationError);
    }
    SUBCASE("normal must be a unit vector")
    {
        p.normal = {0.0, 0.0, 2.0};
        CHECK_THROWS_AS(validate_panel(p), ValidationError);
    }
    SUBCASE("empty panel")
    {
        p.rows = 0;
        CHECK_THROWS_AS(validate_panel(p), ValidationError);
    }
}

TEST_CASE("panel basis is orthonormal for arbitrary normals")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int i = 0; i < 200; ++i)
    {
        const Vec3 n = normalized(Vec3{g(rng), g(rng), g(rng)});
        const PanelBasis b = panel_basis(n);
        CHECK(std::abs(norm(b.u) - 1.0) < 1e-12);
        CHECK(std::abs(norm(b.v) - 1.0) < 1e-12);
        CHECK(std::abs(dot(b.u, n)) < 1e-12);
        CHECK(std::abs(dot(b.v, n)) < 1e-12);
        CHECK(std::abs(dot(b.u, b.v)) < 1e-12);
        CHECK(norm(cross(b.u, b.v) - n) < 1e-12);
    }
    // +x is parallel to this normal, so u falls back to +y
    const PanelBasis b = panel_basis({1.0, 0.0, 0.0});
    CHECK(norm(b.u - Vec3{0.0, 1.0, 0.0}) < 1e-12);
}

TEST_CASE("tilted panels keep every element in the plane")
{
    PanelSpec p = prototype_panel();
    p.center = {0.3, -1.0, 2.0};
    p.normal = normalized(Vec3{1.0, 2.0, 2.0});
    const ElementLayout layout = build_layout(p);
    for (const auto &pos : layout.positions)
        CHECK(std::abs(signed_distance(p, pos)) < 1e-12);
}

TEST_CASE("side classification")
{
    const PanelSpec p = prototype_panel();
    const Vec3 bs{0.0, 0.0, 1.16};
    CHECK(side_of(p, bs, {0.2, 0.0, 0.5}) == Side::Reflection);
    CHECK(side_of(p, bs, {0.2, 0.0, -0.5}) == Side::Refraction);
    CHECK_THROWS_AS(side_of(p, bs, {0.2, 0.0, 0.0}), SideUndefinedError);
    CHECK_THROWS_AS(side_of(p, {1.0, 1.0, 0.0}, {0.2, 0.0, 0.5}), InvalidSceneError);

    // a BS behind the panel swaps the labels
    CHECK(side_of(p, {0.0, 0.0, -1.0}, {0.2, 0.0, -0.5}) == Side::Reflection);
    CHECK(to_string(Side::Reflection) == "reflection");
    CHECK(to_string(Side::Refraction) == "refraction");
}

TEST_CASE("specular direction mirrors the normal component")
{
    const Vec3 n{0.0, 0.0, 1.0};
    const Vec3 in = normalized(Vec3{1.0, 0.0, -1.0});
    const Vec3 out = specular_direction(in, n);
    CHECK(norm(out - normalized(Vec3{1.0, 0.0, 1.0})) < 1e-12);
    CHECK(norm(specular_direction({0.0, 0.0, -1.0}, n) - Vec3{0.0, 0.0, 1.0}) < 1e-12);
}
