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
#include "omnisim/scene_io.hpp"

#include "doctest.h"
#include "scenes.hpp"

#include <string>

using namespace omnisim;
using nlohmann::json;
using omnisim::testing::data_path;
using omnisim::testing::prototype_scene;

namespace
{

json prototype_doc()
{
    const LoadedScene loaded = parse_scene(data_path("prototype.json"));
    return scene_to_json(loaded.scene, loaded.table);
}

std::string failure_code(const json &doc)
{
    try
    {
        parse_scene_text(doc.dump(), "test.json");
    }
    catch (const ValidationError &e)
    {
        return e.code();
    }
    return "none";
}

std::string failure_message(const json &doc)
{
    try
    {
        parse_scene_text(doc.dump(), "test.json");
    }
    catch (const ValidationError &e)
    {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("prototype scene file")
{
    const LoadedScene loaded = parse_scene(data_path("prototype.json"));
    Scene expected = prototype_scene();
    expected.gains.tx_ios_channel_db = -47.76;
    expected.gains.ios_rx_channel_db = -43.53;
    CHECK(loaded.scene.panel == expected.panel);
    CHECK(loaded.scene.users == expected.users);
    CHECK(loaded.scene.gains == expected.gains);
    CHECK(loaded.scene.noise == expected.noise);
    CHECK(loaded.scene.options == expected.options);
    CHECK(loaded.scene.tx_power_dbm == 1.0);
    CHECK(loaded.scene.frequency_hz == 3.6e9);
    REQUIRE(loaded.scene.bs_antennas.size() == 2);
    CHECK(loaded.scene.bs_antennas[1].x == doctest::Approx(expected.wavelength() / 4.0).epsilon(1e-5));

    const StateTable proto = prototype_table();
    REQUIRE(loaded.table.size() == proto.size());
    for (StateIndex s = 0; s < proto.size(); ++s)
    {
        CHECK(loaded.table.state(s) == proto.state(s));
        CHECK(loaded.table.declared()[s] == proto.declared()[s]);
    }
    CHECK(loaded.table.diode_count() == 1);
}

TEST_CASE("serialization round-trips exactly")
{
    const LoadedScene a = parse_scene(data_path("prototype.json"));
    const json doc = scene_to_json(a.scene, a.table);
    const LoadedScene b = parse_scene_text(doc.dump(2));
    CHECK(b.scene == a.scene);
    CHECK(b.table == a.table);
    CHECK(scene_to_json(b.scene, b.table).dump() == doc.dump());

    Scene odd = a.scene;
    odd.panel.normal = normalized(Vec3{0.3, -0.2, 0.9});
    odd.panel.center = {0.1, 0.2, 0.3};
    odd.users = {{1.0, 1.0, 2.0}};
    odd.bs_antennas = {{0.0, 0.0, 3.0}};
    odd.options = {true, true, 1.5};
    odd.gains.tx_ios_channel_db.reset();
    const StateTable t({{0.3, 0.1234567, 0.4, 6.2}, {0.1, 1.0, 0.2, 2.0}, {0.5, 3.0, 0.5, 4.0}}, 2);
    const LoadedScene c = parse_scene_text(scene_to_json(odd, t).dump());
    CHECK(c.scene == odd);
    CHECK(c.table == t);
}

TEST_CASE("schema violations name the offending key")
{
    json doc = prototype_doc();

    SUBCASE("unknown key")
    {
        doc["panel"]["pitch"] = 1;
        CHECK(failure_code(doc) == "schema");
        CHECK(failure_message(doc).find("/panel/pitch") != std::string::npos);
        CHECK(failure_message(doc).rfind("test.json: ", 0) == 0);
    }
    SUBCASE("missing frequency")
    {
        doc.erase("frequency_hz");
        CHECK(failure_message(doc).find("/frequency_hz") != std::string::npos);
    }
    SUBCASE("no users")
    {
        doc.erase("users");
        CHECK(failure_message(doc).find("scene needs at least one user") != std::string::npos);
        doc["users"] = json::array();
        CHECK(failure_message(doc).find("scene needs at least one user") != std::string::npos);
    }
    SUBCASE("wrong type")
    {
        doc["panel"]["rows"] = "twenty";
        CHECK(failure_message(doc).find("/panel/rows") != std::string::npos);
    }
    SUBCASE("point with two coordinates")
    {
        doc["users"][1] = json::array({1.0, 2.0});
        CHECK(failure_message(doc).find("/users/1") != std::string::npos);
    }
    SUBCASE("amplitude out of range")
    {
        doc["state_table"][1]["refraction"]["amp"] = 1.2;
        CHECK(failure_code(doc) == "amplitude_range");
        CHECK(failure_message(doc).find("/state_table/1/refraction/amp") != std::string::npos);
    }
    SUBCASE("active state")
    {
        doc["state_table"][0] = {{"reflection", {{"amp", 0.9}, {"phase_deg", 0}}},
                                 {"refraction", {{"amp", 0.9}, {"phase_deg", 0}}}};
        CHECK(failure_code(doc) == "passivity");
    }
    SUBCASE("declared power mismatch")
    {
        doc["state_table"][0]["declared_power_t"] = 0.40;
        CHECK(failure_code(doc) == "declared_power");
    }
    SUBCASE("user in the panel plane")
    {
        doc["users"][0] = json::array({0.5, 0.0, 0.0});
        CHECK(failure_code(doc) == "side_undefined");
    }
    SUBCASE("non-tiling groups")
    {
        doc["panel"]["group_rows"] = 3;
        CHECK(failure_code(doc) == "validation");
    }
}

TEST_CASE("malformed input")
{
    try
    {
        parse_scene_text("{ \"frequency_hz\": ", "broken.json");
        FAIL("expected an error");
    }
    catch (const ValidationError &e)
    {
        CHECK(e.code() == "json_syntax");
        CHECK(std::string(e.what()).rfind("broken.json: ", 0) == 0);
    }
    CHECK_THROWS_AS(parse_scene("/nonexistent/scene.json"), ValidationError);
}
