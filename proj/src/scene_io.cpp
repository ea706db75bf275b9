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

#include "omnisim/scene_io.hpp"

#include "omnisim/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace omnisim
{

using nlohmann::json;

namespace
{

class SchemaReader
{
public:
    explicit SchemaReader(std::string origin) : origin_(std::move(origin)) {}

    [[noreturn]] void fail(const std::string &pointer, const std::string &reason, std::string code = "schema") const
    {
        throw ValidationError(origin_ + ": at " + (pointer.empty() ? "/" : pointer) + ": " + reason, std::move(code));
    }

    void expect_object(const json &j, const std::string &pointer, std::initializer_list<std::string_view> allowed) const
    {
        if (!j.is_object())
            fail(pointer, "expected an object");
        for (const auto &item : j.items())
        {
            bool known = false;
            for (auto key : allowed)
                known = known || item.key() == key;
            if (!known)
                fail(pointer + "/" + item.key(), "unknown key");
        }
    }

    const json &required(const json &j, const std::string &pointer, const std::string &key) const
    {
        auto it = j.find(key);
        if (it == j.end())
            fail(pointer + "/" + key, "missing required key");
        return *it;
    }

    double number(const json &j, const std::string &pointer) const
    {
        if (!j.is_number())
            fail(pointer, "expected a number");
        const double v = j.get<double>();
        if (!std::isfinite(v))
            fail(pointer, "expected a finite number");
        return v;
    }

    double number(const json &parent, const std::string &pointer, const std::string &key) const
    {
        return number(required(parent, pointer, key), pointer + "/" + key);
    }

    std::optional<double> optional_number(const json &parent, const std::string &pointer, const std::string &key) const
    {
        auto it = parent.find(key);
        if (it == parent.end())
            return std::nullopt;
        return number(*it, pointer + "/" + key);
    }

    std::size_t count(const json &parent, const std::string &pointer, const std::string &key) const
    {
        const json &j = required(parent, pointer, key);
        if (!j.is_number_integer() || j.get<long long>() < 1)
            fail(pointer + "/" + key, "expected a positive integer");
        return j.get<std::size_t>();
    }

    bool boolean(const json &parent, const std::string &pointer, const std::string &key, bool fallback) const
    {
        auto it = parent.find(key);
        if (it == parent.end())
            return fallback;
        if (!it->is_boolean())
            fail(pointer + "/" + key, "expected true or false");
        return it->get<bool>();
    }

    Vec3 vec3(const json &j, const std::string &pointer) const
    {
        if (!j.is_array() || j.size() != 3)
            fail(pointer, "expected [x, y, z]");
        return {number(j[0], pointer + "/0"), number(j[1], pointer + "/1"), number(j[2], pointer + "/2")};
    }

    std::vector<Vec3> points(const json &j, const std::string &pointer) const
    {
        if (!j.is_array())
            fail(pointer, "expected an array of [x, y, z]");
        std::vector<Vec3> out;
        for (std::size_t i = 0; i < j.size(); ++i)
            out.push_back(vec3(j[i], pointer + "/" + std::to_string(i)));
        return out;
    }

    /// Runs `check`, re-throwing ValidationErrors with this file and pointer.
    template <typename Check>
    void located(const std::string &pointer, Check &&check) const
    {
        try
        {
            check();
        }
        catch (const ValidationError &e)
        {
            throw ValidationError(origin_ + ": at " + pointer + ": " + e.what(), e.code());
        }
    }

private:
    std::string origin_;
};

PanelSpec read_panel(const SchemaReader &r, const json &j)
{
    const std::string p = "/panel";
    r.expect_object(j, p, {"rows", "cols", "dx_m", "dy_m", "group_rows", "group_cols", "center", "normal"});
    PanelSpec panel;
    panel.rows = r.count(j, p, "rows");
    panel.cols = r.count(j, p, "cols");
    panel.dx = r.number(j, p, "dx_m");
    panel.dy = r.number(j, p, "dy_m");
    panel.group_rows = r.count(j, p, "group_rows");
    panel.group_cols = r.count(j, p, "group_cols");
    if (auto it = j.find("center"); it != j.end())
        panel.center = r.vec3(*it, p + "/center");
    if (auto it = j.find("normal"); it != j.end())
        panel.normal = r.vec3(*it, p + "/normal");
    r.located(p, [&] { validate_panel(panel); });
    return panel;
}

StateTable read_table(const SchemaReader &r, const json &j)
{
    const std::string p = "/state_table";
    if (!j.is_array() || j.empty())
        r.fail(p, "expected a non-empty array of states");

    std::vector<CoefficientPair> states;
    std::vector<DeclaredPower> declared;
    for (std::size_t i = 0; i < j.size(); ++i)
    {
        const std::string sp = p + "/" + std::to_string(i);
        const json &s = j[i];
        r.expect_object(s, sp, {"reflection", "refraction", "declared_power_r", "declared_power_t"});

        auto side = [&](const char *key, double &amp, double &phase) {
            const std::string cp = sp + "/" + key;
            const json &c = r.required(s, sp, key);
            r.expect_object(c, cp, {"amp", "phase_deg"});
            amp = r.number(c, cp, "amp");
            if (amp < 0.0 || amp > 1.0)
                r.fail(cp + "/amp", "amplitude " + std::to_string(amp) + " outside [0, 1]", "amplitude_range");
            phase = deg_to_rad(r.number(c, cp, "phase_deg"));
        };
        CoefficientPair pair;
        side("reflection", pair.reflection_amp, pair.reflection_phase);
        side("refraction", pair.refraction_amp, pair.refraction_phase);
        states.push_back(pair);
        declared.push_back({r.optional_number(s, sp, "declared_power_r"), r.optional_number(s, sp, "declared_power_t")});
    }

    std::size_t diodes = 1;
    while ((std::size_t{1} << diodes) < states.size())
        ++diodes;

    std::optional<StateTable> table;
    r.located(p, [&] { table.emplace(std::move(states), diodes, std::move(declared)); });

    const ValidationReport report = validate_table(*table);
    if (!report.ok())
    {
        std::string message;
        for (const auto &f : report.failures)
            message += (message.empty() ? "" : "; ") + f;
        const bool passivity = std::any_of(report.states.begin(), report.states.end(),
                                           [](const StateCheck &c) { return !c.passive; });
        r.fail(p, message, passivity ? "passivity" : "declared_power");
    }
    return std::move(*table);
}

} // namespace

LoadedScene parse_scene_text(std::string_view text, const std::string &origin)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ValidationError(origin + ": " + e.what() + " (byte " + std::to_string(e.byte) + ")", "json_syntax");
    }

    const SchemaReader r(origin);
    r.expect_object(doc, "",
                    {"frequency_hz", "panel", "state_table", "bs", "users", "power", "gains", "options"});

    Scene scene;
    scene.frequency_hz = r.number(doc, "", "frequency_hz");
    if (!(scene.frequency_hz > 0.0))
        r.fail("/frequency_hz", "frequency must be positive");

    scene.panel = read_panel(r, r.required(doc, "", "panel"));
    StateTable table = read_table(r, r.required(doc, "", "state_table"));

    const json &bs = r.required(doc, "", "bs");
    r.expect_object(bs, "/bs", {"antennas"});
    scene.bs_antennas = r.points(r.required(bs, "/bs", "antennas"), "/bs/antennas");
    if (scene.bs_antennas.empty())
        r.fail("/bs/antennas", "scene needs at least one BS antenna");

    auto users = doc.find("users");
    if (users == doc.end())
        r.fail("/users", "scene needs at least one user");
    scene.users = r.points(*users, "/users");
    if (scene.users.empty())
        r.fail("/users", "scene needs at least one user");

    const json &power = r.required(doc, "", "power");
    r.expect_object(power, "/power", {"tx_dbm", "bandwidth_hz", "noise_figure_db"});
    scene.tx_power_dbm = r.number(power, "/power", "tx_dbm");
    scene.noise.bandwidth_hz = r.number(power, "/power", "bandwidth_hz");
    scene.noise.noise_figure_db = r.number(power, "/power", "noise_figure_db");
    if (!(scene.noise.bandwidth_hz > 0.0))
        r.fail("/power/bandwidth_hz", "bandwidth must be positive");

    if (auto it = doc.find("gains"); it != doc.end())
    {
        r.expect_object(*it, "/gains", {"tx_db", "rx_db", "lna_db", "tx_ios_channel_db", "ios_rx_channel_db"});
        scene.gains.tx_antenna_db = r.optional_number(*it, "/gains", "tx_db").value_or(0.0);
        scene.gains.rx_antenna_db = r.optional_number(*it, "/gains", "rx_db").value_or(0.0);
        scene.gains.lna_db = r.optional_number(*it, "/gains", "lna_db").value_or(0.0);
        scene.gains.tx_ios_channel_db = r.optional_number(*it, "/gains", "tx_ios_channel_db");
        scene.gains.ios_rx_channel_db = r.optional_number(*it, "/gains", "ios_rx_channel_db");
    }

    if (auto it = doc.find("options"); it != doc.end())
    {
        r.expect_object(*it, "/options", {"direct_path", "plane_wave", "element_factor_q"});
        scene.options.direct_path = r.boolean(*it, "/options", "direct_path", false);
        scene.options.plane_wave_incidence = r.boolean(*it, "/options", "plane_wave", false);
        scene.options.element_factor_q = r.optional_number(*it, "/options", "element_factor_q").value_or(0.0);
        if (scene.options.element_factor_q < 0.0)
            r.fail("/options/element_factor_q", "element factor exponent must be non-negative");
    }

    r.located("/", [&] { validate_scene(scene); });
    return LoadedScene{std::move(scene), std::move(table)};
}

LoadedScene parse_scene(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot read scene file " + path.string(), "io");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scene_text(buffer.str(), path.string());
}

json scene_to_json(const Scene &scene, const StateTable &table)
{
    auto vec = [](const Vec3 &v) { return json::array({v.x, v.y, v.z}); };
    auto points = [&](const std::vector<Vec3> &pts) {
        json arr = json::array();
        for (const auto &p : pts)
            arr.push_back(vec(p));
        return arr;
    };

    json states = json::array();
    for (StateIndex i = 0; i < table.size(); ++i)
    {
        const auto &s = table.state(i);
        json entry = {
            {"reflection", {{"amp", s.reflection_amp}, {"phase_deg", exact_degrees(s.reflection_phase)}}},
            {"refraction", {{"amp", s.refraction_amp}, {"phase_deg", exact_degrees(s.refraction_phase)}}},
        };
        const auto &d = table.declared()[i];
        if (d.reflection)
            entry["declared_power_r"] = *d.reflection;
        if (d.refraction)
            entry["declared_power_t"] = *d.refraction;
        states.push_back(std::move(entry));
    }

    json gains = {
        {"tx_db", scene.gains.tx_antenna_db},
        {"rx_db", scene.gains.rx_antenna_db},
        {"lna_db", scene.gains.lna_db},
    };
    if (scene.gains.tx_ios_channel_db)
        gains["tx_ios_channel_db"] = *scene.gains.tx_ios_channel_db;
    if (scene.gains.ios_rx_channel_db)
        gains["ios_rx_channel_db"] = *scene.gains.ios_rx_channel_db;

    const PanelSpec &p = scene.panel;
    return json{
        {"frequency_hz", scene.frequency_hz},
        {"panel",
         {{"rows", p.rows},
          {"cols", p.cols},
          {"dx_m", p.dx},
          {"dy_m", p.dy},
          {"group_rows", p.group_rows},
          {"group_cols", p.group_cols},
          {"center", vec(p.center)},
          {"normal", vec(p.normal)}}},
        {"state_table", std::move(states)},
        {"bs", {{"antennas", points(scene.bs_antennas)}}},
        {"users", points(scene.users)},
        {"power",
         {{"tx_dbm", scene.tx_power_dbm},
          {"bandwidth_hz", scene.noise.bandwidth_hz},
          {"noise_figure_db", scene.noise.noise_figure_db}}},
        {"gains", std::move(gains)},
        {"options",
         {{"direct_path", scene.options.direct_path},
          {"plane_wave", scene.options.plane_wave_incidence},
          {"element_factor_q", scene.options.element_factor_q}}},
    };
}

} // namespace omnisim
