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

#ifndef OMNISIM_SCENE_IO_HPP
#define OMNISIM_SCENE_IO_HPP

#include "omnisim/channel.hpp"
#include "omnisim/element_model.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace omnisim
{

struct LoadedScene
{
    Scene scene;
    StateTable table;
};

/// Parses and fully validates a scene document.
///
/// Schema (units in key suffixes, phases in degrees):
///
///     frequency_hz
///     panel { rows, cols, dx_m, dy_m, group_rows, group_cols, center?, normal? }
///     state_table [ { reflection { amp, phase_deg }, refraction { amp, phase_deg },
///                     declared_power_r?, declared_power_t? } ]
///     bs { antennas [[x, y, z], ...] }
///     users [[x, y, z], ...]
///     power { tx_dbm, bandwidth_hz, noise_figure_db }
///     gains? { tx_db, rx_db, lna_db, tx_ios_channel_db?, ios_rx_channel_db? }
///     options? { direct_path, plane_wave, element_factor_q }
///
/// Unknown keys are rejected. Errors name the offending JSON pointer;
/// `origin` (usually the file name) prefixes every message.
LoadedScene parse_scene_text(std::string_view text, const std::string &origin = "<scene>");

LoadedScene parse_scene(const std::filesystem::path &path);

/// Inverse of parse_scene_text: parsing the result reproduces `scene` and
/// `table` exactly.
nlohmann::json scene_to_json(const Scene &scene, const StateTable &table);

} // namespace omnisim

#endif
