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

#ifndef OMNISIM_CHANNEL_HPP
#define OMNISIM_CHANNEL_HPP

#include "omnisim/element_model.hpp"
#include "omnisim/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace omnisim
{

using Complex = std::complex<double>;

/// K users x Nt BS antennas, dimensionless amplitude gains.
using ChannelMatrix = Eigen::MatrixXcd;

inline constexpr double kSpeedOfLight = 299792458.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

struct NoiseSpec
{
    double bandwidth_hz = 24e6;
    double noise_figure_db = 0.0;

    bool operator==(const NoiseSpec &) const = default;
};

/// Scalar gains that enter link budgets and point SNRs but never the
/// channel matrix. The two channel entries, when present, are measured
/// values that replace the free-space prediction in link budgets.
struct ChainGains
{
    double tx_antenna_db = 0.0;
    double rx_antenna_db = 0.0;
    double lna_db = 0.0;
    std::optional<double> tx_ios_channel_db;
    std::optional<double> ios_rx_channel_db;

    double total_db() const { return tx_antenna_db + rx_antenna_db + lna_db; }

    bool operator==(const ChainGains &) const = default;
};

struct ModelOptions
{
    bool direct_path = false;
    /// Replace the spherical BS->element wave with a unit-amplitude plane wave.
    bool plane_wave_incidence = false;
    /// Exponent q of the cos^q(angle from normal) element factor; 0 disables it.
    double element_factor_q = 0.0;

    bool operator==(const ModelOptions &) const = default;
};

struct Scene
{
    double frequency_hz = 3.6e9;
    PanelSpec panel;
    std::vector<Vec3> bs_antennas;
    std::vector<Vec3> users;
    double tx_power_dbm = 0.0;
    NoiseSpec noise;
    ChainGains gains;
    ModelOptions options;

    double wavelength() const { return kSpeedOfLight / frequency_hz; }
    double tx_power_w() const { return dbm_to_watts(tx_power_dbm); }
    double noise_power_w() const;
    /// Antenna 0; every antenna lies on its side of the panel.
    const Vec3 &bs_reference() const { return bs_antennas.front(); }

    bool operator==(const Scene &) const = default;
};

/// Throws on non-positive frequency/bandwidth, missing terminals, a terminal
/// in the panel plane, or BS antennas straddling the panel.
void validate_scene(const Scene &scene);

/// Side of every user, in user order.
std::vector<Side> user_sides(const Scene &scene);

/// Free-space amplitude gain lambda/(4 pi d) with phase -2 pi d / lambda.
Complex friis_gain(double distance, double wavelength);

/// Thermal noise floor in dBm: -174 + 10 log10(B) + NF.
double noise_power_dbm(double bandwidth_hz, double noise_figure_db);

struct LinkBudgetItem
{
    std::string name;
    double gain_db = 0.0;
};

struct LinkBudgetChain
{
    double tx_power_dbm = 0.0;
    std::vector<LinkBudgetItem> items;
};

struct LinkBudget
{
    double tx_power_dbm = 0.0;
    std::vector<LinkBudgetItem> items;
    double received_dbm = 0.0;
};

/// Adds the item gains in ascending order, so the total does not depend on
/// the order the items were listed in.
LinkBudget link_budget(const LinkBudgetChain &chain);

/// Tx antenna, Tx->IOS channel, IOS gain, IOS->Rx channel, Rx antenna, LNA.
/// Channel gains come from the scene's measured values when present and
/// otherwise from the free-space prediction between antenna 0, the panel
/// center and user `user`.
LinkBudgetChain scene_link_chain(const Scene &scene, double ios_gain_db, std::size_t user = 0);

/// Small-scale multipliers applied on top of each free-space link.
/// Indexing: bs_element[m * Nt + n], element_user[m * K + k], direct[k * Nt + n].
struct LinkFading
{
    std::vector<Complex> bs_element;
    std::vector<Complex> element_user;
    std::vector<Complex> direct;
};

/// Rician overlay with linear K-factor (may be +infinity for no fading).
struct RicianFading
{
    double k_factor = std::numeric_limits<double>::infinity();
};

LinkFading draw_link_fading(const RicianFading &model, std::size_t elements, std::size_t antennas,
                            std::size_t users, std::mt19937_64 &rng);

/// BS antenna `n` -> element gain for every element, including the incidence
/// element factor. Spherical or plane-wave depending on the scene options.
std::vector<Complex> incident_field(const Scene &scene, const ElementLayout &layout, std::size_t antenna);

/// Element -> point gain, including the departure element factor.
Complex element_to_point(const Scene &scene, const Vec3 &element, const Vec3 &point);

/// Precomputed per-element, per-state contributions to the cascaded channel.
///
/// Every channel evaluation in the library goes through `channel()`, which
/// sums element terms in element order and then adds the direct path. That
/// fixed order makes results bit-identical across optimizers and threads.
class CascadeModel
{
public:
    CascadeModel(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                 const LinkFading *fading = nullptr);

    std::size_t users() const { return users_; }
    std::size_t antennas() const { return antennas_; }
    std::size_t elements() const { return elements_; }
    std::size_t states() const { return states_; }
    std::span<const Side> sides() const { return sides_; }

    ChannelMatrix channel(std::span<const StateIndex> element_states) const;

    /// Geometry-only product g1 * g2 for element m, user k, antenna n.
    Complex base_term(std::size_t m, std::size_t k, std::size_t n) const
    {
        return base_[(m * users_ + k) * antennas_ + n];
    }

    /// Contribution of element m in `state` to entry (k, n).
    Complex term(std::size_t m, StateIndex state, std::size_t k, std::size_t n) const
    {
        return terms_[((m * states_ + state) * users_ + k) * antennas_ + n];
    }

    Complex direct(std::size_t k, std::size_t n) const { return direct_[k * antennas_ + n]; }

private:
    std::size_t users_ = 0;
    std::size_t antennas_ = 0;
    std::size_t elements_ = 0;
    std::size_t states_ = 0;
    std::vector<Side> sides_;
    std::vector<Complex> base_;
    std::vector<Complex> terms_;
    std::vector<Complex> direct_;
};

ChannelMatrix cascaded_channel(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                               const Configuration &config);

} // namespace omnisim

#endif
