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

#include "omnisim/channel.hpp"

#include "omnisim/error.hpp"

#include <algorithm>
#include <numbers>

namespace omnisim
{

namespace
{

double element_factor(const ModelOptions &options, const Vec3 &unit_direction, const Vec3 &normal)
{
    if (options.element_factor_q == 0.0)
        return 1.0;
    return std::pow(std::abs(dot(unit_direction, normal)), options.element_factor_q);
}

} // namespace

double Scene::noise_power_w() const
{
    return dbm_to_watts(noise_power_dbm(noise.bandwidth_hz, noise.noise_figure_db));
}

void validate_scene(const Scene &scene)
{
    if (!(scene.frequency_hz > 0.0) || !std::isfinite(scene.frequency_hz))
        throw ValidationError("frequency must be positive");
    if (!(scene.noise.bandwidth_hz > 0.0) || !std::isfinite(scene.noise.bandwidth_hz))
        throw ValidationError("bandwidth must be positive");
    if (!std::isfinite(scene.tx_power_dbm) || !std::isfinite(scene.noise.noise_figure_db))
        throw ValidationError("transmit power and noise figure must be finite");
    if (!(scene.options.element_factor_q >= 0.0) || !std::isfinite(scene.options.element_factor_q))
        throw ValidationError("element factor exponent must be non-negative");
    validate_panel(scene.panel);
    if (scene.bs_antennas.empty())
        throw ValidationError("scene needs at least one BS antenna");
    if (scene.users.empty())
        throw ValidationError("scene needs at least one user");

    for (const auto &a : scene.bs_antennas)
    {
        if (!a.is_finite())
            throw ValidationError("BS antenna position must be finite");
        if (std::abs(signed_distance(scene.panel, a)) <= kPlaneTolerance)
            throw InvalidSceneError("a BS antenna lies in the panel plane");
        if (std::signbit(signed_distance(scene.panel, a)) !=
            std::signbit(signed_distance(scene.panel, scene.bs_reference())))
            throw InvalidSceneError("BS antennas lie on both sides of the panel");
    }
    for (std::size_t k = 0; k < scene.users.size(); ++k)
    {
        if (!scene.users[k].is_finite())
            throw ValidationError("user position must be finite");
        if (std::abs(signed_distance(scene.panel, scene.users[k])) <= kPlaneTolerance)
            throw SideUndefinedError("user " + std::to_string(k) + " lies in the panel plane");
    }
}

std::vector<Side> user_sides(const Scene &scene)
{
    std::vector<Side> sides;
    sides.reserve(scene.users.size());
    for (const auto &u : scene.users)
        sides.push_back(side_of(scene.panel, scene.bs_reference(), u));
    return sides;
}

Complex friis_gain(double distance, double wavelength)
{
    if (!(distance > 0.0))
        throw ValidationError("propagation distance must be positive");
    const double amplitude = wavelength / (4.0 * std::numbers::pi * distance);
    // reduce d/lambda before scaling so the phase is exactly lambda-periodic
    const double cycles = std::fmod(distance / wavelength, 1.0);
    return std::polar(amplitude, -2.0 * std::numbers::pi * cycles);
}

double noise_power_dbm(double bandwidth_hz, double noise_figure_db)
{
    if (!(bandwidth_hz > 0.0))
        throw ValidationError("bandwidth must be positive");
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

LinkBudget link_budget(const LinkBudgetChain &chain)
{
    std::vector<double> gains;
    gains.reserve(chain.items.size());
    for (const auto &item : chain.items)
        gains.push_back(item.gain_db);
    std::sort(gains.begin(), gains.end());

    double sum = 0.0;
    for (double g : gains)
        sum += g;
    return LinkBudget{chain.tx_power_dbm, chain.items, chain.tx_power_dbm + sum};
}

LinkBudgetChain scene_link_chain(const Scene &scene, double ios_gain_db, std::size_t user)
{
    if (user >= scene.users.size())
        throw ValidationError("link budget user index out of range");
    const double lambda = scene.wavelength();
    const double tx_ios = scene.gains.tx_ios_channel_db.value_or(
        20.0 * std::log10(std::abs(friis_gain(distance(scene.bs_reference(), scene.panel.center), lambda))));
    const double ios_rx = scene.gains.ios_rx_channel_db.value_or(
        20.0 * std::log10(std::abs(friis_gain(distance(scene.panel.center, scene.users[user]), lambda))));

    LinkBudgetChain chain;
    chain.tx_power_dbm = scene.tx_power_dbm;
    chain.items = {
        {"tx_antenna_db", scene.gains.tx_antenna_db},
        {"tx_ios_channel_db", tx_ios},
        {"ios_gain_db", ios_gain_db},
        {"ios_rx_channel_db", ios_rx},
        {"rx_antenna_db", scene.gains.rx_antenna_db},
        {"lna_db", scene.gains.lna_db},
    };
    return chain;
}

LinkFading draw_link_fading(const RicianFading &model, std::size_t elements, std::size_t antennas,
                            std::size_t users, std::mt19937_64 &rng)
{
    if (!(model.k_factor >= 0.0))
        throw ValidationError("Rician K-factor must be non-negative");

    double los = 1.0;
    double scatter = 0.0;
    if (std::isfinite(model.k_factor))
    {
        los = std::sqrt(model.k_factor / (model.k_factor + 1.0));
        scatter = std::sqrt(1.0 / (model.k_factor + 1.0));
    }

    // CN(0,1): independent N(0, 1/2) real and imaginary parts
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    auto draw = [&](std::vector<Complex> &out, std::size_t count) {
        out.resize(count);
        for (auto &c : out)
        {
            const double re = gauss(rng);
            const double im = gauss(rng);
            c = los + scatter * Complex(re, im);
        }
    };

    LinkFading fading;
    draw(fading.bs_element, elements * antennas);
    draw(fading.element_user, elements * users);
    draw(fading.direct, users * antennas);
    return fading;
}

std::vector<Complex> incident_field(const Scene &scene, const ElementLayout &layout, std::size_t antenna)
{
    const double lambda = scene.wavelength();
    const Vec3 &source = scene.bs_antennas.at(antenna);
    const Vec3 &normal = scene.panel.normal;

    std::vector<Complex> field;
    field.reserve(layout.size());
    if (scene.options.plane_wave_incidence)
    {
        const Vec3 dir = normalized(scene.panel.center - source);
        const double factor = element_factor(scene.options, dir, normal);
        for (const auto &p : layout.positions)
        {
            const double cycles = std::fmod(dot(dir, p - scene.panel.center) / lambda, 1.0);
            field.push_back(std::polar(factor, -2.0 * std::numbers::pi * cycles));
        }
    }
    else
    {
        for (const auto &p : layout.positions)
        {
            const Vec3 offset = p - source;
            const double d = norm(offset);
            field.push_back(friis_gain(d, lambda) * element_factor(scene.options, offset * (1.0 / d), normal));
        }
    }
    return field;
}

Complex element_to_point(const Scene &scene, const Vec3 &element, const Vec3 &point)
{
    const Vec3 offset = point - element;
    const double d = norm(offset);
    return friis_gain(d, scene.wavelength()) * element_factor(scene.options, offset * (1.0 / d), scene.panel.normal);
}

CascadeModel::CascadeModel(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                           const LinkFading *fading)
    : users_(scene.users.size()), antennas_(scene.bs_antennas.size()), elements_(layout.size()),
      states_(table.size())
{
    validate_scene(scene);
    sides_ = user_sides(scene);

    if (fading)
    {
        if (fading->bs_element.size() != elements_ * antennas_ || fading->element_user.size() != elements_ * users_ ||
            fading->direct.size() != users_ * antennas_)
            throw ValidationError("fading realization does not match the scene dimensions");
    }

    std::vector<std::vector<Complex>> incident;
    incident.reserve(antennas_);
    for (std::size_t n = 0; n < antennas_; ++n)
        incident.push_back(incident_field(scene, layout, n));

    base_.resize(elements_ * users_ * antennas_);
    for (std::size_t m = 0; m < elements_; ++m)
    {
        for (std::size_t k = 0; k < users_; ++k)
        {
            Complex departure = element_to_point(scene, layout.positions[m], scene.users[k]);
            if (fading)
                departure *= fading->element_user[m * users_ + k];
            for (std::size_t n = 0; n < antennas_; ++n)
            {
                Complex arrival = incident[n][m];
                if (fading)
                    arrival *= fading->bs_element[m * antennas_ + n];
                base_[(m * users_ + k) * antennas_ + n] = arrival * departure;
            }
        }
    }

    std::vector<Complex> gamma(states_ * 2);
    for (StateIndex s = 0; s < states_; ++s)
    {
        gamma[2 * s] = response(table, s, Side::Reflection);
        gamma[2 * s + 1] = response(table, s, Side::Refraction);
    }

    terms_.resize(elements_ * states_ * users_ * antennas_);
    for (std::size_t m = 0; m < elements_; ++m)
        for (StateIndex s = 0; s < states_; ++s)
            for (std::size_t k = 0; k < users_; ++k)
            {
                const Complex g = gamma[2 * s + (sides_[k] == Side::Reflection ? 0 : 1)];
                for (std::size_t n = 0; n < antennas_; ++n)
                    terms_[((m * states_ + s) * users_ + k) * antennas_ + n] =
                        g * base_[(m * users_ + k) * antennas_ + n];
            }

    direct_.assign(users_ * antennas_, Complex{});
    if (scene.options.direct_path)
    {
        const double lambda = scene.wavelength();
        for (std::size_t k = 0; k < users_; ++k)
        {
            if (sides_[k] != Side::Reflection)
                continue;
            for (std::size_t n = 0; n < antennas_; ++n)
            {
                Complex g = friis_gain(distance(scene.bs_antennas[n], scene.users[k]), lambda);
                if (fading)
                    g *= fading->direct[k * antennas_ + n];
                direct_[k * antennas_ + n] = g;
            }
        }
    }
}

ChannelMatrix CascadeModel::channel(std::span<const StateIndex> element_states) const
{
    if (element_states.size() != elements_)
        throw ValidationError("configuration has " + std::to_string(element_states.size()) + " entries for " +
                              std::to_string(elements_) + " elements");

    const std::size_t block = users_ * antennas_;
    std::vector<Complex> acc(block, Complex{});
    for (std::size_t m = 0; m < elements_; ++m)
    {
        const StateIndex s = element_states[m];
        if (s >= states_)
            throw StateIndexError("element " + std::to_string(m) + " uses state " + std::to_string(s));
        const Complex *t = &terms_[(m * states_ + s) * block];
        for (std::size_t i = 0; i < block; ++i)
            acc[i] += t[i];
    }

    ChannelMatrix h(users_, antennas_);
    for (std::size_t k = 0; k < users_; ++k)
        for (std::size_t n = 0; n < antennas_; ++n)
            h(k, n) = acc[k * antennas_ + n] + direct_[k * antennas_ + n];
    return h;
}

ChannelMatrix cascaded_channel(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                               const Configuration &config)
{
    validate_configuration(config, layout, table);
    return CascadeModel(scene, layout, table).channel(config.state_index);
}

} // namespace omnisim
