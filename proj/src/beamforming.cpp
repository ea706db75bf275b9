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

#include "omnisim/beamforming.hpp"

#include "omnisim/error.hpp"
#include "omnisim/parallel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace omnisim
{

namespace
{

/// Elements or groups: the things an optimizer assigns states to.
struct UnitMap
{
    std::size_t count = 0;
    std::vector<std::vector<std::size_t>> members;
};

UnitMap make_units(const ElementLayout &layout, Granularity granularity)
{
    UnitMap units;
    if (granularity == Granularity::PerElement)
    {
        units.count = layout.size();
        units.members.resize(units.count);
        for (std::size_t m = 0; m < layout.size(); ++m)
            units.members[m].push_back(m);
    }
    else
    {
        units.count = layout.group_count;
        units.members.resize(units.count);
        for (std::size_t m = 0; m < layout.size(); ++m)
            units.members[layout.group_of[m]].push_back(m);
    }
    return units;
}

void assign(const UnitMap &units, std::size_t unit, StateIndex state, std::vector<StateIndex> &element_states)
{
    for (std::size_t m : units.members[unit])
        element_states[m] = state;
}

std::vector<StateIndex> expand(const UnitMap &units, std::span<const StateIndex> unit_states, std::size_t elements)
{
    std::vector<StateIndex> element_states(elements, 0);
    for (std::size_t u = 0; u < units.count; ++u)
        assign(units, u, unit_states[u], element_states);
    return element_states;
}

/// Sample-average ZF sum rate over one or more channel realizations.
class RateObjective
{
public:
    RateObjective(std::vector<CascadeModel> models, double total_power, double noise_power)
        : models_(std::move(models)), total_power_(total_power), noise_power_(noise_power)
    {
    }

    RateEvaluation evaluate(std::span<const StateIndex> element_states) const
    {
        if (models_.size() == 1)
            return evaluate_rates(models_.front().channel(element_states), total_power_, noise_power_);

        RateEvaluation mean;
        mean.per_user_rate.assign(models_.front().users(), 0.0);
        for (const auto &model : models_)
        {
            const auto r = evaluate_rates(model.channel(element_states), total_power_, noise_power_);
            mean.sum_rate += r.sum_rate;
            for (std::size_t k = 0; k < r.per_user_rate.size(); ++k)
                mean.per_user_rate[k] += r.per_user_rate[k];
            mean.degenerate = mean.degenerate || r.degenerate;
        }
        const double scale = 1.0 / static_cast<double>(models_.size());
        mean.sum_rate *= scale;
        for (auto &r : mean.per_user_rate)
            r *= scale;
        return mean;
    }

    double operator()(std::span<const StateIndex> element_states) const { return evaluate(element_states).sum_rate; }

    std::size_t elements() const { return models_.front().elements(); }
    std::size_t states() const { return models_.front().states(); }

private:
    std::vector<CascadeModel> models_;
    double total_power_;
    double noise_power_;
};

RateObjective deterministic_objective(const Scene &scene, const ElementLayout &layout, const StateTable &table)
{
    std::vector<CascadeModel> models;
    models.emplace_back(scene, layout, table);
    return RateObjective(std::move(models), scene.tx_power_w(), scene.noise_power_w());
}

RateObjective fading_objective(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                               const RicianFading &fading, std::size_t num_samples, std::uint64_t seed)
{
    if (num_samples == 0)
        throw ValidationError("statistical optimization needs at least one sample");
    if (!(fading.k_factor >= 0.0))
        throw ValidationError("Rician K-factor must be non-negative");
    if (std::isinf(fading.k_factor))
        return deterministic_objective(scene, layout, table);

    std::mt19937_64 rng(seed);
    std::vector<CascadeModel> models;
    models.reserve(num_samples);
    for (std::size_t i = 0; i < num_samples; ++i)
    {
        const auto realization =
            draw_link_fading(fading, layout.size(), scene.bs_antennas.size(), scene.users.size(), rng);
        models.emplace_back(scene, layout, table, &realization);
    }
    return RateObjective(std::move(models), scene.tx_power_w(), scene.noise_power_w());
}

OptimizationOutcome finish(const UnitMap &units, std::vector<StateIndex> unit_states, const ElementLayout &layout,
                           Granularity granularity, double objective)
{
    OptimizationOutcome out;
    out.config = Configuration{expand(units, unit_states, layout.size()), granularity};
    out.unit_states = std::move(unit_states);
    out.objective = objective;
    return out;
}

OptimizationOutcome coordinate_ascent(const RateObjective &objective, const ElementLayout &layout,
                                      Granularity granularity, const GreedyOptions &options)
{
    const UnitMap units = make_units(layout, granularity);
    const std::size_t states = objective.states();

    std::vector<StateIndex> unit_states(units.count, 0);
    std::vector<StateIndex> element_states(layout.size(), 0);

    double current = objective(element_states);
    std::size_t evaluations = 1;
    std::vector<TracePoint> trace{{0, current}};
    std::vector<double> unit_trace;

    for (std::size_t sweep = 1; sweep <= options.max_sweeps; ++sweep)
    {
        const double sweep_start = current;
        for (std::size_t u = 0; u < units.count; ++u)
        {
            const StateIndex keep = unit_states[u];
            StateIndex best_state = keep;
            double best = current;
            for (StateIndex s = 0; s < states; ++s)
            {
                if (s == keep)
                    continue;
                assign(units, u, s, element_states);
                const double value = objective(element_states);
                ++evaluations;
                if (value > best)
                {
                    best = value;
                    best_state = s;
                }
            }
            assign(units, u, best_state, element_states);
            unit_states[u] = best_state;
            current = best;
            unit_trace.push_back(current);
        }
        trace.push_back({sweep, current});

        const double scale = std::max(std::abs(sweep_start), std::numeric_limits<double>::min());
        if ((current - sweep_start) / scale < options.epsilon)
            break;
    }

    auto out = finish(units, std::move(unit_states), layout, granularity, current);
    out.trace = std::move(trace);
    out.unit_trace = std::move(unit_trace);
    out.evaluations = evaluations;
    return out;
}

} // namespace

Eigen::MatrixXcd zf_pseudo_inverse(const ChannelMatrix &h)
{
    const Eigen::Index users = h.rows();
    const Eigen::Index antennas = h.cols();
    if (users == 0 || antennas == 0)
        throw ValidationError("channel matrix is empty");
    if (users > antennas)
        throw TooManyUsersError("too many users for ZF: " + std::to_string(users) + " users, " +
                                std::to_string(antennas) + " antennas");
    if (!h.allFinite())
        throw NumericalError("channel matrix has non-finite entries");

    const Eigen::MatrixXcd ht = h.adjoint();
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ht);
    const Eigen::MatrixXcd r = qr.matrixQR().topRows(users).triangularView<Eigen::Upper>();

    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(users - 1);
    if (!(smax > 0.0) || !(smin > 0.0) || (smax / smin) * (smax / smin) >= kMaxGramCondition)
        throw RankError("H*H^H is singular or ill-conditioned (users not separable by ZF)");

    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(antennas, users);
    const Eigen::MatrixXcd r_inv_h =
        r.adjoint().triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(users, users));
    return q * r_inv_h;
}

BeamformerResult zf_precoder(const ChannelMatrix &h, double total_power, double noise_power)
{
    if (!(total_power >= 0.0) || !std::isfinite(total_power))
        throw ValidationError("total power must be non-negative");
    if (!(noise_power > 0.0) || !std::isfinite(noise_power))
        throw ValidationError("noise power must be positive");

    const Eigen::MatrixXcd w = zf_pseudo_inverse(h);
    const auto users = static_cast<std::size_t>(h.rows());
    const double per_stream = total_power / static_cast<double>(users);

    BeamformerResult result;
    result.precoder = w;
    result.power_allocation.assign(users, per_stream);
    for (std::size_t k = 0; k < users; ++k)
    {
        const auto col = static_cast<Eigen::Index>(k);
        const double column_norm = w.col(col).norm();
        result.precoder.col(col) /= column_norm;
        result.column_norms.push_back(column_norm);
        const double sinr = per_stream / (noise_power * column_norm * column_norm);
        const double rate = std::log2(1.0 + sinr);
        result.per_user_rate.push_back(rate);
        result.sum_rate += rate;
    }
    return result;
}

RateEvaluation evaluate_rates(const ChannelMatrix &h, double total_power, double noise_power)
{
    try
    {
        auto bf = zf_precoder(h, total_power, noise_power);
        return RateEvaluation{bf.sum_rate, std::move(bf.per_user_rate), false};
    }
    catch (const RankError &)
    {
        return RateEvaluation{0.0, std::vector<double>(static_cast<std::size_t>(h.rows()), 0.0), true};
    }
}

RateEvaluation sum_rate(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                        const Configuration &config)
{
    validate_configuration(config, layout, table);
    return deterministic_objective(scene, layout, table).evaluate(config.state_index);
}

OptimizationOutcome greedy_optimize(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                                    Granularity granularity, const GreedyOptions &options)
{
    return coordinate_ascent(deterministic_objective(scene, layout, table), layout, granularity, options);
}

OptimizationOutcome exhaustive_optimize(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                                        Granularity granularity)
{
    const UnitMap units = make_units(layout, granularity);
    const std::uint64_t states = table.size();

    std::uint64_t total = 1;
    for (std::size_t u = 0; u < units.count; ++u)
    {
        if (states > 1 && total > kMaxExhaustiveConfigurations / states)
            throw SearchSpaceTooLargeError("exhaustive search over " + std::to_string(units.count) + " units with " +
                                           std::to_string(states) + " states exceeds 2^20 configurations");
        total *= states;
    }
    if (total > kMaxExhaustiveConfigurations)
        throw SearchSpaceTooLargeError("exhaustive search space exceeds 2^20 configurations");

    const RateObjective objective = deterministic_objective(scene, layout, table);

    // Index i encodes unit states with unit 0 as the most significant digit,
    // so increasing i walks configurations in lexicographic order.
    auto decode = [&](std::uint64_t index) {
        std::vector<StateIndex> digits(units.count, 0);
        for (std::size_t u = units.count; u-- > 0;)
        {
            digits[u] = static_cast<StateIndex>(index % states);
            index /= states;
        }
        return digits;
    };

    struct ChunkBest
    {
        double value = -std::numeric_limits<double>::infinity();
        std::uint64_t index = 0;
    };
    const std::size_t chunks = thread_limit();
    std::vector<ChunkBest> best(std::max<std::size_t>(1, chunks));

    parallel_chunks(static_cast<std::size_t>(total), chunks, [&](std::size_t begin, std::size_t end, std::size_t c) {
        std::vector<StateIndex> digits = decode(begin);
        std::vector<StateIndex> element_states = expand(units, digits, layout.size());
        ChunkBest local;
        for (std::size_t i = begin; i < end; ++i)
        {
            const double value = objective(element_states);
            if (value > local.value)
                local = {value, i};
            // odometer step, last unit fastest
            for (std::size_t u = units.count; u-- > 0;)
            {
                if (++digits[u] < states)
                {
                    assign(units, u, digits[u], element_states);
                    break;
                }
                digits[u] = 0;
                assign(units, u, 0, element_states);
            }
        }
        best[c] = local;
    });

    ChunkBest overall;
    for (const auto &b : best)
        if (b.value > overall.value)
            overall = b;

    auto out = finish(units, decode(overall.index), layout, granularity, overall.value);
    out.trace = {{0, overall.value}};
    out.evaluations = static_cast<std::size_t>(total);
    return out;
}

OptimizationOutcome random_baseline(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                                    Granularity granularity, std::size_t trials, std::uint64_t seed)
{
    if (trials == 0)
        throw ValidationError("random baseline needs at least one trial");

    const UnitMap units = make_units(layout, granularity);
    const RateObjective objective = deterministic_objective(scene, layout, table);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<StateIndex> pick(0, table.size() - 1);

    std::vector<StateIndex> best_states;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<TracePoint> trace;
    for (std::size_t t = 0; t < trials; ++t)
    {
        std::vector<StateIndex> candidate(units.count);
        for (auto &s : candidate)
            s = pick(rng);
        const double value = objective(expand(units, candidate, layout.size()));
        if (value > best)
        {
            best = value;
            best_states = std::move(candidate);
        }
        trace.push_back({t + 1, best});
    }

    auto out = finish(units, std::move(best_states), layout, granularity, best);
    out.trace = std::move(trace);
    out.evaluations = trials;
    return out;
}

double relaxed_upper_bound(const Scene &scene, const ElementLayout &layout, const StateTable &table)
{
    const CascadeModel model(scene, layout, table);
    const std::size_t users = model.users();
    const double per_stream = scene.tx_power_w() / static_cast<double>(users);
    const double noise = scene.noise_power_w();

    double bound = 0.0;
    for (std::size_t k = 0; k < users; ++k)
    {
        const double amp = table.max_amp(model.sides()[k]);
        double gain = 0.0;
        for (std::size_t m = 0; m < model.elements(); ++m)
        {
            double sq = 0.0;
            for (std::size_t n = 0; n < model.antennas(); ++n)
                sq += std::norm(model.base_term(m, k, n));
            gain += amp * std::sqrt(sq);
        }
        double direct_sq = 0.0;
        for (std::size_t n = 0; n < model.antennas(); ++n)
            direct_sq += std::norm(model.direct(k, n));
        gain += std::sqrt(direct_sq);
        bound += std::log2(1.0 + per_stream * gain * gain / noise);
    }
    return bound;
}

OptimizationOutcome statistical_optimize(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                                         const RicianFading &fading, std::size_t num_samples, std::uint64_t seed,
                                         Granularity granularity, const GreedyOptions &options)
{
    return coordinate_ascent(fading_objective(scene, layout, table, fading, num_samples, seed), layout, granularity,
                             options);
}

double mean_sum_rate(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                     const RicianFading &fading, std::size_t num_samples, std::uint64_t seed,
                     const Configuration &config)
{
    validate_configuration(config, layout, table);
    return fading_objective(scene, layout, table, fading, num_samples, seed)(config.state_index);
}

} // namespace omnisim
