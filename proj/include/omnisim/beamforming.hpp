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

#ifndef OMNISIM_BEAMFORMING_HPP
#define OMNISIM_BEAMFORMING_HPP

#include "omnisim/channel.hpp"
#include "omnisim/element_model.hpp"
#include "omnisim/geometry.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace omnisim
{

/// Largest accepted condition number of H * H^H.
inline constexpr double kMaxGramCondition = 1e12;

/// Unnormalized ZF pseudo-inverse W = H^H (H H^H)^-1, so that H W = I.
///
/// Computed from a thin QR of H^H (H^H = Q R, W = Q R^-H), which keeps the
/// error proportional to cond(H) rather than cond(H H^H).
/// Throws TooManyUsersError when K > Nt and RankError when H H^H is
/// singular or too ill-conditioned.
Eigen::MatrixXcd zf_pseudo_inverse(const ChannelMatrix &h);

/// Digital precoder with equal power per stream.
///
/// Column k of `precoder` is w_k / |w_k| for the pseudo-inverse column w_k;
/// stream k gets `power_allocation[k]` = P/K, so the transmitted power
/// sum_k p_k |precoder_k|^2 equals P. User k then sees an interference-free
/// gain 1/|w_k| and SINR_k = (P/K) / (sigma^2 |w_k|^2).
struct BeamformerResult
{
    Eigen::MatrixXcd precoder;
    std::vector<double> power_allocation;
    std::vector<double> column_norms; ///< |w_k| of the unnormalized pseudo-inverse
    std::vector<double> per_user_rate;
    double sum_rate = 0.0;
};

BeamformerResult zf_precoder(const ChannelMatrix &h, double total_power, double noise_power);

/// Sum rate of a channel, with rank deficiency reported as a flag.
struct RateEvaluation
{
    double sum_rate = 0.0;
    std::vector<double> per_user_rate;
    bool degenerate = false; ///< H H^H was rank deficient; rates are zero
};

/// zf_precoder's rates, except that RankError becomes a degenerate zero.
/// TooManyUsersError still propagates.
RateEvaluation evaluate_rates(const ChannelMatrix &h, double total_power, double noise_power);

/// cascaded_channel -> zf_precoder with the scene's transmit and noise power.
RateEvaluation sum_rate(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                        const Configuration &config);

struct TracePoint
{
    std::size_t step = 0;
    double objective = 0.0;
};

struct OptimizationOutcome
{
    Configuration config;
    std::vector<StateIndex> unit_states; ///< one state per element or group
    double objective = 0.0;
    std::vector<TracePoint> trace;  ///< per sweep (greedy), per trial (random)
    std::vector<double> unit_trace; ///< greedy only: objective after each unit visit
    std::size_t evaluations = 0;
};

struct GreedyOptions
{
    std::size_t max_sweeps = 10;
    double epsilon = 1e-9;
};

/// One-by-one discrete optimization. Starts from all units in state 0 and
/// visits units in row-major order, moving each to the state with the
/// highest objective given the rest. A unit keeps its state on ties; among
/// tied alternatives the lowest index wins. Stops when a sweep improves the
/// objective by a relative amount below epsilon or after max_sweeps.
OptimizationOutcome greedy_optimize(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                                    Granularity granularity, const GreedyOptions &options = {});

/// Largest accepted P^units for exhaustive search.
inline constexpr std::uint64_t kMaxExhaustiveConfigurations = std::uint64_t{1} << 20;

/// Global optimum by enumeration, lexicographically smallest on ties.
/// Throws SearchSpaceTooLargeError beyond kMaxExhaustiveConfigurations.
OptimizationOutcome exhaustive_optimize(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                                        Granularity granularity);

/// Best of `trials` uniformly drawn configurations (mt19937_64 seeded with `seed`).
OptimizationOutcome random_baseline(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                                    Granularity granularity, std::size_t trials, std::uint64_t seed);

/// Continuous-phase upper bound on the ZF sum rate.
///
/// With free phases every element of user k's channel can be co-phased, so
/// |h_k| <= |direct_k| + sum_m A_max(side_k) |g_m,k| where g_m,k is the
/// geometric BS->element->user vector. Since h_k w_k = 1 forces
/// |w_k| >= 1/|h_k|, each ZF SINR is at most (P/K) |h_k|^2 / sigma^2.
/// Not tight in general.
double relaxed_upper_bound(const Scene &scene, const ElementLayout &layout, const StateTable &table);

/// Greedy optimization of the sample-average sum rate over `num_samples`
/// Rician realizations drawn once from `seed` and reused for every
/// candidate. The ZF precoder is recomputed per realization. An infinite
/// K-factor degenerates to a single realization without fading.
OptimizationOutcome statistical_optimize(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                                         const RicianFading &fading, std::size_t num_samples, std::uint64_t seed,
                                         Granularity granularity, const GreedyOptions &options = {});

/// Mean sample-average sum rate of `config` under the same realizations
/// statistical_optimize would draw for (fading, num_samples, seed).
double mean_sum_rate(const Scene &scene, const ElementLayout &layout, const StateTable &table,
                     const RicianFading &fading, std::size_t num_samples, std::uint64_t seed,
                     const Configuration &config);

} // namespace omnisim

#endif
