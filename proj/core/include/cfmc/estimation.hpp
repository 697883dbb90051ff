// SPDX-License-Identifier: Apache-2.0
//
// cfmc: subgroup-centric multicast simulator for cell-free massive MIMO
// Copyright (C) 2026 The cfmc authors
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

#pragma once

#include <cstddef>
#include <vector>

#include "cfmc/channel.hpp"
#include "cfmc/rng.hpp"
#include "cfmc/subgrouping.hpp"
#include "cfmc/types.hpp"

namespace cfmc
{
    // Second-order statistics of the composite channels of one deployment.
    // Gamma is kept per (AP, pilot): its summands R_li depend on the AP.
    struct CompositeStatistics
    {
        std::size_t num_aps = 0;
        std::size_t num_groups = 0;
        std::size_t tau_p = 0;
        std::size_t antennas = 0;
        double pilot_gain = 0.0; // sqrt(tau_p * Pp)
        double sigma_u2 = 0.0;

        std::vector<CMat> Rg;                  // [l*G + g]
        std::vector<CMat> Gamma;               // [l*tau_p + p]
        std::vector<Eigen::LLT<CMat>> Gamma_chol;
        std::vector<CMat> estimate_cov;        // [l*G + g], K_g^2 Rg Gamma^-1 Rg
        RMat mean_sq_norm;                     // L x G, tr(estimate_cov)
        std::vector<std::size_t> group_size;   // K_g
        std::vector<std::size_t> pilot_of;

        const CMat &R_group(std::size_t l, std::size_t g) const { return Rg[l * num_groups + g]; }
        const CMat &gamma(std::size_t l, std::size_t p) const { return Gamma[l * tau_p + p]; }
        const CMat &est_cov(std::size_t l, std::size_t g) const { return estimate_cov[l * num_groups + g]; }
        const Eigen::LLT<CMat> &gamma_factor(std::size_t l, std::size_t g) const
        {
            return Gamma_chol[l * tau_p + pilot_of[g]];
        }
    };

    // Projected pilot observations y_l^g, stacked like ChannelRealization:
    // column g, rows [l*N, (l+1)*N).
    struct PilotObservation
    {
        std::size_t num_aps = 0;
        std::size_t antennas = 0;
        CMat y;

        auto local(std::size_t l, std::size_t g) const
        {
            return y.col(static_cast<Eigen::Index>(g)).segment(static_cast<Eigen::Index>(l * antennas),
                                                               static_cast<Eigen::Index>(antennas));
        }
    };

    struct EstimateSet
    {
        std::size_t num_aps = 0;
        std::size_t antennas = 0;
        CMat hhat;           // (L*N) x G
        CMat composite_true; // (L*N) x G, only filled when the true channel is supplied

        auto local(std::size_t l, std::size_t g) const
        {
            return hhat.col(static_cast<Eigen::Index>(g)).segment(static_cast<Eigen::Index>(l * antennas),
                                                                  static_cast<Eigen::Index>(antennas));
        }
    };

    // sigma_u2 = 0 is accepted only when no pilot is shared (exact-limit tests).
    CompositeStatistics composite_statistics(const CovarianceSet &cov, const SubgroupPlan &plan,
                                             double pilot_power_mw, double sigma_u2);

    // Noise is drawn once per (AP, pilot), so co-pilot subgroups see the same y.
    PilotObservation observe_pilots(const ChannelRealization &real, const SubgroupPlan &plan,
                                    const CompositeStatistics &stats, Rng &rng);

    // h_l^g = sqrt(tau_p Pp)/K_g * sum of member channels.
    CMat composite_channels(const ChannelRealization &real, const SubgroupPlan &plan,
                            const CompositeStatistics &stats);

    EstimateSet mmse_estimate(const PilotObservation &obs, const CompositeStatistics &stats,
                              const SubgroupPlan &plan, const ChannelRealization *truth = nullptr);
}
