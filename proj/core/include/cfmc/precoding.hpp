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
#include <optional>
#include <string>
#include <vector>

#include "cfmc/estimation.hpp"
#include "cfmc/rng.hpp"
#include "cfmc/subgrouping.hpp"
#include "cfmc/types.hpp"

namespace cfmc
{
    enum class PrecoderVariant
    {
        cb,  // conjugate beamforming
        ncb, // normalized by the instantaneous estimate norm
        ecb  // normalized by the squared instantaneous estimate norm
    };

    std::string to_string(PrecoderVariant v);
    std::optional<PrecoderVariant> parse_precoder(const std::string &name);

    struct PrecoderConfig
    {
        PrecoderVariant variant = PrecoderVariant::cb;
        double nu = 0.6;
        double pdl_mw = 200.0;
        std::size_t ecb_mc_samples = 1000;

        void validate() const;
    };

    // Estimates with a norm below this are treated as zero by NCB/ECB.
    inline constexpr double kZeroNormFloor = 1e-30;

    struct PowerAllocation
    {
        RMat rho; // L x G, mW
    };

    struct PrecoderSet
    {
        std::size_t num_aps = 0;
        std::size_t antennas = 0;
        CMat w;                 // (L*N) x G
        RMat denominator;       // L x G, sqrt(E{||v||^2}); 0 where unused
        std::size_t zero_norm_events = 0;

        auto local(std::size_t l, std::size_t g) const
        {
            return w.col(static_cast<Eigen::Index>(g)).segment(static_cast<Eigen::Index>(l * antennas),
                                                               static_cast<Eigen::Index>(antennas));
        }
    };

    // rho_lg = Pdl (tr Rg_l)^nu / sum over the AP's duties; rows of APs with
    // no duties stay zero.
    PowerAllocation apa_power(const CompositeStatistics &stats, const CooperationMap &coop, const PrecoderConfig &cfg);

    // CB: hhat. NCB: hhat/||hhat||. ECB: hhat/||hhat||^2. NCB/ECB return zero
    // below kZeroNormFloor and bump *zero_events when given.
    CVec direction(PrecoderVariant variant, const Eigen::Ref<const CVec> &hhat, std::size_t *zero_events = nullptr);

    // E{||hhat||^-2} for every served (l,g), from `samples` draws of
    // hhat ~ CN(0, estimate_cov). Unserved entries are 0.
    RMat ecb_offline_factor(const CompositeStatistics &stats, const CooperationMap &coop, std::size_t samples,
                            Rng &rng);

    // sqrt(E{||v_lg||^2}): CB uses the trace closed form, NCB is 1, ECB takes
    // sqrt of the offline factor. Returns 0 for a degenerate (zero) estimate law.
    double normalization_denominator(PrecoderVariant variant, const CompositeStatistics &stats,
                                     const RMat *ecb_inv_norm_mean, std::size_t l, std::size_t g);

    // Per-deployment precoder state: the per-(l,g) scale sqrt(rho)/denominator
    // is fixed, so each realization only needs the local directions.
    class DistributedPrecoder
    {
    public:
        DistributedPrecoder(const CompositeStatistics &stats, const CooperationMap &coop,
                            const PowerAllocation &power, const PrecoderConfig &cfg,
                            const RMat *ecb_inv_norm_mean = nullptr);

        PrecoderSet build(const EstimateSet &est) const;
        PrecoderVariant variant() const { return variant_; }
        const RMat &scale() const { return scale_; }

    private:
        PrecoderVariant variant_;
        std::size_t num_aps_;
        std::size_t num_groups_;
        std::size_t antennas_;
        RMat scale_;
        RMat denominator_;
    };

    PrecoderSet build_precoders(const EstimateSet &est, const CompositeStatistics &stats, const CooperationMap &coop,
                                const PowerAllocation &power, const PrecoderConfig &cfg,
                                const RMat *ecb_inv_norm_mean = nullptr);
}
