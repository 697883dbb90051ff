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
#include <utility>
#include <vector>

#include "cfmc/channel.hpp"
#include "cfmc/precoding.hpp"
#include "cfmc/subgrouping.hpp"
#include "cfmc/types.hpp"

namespace cfmc
{
    // Running sums of the effective downlink gains a_kc = sum_l h_lk^H D_lc w_lc
    // over fading realizations. Sums (rather than means) keep merge exact.
    class SinrAccumulator
    {
    public:
        SinrAccumulator(const SubgroupPlan &plan, double sigma_d2);

        // Adds one realization. Non-serving (l,c) already carry w = 0.
        void accumulate(const ChannelRealization &real, const PrecoderSet &prec);

        // Combines statistics over a disjoint set of realizations.
        void merge(const SinrAccumulator &other);

        std::size_t num_samples() const { return n_; }
        std::size_t num_groups() const { return num_groups_; }
        double sigma_d2() const { return sigma_d2_; }
        const std::vector<std::size_t> &assignment() const { return assignment_; }

        cplx mean_gain(std::size_t k) const { return sum_gain_[static_cast<Eigen::Index>(k)] / static_cast<double>(n_); }
        double second_moment(std::size_t k, std::size_t c) const
        {
            return sum_sq_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) / static_cast<double>(n_);
        }

    private:
        std::vector<std::size_t> assignment_;
        std::size_t num_groups_;
        double sigma_d2_;
        std::size_t n_ = 0;
        CVec sum_gain_; // K, desired-subgroup gain
        RMat sum_sq_;   // K x G, |a_kc|^2
    };

    enum class AseMode
    {
        weighted, // sum_g K_g SE_g
        plain     // sum_g SE_g
    };

    struct SeResults
    {
        RVec gamma;
        RVec se_user;
        RVec se_group;
        double ase = 0.0;
        double prelog = 0.0;
    };

    // Hardening-bound SINR. The interference-plus-self-variance term is
    // clamped at zero, so the denominator never drops below sigma_d2.
    RVec finalize_sinr(const SinrAccumulator &acc);

    double prelog(std::size_t tau_p, std::size_t tau_c);
    RVec se_user(const RVec &gamma, std::size_t tau_p, std::size_t tau_c);
    RVec se_group(const RVec &se_user, const SubgroupPlan &plan);
    double aggregate_se(const RVec &se_group, const SubgroupPlan &plan, AseMode mode = AseMode::weighted);

    SeResults evaluate(const SinrAccumulator &acc, const SubgroupPlan &plan, std::size_t tau_c,
                       AseMode mode = AseMode::weighted);

    // Step CDF: sorted values with p_i = i/n.
    std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples);

    double median(std::vector<double> values);
}
