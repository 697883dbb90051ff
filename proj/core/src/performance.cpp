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

#include "cfmc/performance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cfmc
{
    SinrAccumulator::SinrAccumulator(const SubgroupPlan &plan, double sigma_d2)
        : assignment_(plan.assignment), num_groups_(plan.num_groups), sigma_d2_(sigma_d2),
          sum_gain_(CVec::Zero(static_cast<Eigen::Index>(plan.num_ues()))),
          sum_sq_(RMat::Zero(static_cast<Eigen::Index>(plan.num_ues()), static_cast<Eigen::Index>(plan.num_groups)))
    {
    }

    void SinrAccumulator::accumulate(const ChannelRealization &real, const PrecoderSet &prec)
    {
        const auto K = static_cast<Eigen::Index>(assignment_.size());
        const auto G = static_cast<Eigen::Index>(num_groups_);
        if (real.h.cols() != K || prec.w.cols() != G || real.h.rows() != prec.w.rows())
            throw InternalError("SinrAccumulator::accumulate: dimension mismatch");

        const CMat gains = real.h.adjoint() * prec.w; // K x G
        for (Eigen::Index k = 0; k < K; ++k)
            sum_gain_[k] += gains(k, static_cast<Eigen::Index>(assignment_[static_cast<std::size_t>(k)]));
        sum_sq_ += gains.cwiseAbs2();
        ++n_;
    }

    void SinrAccumulator::merge(const SinrAccumulator &other)
    {
        if (other.assignment_ != assignment_ || other.num_groups_ != num_groups_)
            throw InternalError("SinrAccumulator::merge: accumulators belong to different plans");
        sum_gain_ += other.sum_gain_;
        sum_sq_ += other.sum_sq_;
        n_ += other.n_;
    }

    RVec finalize_sinr(const SinrAccumulator &acc)
    {
        if (acc.num_samples() < 2)
            throw InternalError("finalize_sinr: at least 2 realizations are required, got " +
                                std::to_string(acc.num_samples()));
        const auto &assignment = acc.assignment();
        RVec gamma(static_cast<Eigen::Index>(assignment.size()));
        const std::size_t groups = acc.num_groups();

        for (std::size_t k = 0; k < assignment.size(); ++k)
        {
            const double desired = std::norm(acc.mean_gain(k));
            double total = 0.0;
            for (std::size_t c = 0; c < groups; ++c)
                total += acc.second_moment(k, c);
            const double interference = std::max(total - desired, 0.0);
            gamma[static_cast<Eigen::Index>(k)] = desired / (interference + acc.sigma_d2());
        }
        return gamma;
    }

    double prelog(std::size_t tau_p, std::size_t tau_c)
    {
        if (tau_c == 0 || tau_p >= tau_c)
            throw ConfigError("tau_c", "pilot length " + std::to_string(tau_p) +
                                           " must be shorter than the coherence block " + std::to_string(tau_c));
        return 1.0 - static_cast<double>(tau_p) / static_cast<double>(tau_c);
    }

    RVec se_user(const RVec &gamma, std::size_t tau_p, std::size_t tau_c)
    {
        const double factor = prelog(tau_p, tau_c);
        return gamma.unaryExpr([factor](double g) { return factor * std::log2(1.0 + std::max(g, 0.0)); });
    }

    RVec se_group(const RVec &se_user, const SubgroupPlan &plan)
    {
        RVec out(static_cast<Eigen::Index>(plan.num_groups));
        for (std::size_t g = 0; g < plan.num_groups; ++g)
        {
            if (plan.members[g].empty())
                throw InternalError("se_group: empty subgroup " + std::to_string(g));
            double m = se_user[static_cast<Eigen::Index>(plan.members[g].front())];
            for (std::size_t k : plan.members[g])
                m = std::min(m, se_user[static_cast<Eigen::Index>(k)]);
            out[static_cast<Eigen::Index>(g)] = m;
        }
        return out;
    }

    double aggregate_se(const RVec &se_group, const SubgroupPlan &plan, AseMode mode)
    {
        double ase = 0.0;
        for (std::size_t g = 0; g < plan.num_groups; ++g)
        {
            const double weight = mode == AseMode::weighted ? static_cast<double>(plan.group_size(g)) : 1.0;
            ase += weight * se_group[static_cast<Eigen::Index>(g)];
        }
        return ase;
    }

    SeResults evaluate(const SinrAccumulator &acc, const SubgroupPlan &plan, std::size_t tau_c, AseMode mode)
    {
        SeResults r;
        r.prelog = prelog(plan.tau_p, tau_c);
        r.gamma = finalize_sinr(acc);
        r.se_user = se_user(r.gamma, plan.tau_p, tau_c);
        r.se_group = se_group(r.se_user, plan);
        r.ase = aggregate_se(r.se_group, plan, mode);
        return r;
    }

    std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples)
    {
        if (samples.empty())
            throw std::invalid_argument("empirical_cdf: no samples");
        std::sort(samples.begin(), samples.end());
        const double n = static_cast<double>(samples.size());
        std::vector<std::pair<double, double>> cdf;
        cdf.reserve(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
            cdf.emplace_back(samples[i], static_cast<double>(i + 1) / n);
        return cdf;
    }

    double median(std::vector<double> values)
    {
        if (values.empty())
            throw std::invalid_argument("median: no values");
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    }
}
