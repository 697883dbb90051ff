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

#include "cfmc/estimation.hpp"

#include <cmath>

namespace cfmc
{
    CompositeStatistics composite_statistics(const CovarianceSet &cov, const SubgroupPlan &plan,
                                             double pilot_power_mw, double sigma_u2)
    {
        if (!(pilot_power_mw > 0.0))
            throw ConfigError("pilot_power", "must be positive");
        if (sigma_u2 < 0.0)
            throw ConfigError("noise_ul_dbm", "noise power must be non-negative");
        if (plan.num_ues() != cov.num_ues())
            throw InternalError("composite_statistics: plan and covariances disagree on K");
        if (sigma_u2 == 0.0 && plan.tau_p < plan.num_groups)
            throw ConfigError("noise_ul_dbm", "noiseless mode requires pilot-orthogonal subgroups");

        const std::size_t L = cov.num_aps();
        const std::size_t G = plan.num_groups;
        const std::size_t P = plan.tau_p;
        const auto N = static_cast<Eigen::Index>(cov.antennas());
        const double tau_pp = static_cast<double>(P) * pilot_power_mw;

        CompositeStatistics s;
        s.num_aps = L;
        s.num_groups = G;
        s.tau_p = P;
        s.antennas = cov.antennas();
        s.pilot_gain = std::sqrt(tau_pp);
        s.sigma_u2 = sigma_u2;
        s.pilot_of = plan.pilot_of;
        s.group_size.resize(G);
        for (std::size_t g = 0; g < G; ++g)
            s.group_size[g] = plan.group_size(g);

        s.Rg.assign(L * G, CMat::Zero(N, N));
        s.Gamma.assign(L * P, CMat::Zero(N, N));
        s.estimate_cov.assign(L * G, CMat::Zero(N, N));
        s.mean_sq_norm = RMat::Zero(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(G));
        s.Gamma_chol.resize(L * P);

        for (std::size_t l = 0; l < L; ++l)
        {
            for (std::size_t g = 0; g < G; ++g)
            {
                CMat sum = CMat::Zero(N, N);
                for (std::size_t k : plan.members[g])
                    sum += cov.R(l, k);
                s.Gamma[l * P + plan.pilot_of[g]] += tau_pp * sum;
                const double kg = static_cast<double>(plan.group_size(g));
                s.Rg[l * G + g] = (tau_pp / (kg * kg)) * sum;
            }
            for (std::size_t p = 0; p < P; ++p)
            {
                CMat &gamma = s.Gamma[l * P + p];
                gamma.diagonal().array() += sigma_u2;
                s.Gamma_chol[l * P + p].compute(gamma);
                if (s.Gamma_chol[l * P + p].info() != Eigen::Success)
                    throw InternalError("composite_statistics: Gamma is not positive definite");
            }
            for (std::size_t g = 0; g < G; ++g)
            {
                const CMat &R = s.Rg[l * G + g];
                const double kg = static_cast<double>(plan.group_size(g));
                CMat C = (kg * kg) * R * s.Gamma_chol[l * P + plan.pilot_of[g]].solve(R);
                C = 0.5 * (C + C.adjoint()).eval();
                s.mean_sq_norm(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(g)) =
                    std::max(C.trace().real(), 0.0);
                s.estimate_cov[l * G + g] = std::move(C);
            }
        }
        return s;
    }

    PilotObservation observe_pilots(const ChannelRealization &real, const SubgroupPlan &plan,
                                    const CompositeStatistics &stats, Rng &rng)
    {
        const auto rows = real.h.rows();
        const auto K = static_cast<Eigen::Index>(plan.num_ues());
        const auto P = static_cast<Eigen::Index>(stats.tau_p);
        if (real.h.cols() != K || rows != static_cast<Eigen::Index>(stats.num_aps * stats.antennas))
            throw InternalError("observe_pilots: realization does not match the plan");

        // Every UE's channel lands on its subgroup's pilot.
        CMat per_pilot = CMat::Zero(rows, P);
        for (Eigen::Index k = 0; k < K; ++k)
            per_pilot.col(static_cast<Eigen::Index>(plan.pilot_of[plan.assignment[static_cast<std::size_t>(k)]])) +=
                real.h.col(k);
        per_pilot *= stats.pilot_gain;

        if (stats.sigma_u2 > 0.0)
        {
            const double sigma = std::sqrt(stats.sigma_u2);
            const auto n = static_cast<Eigen::Index>(stats.antennas);
            for (std::size_t l = 0; l < stats.num_aps; ++l)
                for (Eigen::Index p = 0; p < P; ++p)
                    for (Eigen::Index i = 0; i < n; ++i)
                        per_pilot(static_cast<Eigen::Index>(l) * n + i, p) += sigma * rng.complex_normal();
        }

        PilotObservation obs;
        obs.num_aps = stats.num_aps;
        obs.antennas = stats.antennas;
        obs.y.resize(rows, static_cast<Eigen::Index>(plan.num_groups));
        for (std::size_t g = 0; g < plan.num_groups; ++g)
            obs.y.col(static_cast<Eigen::Index>(g)) = per_pilot.col(static_cast<Eigen::Index>(plan.pilot_of[g]));
        return obs;
    }

    CMat composite_channels(const ChannelRealization &real, const SubgroupPlan &plan,
                            const CompositeStatistics &stats)
    {
        CMat out = CMat::Zero(real.h.rows(), static_cast<Eigen::Index>(plan.num_groups));
        for (std::size_t g = 0; g < plan.num_groups; ++g)
        {
            for (std::size_t k : plan.members[g])
                out.col(static_cast<Eigen::Index>(g)) += real.h.col(static_cast<Eigen::Index>(k));
            out.col(static_cast<Eigen::Index>(g)) *= stats.pilot_gain / static_cast<double>(plan.group_size(g));
        }
        return out;
    }

    EstimateSet mmse_estimate(const PilotObservation &obs, const CompositeStatistics &stats,
                              const SubgroupPlan &plan, const ChannelRealization *truth)
    {
        const auto n = static_cast<Eigen::Index>(stats.antennas);
        if (obs.y.cols() != static_cast<Eigen::Index>(plan.num_groups) ||
            obs.y.rows() != static_cast<Eigen::Index>(stats.num_aps) * n)
            throw InternalError("mmse_estimate: observation does not match the statistics");

        EstimateSet est;
        est.num_aps = stats.num_aps;
        est.antennas = stats.antennas;
        est.hhat.resize(obs.y.rows(), obs.y.cols());
        for (std::size_t l = 0; l < stats.num_aps; ++l)
        {
            for (std::size_t g = 0; g < plan.num_groups; ++g)
            {
                const double kg = static_cast<double>(stats.group_size[g]);
                const auto y = obs.local(l, g);
                est.hhat.col(static_cast<Eigen::Index>(g)).segment(static_cast<Eigen::Index>(l) * n, n).noalias() =
                    kg * (stats.R_group(l, g) * stats.gamma_factor(l, g).solve(y));
            }
        }
        if (truth)
            est.composite_true = composite_channels(*truth, plan, stats);
        return est;
    }
}
