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

#include "cfmc/precoding.hpp"

#include <algorithm>
#include <cmath>

namespace cfmc
{
    std::string to_string(PrecoderVariant v)
    {
        switch (v)
        {
        case PrecoderVariant::cb:
            return "cb";
        case PrecoderVariant::ncb:
            return "ncb";
        case PrecoderVariant::ecb:
            return "ecb";
        }
        return "?";
    }

    std::optional<PrecoderVariant> parse_precoder(const std::string &name)
    {
        if (name == "cb" || name == "CB")
            return PrecoderVariant::cb;
        if (name == "ncb" || name == "NCB")
            return PrecoderVariant::ncb;
        if (name == "ecb" || name == "ECB")
            return PrecoderVariant::ecb;
        return std::nullopt;
    }

    void PrecoderConfig::validate() const
    {
        if (!(pdl_mw > 0.0))
            throw ConfigError("dl_power", "must be positive");
        if (!std::isfinite(nu))
            throw ConfigError("nu", "must be finite");
        if (ecb_mc_samples < 100)
            throw ConfigError("ecb_mc_samples", "must be at least 100");
    }

    PowerAllocation apa_power(const CompositeStatistics &stats, const CooperationMap &coop, const PrecoderConfig &cfg)
    {
        cfg.validate();
        const auto L = static_cast<Eigen::Index>(stats.num_aps);
        const auto G = static_cast<Eigen::Index>(stats.num_groups);
        PowerAllocation out{RMat::Zero(L, G)};
        for (Eigen::Index l = 0; l < L; ++l)
        {
            const auto duties = coop.duties(static_cast<std::size_t>(l));
            if (duties.empty())
                continue;
            std::vector<double> weight(duties.size());
            double total = 0.0;
            for (std::size_t i = 0; i < duties.size(); ++i)
            {
                const double tr = stats.R_group(static_cast<std::size_t>(l), duties[i]).trace().real();
                weight[i] = cfg.nu == 0.0 ? 1.0 : std::pow(tr, cfg.nu);
                total += weight[i];
            }
            if (!(total > 0.0)) // all traces zero: fall back to an equal split
            {
                std::fill(weight.begin(), weight.end(), 1.0);
                total = static_cast<double>(weight.size());
            }
            for (std::size_t i = 0; i < duties.size(); ++i)
                out.rho(l, static_cast<Eigen::Index>(duties[i])) =
                    weight[i] == total ? cfg.pdl_mw : cfg.pdl_mw * weight[i] / total;
        }
        return out;
    }

    CVec direction(PrecoderVariant variant, const Eigen::Ref<const CVec> &hhat, std::size_t *zero_events)
    {
        if (variant == PrecoderVariant::cb)
            return hhat;
        const double norm = hhat.norm();
        if (!(norm >= kZeroNormFloor))
        {
            if (zero_events)
                ++*zero_events;
            return CVec::Zero(hhat.size());
        }
        return variant == PrecoderVariant::ncb ? CVec(hhat / norm) : CVec(hhat / (norm * norm));
    }

    RMat ecb_offline_factor(const CompositeStatistics &stats, const CooperationMap &coop, std::size_t samples,
                            Rng &rng)
    {
        if (stats.antennas < 2)
            throw ConfigError("N", "ECB needs at least 2 antennas per AP: E{||hhat||^-2} diverges for N = 1");
        if (samples < 1)
            throw ConfigError("ecb_mc_samples", "must be positive");

        RMat factor = RMat::Zero(static_cast<Eigen::Index>(stats.num_aps), static_cast<Eigen::Index>(stats.num_groups));
        for (std::size_t l = 0; l < stats.num_aps; ++l)
        {
            for (std::size_t g = 0; g < stats.num_groups; ++g)
            {
                if (!coop.serves(l, g))
                    continue;
                // ||hhat||^2 = sum_i lambda_i |z_i|^2 with z ~ CN(0, I), so only
                // the spectrum of the estimate covariance matters.
                Eigen::SelfAdjointEigenSolver<CMat> eig(stats.est_cov(l, g), Eigen::EigenvaluesOnly);
                const RVec lambda = eig.eigenvalues().cwiseMax(0.0);
                if (lambda.maxCoeff() <= 0.0)
                    continue;
                double acc = 0.0;
                for (std::size_t s = 0; s < samples; ++s)
                {
                    double sq = 0.0;
                    for (Eigen::Index i = 0; i < lambda.size(); ++i)
                        sq += lambda[i] * std::norm(rng.complex_normal());
                    acc += 1.0 / sq;
                }
                factor(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(g)) = acc / static_cast<double>(samples);
            }
        }
        return factor;
    }

    double normalization_denominator(PrecoderVariant variant, const CompositeStatistics &stats,
                                     const RMat *ecb_inv_norm_mean, std::size_t l, std::size_t g)
    {
        const auto li = static_cast<Eigen::Index>(l);
        const auto gi = static_cast<Eigen::Index>(g);
        switch (variant)
        {
        case PrecoderVariant::cb:
        {
            const double m = stats.mean_sq_norm(li, gi);
            return m > 0.0 ? std::sqrt(m) : 0.0;
        }
        case PrecoderVariant::ncb:
            return stats.mean_sq_norm(li, gi) > 0.0 ? 1.0 : 0.0;
        case PrecoderVariant::ecb:
        {
            if (!ecb_inv_norm_mean)
                throw InternalError("normalization_denominator: ECB requires the offline factor");
            const double f = (*ecb_inv_norm_mean)(li, gi);
            return (f > 0.0 && std::isfinite(f)) ? std::sqrt(f) : 0.0;
        }
        }
        return 0.0;
    }

    DistributedPrecoder::DistributedPrecoder(const CompositeStatistics &stats, const CooperationMap &coop,
                                             const PowerAllocation &power, const PrecoderConfig &cfg,
                                             const RMat *ecb_inv_norm_mean)
        : variant_(cfg.variant), num_aps_(stats.num_aps), num_groups_(stats.num_groups), antennas_(stats.antennas)
    {
        const auto L = static_cast<Eigen::Index>(num_aps_);
        const auto G = static_cast<Eigen::Index>(num_groups_);
        if (power.rho.rows() != L || power.rho.cols() != G)
            throw InternalError("DistributedPrecoder: power allocation has wrong shape");
        if (variant_ == PrecoderVariant::ecb && !ecb_inv_norm_mean)
            throw InternalError("DistributedPrecoder: ECB requires the offline factor");

        scale_ = RMat::Zero(L, G);
        denominator_ = RMat::Zero(L, G);
        for (std::size_t l = 0; l < num_aps_; ++l)
        {
            for (std::size_t g = 0; g < num_groups_; ++g)
            {
                if (!coop.serves(l, g))
                    continue;
                const double den = normalization_denominator(variant_, stats, ecb_inv_norm_mean, l, g);
                const auto li = static_cast<Eigen::Index>(l);
                const auto gi = static_cast<Eigen::Index>(g);
                denominator_(li, gi) = den;
                if (den > 0.0)
                    scale_(li, gi) = std::sqrt(power.rho(li, gi)) / den;
            }
        }
    }

    PrecoderSet DistributedPrecoder::build(const EstimateSet &est) const
    {
        const auto n = static_cast<Eigen::Index>(antennas_);
        PrecoderSet out;
        out.num_aps = num_aps_;
        out.antennas = antennas_;
        out.denominator = denominator_;
        out.w = CMat::Zero(est.hhat.rows(), est.hhat.cols());
        for (std::size_t l = 0; l < num_aps_; ++l)
        {
            for (std::size_t g = 0; g < num_groups_; ++g)
            {
                const double s = scale_(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(g));
                if (s == 0.0)
                    continue;
                out.w.col(static_cast<Eigen::Index>(g)).segment(static_cast<Eigen::Index>(l) * n, n) =
                    s * direction(variant_, est.local(l, g), &out.zero_norm_events);
            }
        }
        return out;
    }

    PrecoderSet build_precoders(const EstimateSet &est, const CompositeStatistics &stats, const CooperationMap &coop,
                                const PowerAllocation &power, const PrecoderConfig &cfg,
                                const RMat *ecb_inv_norm_mean)
    {
        return DistributedPrecoder(stats, coop, power, cfg, ecb_inv_norm_mean).build(est);
    }
}
