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

#include "cfmc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace cfmc
{
    void PropagationModel::validate() const
    {
        if (!(pathloss_exp > 0.0))
            throw ConfigError("pathloss_exp", "must be positive");
        if (!(shadow_std_db >= 0.0))
            throw ConfigError("shadow_std_db", "must be non-negative");
        if (!(asd_deg >= 0.0))
            throw ConfigError("asd_deg", "must be non-negative");
        if (!(min_distance_m > 0.0))
            throw ConfigError("min_distance_m", "must be positive");
        if (!(shadow_decorrelation_m >= 0.0))
            throw ConfigError("shadow_decorrelation_m", "must be non-negative");
    }

    CovarianceSet::CovarianceSet(std::size_t num_aps, std::size_t num_ues, std::size_t antennas)
        : num_aps_(num_aps), num_ues_(num_ues), antennas_(antennas),
          R_(num_aps * num_ues, CMat::Zero(static_cast<Eigen::Index>(antennas), static_cast<Eigen::Index>(antennas))),
          beta_(RMat::Zero(static_cast<Eigen::Index>(num_aps), static_cast<Eigen::Index>(num_ues)))
    {
    }

    void CovarianceSet::set(std::size_t l, std::size_t k, CMat R)
    {
        if (R.rows() != static_cast<Eigen::Index>(antennas_) || R.cols() != R.rows())
            throw InternalError("covariance has wrong dimension");
        beta_(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = R.trace().real() / static_cast<double>(antennas_);
        R_[l * num_ues_ + k] = std::move(R);
    }

    double pathloss_db(double d_m, const PropagationModel &model)
    {
        if (!(d_m > 0.0))
            throw std::domain_error("pathloss_db: distance must be positive");
        return model.pathloss_ref_db - 10.0 * model.pathloss_exp * std::log10(d_m);
    }

    double large_scale_gain(double d_m, const PropagationModel &model, Rng &rng)
    {
        const double loss = pathloss_db(d_m, model);
        return db_to_linear(loss + rng.normal(0.0, model.shadow_std_db));
    }

    RMat shadowing_correlation_sqrt(const NetworkGeometry &geom, double decorrelation_m)
    {
        const auto K = static_cast<Eigen::Index>(geom.num_ues());
        RMat C(K, K);
        for (Eigen::Index i = 0; i < K; ++i)
            for (Eigen::Index j = 0; j < K; ++j)
                C(i, j) = std::exp2(-distance(geom.ue_positions[static_cast<std::size_t>(i)],
                                              geom.ue_positions[static_cast<std::size_t>(j)], geom.area) /
                                    decorrelation_m);
        // Coincident UEs make C singular, so use a clamped eigen square root.
        Eigen::SelfAdjointEigenSolver<RMat> eig(C);
        const RVec root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
    }

    CMat spatial_covariance(double theta_rad, double beta, std::size_t antennas, const PropagationModel &model)
    {
        const auto n = static_cast<Eigen::Index>(antennas);
        if (model.correlation_mode == CorrelationMode::uncorrelated)
            return CMat::Identity(n, n) * beta;

        // Small-angle closed form of E{exp(j*pi*(m-n)*sin(theta + delta))} with
        // delta ~ N(0, asd^2) and half-wavelength spacing.
        const double sigma = model.asd_deg * std::numbers::pi / 180.0;
        const double s = std::sin(theta_rad);
        const double c = std::cos(theta_rad);
        CVec first_col(n);
        for (Eigen::Index d = 0; d < n; ++d)
        {
            const double phase = std::numbers::pi * static_cast<double>(d) * s;
            const double spread = std::numbers::pi * static_cast<double>(d) * c;
            first_col[d] = std::polar(std::exp(-0.5 * sigma * sigma * spread * spread), phase);
        }
        CMat R(n, n);
        for (Eigen::Index m = 0; m < n; ++m)
            for (Eigen::Index k = 0; k < n; ++k)
                R(m, k) = m >= k ? first_col[m - k] : std::conj(first_col[k - m]);
        R.diagonal().setConstant(cplx(1.0, 0.0));
        return R * beta;
    }

    double bearing(const Point &from, const Point &to, const AreaSpec &area)
    {
        const Point d = displacement(from, to, area);
        return std::atan2(d.y, d.x);
    }

    CovarianceSet build_covariances(const NetworkGeometry &geom, std::size_t antennas,
                                    const PropagationModel &model, Rng &rng)
    {
        if (antennas == 0)
            throw ConfigError("N", "at least one antenna per AP is required");
        model.validate();

        const std::size_t L = geom.num_aps();
        const std::size_t K = geom.num_ues();
        const bool correlated = model.shadow_decorrelation_m > 0.0 && model.shadow_std_db > 0.0;
        RMat shadow_sqrt;
        if (correlated)
            shadow_sqrt = shadowing_correlation_sqrt(geom, model.shadow_decorrelation_m);

        CovarianceSet cov(L, K, antennas);
        RVec z(static_cast<Eigen::Index>(K));
        RVec shadow(static_cast<Eigen::Index>(K));
        for (std::size_t l = 0; l < L; ++l)
        {
            const Point &ap = geom.ap_positions[l];
            if (correlated)
            {
                for (Eigen::Index k = 0; k < z.size(); ++k)
                    z[k] = rng.normal();
                shadow.noalias() = model.shadow_std_db * (shadow_sqrt * z);
            }
            for (std::size_t k = 0; k < K; ++k)
            {
                const Point &ue = geom.ue_positions[k];
                const double d = std::max(distance(ap, ue, geom.area), model.min_distance_m);
                const double beta = correlated
                                        ? db_to_linear(pathloss_db(d, model) + shadow[static_cast<Eigen::Index>(k)])
                                        : large_scale_gain(d, model, rng);
                cov.set(l, k, spatial_covariance(bearing(ap, ue, geom.area), beta, antennas, model));
            }
        }
        return cov;
    }

    CMat covariance_sqrt(const CMat &R)
    {
        const double scale = R.cwiseAbs().maxCoeff();
        if ((R - R.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300))
            throw InternalError("covariance_sqrt: matrix is not Hermitian");
        if (scale == 0.0)
            return CMat::Zero(R.rows(), R.cols());

        Eigen::SelfAdjointEigenSolver<CMat> eig(R);
        if (eig.info() != Eigen::Success)
            throw InternalError("covariance_sqrt: eigendecomposition failed");
        const double tol = 1e-10 * std::abs(R.trace().real());
        RVec root(eig.eigenvalues().size());
        for (Eigen::Index i = 0; i < root.size(); ++i)
        {
            const double lambda = eig.eigenvalues()[i];
            if (lambda < -tol)
                throw InternalError("covariance_sqrt: matrix is not positive semidefinite");
            root[i] = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
        }
        const CMat &U = eig.eigenvectors();
        return U * root.asDiagonal() * U.adjoint();
    }

    ChannelSampler::ChannelSampler(const CovarianceSet &cov)
        : num_aps_(cov.num_aps()), num_ues_(cov.num_ues()), antennas_(cov.antennas())
    {
        factors_.reserve(num_aps_ * num_ues_);
        for (std::size_t l = 0; l < num_aps_; ++l)
            for (std::size_t k = 0; k < num_ues_; ++k)
                factors_.push_back(covariance_sqrt(cov.R(l, k)));
    }

    ChannelRealization ChannelSampler::sample(Rng &rng) const
    {
        const auto n = static_cast<Eigen::Index>(antennas_);
        ChannelRealization real;
        real.num_aps = num_aps_;
        real.antennas = antennas_;
        real.h.resize(static_cast<Eigen::Index>(num_aps_ * antennas_), static_cast<Eigen::Index>(num_ues_));

        CVec z(n);
        for (std::size_t k = 0; k < num_ues_; ++k)
        {
            for (std::size_t l = 0; l < num_aps_; ++l)
            {
                rng.fill_complex_normal(z);
                real.h.col(static_cast<Eigen::Index>(k)).segment(static_cast<Eigen::Index>(l * antennas_), n).noalias() =
                    factors_[l * num_ues_ + k] * z;
            }
        }
        return real;
    }

    ChannelRealization sample_realization(const CovarianceSet &cov, Rng &rng)
    {
        return ChannelSampler(cov).sample(rng);
    }
}
