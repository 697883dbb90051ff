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

#include "cfmc/deployment.hpp"
#include "cfmc/rng.hpp"
#include "cfmc/types.hpp"

namespace cfmc
{
    enum class CorrelationMode
    {
        local_scattering,
        uncorrelated
    };

    struct PropagationModel
    {
        double pathloss_ref_db = -30.5;
        double pathloss_exp = 3.67;
        double shadow_std_db = 4.0;
        double noise_ul_dbm = -94.0;
        double noise_dl_dbm = -94.0;
        double asd_deg = 15.0;
        CorrelationMode correlation_mode = CorrelationMode::local_scattering;
        double min_distance_m = 1.0;
        // Shadowing seen by one AP is correlated across UEs as
        // 2^(-d_uu'/decorrelation). 0 makes it i.i.d. over (l,k).
        double shadow_decorrelation_m = 9.0;

        double noise_ul_mw() const { return dbm_to_mw(noise_ul_dbm); }
        double noise_dl_mw() const { return dbm_to_mw(noise_dl_dbm); }
        void validate() const;
    };

    // Spatial covariances of every AP-UE pair, stored AP-major: index l*K + k.
    class CovarianceSet
    {
    public:
        CovarianceSet() = default;
        CovarianceSet(std::size_t num_aps, std::size_t num_ues, std::size_t antennas);

        std::size_t num_aps() const { return num_aps_; }
        std::size_t num_ues() const { return num_ues_; }
        std::size_t antennas() const { return antennas_; }

        const CMat &R(std::size_t l, std::size_t k) const { return R_[l * num_ues_ + k]; }
        double beta(std::size_t l, std::size_t k) const { return beta_(l, k); }
        const RMat &beta() const { return beta_; }

        // Stores R and sets beta(l,k) = tr(R)/N.
        void set(std::size_t l, std::size_t k, CMat R);

    private:
        std::size_t num_aps_ = 0;
        std::size_t num_ues_ = 0;
        std::size_t antennas_ = 0;
        std::vector<CMat> R_;
        RMat beta_;
    };

    // One small-scale fading draw. Column k stacks h_1k..h_Lk, so column k is
    // the global channel of UE k and rows [l*N, (l+1)*N) belong to AP l.
    struct ChannelRealization
    {
        std::size_t num_aps = 0;
        std::size_t antennas = 0;
        CMat h;

        auto local(std::size_t l, std::size_t k) const
        {
            return h.col(static_cast<Eigen::Index>(k)).segment(static_cast<Eigen::Index>(l * antennas),
                                                               static_cast<Eigen::Index>(antennas));
        }
    };

    // Deterministic part of the large-scale gain, in dB.
    double pathloss_db(double d_m, const PropagationModel &model);

    // Linear gain for a link of length d_m, including one i.i.d. shadowing draw.
    double large_scale_gain(double d_m, const PropagationModel &model, Rng &rng);

    // Square-root factor of the UE-UE shadowing correlation 2^(-d/decorrelation).
    RMat shadowing_correlation_sqrt(const NetworkGeometry &geom, double decorrelation_m);

    // Gaussian local-scattering correlation of a half-wavelength ULA scaled by
    // beta, or beta*I in uncorrelated mode. Diagonal is exactly beta.
    CMat spatial_covariance(double theta_rad, double beta, std::size_t antennas, const PropagationModel &model);

    // Bearing of `to` as seen from `from`, using the wrap-aware displacement.
    double bearing(const Point &from, const Point &to, const AreaSpec &area);

    CovarianceSet build_covariances(const NetworkGeometry &geom, std::size_t antennas,
                                    const PropagationModel &model, Rng &rng);

    // Hermitian square root F with F F^H = R. Negative eigenvalues within
    // 1e-10 tr(R) are clamped to zero; larger ones mean R is not PSD.
    CMat covariance_sqrt(const CMat &R);

    // Precomputes a factor per (l,k) so repeated draws only cost a mat-vec.
    class ChannelSampler
    {
    public:
        explicit ChannelSampler(const CovarianceSet &cov);
        ChannelRealization sample(Rng &rng) const;

    private:
        std::size_t num_aps_;
        std::size_t num_ues_;
        std::size_t antennas_;
        std::vector<CMat> factors_;
    };

    ChannelRealization sample_realization(const CovarianceSet &cov, Rng &rng);
}
