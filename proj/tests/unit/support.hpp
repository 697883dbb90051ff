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

#include <cfmc/channel.hpp>
#include <cfmc/subgrouping.hpp>
#include <cfmc/types.hpp>

namespace cfmc::test
{
    inline double rel_frobenius(const CMat &a, const CMat &b) { return (a - b).norm() / b.norm(); }

    // Running E{x x^H} over column vectors.
    class SecondMoment
    {
    public:
        explicit SecondMoment(std::size_t n) : sum_(CMat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))) {}
        void add(const CVec &x)
        {
            sum_.noalias() += x * x.adjoint();
            ++count_;
        }
        CMat mean() const { return sum_ / static_cast<double>(count_); }

    private:
        CMat sum_;
        std::size_t count_ = 0;
    };

    // Covariance set with every (l,k) pair given explicitly.
    inline CovarianceSet covariances(std::size_t L, std::size_t K, const std::vector<CMat> &R_lk)
    {
        const auto N = static_cast<std::size_t>(R_lk.front().rows());
        CovarianceSet cov(L, K, N);
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t k = 0; k < K; ++k)
                cov.set(l, k, R_lk[l * K + k]);
        return cov;
    }

    inline CMat scaled_identity(std::size_t n, double c)
    {
        return CMat::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) * cplx(c, 0.0);
    }

    // A well-conditioned Hermitian PD matrix with trace n*beta.
    inline CMat exponential_correlation(std::size_t n, double beta, double r)
    {
        CMat R(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < R.rows(); ++i)
            for (Eigen::Index j = 0; j < R.cols(); ++j)
                R(i, j) = beta * std::pow(cplx(r * 0.6, r * 0.8), static_cast<double>(j - i >= 0 ? j - i : 0)) *
                          (j >= i ? 1.0 : 0.0);
        for (Eigen::Index i = 0; i < R.rows(); ++i)
            for (Eigen::Index j = 0; j < i; ++j)
                R(i, j) = std::conj(R(j, i));
        return R;
    }
}
