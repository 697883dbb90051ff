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
#include "cfmc/types.hpp"

namespace cfmc
{
    // Partition of the K UEs into G multicast subgroups plus their pilots.
    struct SubgroupPlan
    {
        std::size_t num_groups = 0;
        std::size_t tau_p = 0;
        std::vector<std::size_t> assignment;           // UE -> subgroup
        std::vector<std::size_t> pilot_of;             // subgroup -> pilot index
        std::vector<std::vector<std::size_t>> members; // subgroup -> UEs, ascending

        std::size_t num_ues() const { return assignment.size(); }
        std::size_t group_size(std::size_t g) const { return members[g].size(); }

        // Checks the partition/pilot invariants; throws InternalError.
        void check() const;
    };

    struct PilotAssignment
    {
        std::vector<std::size_t> pilot_of;
        std::size_t tau_p = 0;
    };

    // Which APs serve which subgroups.
    class CooperationMap
    {
    public:
        CooperationMap() = default;
        CooperationMap(std::size_t num_aps, std::size_t num_groups);

        std::size_t num_aps() const { return num_aps_; }
        std::size_t num_groups() const { return num_groups_; }

        bool serves(std::size_t l, std::size_t g) const { return serves_[l * num_groups_ + g] != 0; }
        void set_serves(std::size_t l, std::size_t g);

        // APs serving subgroup g, ascending.
        std::vector<std::size_t> served_by(std::size_t g) const;
        // Subgroups served by AP l, ascending.
        std::vector<std::size_t> duties(std::size_t l) const;

    private:
        std::size_t num_aps_ = 0;
        std::size_t num_groups_ = 0;
        std::vector<unsigned char> serves_;
    };

    // Per-UE clustering features: column k of beta in dB.
    std::vector<RVec> beta_vectors(const RMat &beta);
    inline std::vector<RVec> beta_vectors(const CovarianceSet &cov) { return beta_vectors(cov.beta()); }

    struct KMeansOptions
    {
        std::size_t max_iterations = 100;
        double tolerance = 1e-6;
    };

    struct KMeansResult
    {
        std::vector<std::size_t> assignment;
        std::vector<RVec> centroids;
        // Within-cluster sum of squares after each Lloyd iteration.
        std::vector<double> objective_history;
        std::size_t iterations = 0;
    };

    double within_cluster_ss(const std::vector<RVec> &features, const std::vector<std::size_t> &assignment,
                             std::size_t num_groups);

    // Lloyd's algorithm with k-means++ seeding. Subgroup labels follow the
    // seeding order, so they carry no spatial ordering into the pilot map.
    KMeansResult kmeans(const std::vector<RVec> &features, std::size_t num_groups, Rng &rng,
                        const KMeansOptions &options = {});

    std::vector<std::size_t> kmeans_partition(const std::vector<RVec> &features, std::size_t num_groups, Rng &rng);

    // Round-robin pilot reuse: tau_p = min(G, cap), pilot g mod tau_p.
    PilotAssignment assign_pilots(std::size_t num_groups, std::size_t tau_p_cap = 20);

    SubgroupPlan make_plan(const std::vector<std::size_t> &assignment, std::size_t num_groups,
                           std::size_t tau_p_cap = 20);

    // K-means on beta_vectors(cov) followed by pilot assignment.
    SubgroupPlan plan_subgroups(const CovarianceSet &cov, std::size_t num_groups, std::size_t tau_p_cap, Rng &rng);

    // Mean large-scale gain of subgroup g's members at AP l.
    double common_gain(const RMat &beta, const SubgroupPlan &plan, std::size_t l, std::size_t g);

    // Per AP and pilot, serve the co-pilot subgroup with the strongest common
    // gain; then give every still-unserved subgroup its strongest AP.
    CooperationMap build_dcc(const RMat &beta, const SubgroupPlan &plan);
    inline CooperationMap build_dcc(const CovarianceSet &cov, const SubgroupPlan &plan)
    {
        return build_dcc(cov.beta(), plan);
    }
}
