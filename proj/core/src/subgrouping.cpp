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

#include "cfmc/subgrouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace cfmc
{
    void SubgroupPlan::check() const
    {
        if (num_groups == 0 || members.size() != num_groups || pilot_of.size() != num_groups)
            throw InternalError("subgroup plan: inconsistent subgroup count");
        std::size_t total = 0;
        for (std::size_t g = 0; g < num_groups; ++g)
        {
            if (members[g].empty())
                throw InternalError("subgroup plan: empty subgroup " + std::to_string(g));
            if (pilot_of[g] >= tau_p)
                throw InternalError("subgroup plan: pilot index out of range");
            for (std::size_t k : members[g])
                if (k >= assignment.size() || assignment[k] != g)
                    throw InternalError("subgroup plan: members disagree with assignment");
            total += members[g].size();
        }
        if (total != assignment.size())
            throw InternalError("subgroup plan: partition is not exhaustive");
    }

    CooperationMap::CooperationMap(std::size_t num_aps, std::size_t num_groups)
        : num_aps_(num_aps), num_groups_(num_groups), serves_(num_aps * num_groups, 0)
    {
    }

    void CooperationMap::set_serves(std::size_t l, std::size_t g) { serves_[l * num_groups_ + g] = 1; }

    std::vector<std::size_t> CooperationMap::served_by(std::size_t g) const
    {
        std::vector<std::size_t> aps;
        for (std::size_t l = 0; l < num_aps_; ++l)
            if (serves(l, g))
                aps.push_back(l);
        return aps;
    }

    std::vector<std::size_t> CooperationMap::duties(std::size_t l) const
    {
        std::vector<std::size_t> groups;
        for (std::size_t g = 0; g < num_groups_; ++g)
            if (serves(l, g))
                groups.push_back(g);
        return groups;
    }

    std::vector<RVec> beta_vectors(const RMat &beta)
    {
        std::vector<RVec> features;
        features.reserve(static_cast<std::size_t>(beta.cols()));
        for (Eigen::Index k = 0; k < beta.cols(); ++k)
            features.emplace_back(beta.col(k).unaryExpr([](double b) { return linear_to_db(b); }));
        return features;
    }

    double within_cluster_ss(const std::vector<RVec> &features, const std::vector<std::size_t> &assignment,
                             std::size_t num_groups)
    {
        if (features.empty())
            return 0.0;
        const Eigen::Index dim = features.front().size();
        std::vector<RVec> sums(num_groups, RVec::Zero(dim));
        std::vector<std::size_t> counts(num_groups, 0);
        for (std::size_t i = 0; i < features.size(); ++i)
        {
            sums[assignment[i]] += features[i];
            ++counts[assignment[i]];
        }
        double wcss = 0.0;
        for (std::size_t i = 0; i < features.size(); ++i)
        {
            const std::size_t g = assignment[i];
            wcss += (features[i] - sums[g] / static_cast<double>(counts[g])).squaredNorm();
        }
        return wcss;
    }

    namespace
    {
        std::size_t nearest(const RVec &x, const std::vector<RVec> &centroids, double *dist2 = nullptr)
        {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < centroids.size(); ++c)
            {
                const double d = (x - centroids[c]).squaredNorm();
                if (d < best_d)
                {
                    best_d = d;
                    best = c;
                }
            }
            if (dist2)
                *dist2 = best_d;
            return best;
        }

        std::vector<RVec> kmeanspp_seed(const std::vector<RVec> &features, std::size_t num_groups, Rng &rng)
        {
            const std::size_t n = features.size();
            std::vector<RVec> centroids;
            std::vector<bool> chosen(n, false);
            std::size_t first = rng.index(n);
            centroids.push_back(features[first]);
            chosen[first] = true;

            std::vector<double> d2(n);
            for (std::size_t i = 0; i < n; ++i)
                d2[i] = (features[i] - centroids[0]).squaredNorm();

            while (centroids.size() < num_groups)
            {
                const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
                std::size_t pick = n;
                if (total > 0.0)
                {
                    const double u = rng.uniform(0.0, total);
                    double run = 0.0;
                    for (std::size_t i = 0; i < n; ++i)
                    {
                        run += d2[i];
                        if (d2[i] > 0.0 && u < run)
                        {
                            pick = i;
                            break;
                        }
                    }
                    if (pick == n) // u landed on the rounding tail
                        for (std::size_t i = n; i-- > 0;)
                            if (d2[i] > 0.0)
                            {
                                pick = i;
                                break;
                            }
                }
                else
                {
                    // All remaining points coincide with a centre.
                    for (std::size_t i = 0; i < n; ++i)
                        if (!chosen[i])
                        {
                            pick = i;
                            break;
                        }
                }
                chosen[pick] = true;
                centroids.push_back(features[pick]);
                for (std::size_t i = 0; i < n; ++i)
                    d2[i] = std::min(d2[i], (features[i] - centroids.back()).squaredNorm());
            }
            return centroids;
        }
    }

    KMeansResult kmeans(const std::vector<RVec> &features, std::size_t num_groups, Rng &rng,
                        const KMeansOptions &options)
    {
        const std::size_t n = features.size();
        if (num_groups < 1)
            throw ConfigError("G", "number of subgroups must be at least 1");
        if (num_groups > n)
            throw ConfigError("G", "number of subgroups (" + std::to_string(num_groups) +
                                       ") exceeds number of UEs (" + std::to_string(n) + ")");

        KMeansResult result;
        if (num_groups == 1 || num_groups == n)
        {
            result.assignment.assign(n, 0);
            if (num_groups == n)
            {
                // Singletons, labelled in the random order k-means++ would pick them.
                std::iota(result.assignment.begin(), result.assignment.end(), std::size_t{0});
                std::shuffle(result.assignment.begin(), result.assignment.end(), rng.engine());
            }
            result.centroids.resize(num_groups, RVec::Zero(features.front().size()));
            std::vector<std::size_t> counts(num_groups, 0);
            for (std::size_t i = 0; i < n; ++i)
            {
                result.centroids[result.assignment[i]] += features[i];
                ++counts[result.assignment[i]];
            }
            for (std::size_t g = 0; g < num_groups; ++g)
                result.centroids[g] /= static_cast<double>(counts[g]);
            result.objective_history.push_back(within_cluster_ss(features, result.assignment, num_groups));
            return result;
        }

        std::vector<RVec> centroids = kmeanspp_seed(features, num_groups, rng);
        std::vector<std::size_t> assignment(n, 0);
        std::vector<double> dist2(n, 0.0);
        std::vector<std::size_t> counts(num_groups, 0);

        for (std::size_t iter = 0; iter < options.max_iterations; ++iter)
        {
            std::fill(counts.begin(), counts.end(), std::size_t{0});
            for (std::size_t i = 0; i < n; ++i)
            {
                assignment[i] = nearest(features[i], centroids, &dist2[i]);
                ++counts[assignment[i]];
            }

            // Repair empty clusters with the point farthest from its centroid.
            for (std::size_t g = 0; g < num_groups; ++g)
            {
                if (counts[g] != 0)
                    continue;
                std::size_t far = n;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i)
                    if (counts[assignment[i]] > 1 && dist2[i] > far_d)
                    {
                        far_d = dist2[i];
                        far = i;
                    }
                --counts[assignment[far]];
                assignment[far] = g;
                counts[g] = 1;
                dist2[far] = 0.0;
                centroids[g] = features[far];
            }

            double movement = 0.0;
            std::vector<RVec> updated(num_groups, RVec::Zero(features.front().size()));
            for (std::size_t i = 0; i < n; ++i)
                updated[assignment[i]] += features[i];
            for (std::size_t g = 0; g < num_groups; ++g)
            {
                updated[g] /= static_cast<double>(counts[g]);
                movement = std::max(movement, (updated[g] - centroids[g]).norm());
            }
            centroids = std::move(updated);
            result.objective_history.push_back(within_cluster_ss(features, assignment, num_groups));
            result.iterations = iter + 1;
            if (movement < options.tolerance)
                break;
        }

        result.assignment = std::move(assignment);
        result.centroids = std::move(centroids);
        return result;
    }

    std::vector<std::size_t> kmeans_partition(const std::vector<RVec> &features, std::size_t num_groups, Rng &rng)
    {
        return kmeans(features, num_groups, rng).assignment;
    }

    PilotAssignment assign_pilots(std::size_t num_groups, std::size_t tau_p_cap)
    {
        if (num_groups < 1)
            throw ConfigError("G", "number of subgroups must be at least 1");
        if (tau_p_cap < 1)
            throw ConfigError("tau_p_cap", "must be at least 1");
        PilotAssignment out;
        out.tau_p = std::min(num_groups, tau_p_cap);
        out.pilot_of.resize(num_groups);
        for (std::size_t g = 0; g < num_groups; ++g)
            out.pilot_of[g] = g % out.tau_p;
        return out;
    }

    SubgroupPlan make_plan(const std::vector<std::size_t> &assignment, std::size_t num_groups, std::size_t tau_p_cap)
    {
        SubgroupPlan plan;
        plan.num_groups = num_groups;
        plan.assignment = assignment;
        plan.members.assign(num_groups, {});
        for (std::size_t k = 0; k < assignment.size(); ++k)
        {
            if (assignment[k] >= num_groups)
                throw InternalError("make_plan: subgroup index out of range");
            plan.members[assignment[k]].push_back(k);
        }
        auto pilots = assign_pilots(num_groups, tau_p_cap);
        plan.pilot_of = std::move(pilots.pilot_of);
        plan.tau_p = pilots.tau_p;
        plan.check();
        return plan;
    }

    SubgroupPlan plan_subgroups(const CovarianceSet &cov, std::size_t num_groups, std::size_t tau_p_cap, Rng &rng)
    {
        return make_plan(kmeans_partition(beta_vectors(cov), num_groups, rng), num_groups, tau_p_cap);
    }

    double common_gain(const RMat &beta, const SubgroupPlan &plan, std::size_t l, std::size_t g)
    {
        double sum = 0.0;
        for (std::size_t k : plan.members[g])
            sum += beta(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k));
        return sum / static_cast<double>(plan.members[g].size());
    }

    CooperationMap build_dcc(const RMat &beta, const SubgroupPlan &plan)
    {
        const auto L = static_cast<std::size_t>(beta.rows());
        const std::size_t G = plan.num_groups;
        if (static_cast<std::size_t>(beta.cols()) != plan.num_ues())
            throw InternalError("build_dcc: beta and plan disagree on K");

        RMat gain(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(G));
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t g = 0; g < G; ++g)
                gain(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(g)) = common_gain(beta, plan, l, g);

        CooperationMap coop(L, G);
        for (std::size_t l = 0; l < L; ++l)
        {
            for (std::size_t p = 0; p < plan.tau_p; ++p)
            {
                std::size_t best = G;
                double best_gain = -1.0;
                for (std::size_t g = 0; g < G; ++g)
                {
                    const double c = gain(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(g));
                    if (plan.pilot_of[g] == p && c > best_gain)
                    {
                        best_gain = c;
                        best = g;
                    }
                }
                if (best < G)
                    coop.set_serves(l, best);
            }
        }

        for (std::size_t g = 0; g < G; ++g)
        {
            bool served = false;
            for (std::size_t l = 0; l < L && !served; ++l)
                served = coop.serves(l, g);
            if (served)
                continue;
            Eigen::Index strongest = 0;
            gain.col(static_cast<Eigen::Index>(g)).maxCoeff(&strongest);
            coop.set_serves(static_cast<std::size_t>(strongest), g);
        }
        return coop;
    }
}
