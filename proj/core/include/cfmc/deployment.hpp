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
#include <string>
#include <vector>

#include "cfmc/rng.hpp"
#include "cfmc/types.hpp"

namespace cfmc
{
    struct AreaSpec
    {
        double side_m = 1000.0;
        bool wrap_around = true;
    };

    // `count` hotspots, each holding `users_per_cluster` UEs inside a square of
    // side `hotspot_side_m`.
    struct ClusterGroup
    {
        std::size_t count = 0;
        std::size_t users_per_cluster = 0;
        double hotspot_side_m = 10.0;
        bool operator==(const ClusterGroup &) const = default;
    };

    struct ScenarioSpec
    {
        std::string name;
        std::size_t n_uniform = 0;
        std::vector<ClusterGroup> clusters;

        std::size_t total_ues() const;
        void validate(const AreaSpec &area) const;
    };

    enum class ApLayout
    {
        uniform,
        grid
    };

    struct NetworkGeometry
    {
        AreaSpec area;
        ScenarioSpec scenario;
        std::vector<Point> ap_positions;
        std::vector<Point> ue_positions;

        std::size_t num_aps() const { return ap_positions.size(); }
        std::size_t num_ues() const { return ue_positions.size(); }
    };

    std::vector<Point> place_aps(std::size_t num_aps, const AreaSpec &area, Rng &rng,
                                 ApLayout layout = ApLayout::uniform);

    // Uniform UEs first, then the cluster groups in declaration order.
    std::vector<Point> place_ues(const ScenarioSpec &scenario, const AreaSpec &area, Rng &rng);

    // Shortest displacement q - p; with wrap-around each axis is folded into
    // [-side/2, side/2].
    Point displacement(const Point &p, const Point &q, const AreaSpec &area);

    double distance(const Point &p, const Point &q, const AreaSpec &area);

    // Named presets. Throws ConfigError("scenario", ...) for unknown names.
    ScenarioSpec scenario_preset(const std::string &name);
    std::vector<std::string> scenario_preset_names();
}
