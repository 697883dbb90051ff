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

#include "cfmc/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace cfmc
{
    std::size_t ScenarioSpec::total_ues() const
    {
        return std::accumulate(clusters.begin(), clusters.end(), n_uniform,
                               [](std::size_t acc, const ClusterGroup &c)
                               { return acc + c.count * c.users_per_cluster; });
    }

    void ScenarioSpec::validate(const AreaSpec &area) const
    {
        if (!(area.side_m > 0.0))
            throw ConfigError("area_side_m", "must be positive");
        for (const auto &c : clusters)
        {
            if (!(c.hotspot_side_m > 0.0))
                throw ConfigError("hotspot_side_m", "must be positive");
            if (c.hotspot_side_m > area.side_m)
                throw ConfigError("hotspot_side_m", "hotspot larger than the deployment area");
        }
        if (total_ues() == 0)
            throw ConfigError("scenario", "scenario '" + name + "' contains no UEs");
    }

    std::vector<Point> place_aps(std::size_t num_aps, const AreaSpec &area, Rng &rng, ApLayout layout)
    {
        if (num_aps == 0)
            throw ConfigError("L", "at least one AP is required");
        if (!(area.side_m > 0.0))
            throw ConfigError("area_side_m", "must be positive");

        std::vector<Point> aps;
        aps.reserve(num_aps);
        if (layout == ApLayout::grid)
        {
            // Smallest square grid that holds num_aps, cell-centred, filled row-major.
            const auto per_row = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(num_aps))));
            const double pitch = area.side_m / static_cast<double>(per_row);
            for (std::size_t i = 0; i < num_aps; ++i)
                aps.push_back({(static_cast<double>(i % per_row) + 0.5) * pitch,
                               (static_cast<double>(i / per_row) + 0.5) * pitch});
            return aps;
        }
        for (std::size_t i = 0; i < num_aps; ++i)
        {
            const double x = rng.uniform(0.0, area.side_m);
            const double y = rng.uniform(0.0, area.side_m);
            aps.push_back({x, y});
        }
        return aps;
    }

    std::vector<Point> place_ues(const ScenarioSpec &scenario, const AreaSpec &area, Rng &rng)
    {
        scenario.validate(area);

        std::vector<Point> ues;
        ues.reserve(scenario.total_ues());
        for (std::size_t i = 0; i < scenario.n_uniform; ++i)
        {
            const double x = rng.uniform(0.0, area.side_m);
            const double y = rng.uniform(0.0, area.side_m);
            ues.push_back({x, y});
        }
        for (const auto &group : scenario.clusters)
        {
            const double half = 0.5 * group.hotspot_side_m;
            for (std::size_t c = 0; c < group.count; ++c)
            {
                // Hotspot fully contained in the area.
                const double cx = rng.uniform(half, area.side_m - half);
                const double cy = rng.uniform(half, area.side_m - half);
                for (std::size_t u = 0; u < group.users_per_cluster; ++u)
                {
                    const double x = rng.uniform(cx - half, cx + half);
                    const double y = rng.uniform(cy - half, cy + half);
                    ues.push_back({std::clamp(x, 0.0, std::nextafter(area.side_m, 0.0)),
                                   std::clamp(y, 0.0, std::nextafter(area.side_m, 0.0))});
                }
            }
        }
        return ues;
    }

    Point displacement(const Point &p, const Point &q, const AreaSpec &area)
    {
        double dx = q.x - p.x;
        double dy = q.y - p.y;
        if (area.wrap_around)
        {
            const double s = area.side_m;
            // Equivalent to the minimum over the nine shifted copies of q.
            dx -= s * std::round(dx / s);
            dy -= s * std::round(dy / s);
        }
        return {dx, dy};
    }

    double distance(const Point &p, const Point &q, const AreaSpec &area)
    {
        const Point d = displacement(p, q, area);
        return std::hypot(d.x, d.y);
    }

    namespace
    {
        const std::map<std::string, ScenarioSpec> &presets()
        {
            static const std::map<std::string, ScenarioSpec> table = []
            {
                std::map<std::string, ScenarioSpec> t;
                auto add = [&t](ScenarioSpec s)
                { t.emplace(s.name, std::move(s)); };
                add({"uniform-100", 100, {}});
                add({"clustered-10x10", 0, {{10, 10, 10.0}}});
                add({"clustered-1x100", 0, {{1, 100, 10.0}}});
                add({"het-1", 10, {{2, 10, 10.0}, {4, 20, 10.0}, {3, 30, 10.0}, {6, 50, 10.0}}});
                add({"het-2", 20, {{2, 10, 10.0}, {3, 20, 10.0}, {5, 30, 10.0}, {5, 50, 10.0}}});
                add({"het-3", 100, {{5, 10, 10.0}, {5, 20, 10.0}, {5, 30, 10.0}, {2, 50, 10.0}}});
                // Desk-scale analogues with K = 24.
                add({"desk-uniform-24", 24, {}});
                add({"desk-clustered-6x4", 0, {{6, 4, 10.0}}});
                add({"desk-clustered-1x24", 0, {{1, 24, 10.0}}});
                add({"desk-het", 4, {{2, 4, 10.0}, {2, 6, 10.0}}});
                return t;
            }();
            return table;
        }
    }

    ScenarioSpec scenario_preset(const std::string &name)
    {
        const auto &table = presets();
        const auto it = table.find(name);
        if (it == table.end())
            throw ConfigError("scenario", "unknown scenario preset '" + name + "'");
        return it->second;
    }

    std::vector<std::string> scenario_preset_names()
    {
        std::vector<std::string> names;
        for (const auto &[name, spec] : presets())
            names.push_back(name);
        return names;
    }
}
