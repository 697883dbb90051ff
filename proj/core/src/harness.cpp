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

#include "cfmc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cfmc/estimation.hpp"
#include "cfmc/subgrouping.hpp"

#ifndef CFMC_VERSION
#define CFMC_VERSION "0.0.0"
#endif

namespace cfmc
{
    const char *version() { return CFMC_VERSION; }

    std::uint64_t DeploymentSeeds::kmeans(std::size_t groups) const
    {
        return derive_seed(deployment, {"kmeans", groups});
    }
    std::uint64_t DeploymentSeeds::fading(std::size_t antennas, std::size_t realization) const
    {
        return derive_seed(deployment, {"fading", antennas, realization});
    }
    std::uint64_t DeploymentSeeds::noise(std::size_t antennas, std::size_t groups, std::size_t realization) const
    {
        return derive_seed(deployment, {"noise", antennas, groups, realization});
    }
    std::uint64_t DeploymentSeeds::ecb(std::size_t antennas, std::size_t groups) const
    {
        return derive_seed(deployment, {"ecb", antennas, groups});
    }

    DeploymentSeeds deployment_seeds(std::uint64_t master, std::size_t deployment)
    {
        DeploymentSeeds s{};
        s.deployment = derive_seed(master, {"deployment", deployment});
        s.geometry = derive_seed(s.deployment, {"geometry"});
        s.shadowing = derive_seed(s.deployment, {"shadowing"});
        return s;
    }

    namespace
    {
        // Per-(N, G) state that is fixed for the whole realization loop.
        struct GroupSetup
        {
            std::size_t groups;
            SubgroupPlan plan;
            CooperationMap coop;
            CompositeStatistics stats;
            std::vector<DistributedPrecoder> precoders;
            std::vector<SinrAccumulator> accumulators;
        };
    }

    DeploymentResult simulate_deployment(const RunConfig &cfg, std::size_t deployment)
    {
        const DeploymentSeeds seeds = deployment_seeds(cfg.master_seed, deployment);
        DeploymentResult out;
        out.seed = seeds.deployment;

        NetworkGeometry geom;
        geom.area = cfg.area;
        geom.scenario = cfg.scenario;
        {
            Rng rng(seeds.geometry);
            geom.ap_positions = place_aps(cfg.num_aps, cfg.area, rng, cfg.ap_layout);
            geom.ue_positions = place_ues(cfg.scenario, cfg.area, rng);
        }

        const bool want_ecb =
            std::find(cfg.precoders.begin(), cfg.precoders.end(), PrecoderVariant::ecb) != cfg.precoders.end();
        const double sigma_u2 = cfg.propagation.noise_ul_mw();
        const double sigma_d2 = cfg.propagation.noise_dl_mw();

        if (cfg.diagnostics)
            out.diagnostics.emplace().deployment = deployment;

        for (std::size_t N : cfg.antennas)
        {
            // Same shadowing stream for every N, so beta (and hence the
            // subgroup plans) are shared across antenna counts.
            Rng shadow_rng(seeds.shadowing);
            const CovarianceSet cov = build_covariances(geom, N, cfg.propagation, shadow_rng);
            const ChannelSampler sampler(cov);
            const auto features = beta_vectors(cov);

            if (out.diagnostics && out.diagnostics->beta_db.size() == 0)
                out.diagnostics->beta_db = cov.beta().unaryExpr([](double b) { return linear_to_db(b); });

            std::vector<GroupSetup> setups;
            setups.reserve(cfg.groups.size());
            for (std::size_t G : cfg.groups)
            {
                Rng km_rng(seeds.kmeans(G));
                SubgroupPlan plan = make_plan(kmeans_partition(features, G, km_rng), G, cfg.tau_p_cap);
                CooperationMap coop = build_dcc(cov, plan);
                CompositeStatistics stats = composite_statistics(cov, plan, cfg.pilot_power_mw, sigma_u2);

                RMat ecb_factor;
                if (want_ecb)
                {
                    Rng ecb_rng(seeds.ecb(N, G));
                    ecb_factor = ecb_offline_factor(stats, coop, cfg.ecb_mc_samples, ecb_rng);
                }

                GroupSetup setup{G, std::move(plan), std::move(coop), std::move(stats), {}, {}};
                for (PrecoderVariant v : cfg.precoders)
                {
                    const PrecoderConfig pc = cfg.precoder_config(v);
                    const PowerAllocation power = apa_power(setup.stats, setup.coop, pc);
                    setup.precoders.emplace_back(setup.stats, setup.coop, power, pc,
                                                 v == PrecoderVariant::ecb ? &ecb_factor : nullptr);
                    setup.accumulators.emplace_back(setup.plan, sigma_d2);
                }
                if (out.diagnostics)
                {
                    RMat traces(static_cast<Eigen::Index>(cfg.num_aps), static_cast<Eigen::Index>(G));
                    for (std::size_t l = 0; l < cfg.num_aps; ++l)
                        for (std::size_t g = 0; g < G; ++g)
                            traces(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(g)) =
                                setup.stats.R_group(l, g).trace().real();
                    out.diagnostics->group_traces.push_back({{N, G}, std::move(traces)});
                }
                setups.push_back(std::move(setup));
            }

            // Channel draws are shared by every G and precoder (paired comparison).
            for (std::size_t r = 0; r < cfg.n_fading; ++r)
            {
                Rng fading_rng(seeds.fading(N, r));
                const ChannelRealization real = sampler.sample(fading_rng);
                for (auto &setup : setups)
                {
                    Rng noise_rng(seeds.noise(N, setup.groups, r));
                    const PilotObservation obs = observe_pilots(real, setup.plan, setup.stats, noise_rng);
                    const EstimateSet est = mmse_estimate(obs, setup.stats, setup.plan);
                    for (std::size_t i = 0; i < setup.precoders.size(); ++i)
                    {
                        const PrecoderSet prec = setup.precoders[i].build(est);
                        out.zero_norm_events += prec.zero_norm_events;
                        setup.accumulators[i].accumulate(real, prec);
                    }
                }
            }

            for (const auto &setup : setups)
            {
                for (std::size_t i = 0; i < cfg.precoders.size(); ++i)
                {
                    const SeResults se = evaluate(setup.accumulators[i], setup.plan, cfg.tau_c, cfg.ase_mode);
                    std::vector<double> groups(se.se_group.data(), se.se_group.data() + se.se_group.size());
                    ResultRow row;
                    row.scenario = cfg.scenario.name;
                    row.precoder = cfg.precoders[i];
                    row.groups = setup.groups;
                    row.antennas = N;
                    row.deployment = deployment;
                    row.seed = seeds.deployment;
                    row.ase = se.ase;
                    row.se_group_min = se.se_group.minCoeff();
                    row.se_group_median = median(groups);
                    out.rows.push_back(std::move(row));
                }
            }
        }
        return out;
    }

    RunResult run_experiment(const RunConfig &cfg)
    {
        cfg.validate();

        std::vector<DeploymentResult> per_deployment(cfg.n_deployments);
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto worker = [&]
        {
            for (;;)
            {
                const std::size_t d = next.fetch_add(1);
                if (d >= cfg.n_deployments)
                    return;
                try
                {
                    per_deployment[d] = simulate_deployment(cfg, d);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next.store(cfg.n_deployments);
                    return;
                }
            }
        };

        const std::size_t workers = std::min(cfg.threads, cfg.n_deployments);
        if (workers <= 1)
            worker();
        else
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (std::size_t t = 0; t < workers; ++t)
                pool.emplace_back(worker);
        }
        if (failure)
            std::rethrow_exception(failure);

        RunResult result;
        for (auto &d : per_deployment)
        {
            result.deployment_seeds.push_back(d.seed);
            result.zero_norm_events += d.zero_norm_events;
            std::move(d.rows.begin(), d.rows.end(), std::back_inserter(result.rows));
            if (d.diagnostics)
                result.diagnostics.push_back(std::move(*d.diagnostics));
        }
        return result;
    }

    void write_csv(std::ostream &out, const std::vector<ResultRow> &rows)
    {
        out << kCsvHeader << '\n';
        char buf[64];
        auto real = [&buf](double v)
        {
            std::snprintf(buf, sizeof buf, "%.12g", v);
            return std::string(buf);
        };
        for (const auto &r : rows)
        {
            out << r.scenario << ',' << to_string(r.precoder) << ',' << r.groups << ',' << r.antennas << ','
                << r.deployment << ',' << r.seed << ',' << real(r.ase) << ',' << real(r.se_group_min) << ','
                << real(r.se_group_median) << '\n';
        }
    }

    namespace
    {
        nlohmann::json matrix_json(const RMat &m)
        {
            nlohmann::json rows = nlohmann::json::array();
            for (Eigen::Index i = 0; i < m.rows(); ++i)
            {
                nlohmann::json row = nlohmann::json::array();
                for (Eigen::Index j = 0; j < m.cols(); ++j)
                    row.push_back(m(i, j));
                rows.push_back(std::move(row));
            }
            return rows;
        }

        void write_text(const std::filesystem::path &path, const std::string &text)
        {
            std::ofstream f(path, std::ios::binary);
            if (!f)
                throw IoError("cannot open '" + path.string() + "' for writing");
            f << text;
            f.flush();
            if (!f)
                throw IoError("failed writing '" + path.string() + "'");
        }
    }

    std::string manifest_json(const RunConfig &cfg, const RunResult &result)
    {
        nlohmann::ordered_json m;
        m["tool"] = "cfsim";
        m["version"] = version();
        m["master_seed"] = cfg.master_seed;

        nlohmann::ordered_json config = nlohmann::ordered_json::object();
        std::istringstream text(to_config_text(cfg));
        std::string line;
        while (std::getline(text, line))
        {
            const auto eq = line.find(" = ");
            if (eq != std::string::npos)
                config[line.substr(0, eq)] = line.substr(eq + 3);
        }
        m["config"] = std::move(config);
        m["csv_header"] = kCsvHeader;
        m["rows"] = result.rows.size();
        m["zero_norm_events"] = result.zero_norm_events;
        m["deployment_seeds"] = result.deployment_seeds;
        return m.dump(2) + "\n";
    }

    RunResult run(const RunConfig &cfg)
    {
        RunResult result = run_experiment(cfg);

        std::error_code ec;
        std::filesystem::create_directories(cfg.output_dir, ec);
        if (ec)
            throw IoError("cannot create output directory '" + cfg.output_dir.string() + "': " + ec.message());

        std::ostringstream csv;
        write_csv(csv, result.rows);
        write_text(cfg.output_dir / "results.csv", csv.str());
        write_text(cfg.output_dir / "manifest.json", manifest_json(cfg, result));

        if (cfg.diagnostics)
        {
            nlohmann::json diag = nlohmann::json::array();
            for (const auto &d : result.diagnostics)
            {
                nlohmann::json entry;
                entry["deployment"] = d.deployment;
                entry["beta_db"] = matrix_json(d.beta_db);
                nlohmann::json traces = nlohmann::json::array();
                for (const auto &[key, m] : d.group_traces)
                    traces.push_back({{"N", key.first}, {"G", key.second}, {"trace_Rg", matrix_json(m)}});
                entry["group_traces"] = std::move(traces);
                diag.push_back(std::move(entry));
            }
            write_text(cfg.output_dir / "diagnostics.json", diag.dump() + "\n");
        }
        return result;
    }
}
