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

#include <benchmark/benchmark.h>

#include <cfmc/estimation.hpp>
#include <cfmc/harness.hpp>
#include <cfmc/performance.hpp>
#include <cfmc/precoding.hpp>
#include <cfmc/subgrouping.hpp>

using namespace cfmc;

namespace
{
    // One desk-scale deployment (L = 25, K = 24) with N antennas and G subgroups.
    struct Network
    {
        CovarianceSet cov;
        SubgroupPlan plan;
        CompositeStatistics stats;
        CooperationMap coop;
        PowerAllocation power;

        Network(std::size_t N, std::size_t G)
        {
            RunConfig cfg;
            cfg.scenario = scenario_preset("desk-het");
            cfg.num_aps = 25;
            cfg.tau_p_cap = 5;
            const auto seeds = deployment_seeds(42, 0);
            NetworkGeometry geom;
            geom.scenario = cfg.scenario;
            Rng grng(seeds.geometry);
            geom.ap_positions = place_aps(cfg.num_aps, geom.area, grng);
            geom.ue_positions = place_ues(geom.scenario, geom.area, grng);
            Rng srng(seeds.shadowing);
            cov = build_covariances(geom, N, cfg.propagation, srng);
            Rng krng(seeds.kmeans(G));
            plan = make_plan(kmeans_partition(beta_vectors(cov), G, krng), G, cfg.tau_p_cap);
            stats = composite_statistics(cov, plan, cfg.pilot_power_mw, cfg.propagation.noise_ul_mw());
            coop = build_dcc(cov, plan);
            power = apa_power(stats, coop, PrecoderConfig{});
        }
    };

    void channel_sample(benchmark::State &state)
    {
        const Network net(std::size_t(state.range(0)), 24);
        const ChannelSampler sampler(net.cov);
        Rng rng(1);
        for (auto _ : state)
            benchmark::DoNotOptimize(sampler.sample(rng));
    }
    BENCHMARK(channel_sample)->Arg(4)->Arg(8)->Arg(16);

    void mmse_estimation(benchmark::State &state)
    {
        const Network net(std::size_t(state.range(0)), 8);
        const ChannelSampler sampler(net.cov);
        Rng rng(2);
        const auto real = sampler.sample(rng);
        for (auto _ : state)
            benchmark::DoNotOptimize(mmse_estimate(observe_pilots(real, net.plan, net.stats, rng), net.stats, net.plan));
    }
    BENCHMARK(mmse_estimation)->Arg(4)->Arg(8)->Arg(16);

    void precoder_build(benchmark::State &state)
    {
        const Network net(8, 8);
        const auto variant = static_cast<PrecoderVariant>(state.range(0));
        Rng frng(3);
        const RMat factor = ecb_offline_factor(net.stats, net.coop, 1000, frng);
        const DistributedPrecoder precoder(net.stats, net.coop, net.power, {variant}, &factor);
        Rng rng(4);
        const auto real = ChannelSampler(net.cov).sample(rng);
        const auto est = mmse_estimate(observe_pilots(real, net.plan, net.stats, rng), net.stats, net.plan);
        state.SetLabel(to_string(variant));
        for (auto _ : state)
            benchmark::DoNotOptimize(precoder.build(est));
    }
    BENCHMARK(precoder_build)
        ->Arg(int(PrecoderVariant::cb))
        ->Arg(int(PrecoderVariant::ncb))
        ->Arg(int(PrecoderVariant::ecb));

    void ecb_factor(benchmark::State &state)
    {
        const Network net(8, 8);
        Rng rng(5);
        for (auto _ : state)
            benchmark::DoNotOptimize(ecb_offline_factor(net.stats, net.coop, std::size_t(state.range(0)), rng));
    }
    BENCHMARK(ecb_factor)->Arg(1000)->Unit(benchmark::kMillisecond);

    void sinr_accumulate(benchmark::State &state)
    {
        const Network net(8, 8);
        const DistributedPrecoder precoder(net.stats, net.coop, net.power, {PrecoderVariant::ncb});
        Rng rng(6);
        const auto real = ChannelSampler(net.cov).sample(rng);
        const auto w = precoder.build(mmse_estimate(observe_pilots(real, net.plan, net.stats, rng), net.stats, net.plan));
        SinrAccumulator acc(net.plan, 1e-10);
        for (auto _ : state)
            acc.accumulate(real, w);
        benchmark::DoNotOptimize(acc.num_samples());
    }
    BENCHMARK(sinr_accumulate);

    void subgroup_partition(benchmark::State &state)
    {
        const Network net(4, 1);
        const auto features = beta_vectors(net.cov);
        Rng rng(7);
        for (auto _ : state)
            benchmark::DoNotOptimize(kmeans_partition(features, std::size_t(state.range(0)), rng));
    }
    BENCHMARK(subgroup_partition)->Arg(2)->Arg(8)->Arg(24);

    void one_deployment(benchmark::State &state)
    {
        RunConfig cfg;
        cfg.scenario = scenario_preset("desk-het");
        cfg.num_aps = 25;
        cfg.antennas = {4};
        cfg.groups = {1, 8, 24};
        cfg.tau_p_cap = 5;
        cfg.n_deployments = 1;
        cfg.n_fading = 50;
        cfg.master_seed = 42;
        for (auto _ : state)
            benchmark::DoNotOptimize(simulate_deployment(cfg, 0));
    }
    BENCHMARK(one_deployment)->Unit(benchmark::kMillisecond);
}

BENCHMARK_MAIN();
