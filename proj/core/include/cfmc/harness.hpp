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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cfmc/channel.hpp"
#include "cfmc/deployment.hpp"
#include "cfmc/performance.hpp"
#include "cfmc/precoding.hpp"

namespace cfmc
{
    // Everything a run depends on. Defaults reproduce the full-scale setup:
    // L = 100, tau_c = 200, tau_p = min(G, 20), Pp = 100 mW, Pdl = 200 mW,
    // 500 deployments x 100 fading realizations.
    struct RunConfig
    {
        ScenarioSpec scenario = scenario_preset("uniform-100");
        AreaSpec area;
        ApLayout ap_layout = ApLayout::uniform;
        std::size_t num_aps = 100;
        std::optional<std::size_t> num_ues; // checked against the scenario when set
        std::vector<std::size_t> antennas{4, 8, 16};
        std::vector<std::size_t> groups{1, 10, 100};
        std::vector<PrecoderVariant> precoders{PrecoderVariant::cb, PrecoderVariant::ncb, PrecoderVariant::ecb};
        PropagationModel propagation;
        double nu = 0.6;
        double pdl_mw = 200.0;
        double pilot_power_mw = 100.0;
        std::size_t ecb_mc_samples = 1000;
        std::size_t tau_c = 200;
        std::size_t tau_p_cap = 20;
        std::size_t n_deployments = 500;
        std::size_t n_fading = 100;
        std::uint64_t master_seed = 1;
        std::filesystem::path output_dir = "results";
        std::size_t threads = 1;
        AseMode ase_mode = AseMode::weighted;
        bool diagnostics = false;

        std::size_t total_ues() const { return scenario.total_ues(); }
        PrecoderConfig precoder_config(PrecoderVariant v) const { return {v, nu, pdl_mw, ecb_mc_samples}; }

        // Throws ConfigError naming the first offending field.
        void validate() const;
    };

    // key = value lines, '#' comments. Unknown keys are errors.
    RunConfig parse_config(std::istream &in, RunConfig base = {});
    RunConfig load_config(const std::filesystem::path &path);

    // Applies a single key = value setting; used by the parser and the CLI.
    void apply_setting(RunConfig &cfg, const std::string &key, const std::string &value);

    // Canonical key = value dump; parse_config(to_config_text(c)) reproduces c.
    std::string to_config_text(const RunConfig &cfg);

    std::vector<std::size_t> parse_count_list(const std::string &field, const std::string &text);

    struct ResultRow
    {
        std::string scenario;
        PrecoderVariant precoder = PrecoderVariant::cb;
        std::size_t groups = 0;
        std::size_t antennas = 0;
        std::size_t deployment = 0;
        std::uint64_t seed = 0;
        double ase = 0.0;
        double se_group_min = 0.0;
        double se_group_median = 0.0;
    };

    // Large-scale diagnostics of one deployment (optional output).
    struct DeploymentDiagnostics
    {
        std::size_t deployment = 0;
        RMat beta_db; // L x K
        // trace(R_l^g) per (N, G), L x G each, in config order.
        std::vector<std::pair<std::pair<std::size_t, std::size_t>, RMat>> group_traces;
    };

    struct DeploymentResult
    {
        std::vector<ResultRow> rows;
        std::uint64_t seed = 0;
        std::size_t zero_norm_events = 0;
        std::optional<DeploymentDiagnostics> diagnostics;
    };

    struct RunResult
    {
        std::vector<ResultRow> rows;
        std::vector<std::uint64_t> deployment_seeds;
        std::size_t zero_norm_events = 0;
        std::vector<DeploymentDiagnostics> diagnostics;
    };

    // Independent random streams of one deployment.
    struct DeploymentSeeds
    {
        std::uint64_t deployment;
        std::uint64_t geometry;
        std::uint64_t shadowing;
        std::uint64_t kmeans(std::size_t groups) const;
        std::uint64_t fading(std::size_t antennas, std::size_t realization) const;
        std::uint64_t noise(std::size_t antennas, std::size_t groups, std::size_t realization) const;
        std::uint64_t ecb(std::size_t antennas, std::size_t groups) const;
    };
    DeploymentSeeds deployment_seeds(std::uint64_t master, std::size_t deployment);

    // Full Monte Carlo for one deployment: rows for every (N, G, precoder).
    DeploymentResult simulate_deployment(const RunConfig &cfg, std::size_t deployment);

    // All deployments, distributed over cfg.threads workers. Output does not
    // depend on the thread count.
    RunResult run_experiment(const RunConfig &cfg);

    inline constexpr const char *kCsvHeader =
        "scenario,precoder,G,N,deployment,seed,ase_bits_per_hz,se_group_min,se_group_median";

    void write_csv(std::ostream &out, const std::vector<ResultRow> &rows);
    std::string manifest_json(const RunConfig &cfg, const RunResult &result);

    // run_experiment + results.csv + manifest.json (+ diagnostics.json) under
    // cfg.output_dir. Throws IoError when files cannot be written.
    RunResult run(const RunConfig &cfg);

    const char *version();
}
