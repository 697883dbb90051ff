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

// cfsim: command-line front end of the simulator.
//
//   cfsim run --config FILE [overrides...]
//   cfsim scenarios
//   cfsim validate --config FILE
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cfmc/harness.hpp"

namespace
{
    constexpr int kExitConfig = 1;
    constexpr int kExitIo = 2;

    struct Overrides
    {
        std::string scenario, precoder, groups, antennas, seed, out, deployments, fading, threads, nu;
    };

    void apply_overrides(cfmc::RunConfig &cfg, const Overrides &o)
    {
        auto set = [&cfg](const char *key, const std::string &value)
        {
            if (!value.empty())
                cfmc::apply_setting(cfg, key, value);
        };
        set("scenario", o.scenario);
        set("precoders", o.precoder);
        set("groups", o.groups);
        set("N", o.antennas);
        set("seed", o.seed);
        set("out", o.out);
        set("deployments", o.deployments);
        set("fading", o.fading);
        set("threads", o.threads);
        set("nu", o.nu);
    }

    void describe(const cfmc::ScenarioSpec &s)
    {
        std::cout << s.name << "  K=" << s.total_ues() << "  uniform=" << s.n_uniform;
        if (!s.clusters.empty())
        {
            std::cout << "  clusters=";
            for (std::size_t i = 0; i < s.clusters.size(); ++i)
                std::cout << (i ? "," : "") << s.clusters[i].count << "x" << s.clusters[i].users_per_cluster;
        }
        std::cout << '\n';
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Subgroup-centric multicast simulator for cell-free massive MIMO"};
    app.set_version_flag("--version", std::string(cfmc::version()));
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    bool quiet = false;

    auto *run = app.add_subcommand("run", "Run a Monte Carlo experiment");
    run->add_option("--config", config_path, "Configuration file")->required();
    run->add_option("--scenario", ov.scenario, "Scenario preset (see `cfsim scenarios`)");
    run->add_option("--precoder", ov.precoder, "cb|ncb|ecb|all, or a comma list");
    run->add_option("--groups", ov.groups, "G or comma list of G values");
    run->add_option("--antennas", ov.antennas, "N or comma list of antenna counts");
    run->add_option("--seed", ov.seed, "Master seed (u64)");
    run->add_option("--out", ov.out, "Output directory");
    run->add_option("--deployments", ov.deployments, "Number of network deployments");
    run->add_option("--fading", ov.fading, "Fading realizations per deployment");
    run->add_option("--threads", ov.threads, "Worker threads (output is independent of this)");
    run->add_option("--nu", ov.nu, "APA fairness exponent");
    run->add_flag("-q,--quiet", quiet, "Suppress the summary");

    auto *scenarios = app.add_subcommand("scenarios", "List scenario presets");

    auto *validate = app.add_subcommand("validate", "Check a configuration without running");
    validate->add_option("--config", config_path, "Configuration file")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (scenarios->parsed())
    {
        for (const auto &name : cfmc::scenario_preset_names())
            describe(cfmc::scenario_preset(name));
        return 0;
    }

    cfmc::RunConfig cfg;
    try
    {
        cfg = cfmc::load_config(config_path);
        if (run->parsed())
            apply_overrides(cfg, ov);
        cfg.validate();
    }
    catch (const cfmc::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    if (validate->parsed())
    {
        std::cout << "ok: scenario " << cfg.scenario.name << ", K=" << cfg.total_ues() << ", L=" << cfg.num_aps
                  << ", " << cfg.n_deployments << " deployments x " << cfg.n_fading << " fading\n";
        return 0;
    }

    try
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto result = cfmc::run(cfg);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        if (!quiet)
        {
            std::cout << "wrote " << result.rows.size() << " rows to " << (cfg.output_dir / "results.csv").string()
                      << " in " << dt.count() << " s\n";
            if (result.zero_norm_events)
                std::cout << "zero-norm estimates: " << result.zero_norm_events << '\n';
        }
    }
    catch (const cfmc::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const cfmc::IoError &e)
    {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
