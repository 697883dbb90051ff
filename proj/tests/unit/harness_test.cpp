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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include <json.hpp>

#include <cfmc/harness.hpp>

using namespace cfmc;

namespace
{
    RunConfig small()
    {
        RunConfig cfg;
        cfg.scenario = ScenarioSpec{"small", 6, {{1, 4, 10.0}}};
        cfg.num_aps = 9;
        cfg.antennas = {2, 4};
        cfg.groups = {1, 3, 10};
        cfg.tau_p_cap = 5;
        cfg.n_deployments = 3;
        cfg.n_fading = 6;
        cfg.ecb_mc_samples = 200;
        cfg.master_seed = 77;
        return cfg;
    }

    std::string csv_of(const RunConfig &cfg)
    {
        std::ostringstream out;
        write_csv(out, run_experiment(cfg).rows);
        return out.str();
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream f(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
    }
}

TEST_SUITE("harness")
{
    TEST_CASE("CSV schema consumed by the plotting tools")
    {
        CHECK(std::string(kCsvHeader) ==
              "scenario,precoder,G,N,deployment,seed,ase_bits_per_hz,se_group_min,se_group_median");

        ResultRow r{"uniform-100", PrecoderVariant::ecb, 10, 8, 4, 123456789012345ull, 12.5, 0.25, 1.0 / 3.0};
        std::ostringstream out;
        write_csv(out, {r});
        CHECK(out.str() == std::string(kCsvHeader) + "\nuniform-100,ecb,10,8,4,123456789012345,12.5,0.25,0.333333333333\n");
    }

    TEST_CASE("one row per deployment, N, G and precoder, in sweep order")
    {
        const auto cfg = small();
        const auto res = run_experiment(cfg);
        REQUIRE(res.rows.size() == 3 * 2 * 3 * 3);
        REQUIRE(res.deployment_seeds.size() == 3);

        std::size_t i = 0;
        for (std::size_t d = 0; d < 3; ++d)
            for (std::size_t N : cfg.antennas)
                for (std::size_t G : cfg.groups)
                    for (auto p : cfg.precoders)
                    {
                        const auto &row = res.rows[i++];
                        CHECK(row.deployment == d);
                        CHECK(row.antennas == N);
                        CHECK(row.groups == G);
                        CHECK(row.precoder == p);
                        CHECK(row.seed == res.deployment_seeds[d]);
                        CHECK(row.scenario == "small");
                        CHECK(row.ase >= 0.0);
                        CHECK(row.se_group_min <= row.se_group_median);
                        if (G == 1)
                            CHECK(row.ase == doctest::Approx(10 * row.se_group_min));
                    }
    }

    TEST_CASE("unicast and multicast rows for K = 10")
    {
        auto cfg = small();
        cfg.groups = {1, 10};
        cfg.n_deployments = 2;
        const auto res = run_experiment(cfg);
        std::set<std::tuple<std::size_t, std::size_t>> seen;
        for (const auto &r : res.rows)
            seen.insert({r.deployment, r.groups});
        CHECK(seen.size() == 4);
    }

    TEST_CASE("identical configuration and seed reproduce the CSV byte for byte")
    {
        const auto cfg = small();
        const auto a = csv_of(cfg);
        CHECK(a == csv_of(cfg));

        auto threaded = cfg;
        threaded.threads = 3;
        CHECK(a == csv_of(threaded));

        auto other = cfg;
        other.master_seed = 78;
        CHECK(a != csv_of(other));
    }

    TEST_CASE("a deployment does not depend on how many others are run")
    {
        auto one = small();
        auto many = small();
        many.n_deployments = 5;
        const auto a = run_experiment(one);
        const auto b = run_experiment(many);
        for (std::size_t i = 0; i < a.rows.size(); ++i)
            CHECK(a.rows[i].ase == b.rows[i].ase);
    }

    TEST_CASE("streams are separated: geometry and shadowing ignore the fading budget")
    {
        auto cfg = small();
        cfg.diagnostics = true;
        auto longer = cfg;
        longer.n_fading = 9;
        const auto a = run_experiment(cfg);
        const auto b = run_experiment(longer);
        REQUIRE(a.diagnostics.size() == 3);
        for (std::size_t d = 0; d < 3; ++d)
        {
            CHECK(a.diagnostics[d].beta_db == b.diagnostics[d].beta_db);
            CHECK(a.diagnostics[d].group_traces == b.diagnostics[d].group_traces);
        }
    }

    TEST_CASE("a precoder's rows do not depend on which other precoders run")
    {
        auto all = small();
        auto cb_only = small();
        cb_only.precoders = {PrecoderVariant::cb};
        const auto a = run_experiment(all);
        const auto b = run_experiment(cb_only);
        std::size_t j = 0;
        for (const auto &row : a.rows)
            if (row.precoder == PrecoderVariant::cb)
                CHECK(row.ase == b.rows[j++].ase);
        CHECK(j == b.rows.size());
    }

    TEST_CASE("invalid configurations are rejected before any work")
    {
        auto cfg = small();
        cfg.groups = {11};
        CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
    }

    TEST_CASE("run writes results, manifest and diagnostics")
    {
        auto cfg = small();
        cfg.n_deployments = 2;
        cfg.diagnostics = true;
        cfg.output_dir = std::filesystem::temp_directory_path() / "cfmc_harness_test";
        std::filesystem::remove_all(cfg.output_dir);
        const auto res = run(cfg);

        const auto csv = slurp(cfg.output_dir / "results.csv");
        std::ostringstream expected;
        write_csv(expected, res.rows);
        CHECK(csv == expected.str());

        const auto manifest = nlohmann::json::parse(slurp(cfg.output_dir / "manifest.json"));
        CHECK(manifest["master_seed"] == 77);
        CHECK(manifest["rows"] == res.rows.size());
        CHECK(manifest["csv_header"] == kCsvHeader);
        CHECK(manifest["config"]["tau_p_cap"] == "5");
        CHECK(manifest["deployment_seeds"].size() == 2);

        const auto diag = nlohmann::json::parse(slurp(cfg.output_dir / "diagnostics.json"));
        REQUIRE(diag.size() == 2);
        CHECK(diag[0]["beta_db"].size() == 9);
        std::filesystem::remove_all(cfg.output_dir);
    }

    TEST_CASE("unwritable output is an I/O error")
    {
        auto cfg = small();
        cfg.n_deployments = 1;
        cfg.output_dir = "/proc/cfmc/not/here";
        CHECK_THROWS_AS(run(cfg), IoError);
    }
}
