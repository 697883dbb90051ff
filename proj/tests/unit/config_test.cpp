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

#include <cmath>
#include <sstream>
#include <string>

#include <cfmc/harness.hpp>

using namespace cfmc;

namespace
{
    RunConfig parse(const std::string &text)
    {
        std::istringstream in(text);
        return parse_config(in);
    }

    // Field named by the ConfigError thrown from f, or "" when nothing is thrown.
    template <typename F>
    std::string error_field(F &&f)
    {
        try
        {
            f();
        }
        catch (const ConfigError &e)
        {
            return e.field();
        }
        return {};
    }

    RunConfig desk()
    {
        return parse("scenario = desk-uniform-24\nL = 25\nN = 4\ngroups = 1,6,24\ndeployments = 2\nfading = 4\n");
    }
}

TEST_SUITE("config")
{
    TEST_CASE("defaults describe the full-scale setup")
    {
        const RunConfig cfg;
        CHECK(cfg.num_aps == 100);
        CHECK(cfg.total_ues() == 100);
        CHECK(cfg.tau_c == 200);
        CHECK(cfg.tau_p_cap == 20);
        CHECK(cfg.pilot_power_mw == 100.0);
        CHECK(cfg.pdl_mw == 200.0);
        CHECK(cfg.n_deployments == 500);
        CHECK(cfg.n_fading == 100);
        CHECK(cfg.antennas == std::vector<std::size_t>{4, 8, 16});
        CHECK(cfg.groups == std::vector<std::size_t>{1, 10, 100});
        CHECK_NOTHROW(cfg.validate());
    }

    TEST_CASE("parsing keys, comments and units")
    {
        const auto cfg = parse(R"(# desk run
scenario = desk-het     # trailing comment
L = 25
N = 4, 8
groups = 1,2,4,8,24
precoders = ncb, ecb
dl_power_dbm = 23
pilot_power_mw = 50
noise_ul_dbm = -96
tau_p_cap = 5
seed = 18446744073709551615
wrap_around = no
ap_layout = grid
ase_mode = plain
)");
        CHECK(cfg.scenario.name == "desk-het");
        CHECK(cfg.total_ues() == 24);
        CHECK(cfg.antennas == std::vector<std::size_t>{4, 8});
        CHECK(cfg.groups.size() == 5);
        CHECK(cfg.precoders == std::vector<PrecoderVariant>{PrecoderVariant::ncb, PrecoderVariant::ecb});
        CHECK(cfg.pdl_mw == doctest::Approx(199.526231496888).epsilon(1e-12));
        CHECK(cfg.pilot_power_mw == 50.0);
        CHECK(cfg.propagation.noise_ul_mw() == doctest::Approx(std::pow(10.0, -9.6)));
        CHECK(cfg.tau_p_cap == 5);
        CHECK(cfg.master_seed == 18446744073709551615ull);
        CHECK_FALSE(cfg.area.wrap_around);
        CHECK(cfg.ap_layout == ApLayout::grid);
        CHECK(cfg.ase_mode == AseMode::plain);
        CHECK_NOTHROW(cfg.validate());
    }

    TEST_CASE("inline scenarios")
    {
        const auto cfg = parse("scenario = mine\nuniform_ues = 3\nclusters = 2x4, 1x5@20\n");
        CHECK(cfg.scenario.name == "mine");
        CHECK(cfg.total_ues() == 16);
        REQUIRE(cfg.scenario.clusters.size() == 2);
        CHECK(cfg.scenario.clusters[1] == ClusterGroup{1, 5, 20.0});

        auto bare = parse("scenario = nowhere\n");
        CHECK(error_field([&] { bare.validate(); }) == "scenario");
    }

    TEST_CASE("canonical text round-trips")
    {
        auto cfg = parse("scenario = mine\nuniform_ues = 2\nclusters = 1x3@7.5\nN = 2,4\ngroups = 1,5\nnu = 0.35\n"
                         "K = 5\nseed = 99\nshadow_decorrelation_m = 0\ndiagnostics = true\n");
        const auto text = to_config_text(cfg);
        const auto again = parse(text);
        CHECK(to_config_text(again) == text);
        CHECK(again.scenario.clusters == cfg.scenario.clusters);
        CHECK(again.nu == cfg.nu);
        CHECK(again.num_ues == cfg.num_ues);
    }

    TEST_CASE("parse errors name the field")
    {
        CHECK(error_field([] { parse("bogus = 1\n"); }) == "bogus");
        CHECK(error_field([] { parse("L = many\n"); }) == "L");
        CHECK(error_field([] { parse("L = -4\n"); }) == "L");
        CHECK(error_field([] { parse("nu = abc\n"); }) == "nu");
        CHECK(error_field([] { parse("nu = inf\n"); }) == "nu");
        CHECK(error_field([] { parse("groups = 1,x\n"); }) == "groups");
        CHECK(error_field([] { parse("groups = ,\n"); }) == "groups");
        CHECK(error_field([] { parse("precoders = zf\n"); }) == "precoders");
        CHECK(error_field([] { parse("correlation = rician\n"); }) == "correlation");
        CHECK(error_field([] { parse("clusters = 3by4\n"); }) == "clusters");
        CHECK(error_field([] { parse("wrap_around = maybe\n"); }) == "wrap_around");
        CHECK(error_field([] { parse("just text\n"); }) == "line 1");
        CHECK(error_field([] { load_config("/nonexistent/cfmc.cfg"); }) == "config");
    }

    TEST_CASE("validation errors name the field")
    {
        auto check = [](const char *field, auto mutate)
        {
            auto cfg = desk();
            mutate(cfg);
            CHECK(error_field([&] { cfg.validate(); }) == field);
        };
        CHECK_NOTHROW(desk().validate());
        check("groups", [](RunConfig &c) { c.groups = {1, 25}; });
        check("groups", [](RunConfig &c) { c.groups = {0}; });
        check("K", [](RunConfig &c) { c.num_ues = 100; });
        check("N", [](RunConfig &c) { c.antennas = {1, 4}; });
        check("L", [](RunConfig &c) { c.num_aps = 0; });
        check("fading", [](RunConfig &c) { c.n_fading = 1; });
        check("deployments", [](RunConfig &c) { c.n_deployments = 0; });
        check("threads", [](RunConfig &c) { c.threads = 0; });
        check("tau_c", [](RunConfig &c) { c.tau_c = 6; });
        check("tau_p_cap", [](RunConfig &c) { c.tau_p_cap = 0; });
        check("ecb_mc_samples", [](RunConfig &c) { c.ecb_mc_samples = 5; });
        check("pathloss_exp", [](RunConfig &c) { c.propagation.pathloss_exp = 0; });
        check("shadow_std_db", [](RunConfig &c) { c.propagation.shadow_std_db = -1; });
        check("asd_deg", [](RunConfig &c) { c.propagation.asd_deg = -1; });

        // N = 1 is fine without ECB.
        auto no_ecb = desk();
        no_ecb.antennas = {1};
        no_ecb.precoders = {PrecoderVariant::cb, PrecoderVariant::ncb};
        CHECK_NOTHROW(no_ecb.validate());
    }

    TEST_CASE("count lists")
    {
        CHECK(parse_count_list("N", "4, 8 ,16") == std::vector<std::size_t>{4, 8, 16});
        CHECK(error_field([] { parse_count_list("N", "4;8"); }) == "N");
    }
}
