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

#include <cfmc/precoding.hpp>

#include "support.hpp"

using namespace cfmc;

namespace
{
    constexpr double kPp = 100.0;

    // Statistics whose estimate covariance is c * I_N for one AP and one UE.
    CompositeStatistics white_estimate(std::size_t N, double r, double sigma_u2, double *c)
    {
        const auto cov = test::covariances(1, 1, {test::scaled_identity(N, r)});
        const auto plan = make_plan({0}, 1);
        *c = (kPp * r) * (kPp * r) / (kPp * r + sigma_u2);
        return composite_statistics(cov, plan, kPp, sigma_u2);
    }

    struct Network
    {
        CovarianceSet cov;
        SubgroupPlan plan;
        CompositeStatistics stats;
        CooperationMap coop;

        Network()
        {
            // Three APs, four UEs in three subgroups; subgroups 0 and 2 share a pilot.
            std::vector<CMat> R;
            const double gains[3][4] = {{1.0, 0.2, 0.5, 0.1}, {0.3, 0.9, 0.2, 0.7}, {0.05, 0.4, 1.2, 0.6}};
            for (int l = 0; l < 3; ++l)
                for (int k = 0; k < 4; ++k)
                    R.push_back(test::exponential_correlation(4, 1e-2 * gains[l][k], 0.2 * (k + 1)));
            cov = test::covariances(3, 4, R);
            plan = make_plan({0, 1, 2, 0}, 3, 2);
            stats = composite_statistics(cov, plan, kPp, 0.5);
            coop = build_dcc(cov, plan);
        }
    };
}

TEST_SUITE("precoding")
{
    TEST_CASE("precoder names")
    {
        for (auto v : {PrecoderVariant::cb, PrecoderVariant::ncb, PrecoderVariant::ecb})
            CHECK(parse_precoder(to_string(v)) == v);
        CHECK(parse_precoder("NCB") == PrecoderVariant::ncb);
        CHECK_FALSE(parse_precoder("zf").has_value());
    }

    TEST_CASE("precoder configuration is validated")
    {
        PrecoderConfig cfg;
        CHECK_NOTHROW(cfg.validate());
        cfg.ecb_mc_samples = 10;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg = {};
        cfg.pdl_mw = 0.0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }

    TEST_CASE("power allocation examples")
    {
        // One AP, two subgroups on distinct pilots with traces 3 and 1.
        const auto cov = test::covariances(1, 2, {test::scaled_identity(1, 3.0 / (2 * kPp)),
                                                 test::scaled_identity(1, 1.0 / (2 * kPp))});
        const auto plan = make_plan({0, 1}, 2);
        const auto stats = composite_statistics(cov, plan, kPp, 1.0);
        REQUIRE(stats.R_group(0, 0).trace().real() == doctest::Approx(3.0));
        const auto coop = build_dcc(cov, plan);

        PrecoderConfig cfg;
        cfg.nu = 1.0;
        const auto p1 = apa_power(stats, coop, cfg);
        CHECK(p1.rho(0, 0) == doctest::Approx(0.75 * cfg.pdl_mw).epsilon(1e-14));
        CHECK(p1.rho(0, 1) == doctest::Approx(0.25 * cfg.pdl_mw).epsilon(1e-14));

        cfg.nu = 0.0;
        const auto p0 = apa_power(stats, coop, cfg);
        CHECK(p0.rho(0, 0) == cfg.pdl_mw / 2);
        CHECK(p0.rho(0, 1) == cfg.pdl_mw / 2);
    }

    TEST_CASE("equal split over four duties and full power for a single duty")
    {
        std::vector<CMat> R;
        for (int k = 0; k < 4; ++k)
            R.push_back(test::scaled_identity(2, 0.01 * (k + 1)));
        const auto cov = test::covariances(1, 4, R);
        const auto plan = make_plan({0, 1, 2, 3}, 4);
        const auto stats = composite_statistics(cov, plan, kPp, 1.0);
        PrecoderConfig cfg;
        cfg.nu = 0.0;
        const auto p = apa_power(stats, build_dcc(cov, plan), cfg);
        for (int g = 0; g < 4; ++g)
            CHECK(p.rho(0, g) == cfg.pdl_mw / 4);

        CooperationMap single(1, 4);
        single.set_serves(0, 2);
        cfg.nu = 0.6;
        const auto q = apa_power(stats, single, cfg);
        CHECK(q.rho(0, 2) == cfg.pdl_mw);
        CHECK(q.rho.sum() == cfg.pdl_mw);
    }

    TEST_CASE("allocation rows sum to the AP budget")
    {
        const Network net;
        for (double nu : {0.0, 0.3, 0.6, 1.0, 2.0})
        {
            PrecoderConfig cfg;
            cfg.nu = nu;
            const auto p = apa_power(net.stats, net.coop, cfg);
            for (Eigen::Index l = 0; l < 3; ++l)
            {
                CHECK(p.rho.row(l).sum() == doctest::Approx(cfg.pdl_mw).epsilon(1e-14));
                for (Eigen::Index g = 0; g < 3; ++g)
                    CHECK((p.rho(l, g) > 0.0) == net.coop.serves(std::size_t(l), std::size_t(g)));
            }
        }
    }

    TEST_CASE("direction examples")
    {
        CVec h(3);
        h << cplx(1, 1), cplx(0, -1), cplx(1, 0);
        CHECK(direction(PrecoderVariant::cb, h) == h);
        CHECK(direction(PrecoderVariant::ncb, h).norm() == doctest::Approx(1.0).epsilon(1e-15));

        CVec two = CVec::Zero(4);
        two[1] = cplx(0, 2);
        CHECK(direction(PrecoderVariant::ecb, two).norm() == doctest::Approx(0.5));

        std::size_t events = 0;
        CHECK(direction(PrecoderVariant::ncb, CVec::Zero(3), &events).isZero());
        CHECK(direction(PrecoderVariant::ecb, CVec::Zero(3), &events).isZero());
        CHECK(events == 2);
    }

    TEST_CASE("inverse squared norm factor for a white estimate")
    {
        for (std::size_t N : {2u, 4u, 8u})
        {
            double c = 0;
            const auto stats = white_estimate(N, 1e-3, 0.05, &c);
            CooperationMap coop(1, 1);
            coop.set_serves(0, 0);
            Rng rng(100 + N);
            const RMat f = ecb_offline_factor(stats, coop, 10'000, rng);
            CHECK(f(0, 0) == doctest::Approx(1.0 / (c * (double(N) - 1))).epsilon(0.03));

            // Scaling the estimate covariance by alpha scales the factor by 1/alpha.
            auto scaled = stats;
            scaled.estimate_cov[0] *= 4.0;
            Rng again(100 + N);
            CHECK(ecb_offline_factor(scaled, coop, 10'000, again)(0, 0) == doctest::Approx(f(0, 0) / 4.0).epsilon(1e-12));
        }
    }

    TEST_CASE("inverse squared norm factor agrees with brute-force vector sampling")
    {
        const Network net;
        Rng rng(7);
        const RMat f = ecb_offline_factor(net.stats, net.coop, 20'000, rng);
        for (std::size_t l = 0; l < 3; ++l)
            for (std::size_t g = 0; g < 3; ++g)
            {
                if (!net.coop.serves(l, g))
                {
                    CHECK(f(l, g) == 0.0);
                    continue;
                }
                const CMat F = covariance_sqrt(net.stats.est_cov(l, g));
                Rng draw(1000 + 10 * l + g);
                double acc = 0.0;
                const int n = 20'000;
                CVec z(4);
                for (int i = 0; i < n; ++i)
                {
                    draw.fill_complex_normal(z);
                    acc += 1.0 / (F * z).squaredNorm();
                }
                CHECK(f(l, g) == doctest::Approx(acc / n).epsilon(0.04));
            }
    }

    TEST_CASE("a single antenna cannot use ECB")
    {
        double c = 0;
        const auto stats = white_estimate(1, 1e-3, 0.05, &c);
        CooperationMap coop(1, 1);
        coop.set_serves(0, 0);
        Rng rng(1);
        CHECK_THROWS_AS(ecb_offline_factor(stats, coop, 1000, rng), ConfigError);
    }

    TEST_CASE("normalization denominators")
    {
        double c = 0;
        const auto stats = white_estimate(4, 1e-3, 0.05, &c);
        CHECK(normalization_denominator(PrecoderVariant::ncb, stats, nullptr, 0, 0) == 1.0);
        // Closed form for R = r I: E||hhat||^2 = N (Pp r)^2 / (Pp r + sigma^2).
        CHECK(normalization_denominator(PrecoderVariant::cb, stats, nullptr, 0, 0) ==
              doctest::Approx(std::sqrt(4 * c)).epsilon(1e-12));
        CHECK_THROWS_AS(normalization_denominator(PrecoderVariant::ecb, stats, nullptr, 0, 0), InternalError);
        RMat f(1, 1);
        f << 2.5;
        CHECK(normalization_denominator(PrecoderVariant::ecb, stats, &f, 0, 0) == doctest::Approx(std::sqrt(2.5)));
    }

    TEST_CASE("CB denominator matches the sampled mean squared norm")
    {
        const auto cov = test::covariances(1, 1, {test::exponential_correlation(4, 1e-3, 0.6)});
        const auto plan = make_plan({0}, 1);
        const auto stats = composite_statistics(cov, plan, kPp, 0.05);
        Rng rng(12);
        const ChannelSampler sampler(cov);
        double acc = 0;
        const int n = 100'000;
        for (int i = 0; i < n; ++i)
        {
            const auto real = sampler.sample(rng);
            acc += mmse_estimate(observe_pilots(real, plan, stats, rng), stats, plan).hhat.squaredNorm();
        }
        const double den = normalization_denominator(PrecoderVariant::cb, stats, nullptr, 0, 0);
        CHECK(den * den == doctest::Approx(acc / n).epsilon(0.02));
    }

    TEST_CASE("transmit power contracts")
    {
        const Network net;
        PrecoderConfig base;
        const auto power = apa_power(net.stats, net.coop, base);
        Rng ecb_rng(3);
        const RMat factor = ecb_offline_factor(net.stats, net.coop, 50'000, ecb_rng);

        const DistributedPrecoder cb(net.stats, net.coop, power, {PrecoderVariant::cb}, nullptr);
        const DistributedPrecoder ncb(net.stats, net.coop, power, {PrecoderVariant::ncb}, nullptr);
        const DistributedPrecoder ecb(net.stats, net.coop, power, {PrecoderVariant::ecb}, &factor);
        CHECK_THROWS_AS(DistributedPrecoder(net.stats, net.coop, power, {PrecoderVariant::ecb}, nullptr), InternalError);

        const ChannelSampler sampler(net.cov);
        Rng rng(55);
        RMat cb_sum = RMat::Zero(3, 3), ecb_sum = RMat::Zero(3, 3);
        const int n = 100'000;
        for (int i = 0; i < n; ++i)
        {
            const auto real = sampler.sample(rng);
            const auto est = mmse_estimate(observe_pilots(real, net.plan, net.stats, rng), net.stats, net.plan);
            const auto wc = cb.build(est);
            const auto wn = ncb.build(est);
            const auto we = ecb.build(est);
            for (std::size_t l = 0; l < 3; ++l)
                for (std::size_t g = 0; g < 3; ++g)
                {
                    const double rho = power.rho(l, g);
                    if (!net.coop.serves(l, g))
                    {
                        CHECK(wc.local(l, g).isZero());
                        CHECK(wn.local(l, g).isZero());
                        CHECK(we.local(l, g).isZero());
                        continue;
                    }
                    if (i < 1000)
                        CHECK(wn.local(l, g).squaredNorm() == doctest::Approx(rho).epsilon(1e-12));
                    cb_sum(l, g) += wc.local(l, g).squaredNorm();
                    ecb_sum(l, g) += we.local(l, g).squaredNorm();
                }
        }
        for (std::size_t l = 0; l < 3; ++l)
            for (std::size_t g = 0; g < 3; ++g)
                if (net.coop.serves(l, g))
                {
                    CHECK(cb_sum(l, g) / n == doctest::Approx(power.rho(l, g)).epsilon(0.02));
                    CHECK(ecb_sum(l, g) / n == doctest::Approx(power.rho(l, g)).epsilon(0.02));
                }
    }
}
