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

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <type_traits>

#include "cfmc/types.hpp"

namespace cfmc
{
    // One element of a seed derivation path: either an index or a tag.
    // Integers and strings hash into disjoint domains, so {1} and {"1"} differ.
    class SeedLabel
    {
    public:
        template <typename T>
            requires std::is_integral_v<T>
        constexpr SeedLabel(T index) : value_(static_cast<std::uint64_t>(index)), is_text_(false) {}
        SeedLabel(std::string_view text);
        SeedLabel(const char *text) : SeedLabel(std::string_view(text)) {}

        std::uint64_t value() const noexcept { return value_; }
        bool is_text() const noexcept { return is_text_; }

    private:
        std::uint64_t value_;
        bool is_text_;
    };

    std::uint64_t splitmix64(std::uint64_t x) noexcept;

    // Deterministic child seed for the stream named by `labels` under `master`.
    std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<SeedLabel> labels) noexcept;

    // Seeded random stream. Wraps mt19937_64 with the handful of draws the
    // simulator needs; all of them are reproducible for a given seed.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        double uniform(double lo, double hi)
        {
            return std::uniform_real_distribution<double>(lo, hi)(engine_);
        }
        std::size_t index(std::size_t n)
        {
            return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
        }
        double normal() { return normal_(engine_); }
        double normal(double mean, double std) { return mean + std * normal_(engine_); }

        // CN(0, 1): independent real and imaginary parts of variance 1/2.
        cplx complex_normal()
        {
            constexpr double s = 0.70710678118654752440;
            const double re = normal_(engine_);
            const double im = normal_(engine_);
            return {s * re, s * im};
        }

        void fill_complex_normal(Eigen::Ref<CVec> out)
        {
            for (Eigen::Index i = 0; i < out.size(); ++i)
                out[i] = complex_normal();
        }

        std::mt19937_64 &engine() noexcept { return engine_; }

    private:
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
    };
}
