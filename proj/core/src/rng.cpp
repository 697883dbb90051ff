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

#include "cfmc/rng.hpp"

namespace cfmc
{
    namespace
    {
        constexpr std::uint64_t kTextDomain = 0x9e6c63d0676a9a99ULL;
        constexpr std::uint64_t kIndexDomain = 0x2545f4914f6cdd1dULL;

        std::uint64_t fnv1a(std::string_view text) noexcept
        {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            for (unsigned char c : text)
            {
                h ^= c;
                h *= 0x100000001b3ULL;
            }
            return h;
        }
    }

    SeedLabel::SeedLabel(std::string_view text) : value_(fnv1a(text)), is_text_(true) {}

    std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<SeedLabel> labels) noexcept
    {
        std::uint64_t h = splitmix64(master);
        std::uint64_t position = 0;
        for (const auto &label : labels)
        {
            const std::uint64_t domain = label.is_text() ? kTextDomain : kIndexDomain;
            // Each step is a bijection of h for fixed label, and the label enters
            // through a second full-avalanche mix before combining.
            h = splitmix64(h ^ splitmix64(label.value() ^ domain ^ (++position * 0xd6e8feb86659fd93ULL)));
        }
        return splitmix64(h ^ static_cast<std::uint64_t>(labels.size()));
    }
}
