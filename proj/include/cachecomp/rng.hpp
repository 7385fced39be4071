// SPDX-License-Identifier: Apache-2.0
//
// cachecomp: cache-induced opportunistic CoMP simulation and optimization
// Copyright (C) 2026 The cachecomp authors
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

#ifndef CACHECOMP_RNG_HPP
#define CACHECOMP_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cachecomp
{

using Rng = std::mt19937_64;

namespace rng
{

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream tags keep independent consumers of the master seed apart.
enum class Stream : std::uint64_t
{
    topology = 1,
    channel = 2,
    urp = 3,
    schedule = 4,
    init = 5,
    sweep = 6,
};

// Derives a seed from (master, stream, coordinates...). The result depends only
// on its arguments, so per-slot or per-link streams can be generated in any
// order and still match a sequential run bit for bit.
inline std::uint64_t derive(std::uint64_t master, Stream s, std::initializer_list<std::uint64_t> coords = {})
{
    std::uint64_t h = splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(s)));
    for (auto c : coords)
        h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    return h;
}

inline Rng make(std::uint64_t master, Stream s, std::initializer_list<std::uint64_t> coords = {})
{
    return Rng(derive(master, s, coords));
}

} // namespace rng
} // namespace cachecomp

#endif
