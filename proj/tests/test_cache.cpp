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

#include "cachecomp/cache.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <sstream>

using namespace cachecomp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

RVec vec(std::initializer_list<double> x)
{
    RVec v(static_cast<Eigen::Index>(x.size()));
    Eigen::Index i = 0;
    for (double a : x)
        v(i++) = a;
    return v;
}

// Every request profile of K users over L files with its probability.
std::vector<std::pair<Urp, double>> enumerate_profiles(const std::vector<double> &rho, int K)
{
    const int L = static_cast<int>(rho.size());
    std::vector<std::pair<Urp, double>> out;
    Urp pi(static_cast<std::size_t>(K), 0);
    while (true)
    {
        double p = 1;
        for (int f : pi)
            p *= rho[static_cast<std::size_t>(f)];
        out.emplace_back(pi, p);
        int k = 0;
        while (k < K && ++pi[static_cast<std::size_t>(k)] == L)
            pi[static_cast<std::size_t>(k++)] = 0;
        if (k == K)
            break;
    }
    return out;
}

double phi(const RVec &q, const Urp &pi, double a, double b)
{
    const double m = q_min_of(q, pi).value;
    return (1 - m) * a + m * b;
}

} // namespace

TEST_CASE("cache projection")
{
    const RVec F = vec({1.0, 2.0, 0.5});
    SECTION("feasible points are fixed")
    {
        const RVec q = vec({0.2, 0.3, 0.4});
        CHECK(project_cache(q, F, 2.0) == q);
    }
    SECTION("inactive knapsack reduces to a box clip")
    {
        const RVec q = vec({1.7, -0.3, 0.4});
        CHECK(project_cache(q, F, 10.0) == vec({1.0, 0.0, 0.4}));
    }
    SECTION("two equal files sharing one unit")
    {
        const RVec p = project_cache(vec({1, 1}), vec({1, 1}), 1.0);
        CHECK_THAT(p(0), WithinAbs(0.5, 1e-12));
        CHECK_THAT(p(1), WithinAbs(0.5, 1e-12));
        // Dense grid oracle.
        double best = 1e9;
        RVec arg(2);
        for (int i = 0; i <= 100; ++i)
            for (int j = 0; j <= 100; ++j)
            {
                const RVec g = vec({i / 100.0, j / 100.0});
                if (g.sum() > 1.0 + 1e-12)
                    continue;
                const double d = (g - vec({1, 1})).squaredNorm();
                if (d < best)
                {
                    best = d;
                    arg = g;
                }
            }
        CHECK((arg - p).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("no grid point is closer")
    {
        Rng r(3);
        std::uniform_real_distribution<double> U(-0.5, 1.5);
        for (int t = 0; t < 20; ++t)
        {
            const RVec raw = vec({U(r), U(r), U(r)});
            const double B_C = 0.3 + 0.1 * t;
            const RVec p = project_cache(raw, F, B_C);
            CHECK(F.dot(p) <= B_C + 1e-12);
            CHECK((p.array() >= 0).all());
            CHECK((p.array() <= 1).all());
            const double dp = (raw - p).norm();
            for (int i = 0; i <= 20; ++i)
                for (int j = 0; j <= 20; ++j)
                    for (int k = 0; k <= 20; ++k)
                    {
                        const RVec g = vec({i * 0.05, j * 0.05, k * 0.05});
                        if (F.dot(g) <= B_C)
                            CHECK(dp <= (raw - g).norm() + 1e-12);
                    }
        }
    }
    SECTION("zero cache")
    {
        CHECK(project_cache(vec({0.4, 0.9, 1.0}), F, 0.0).isZero(0.0));
    }
}

TEST_CASE("q_min and the minimizing user")
{
    CHECK(q_min_of(RVec::Constant(4, 0.5), {0, 1, 2, 3}).value == 0.5);
    CHECK(q_min_of(vec({0.3, 0.0, 1.0}), {0, 1}).value == 0.0);
    const auto r = q_min_of(vec({0.2, 0.8}), {1, 0, 1});
    CHECK(r.value == 0.2);
    CHECK(r.user == 1);
    CHECK(q_min_of(vec({0.5, 0.5}), {1, 0}).user == 0);
    CHECK_THROWS_AS(q_min_of(vec({0.5}), {1}), ContractError);
}

TEST_CASE("cache schedule")
{
    SECTION("frame pattern from an explicit index set")
    {
        const CacheSchedule s(8, {0, 2, 5}, 3.0 / 8.0);
        std::vector<int> pattern;
        for (int t = 0; t < 8; ++t)
            pattern.push_back(s.S(t));
        CHECK(pattern == std::vector<int>{1, 0, 1, 0, 0, 1, 0, 0});
        CHECK(s.S(8) == 1);
        CHECK(s.S(13) == 1);
        CHECK(schedule_count(3.0 / 8.0, 8) == 3);
    }
    SECTION("empty and full index sets")
    {
        Rng r(1);
        const auto s0 = generate_cache_schedule(vec({0.0, 1.0}), {0, 1}, 10, r);
        const auto s1 = generate_cache_schedule(vec({1.0, 1.0}), {0, 1}, 10, r);
        for (int t = 0; t < 30; ++t)
        {
            CHECK(s0.S(t) == 0);
            CHECK(s1.S(t) == 1);
        }
    }
    SECTION("rounding ties toward zero")
    {
        CHECK(schedule_count(0.25, 10) == 2); // 2.5
        CHECK(schedule_count(0.35, 10) == 3); // 3.5 in binary is just below
        CHECK(schedule_count(0.26, 10) == 3);
        CHECK(schedule_count(0.05, 10) == 0);
        CHECK(schedule_count(0.5, 1) == 0);
        CHECK(schedule_count(1.0, 7) == 7);
    }
    SECTION("sliding windows hold the exact count")
    {
        Rng r(2);
        for (double qm : {0.0, 0.13, 0.37, 0.5, 0.81, 1.0})
        {
            const int T_S = 16;
            const auto s = generate_cache_schedule(vec({qm, 1.0}), {0, 1, 0}, T_S, r);
            const int want = schedule_count(qm, T_S);
            CHECK(static_cast<int>(s.index_set().size()) == want);
            std::vector<int> S;
            for (int t = 0; t < 100 * T_S; ++t)
                S.push_back(s.S(t));
            int window = std::accumulate(S.begin(), S.begin() + T_S, 0);
            CHECK(window == want);
            for (std::size_t t = T_S; t < S.size(); ++t)
            {
                window += S[t] - S[t - T_S];
                CHECK(window == want);
            }
        }
    }
    SECTION("subsets are drawn uniformly")
    {
        Rng r(4);
        std::map<std::vector<int>, int> counts;
        const int n = 60000;
        for (int t = 0; t < n; ++t)
            ++counts[generate_cache_schedule(vec({0.5}), {0}, 4, r).index_set()];
        CHECK(counts.size() == 6u);
        for (const auto &[set, c] : counts)
            CHECK(std::abs(c - n / 6.0) < 4 * std::sqrt(n / 6.0));
    }
    CHECK_THROWS_AS(CacheSchedule(4, {1, 1}, 0.5), ContractError);
    CHECK_THROWS_AS(CacheSchedule(4, {4}, 0.25), ContractError);
}

TEST_CASE("CoMP probability under the two cache schemes")
{
    const RVec q = RVec::Constant(3, 0.5);
    const Urp pi{0, 1, 2, 0};
    CHECK(comp_probability(q, pi, CacheScheme::brute_force) == std::pow(0.5, 16));
    CHECK(comp_probability(q, pi, CacheScheme::brute_force) < 0.00002);
    CHECK_THAT(comp_probability(q, pi, CacheScheme::brute_force), WithinRel(1.526e-5, 1e-3));
    CHECK(comp_probability(q, pi, CacheScheme::mds_random) == 0.5);
    const RVec z = vec({0.0, 0.9, 0.9});
    CHECK(comp_probability(z, {0, 1}, CacheScheme::brute_force) == 0.0);
    CHECK(comp_probability(z, {0, 1}, CacheScheme::mds_random) == 0.0);
}

TEST_CASE("noisy subgradient")
{
    const RVec q = vec({0.7, 0.4, 0.9});
    SECTION("equal means")
    {
        CHECK(noisy_subgradient(q, {1, 1}, {3.0, 5.0}, {4.0}).isZero(0.0));
    }
    SECTION("indicator structure")
    {
        const RVec g = noisy_subgradient(q, {1, 1}, {5.0, 7.0}, {2.0, 3.0});
        CHECK(g(0) == 0.0);
        CHECK(g(2) == 0.0);
        CHECK(g(1) == 2.5 - 6.0);
    }
    SECTION("empty sample set")
    {
        CHECK_THROWS_AS(noisy_subgradient(q, {0}, {}, {1.0}), ContractError);
        CHECK_THROWS_AS(noisy_subgradient(q, {0}, {1.0}, {}), ContractError);
    }
    SECTION("unbiased for the expected objective")
    {
        const std::vector<double> rho{0.5, 0.3, 0.2};
        const int K = 2;
        const RVec q0 = vec({0.6, 0.3, 0.1}); // distinct entries: psi is differentiable
        // Per-profile powers with b < a.
        auto ab = [](const Urp &pi) {
            const double a = 10.0 + 2.0 * pi[0] + pi[1];
            return std::pair{a, 0.6 * a};
        };
        const auto profiles = enumerate_profiles(rho, K);
        auto psi = [&](const RVec &x) {
            double s = 0;
            for (const auto &[pi, p] : profiles)
            {
                const auto [a, b] = ab(pi);
                s += p * phi(x, pi, a, b);
            }
            return s;
        };
        RVec fd(3);
        for (int l = 0; l < 3; ++l)
        {
            RVec a = q0, b = q0;
            a(l) += 1e-6;
            b(l) -= 1e-6;
            fd(l) = (psi(a) - psi(b)) / 2e-6;
        }
        std::discrete_distribution<int> D(rho.begin(), rho.end());
        auto run = [&](int n, std::uint64_t seed, RVec &sd) {
            Rng r(seed);
            RVec s = RVec::Zero(3), s2 = RVec::Zero(3);
            for (int t = 0; t < n; ++t)
            {
                const Urp pi{D(r), D(r)};
                const auto [a, b] = ab(pi);
                const RVec g = noisy_subgradient(q0, pi, {a}, {b});
                s += g;
                s2 += g.cwiseProduct(g);
            }
            const RVec m = s / n;
            sd = ((s2 / n - m.cwiseProduct(m)) / n).cwiseSqrt();
            return m;
        };
        RVec se;
        const RVec m4 = run(10000, 5, se);
        for (int l = 0; l < 3; ++l)
            CHECK(std::abs(m4(l) - fd(l)) <= 3 * se(l));
        const RVec m5 = run(100000, 6, se);
        CHECK((m5 - fd).norm() <= 0.02 * fd.norm());
        // The subgradient inequality holds for every realization.
        Rng r(7);
        std::uniform_real_distribution<double> U(0, 1);
        for (const auto &[pi, p] : profiles)
        {
            const auto [a, b] = ab(pi);
            const RVec g = noisy_subgradient(q0, pi, {a}, {b});
            for (int t = 0; t < 50; ++t)
            {
                const RVec q1 = vec({U(r), U(r), U(r)});
                CHECK(phi(q1, pi, a, b) >= phi(q0, pi, a, b) + g.dot(q1 - q0) - 1e-12);
            }
        }
    }
}

TEST_CASE("per-realization convexity in the cache vector")
{
    Rng r(8);
    std::uniform_real_distribution<double> U(0, 1);
    const RVec F = vec({1.0, 1.0, 1.0});
    for (int t = 0; t < 200; ++t)
    {
        const Urp pi{t % 3, (t / 3) % 3};
        const double a = 5 + U(r), b = a * U(r);
        const RVec q1 = project_cache(vec({U(r), U(r), U(r)}), F, 1.5);
        const RVec q2 = project_cache(vec({U(r), U(r), U(r)}), F, 1.5);
        for (int i = 1; i <= 9; ++i)
        {
            const double s = i / 10.0;
            CHECK(phi(s * q1 + (1 - s) * q2, pi, a, b) <= s * phi(q1, pi, a, b) + (1 - s) * phi(q2, pi, a, b) + 1e-12);
        }
    }
}

TEST_CASE("LC update")
{
    auto s = LcState::start({1.0, 1.0, 1.0}, 1.0, 0.5);
    CHECK(s.q.isZero(0.0));
    CHECK(s.interval == 1);
    CHECK(s.step() == 0.5);
    const auto s1 = lc_update(s, vec({-1.0, 0.0, 0.0}));
    CHECK(s1.interval == 2);
    CHECK_THAT(s1.q(0), WithinAbs(0.5, 1e-15));
    CHECK(lc_update(s1, RVec::Zero(3)).q == s1.q);
    auto s0 = s1;
    s0.sigma0 = 0.0;
    CHECK(lc_update(s0, vec({-3.0, 1.0, 2.0})).q == s1.q);
    CHECK_THROWS_AS(lc_update(s, vec({std::nan(""), 0, 0})), ContractError);

    SECTION("converges on a two-file instance")
    {
        // pi identical for both users with probability rho; b < a.
        const std::vector<double> rho{0.7, 0.3};
        const std::vector<double> a{10, 8}, b{4, 6};
        auto st = LcState::start({1.0, 1.0}, 1.0, 2.0);
        std::discrete_distribution<int> D(rho.begin(), rho.end());
        Rng r(9);
        for (int i = 0; i < 3000; ++i)
        {
            const int f = D(r);
            st = lc_update(st, noisy_subgradient(st.q, {f, f}, {a[f]}, {b[f]}));
        }
        // psi(q) = sum_f rho_f ((1 - q_f) a_f + q_f b_f) with q_0 + q_1 <= 1:
        // linear, so the optimum puts everything on the larger rho_f (a_f - b_f).
        CHECK_THAT(st.q(0), WithinAbs(1.0, 0.02));
        CHECK_THAT(st.q(1), WithinAbs(0.0, 0.02));
    }
}

TEST_CASE("expected objective")
{
    auto oracle = [](const Urp &pi) { return std::pair{10.0 + pi[0], 4.0 + pi[0]}; };
    const std::vector<Urp> samples{{0, 1}, {1, 1}, {1, 0}};
    CHECK_THAT(expected_objective(RVec::Zero(2), oracle, samples).value, WithinRel(32.0 / 3.0, 1e-14));
    CHECK_THAT(expected_objective(RVec::Ones(2), oracle, samples).value, WithinRel(14.0 / 3.0, 1e-14));
    auto fixed = [](const Urp &) { return std::pair{10.0, 4.0}; };
    const auto e = expected_objective(vec({0.25, 0.9}), fixed, {{0, 1}});
    CHECK_THAT(e.value, WithinRel(8.5, 1e-14));
    CHECK(e.std_error == 0.0);
    CHECK(expected_objective(vec({0.25, 0.9}), fixed, {{0, 1}, {1, 1}}).std_error > 0.0);
}

TEST_CASE("LC trace CSV")
{
    std::ostringstream os;
    write_lc_trace(os, {{1, vec({0.0, 0.0}), 3.5}, {2, vec({0.25, 0.0}), 3.25}}, 2);
    CHECK(os.str() == "interval,q_1,q_2,psi\n1,0,0,3.5\n2,0.25,0,3.25\n");
}
