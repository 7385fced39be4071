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

#ifndef CACHECOMP_CACHE_HPP
#define CACHECOMP_CACHE_HPP

#include "errors.hpp"
#include "linalg.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <utility>
#include <vector>

namespace cachecomp
{

// File indices are zero-based throughout the library: pi[k] in 0..L-1.
using Urp = std::vector<int>;

/// Euclidean projection onto {q in [0,1]^L : sum F_l q_l <= B_C}.
/// Box clip, then bisection on the knapsack multiplier when it binds.
inline RVec project_cache(const RVec &q_raw, const RVec &F, double B_C)
{
    require(q_raw.size() == F.size(), "project_cache: q and F differ in length");
    require((F.array() > 0).all(), "project_cache: file sizes must be positive");
    require(B_C >= 0, "project_cache: cache size must be nonnegative");
    require(q_raw.allFinite(), "project_cache: non-finite input");
    auto clipped = [&](double nu) { return (q_raw - nu * F).cwiseMax(0.0).cwiseMin(1.0).eval(); };
    RVec q = clipped(0.0);
    if (F.dot(q) <= B_C)
        return q;
    // sum F q(nu) is nonincreasing in nu and zero once nu >= max q_raw / F.
    double lo = 0.0, hi = (q_raw.array() / F.array()).maxCoeff();
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(hi, 1e-300); ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (F.dot(clipped(mid)) > B_C)
            lo = mid;
        else
            hi = mid;
    }
    return clipped(hi);
}

inline RVec project_cache(const RVec &q_raw, const std::vector<double> &F, double B_C)
{
    return project_cache(q_raw, Eigen::Map<const RVec>(F.data(), static_cast<Eigen::Index>(F.size())), B_C);
}

struct QMin
{
    double value = 0.0;
    int user = 0; // smallest k attaining the minimum
};

inline QMin q_min_of(const RVec &q, const Urp &pi)
{
    require(!pi.empty(), "q_min_of: empty request profile");
    QMin r{2.0, 0};
    for (std::size_t k = 0; k < pi.size(); ++k)
    {
        require(pi[k] >= 0 && pi[k] < q.size(), "q_min_of: file index out of range");
        if (q(pi[k]) < r.value)
            r = {q(pi[k]), static_cast<int>(k)};
    }
    return r;
}

/// Number of CoMP slots per frame: q_min * T_S rounded to nearest, ties
/// toward zero.
inline int schedule_count(double q_min, int T_S)
{
    require(T_S >= 1, "schedule_count: T_S must be at least 1");
    const double x = std::clamp(q_min, 0.0, 1.0) * T_S;
    const double f = std::floor(x);
    return static_cast<int>(x - f > 0.5 ? f + 1 : f);
}

class CacheSchedule
{
  public:
    CacheSchedule() = default;

    /// Explicit index set of frame positions (zero-based) carrying S = 1.
    CacheSchedule(int T_S, std::vector<int> positions, double q_min)
        : T_S_(T_S), index_set_(std::move(positions)), q_min_(q_min), mask_(static_cast<std::size_t>(T_S), 0)
    {
        require(T_S >= 1, "CacheSchedule: T_S must be at least 1");
        std::sort(index_set_.begin(), index_set_.end());
        require(std::adjacent_find(index_set_.begin(), index_set_.end()) == index_set_.end(),
                "CacheSchedule: duplicate frame position");
        for (int p : index_set_)
        {
            require(p >= 0 && p < T_S, "CacheSchedule: frame position out of range");
            mask_[static_cast<std::size_t>(p)] = 1;
        }
    }

    int T_S() const { return T_S_; }
    double q_min() const { return q_min_; }
    const std::vector<int> &index_set() const { return index_set_; }

    // Cache state of absolute slot t; the pattern repeats every frame.
    int S(long long t) const
    {
        require(t >= 0, "CacheSchedule: negative slot");
        return mask_[static_cast<std::size_t>(t % T_S_)];
    }

  private:
    int T_S_ = 1;
    std::vector<int> index_set_;
    double q_min_ = 0.0;
    std::vector<char> mask_ = std::vector<char>(1, 0);
};

/// Draws the frame index set uniformly among subsets of size
/// schedule_count(q_min, T_S).
inline CacheSchedule generate_cache_schedule(const RVec &q, const Urp &pi, int T_S, Rng &rng)
{
    const double qm = q_min_of(q, pi).value;
    const int n = schedule_count(qm, T_S);
    std::vector<int> all(static_cast<std::size_t>(T_S));
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> pick;
    pick.reserve(static_cast<std::size_t>(n));
    std::sample(all.begin(), all.end(), std::back_inserter(pick), n, rng);
    return CacheSchedule(T_S, std::move(pick), qm);
}

enum class CacheScheme
{
    mds_random,
    brute_force
};

/// Probability that every BS holds every requested payload.
inline double comp_probability(const RVec &q, const Urp &pi, CacheScheme scheme)
{
    if (scheme == CacheScheme::mds_random)
        return q_min_of(q, pi).value;
    const int K = static_cast<int>(pi.size());
    double p = 1.0;
    for (int f : pi)
    {
        require(f >= 0 && f < q.size(), "comp_probability: file index out of range");
        p *= std::pow(q(f), K);
    }
    return p;
}

inline double mean(const std::vector<double> &x)
{
    require(!x.empty(), "mean of an empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Noisy subgradient of the long-term objective for one interval:
/// e_{pi[k*]} (mean(P~) - mean(P)).
inline RVec noisy_subgradient(const RVec &q, const Urp &pi, const std::vector<double> &P_samples,
                              const std::vector<double> &Pt_samples)
{
    if (P_samples.empty() || Pt_samples.empty())
        throw ContractError("noisy_subgradient: both power sample sets must be nonempty");
    const QMin qm = q_min_of(q, pi);
    RVec g = RVec::Zero(q.size());
    g(pi[static_cast<std::size_t>(qm.user)]) = mean(Pt_samples) - mean(P_samples);
    return g;
}

struct LcState
{
    RVec q;            // current cache control vector
    int interval = 1;  // i, starting at 1
    double sigma0 = 1; // step rule sigma_i = sigma0 / i
    RVec F;
    double B_C = 0;

    static LcState start(const std::vector<double> &F, double B_C, double sigma0)
    {
        LcState s;
        s.F = Eigen::Map<const RVec>(F.data(), static_cast<Eigen::Index>(F.size()));
        s.q = RVec::Zero(s.F.size());
        s.B_C = B_C;
        s.sigma0 = sigma0;
        return s;
    }

    double step() const { return sigma0 / interval; }
};

/// One projected stochastic subgradient step.
inline LcState lc_update(LcState s, const RVec &g)
{
    require(g.size() == s.q.size(), "lc_update: subgradient has the wrong length");
    require(g.allFinite(), "lc_update: non-finite subgradient");
    s.q = project_cache(s.q - s.step() * g, s.F, s.B_C);
    ++s.interval;
    return s;
}

struct Estimate
{
    double value = 0.0;
    double std_error = 0.0;
};

// Conditional mean powers (E[P | pi], E[P~ | pi]).
using PowerOracle = std::function<std::pair<double, double>(const Urp &)>;

/// Monte-Carlo estimate of E[(1 - q_min) a_pi + q_min b_pi] over the given
/// request samples.
inline Estimate expected_objective(const RVec &q, const PowerOracle &oracle, const std::vector<Urp> &samples)
{
    require(!samples.empty(), "expected_objective: no request samples");
    double s = 0, s2 = 0;
    for (const auto &pi : samples)
    {
        const auto [a, b] = oracle(pi);
        const double qm = q_min_of(q, pi).value;
        const double x = (1 - qm) * a + qm * b;
        s += x;
        s2 += x * x;
    }
    const double n = static_cast<double>(samples.size());
    const double m = s / n;
    const double var = n > 1 ? std::max(0.0, (s2 - n * m * m) / (n - 1)) : 0.0;
    return {m, std::sqrt(var / n)};
}

struct LcTraceRow
{
    int interval = 0;
    RVec q;
    double psi = 0.0; // estimate of the objective at q during this interval
};

inline void write_lc_trace(std::ostream &os, const std::vector<LcTraceRow> &rows, int L)
{
    const auto old = os.precision(17);
    os << "interval";
    for (int l = 1; l <= L; ++l)
        os << ",q_" << l;
    os << ",psi\n";
    for (const auto &r : rows)
    {
        os << r.interval;
        for (Eigen::Index l = 0; l < r.q.size(); ++l)
            os << ',' << r.q(l);
        os << ',' << r.psi << '\n';
    }
    os.precision(old);
}

} // namespace cachecomp

#endif
