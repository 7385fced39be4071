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

#ifndef CACHECOMP_STREAMING_HPP
#define CACHECOMP_STREAMING_HPP

#include "cache.hpp"
#include "errors.hpp"

#include <algorithm>
#include <vector>

namespace cachecomp
{

// Relative slack on the playback availability test. Delivered bits come from
// rates that meet their target to solver precision.
inline constexpr double kPlaybackSlack = 1e-6;

/// Parity bits arrive into a reassembly buffer; every T_S*mu*tau bits one
/// segment is decoded into the playback buffer, which drains at mu.
struct UserPlayback
{
    double buffer_bits = 0.0;           // decoded, not yet played
    double segment_progress_bits = 0.0; // parity bits toward the next segment
    long long segments_decoded = 0;
    long long interruptions = 0;
    double decoded_bits = 0.0;
};

struct PlaybackState
{
    std::vector<UserPlayback> users;

    /// One segment of pre-buffered content per user.
    static PlaybackState prebuffered(const std::vector<double> &segment_bits)
    {
        PlaybackState s;
        for (double b : segment_bits)
        {
            require(b >= 0, "PlaybackState: segment size must be nonnegative");
            UserPlayback u;
            u.buffer_bits = b;
            s.users.push_back(u);
        }
        return s;
    }

    static PlaybackState empty(int K)
    {
        PlaybackState s;
        s.users.resize(static_cast<std::size_t>(K));
        return s;
    }

    long long interruptions() const
    {
        long long n = 0;
        for (const auto &u : users)
            n += u.interruptions;
        return n;
    }
};

/// One slot for one user. Segment size is T_S * mu * tau.
inline void step_playback(UserPlayback &u, double delivered_bits, double mu, double tau, int T_S)
{
    require(delivered_bits >= 0, "step_playback: delivered bits must be nonnegative");
    require(mu > 0 && tau > 0 && T_S >= 1, "step_playback: invalid playback parameters");
    const double segment = T_S * mu * tau;
    u.segment_progress_bits += delivered_bits;
    // Floating sums of T_S equal increments can land a hair below the size.
    while (u.segment_progress_bits >= segment * (1 - 1e-12))
    {
        u.segment_progress_bits = std::max(0.0, u.segment_progress_bits - segment);
        ++u.segments_decoded;
        u.decoded_bits = static_cast<double>(u.segments_decoded) * segment;
        u.buffer_bits += segment;
    }
    const double need = mu * tau;
    if (u.buffer_bits >= need * (1 - kPlaybackSlack))
        u.buffer_bits = std::max(0.0, u.buffer_bits - need);
    else
        ++u.interruptions;
}

inline PlaybackState step_playback(PlaybackState s, const std::vector<double> &delivered_bits,
                                   const std::vector<double> &mu, double tau, int T_S)
{
    require(delivered_bits.size() == s.users.size() && mu.size() == s.users.size(),
            "step_playback: vector lengths differ from the user count");
    for (std::size_t k = 0; k < s.users.size(); ++k)
        step_playback(s.users[k], delivered_bits[k], mu[k], tau, T_S);
    return s;
}

enum class BackhaulScheme
{
    proposed,
    coordinated,
    conventional_comp
};

/// Slots all have the same duration, so time averages are taken over
/// per-slot rates. Summing rates instead of bits keeps integer-valued loads
/// exact.
struct BackhaulMeter
{
    double online_bits = 0.0;
    double cache_update_bits = 0.0;
    double elapsed = 0.0; // seconds
    double online_rate_sum = 0.0;
    double cache_rate_sum = 0.0;
    long long slots = 0;
    double tau = 0.0;

    double total_bits() const { return online_bits + cache_update_bits; }
    double average_bps() const { return online_bps() + cache_update_bps(); }
    double online_bps() const { return slots > 0 ? online_rate_sum / static_cast<double>(slots) : 0.0; }
    double cache_update_bps() const { return slots > 0 ? cache_rate_sum / static_cast<double>(slots) : 0.0; }
};

/// What one slot needs for backhaul accounting.
struct BackhaulSlot
{
    int S = 0;
    std::vector<double> stream_rates; // mu of each user's requested file, bits/s
    double tau = 0.0;
    // Bits per second spent refreshing BS caches: K * sum_l q_l F_l / T_C.
    double cache_update_bps = 0.0;
};

inline double cache_update_rate(const RVec &q, const std::vector<double> &F, int K, double T_C)
{
    require(q.size() == static_cast<Eigen::Index>(F.size()), "cache_update_rate: q and F differ in length");
    require(T_C > 0, "cache_update_rate: T_C must be positive");
    double s = 0;
    for (std::size_t l = 0; l < F.size(); ++l)
        s += q(static_cast<Eigen::Index>(l)) * F[l];
    return K * s / T_C;
}

/// Adds one slot. Coordinated MIMO ships each payload to its own BS; full
/// CoMP ships every payload to every BS; the proposed scheme ships nothing
/// on cached (S = 1) slots.
inline BackhaulMeter account_backhaul(BackhaulMeter m, const BackhaulSlot &slot, BackhaulScheme scheme)
{
    require(slot.tau > 0, "account_backhaul: tau must be positive");
    require(m.slots == 0 || slot.tau == m.tau, "account_backhaul: slot duration changed");
    double rate = 0;
    for (double r : slot.stream_rates)
        rate += r;
    const double K = static_cast<double>(slot.stream_rates.size());
    switch (scheme)
    {
    case BackhaulScheme::proposed:
        rate = slot.S == 0 ? rate : 0.0;
        break;
    case BackhaulScheme::coordinated:
        break;
    case BackhaulScheme::conventional_comp:
        rate *= K;
        break;
    }
    m.online_rate_sum += rate;
    m.cache_rate_sum += slot.cache_update_bps;
    m.online_bits += rate * slot.tau;
    m.cache_update_bits += slot.cache_update_bps * slot.tau;
    m.elapsed += slot.tau;
    m.tau = slot.tau;
    ++m.slots;
    return m;
}

/// Monte-Carlo value of E[K (1 - q_min) mu0] + K sum_l q_l F_l / T_C.
inline double backhaul_rate_formula(const RVec &q, const std::vector<Urp> &urp_samples, double mu0,
                                    const std::vector<double> &F, double T_C, int K)
{
    require(!urp_samples.empty(), "backhaul_rate_formula: no request samples");
    double s = 0;
    for (const auto &pi : urp_samples)
        s += K * (1.0 - q_min_of(q, pi).value) * mu0;
    return s / static_cast<double>(urp_samples.size()) + cache_update_rate(q, F, K, T_C);
}

} // namespace cachecomp

#endif
