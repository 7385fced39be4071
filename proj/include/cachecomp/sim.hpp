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

#ifndef CACHECOMP_SIM_HPP
#define CACHECOMP_SIM_HPP

#include "cache.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "streaming.hpp"
#include "wmmse.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace cachecomp
{

struct RequestProfile
{
    Urp pi;
    long long interval_start = 0; // first slot
    long long interval_end = 0;   // one past the last slot
};

/// K independent categorical draws from rho (zero-based file indices).
inline Urp draw_urp(const std::vector<double> &rho, int K, Rng &rng)
{
    require(!rho.empty() && K >= 1, "draw_urp: empty popularity vector or no users");
    std::discrete_distribution<int> D(rho.begin(), rho.end());
    Urp pi(static_cast<std::size_t>(K));
    for (auto &f : pi)
        f = D(rng);
    return pi;
}

/// Request profile of URP interval i. Depends only on (seed, i), so runs of
/// different schemes see the same requests.
inline RequestProfile request_profile(const SystemConfig &cfg, long long interval)
{
    auto rng = rng::make(cfg.rng_seed, rng::Stream::urp, {static_cast<std::uint64_t>(interval)});
    RequestProfile p;
    p.pi = draw_urp(cfg.rho, cfg.K, rng);
    p.interval_start = interval * cfg.urp_hold;
    p.interval_end = p.interval_start + cfg.urp_hold;
    return p;
}

enum class Scheme
{
    proposed,          // opportunistic CoMP with cache control
    coordinated,       // S = 0 always
    conventional_comp, // CoMP every slot, payload to every BS
    uniform_caching,   // fixed q_l = B_C / sum F
    fixed_cache        // fixed, caller-supplied q
};

inline std::string to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::proposed:
        return "proposed";
    case Scheme::coordinated:
        return "coordinated";
    case Scheme::conventional_comp:
        return "conventional_comp";
    case Scheme::uniform_caching:
        return "uniform_caching";
    case Scheme::fixed_cache:
        return "fixed_cache";
    }
    return "unknown";
}

struct SlotMetrics
{
    long long t = 0;
    long long interval = 0;
    int S = 0;
    double sum_power = 0.0;
    std::vector<double> rates;
    std::vector<double> buffers;
    double backhaul_bits = 0.0;
};

struct SpStats
{
    long long solves = 0;
    long long iterations = 0;
    int max_iterations = 0;
    long long not_converged = 0; // hit the iteration cap

    void add(const WmmseState &st)
    {
        ++solves;
        iterations += st.iteration;
        max_iterations = std::max(max_iterations, st.iteration);
        if (!st.converged)
            ++not_converged;
    }
    double mean_iterations() const { return solves ? static_cast<double>(iterations) / solves : 0.0; }
};

struct ExperimentResult
{
    std::string scheme;
    int K = 0;
    int L = 0;
    std::uint64_t seed = 0;
    std::string config_snapshot;
    long long slots = 0;
    double avg_power_w = 0.0;
    double avg_power_db = -std::numeric_limits<double>::infinity(); // 10 log10 of the average, in dBW
    double power_std_error = 0.0;
    double avg_backhaul_bps = 0.0;
    double online_backhaul_bps = 0.0;
    double cache_update_bps = 0.0;
    double comp_fraction = 0.0;
    long long interruptions = 0;
    std::vector<SlotMetrics> metrics;
    std::vector<LcTraceRow> lc_trace;
    RVec final_q;
    SpStats sp;
};

namespace sim_detail
{

inline SpOptions sp_options(const SystemConfig &cfg)
{
    SpOptions o;
    o.tol = cfg.sp_tol;
    o.max_iter = cfg.sp_max_iter;
    o.dual.slack_tol = cfg.dual_tol;
    o.dual.max_iter = cfg.dual_max_iter;
    return o;
}

inline std::string slot_context(long long t) { return "slot " + std::to_string(t) + ": "; }

} // namespace sim_detail

/// Slot-level simulation over `horizon` slots. Every slot draws fresh CSI and
/// solves the coordinated problem; slots with S = 1 also solve the CoMP
/// problem from the embedded coordinated solution. Under Scheme::proposed the
/// cache vector is updated at every URP interval boundary from the observed
/// powers.
inline ExperimentResult run_experiment(const SystemConfig &cfg, long long horizon, Scheme scheme,
                                       const std::optional<RVec> &fixed_q = std::nullopt)
{
    cfg.validate();
    require(horizon >= 0, "run_experiment: negative horizon");
    const int K = cfg.K, L = cfg.L;
    const Topology topo = build_topology(cfg, cfg.placement);
    const SpOptions spo = sim_detail::sp_options(cfg);

    ExperimentResult res;
    res.scheme = to_string(scheme);
    res.K = K;
    res.L = L;
    res.seed = cfg.rng_seed;
    res.config_snapshot = to_kv(cfg);

    LcState lc = LcState::start(cfg.F, cfg.B_C, cfg.lc_step0);
    RVec q = RVec::Zero(L);
    if (scheme == Scheme::fixed_cache)
    {
        require(fixed_q.has_value() && fixed_q->size() == L, "run_experiment: fixed cache vector of length L required");
        q = *fixed_q;
        require((q.array() >= 0).all() && (q.array() <= 1).all(), "run_experiment: fixed cache entries outside [0, 1]");
        const RVec F = Eigen::Map<const RVec>(cfg.F.data(), L);
        require(F.dot(q) <= cfg.B_C * (1 + 1e-12) + 1e-9, "run_experiment: fixed cache vector exceeds B_C");
    }
    else if (scheme == Scheme::uniform_caching)
    {
        double total = 0;
        for (double f : cfg.F)
            total += f;
        q = RVec::Constant(L, std::min(1.0, cfg.B_C / total));
    }
    const bool caching = scheme == Scheme::proposed || scheme == Scheme::uniform_caching || scheme == Scheme::fixed_cache;
    const BackhaulScheme bscheme = caching ? BackhaulScheme::proposed
                                   : scheme == Scheme::coordinated ? BackhaulScheme::coordinated
                                                                   : BackhaulScheme::conventional_comp;

    PlaybackState play = PlaybackState::empty(K);
    Urp prev_pi;
    BackhaulMeter meter;
    double scale = 1.0;
    bool scale_set = !cfg.lc_step_normalize;
    double psum = 0, psum2 = 0;
    long long comp_slots = 0;

    for (long long i = 0; i * cfg.urp_hold < horizon; ++i)
    {
        const RequestProfile prof = request_profile(cfg, i);
        const long long end = std::min(prof.interval_end, horizon);
        std::vector<double> mu(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k)
            mu[static_cast<std::size_t>(k)] = cfg.mu[static_cast<std::size_t>(prof.pi[static_cast<std::size_t>(k)])];
        const RateConstraint rc(mu, cfg.B_W);

        // A user whose request changed starts a new stream with one segment
        // pre-buffered.
        for (int k = 0; k < K; ++k)
        {
            const auto kk = static_cast<std::size_t>(k);
            if (prev_pi.empty() || prev_pi[kk] != prof.pi[kk])
            {
                const long long lost = play.users[kk].interruptions;
                play.users[kk] = UserPlayback{};
                play.users[kk].buffer_bits = cfg.T_S * mu[kk] * cfg.tau;
                play.users[kk].interruptions = lost;
            }
        }
        prev_pi = prof.pi;

        CacheSchedule sched;
        if (caching)
        {
            auto srng = rng::make(cfg.rng_seed, rng::Stream::schedule, {static_cast<std::uint64_t>(i)});
            sched = generate_cache_schedule(q, prof.pi, cfg.T_S, srng);
        }
        const double cache_bps = caching ? cache_update_rate(q, cfg.F, K, cfg.T_C) : 0.0;

        std::vector<double> P_samples, Pt_samples;
        double coord_sum = 0;
        double rec_sum = 0;
        ChannelState H_last;
        PrecoderSet V_last;

        for (long long t = prof.interval_start; t < end; ++t)
        {
            const ChannelState H = draw_channel(topo, cfg, t);
            WmmseState st;
            try
            {
                st = algorithm_sp(H, rc, Mode::coordinated, std::nullopt, spo);
            }
            catch (const InfeasibleError &e)
            {
                throw InfeasibleError(sim_detail::slot_context(t) + e.what());
            }
            res.sp.add(st);
            coord_sum += st.power();
            // The coordinated solve runs every slot as the CoMP warm start,
            // so its power is a free sample for the subgradient.
            P_samples.push_back(st.power());

            int S = 0;
            if (caching)
                S = sched.S(t);
            else if (scheme == Scheme::conventional_comp)
                S = 1;

            double P = st.power();
            RVec R;
            if (S == 1)
            {
                const WmmseState ct =
                    algorithm_sp(H, rc, Mode::comp, comp_initial_point(st.V, cfg.N_T, cfg.N_R), spo);
                res.sp.add(ct);
                P = ct.power();
                R = user_rates(H, ct.V, cfg.B_W);
                Pt_samples.push_back(P);
                ++comp_slots;
            }
            else
                R = user_rates(H, st.V, cfg.B_W);
            for (int k = 0; k < K; ++k)
                if (R(k) < mu[static_cast<std::size_t>(k)] * (1 - 1e-3))
                    throw ConvergenceError(sim_detail::slot_context(t) + "user " + std::to_string(k + 1) +
                                           " rate below target after precoding");

            SlotMetrics sm;
            sm.t = t;
            sm.interval = i;
            sm.S = S;
            sm.sum_power = P;
            sm.rates.assign(R.data(), R.data() + R.size());
            std::vector<double> delivered(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k)
                delivered[static_cast<std::size_t>(k)] = R(k) * cfg.tau;
            play = step_playback(std::move(play), delivered, mu, cfg.tau, cfg.T_S);
            for (const auto &u : play.users)
                sm.buffers.push_back(u.buffer_bits);
            const double before = meter.total_bits();
            meter = account_backhaul(meter, BackhaulSlot{S, mu, cfg.tau, cache_bps}, bscheme);
            sm.backhaul_bits = meter.total_bits() - before;
            res.metrics.push_back(std::move(sm));

            rec_sum += P;
            psum += P;
            psum2 += P * P;
            H_last = H;
            V_last = st.V;
        }

        const long long n = end - prof.interval_start;
        if (scheme == Scheme::proposed)
        {
            if (!scale_set)
            {
                scale = coord_sum / static_cast<double>(n);
                if (!(scale > 0))
                    scale = 1.0;
                scale_set = true;
            }
            res.lc_trace.push_back(LcTraceRow{static_cast<int>(i + 1), q, rec_sum / static_cast<double>(n)});
            // No CoMP slot in this interval: one dedicated CoMP solve on the
            // last slot, kept out of the recorded metrics.
            if (Pt_samples.empty())
            {
                const WmmseState ct =
                    algorithm_sp(H_last, rc, Mode::comp, comp_initial_point(V_last, cfg.N_T, cfg.N_R), spo);
                res.sp.add(ct);
                Pt_samples.push_back(ct.power());
            }
            const RVec g = noisy_subgradient(q, prof.pi, P_samples, Pt_samples) / scale;
            lc = lc_update(lc, g);
            q = lc.q;
        }
    }

    res.slots = horizon;
    if (horizon > 0)
    {
        const double nn = static_cast<double>(horizon);
        res.avg_power_w = psum / nn;
        res.avg_power_db = res.avg_power_w > 0 ? 10.0 * std::log10(res.avg_power_w)
                                               : -std::numeric_limits<double>::infinity();
        const double var = horizon > 1 ? std::max(0.0, (psum2 - nn * res.avg_power_w * res.avg_power_w) / (nn - 1)) : 0.0;
        res.power_std_error = std::sqrt(var / nn);
        res.comp_fraction = static_cast<double>(comp_slots) / nn;
    }
    res.avg_backhaul_bps = meter.average_bps();
    res.online_backhaul_bps = meter.online_bps();
    res.cache_update_bps = meter.cache_update_bps();
    res.interruptions = play.interruptions();
    res.final_q = q;
    return res;
}

inline ExperimentResult run_mixed_timescale(const SystemConfig &cfg, long long horizon)
{
    return run_experiment(cfg, horizon, Scheme::proposed);
}

enum class Baseline
{
    coordinated,
    conventional_comp,
    uniform_caching
};

inline ExperimentResult run_baseline(const SystemConfig &cfg, Baseline b, long long horizon)
{
    switch (b)
    {
    case Baseline::coordinated:
        return run_experiment(cfg, horizon, Scheme::coordinated);
    case Baseline::conventional_comp:
        return run_experiment(cfg, horizon, Scheme::conventional_comp);
    case Baseline::uniform_caching:
        return run_experiment(cfg, horizon, Scheme::uniform_caching);
    }
    throw ContractError("run_baseline: unknown baseline");
}

inline ExperimentResult run_baseline(const SystemConfig &cfg, Baseline b)
{
    return run_baseline(cfg, b, cfg.horizon_slots);
}

inline ExperimentResult run_mixed_timescale(const SystemConfig &cfg)
{
    return run_mixed_timescale(cfg, cfg.horizon_slots);
}

} // namespace cachecomp

#endif
