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

#ifndef CACHECOMP_VALIDATE_HPP
#define CACHECOMP_VALIDATE_HPP

#include "cache.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "wmmse.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace cachecomp
{

struct CheckResult
{
    std::string name;
    bool passed = true;
    long long cases = 0;
    long long violations = 0;
    std::string detail;
};

struct ValidateOptions
{
    int instances = 20;
    std::uint64_t seed = 1;
    int frames = 100;
};

namespace validate_detail
{

inline CheckResult named(std::string n)
{
    CheckResult r;
    r.name = std::move(n);
    return r;
}

inline void record(CheckResult &r, bool ok)
{
    ++r.cases;
    if (!ok)
    {
        ++r.violations;
        r.passed = false;
    }
}

inline std::string worst(const char *label, double x)
{
    std::ostringstream os;
    os.precision(3);
    os << label << '=' << x;
    return os.str();
}

struct SlotSolve
{
    ChannelState H;
    RateConstraint rc;
    WmmseState coord;
    WmmseState comp;
};

inline SpOptions sp_options(const SystemConfig &cfg)
{
    SpOptions o;
    o.tol = cfg.sp_tol;
    o.max_iter = cfg.sp_max_iter;
    o.dual.slack_tol = cfg.dual_tol;
    o.dual.max_iter = cfg.dual_max_iter;
    return o;
}

} // namespace validate_detail

/// Runs the invariant suite on channels drawn from cfg's topology. Each
/// returned entry is one property; the run is clean when all pass.
inline std::vector<CheckResult> run_validation(const SystemConfig &cfg, const ValidateOptions &opt = {})
{
    using namespace validate_detail;
    cfg.validate();
    const Topology topo = build_topology(cfg, cfg.placement);
    const ChannelDims dims{cfg.M, cfg.K, cfg.N_R, cfg.N_T};
    const SpOptions spo = sp_options(cfg);

    CheckResult descent = named("sp_descent"), rates = named("sp_rates"), dominance = named("comp_dominance"),
                identity = named("rate_identity"), weights = named("mse_weights"), kkt = named("kkt_residual");
    double worst_rise = 0, worst_rate = 0, worst_id = 0, worst_w = 0, worst_kkt = 0, worst_dom = 0;

    Rng urp_rng = rng::make(opt.seed, rng::Stream::urp, {0xa11da7eULL});
    std::discrete_distribution<int> file(cfg.rho.begin(), cfg.rho.end());

    for (int i = 0; i < opt.instances; ++i)
    {
        const ChannelState H = draw_channel(topo, dims, opt.seed, i);
        std::vector<double> mu(static_cast<std::size_t>(cfg.K));
        for (auto &x : mu)
            x = cfg.mu[static_cast<std::size_t>(file(urp_rng))];
        const RateConstraint rc(mu, cfg.B_W);

        const WmmseState c = algorithm_sp(H, rc, Mode::coordinated, std::nullopt, spo);
        const WmmseState t = algorithm_sp(H, rc, Mode::comp, comp_initial_point(c.V, cfg.N_T, cfg.N_R), spo);

        for (const WmmseState *st : {&c, &t})
        {
            const auto &tr = st->objective_trace;
            bool mono = true;
            for (std::size_t j = 1; j < tr.size(); ++j)
            {
                const double rise = (tr[j] - tr[j - 1]) / std::max(tr[j - 1], 1e-300);
                worst_rise = std::max(worst_rise, rise);
                mono = mono && rise <= 1e-8;
            }
            record(descent, mono);

            const RVec R = user_rates(H, st->V, cfg.B_W);
            bool ok = true;
            for (int k = 0; k < cfg.K; ++k)
            {
                const double short_fall = 1.0 - R(k) / mu[static_cast<std::size_t>(k)];
                worst_rate = std::max(worst_rate, short_fall);
                ok = ok && R(k) >= mu[static_cast<std::size_t>(k)] * (1 - 1e-3);
            }
            record(rates, ok);

            const RVec Rbar = surrogate_rates(H, *st, rc) * (cfg.B_W / std::numbers::ln2);
            double id = 0;
            for (int k = 0; k < cfg.K; ++k)
                id = std::max(id, std::abs(R(k) - Rbar(k)) / std::max(std::abs(R(k)), 1.0));
            worst_id = std::max(worst_id, id);
            record(identity, id <= 1e-8);

            const EffectiveLinks G(H, st->V.mode);
            double wd = 0;
            for (int m = 0; m < cfg.M; ++m)
                for (int k = 0; k < cfg.K; ++k)
                {
                    const auto j = static_cast<std::size_t>(m * cfg.K + k);
                    const CMat E = mse_matrix(G, st->V, st->rw.U[j], m, k);
                    const CMat I = linalg::identity(E.rows());
                    wd = std::max(wd, (st->rw.W[j] * E - I).cwiseAbs().maxCoeff());
                }
            worst_w = std::max(worst_w, wd);
            record(weights, wd <= 1e-8);

            if (st->converged)
            {
                const double r = kkt_residual(G, st->V, st->rw, st->lambda, rc).value();
                worst_kkt = std::max(worst_kkt, r);
                record(kkt, r < 1e-4);
            }
        }

        const double gap = (t.power() - c.power()) / std::max(c.power(), 1e-300);
        worst_dom = std::max(worst_dom, gap);
        record(dominance, gap <= 1e-9);
    }
    descent.detail = worst("max_relative_rise", worst_rise);
    rates.detail = worst("max_shortfall", worst_rate);
    dominance.detail = worst("max_relative_gap", worst_dom);
    identity.detail = worst("max_error", worst_id);
    weights.detail = worst("max_error", worst_w);
    kkt.detail = worst("max_residual", worst_kkt);

    // Projection onto {0 <= q <= 1, F.q <= B_C}: feasible, and the variational
    // inequality (q_raw - p).(z - p) <= 0 holds for sampled feasible z.
    CheckResult proj = named("cache_projection");
    {
        Rng r = rng::make(opt.seed, rng::Stream::init, {0x9e0cULL});
        std::normal_distribution<double> N(0.5, 1.0);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        RVec F(cfg.L);
        for (int l = 0; l < cfg.L; ++l)
            F(l) = cfg.F[static_cast<std::size_t>(l)];
        double worst_vi = 0;
        for (int i = 0; i < 200; ++i)
        {
            RVec raw(cfg.L);
            for (auto &x : raw)
                x = N(r);
            const double B_C = U(r) * F.sum();
            const RVec p = project_cache(raw, F, B_C);
            bool ok = (p.array() >= 0).all() && (p.array() <= 1).all() && F.dot(p) <= B_C * (1 + 1e-12);
            for (int j = 0; j < 20; ++j)
            {
                RVec z(cfg.L);
                for (auto &x : z)
                    x = U(r);
                const double load = F.dot(z);
                if (load > B_C)
                    z *= B_C / load;
                const double vi = (raw - p).dot(z - p);
                worst_vi = std::max(worst_vi, vi);
                ok = ok && vi <= 1e-9;
            }
            record(proj, ok);
        }
        proj.detail = worst("max_inner_product", worst_vi);
    }

    // Long-term objective: midpoint convexity in q for per-profile powers
    // with b_pi <= a_pi.
    CheckResult convex = named("objective_convexity");
    {
        Rng r = rng::make(opt.seed, rng::Stream::init, {0xc0beULL});
        std::uniform_real_distribution<double> U(0.0, 1.0);
        std::vector<Urp> samples;
        for (int i = 0; i < 64; ++i)
        {
            Urp pi(static_cast<std::size_t>(cfg.K));
            for (auto &f : pi)
                f = file(urp_rng);
            samples.push_back(pi);
        }
        const PowerOracle oracle = [&](const Urp &pi) {
            std::uint64_t h = 0;
            for (int f : pi)
                h = rng::splitmix64(h ^ static_cast<std::uint64_t>(f + 1));
            const double a = 1.0 + static_cast<double>(h % 1000) / 1000.0;
            const double b = a * static_cast<double>((h >> 20) % 1000) / 1000.0;
            return std::pair{a, b};
        };
        double worst_gap = 0;
        for (int i = 0; i < 200; ++i)
        {
            RVec x(cfg.L), y(cfg.L);
            for (int l = 0; l < cfg.L; ++l)
            {
                x(l) = U(r);
                y(l) = U(r);
            }
            const double fx = expected_objective(x, oracle, samples).value;
            const double fy = expected_objective(y, oracle, samples).value;
            const double fm = expected_objective(0.5 * (x + y), oracle, samples).value;
            const double gap = fm - 0.5 * (fx + fy);
            worst_gap = std::max(worst_gap, gap);
            record(convex, gap <= 1e-12);
        }
        convex.detail = worst("max_midpoint_excess", worst_gap);
    }

    // Every window of T_S consecutive slots holds schedule_count(q_min) CoMP
    // slots.
    CheckResult windows = named("schedule_windows");
    {
        Rng r = rng::make(opt.seed, rng::Stream::schedule, {0x5c4eULL});
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (int i = 0; i < 50; ++i)
        {
            RVec q(cfg.L);
            for (auto &x : q)
                x = U(r);
            Urp pi(static_cast<std::size_t>(cfg.K));
            for (auto &f : pi)
                f = file(urp_rng);
            const CacheSchedule s = generate_cache_schedule(q, pi, cfg.T_S, r);
            const int want = schedule_count(q_min_of(q, pi).value, cfg.T_S);
            const long long T = static_cast<long long>(opt.frames) * cfg.T_S;
            int count = 0;
            bool ok = true;
            for (long long t = 0; t < T; ++t)
            {
                count += s.S(t);
                if (t >= cfg.T_S)
                    count -= s.S(t - cfg.T_S);
                if (t >= cfg.T_S - 1)
                    ok = ok && count == want;
            }
            record(windows, ok);
        }
    }

    return {descent, rates, dominance, identity, weights, kkt, proj, convex, windows};
}

inline bool all_passed(const std::vector<CheckResult> &rs)
{
    for (const auto &r : rs)
        if (!r.passed)
            return false;
    return true;
}

inline std::string format_check(const CheckResult &r)
{
    std::ostringstream os;
    os << (r.passed ? "PASS " : "FAIL ") << r.name << " cases=" << r.cases << " violations=" << r.violations;
    if (!r.detail.empty())
        os << ' ' << r.detail;
    return os.str();
}

} // namespace cachecomp

#endif
