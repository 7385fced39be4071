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

#ifndef CACHECOMP_CHANNEL_HPP
#define CACHECOMP_CHANNEL_HPP

#include "config.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "rng.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace cachecomp
{

using Point = std::array<double, 2>;

inline double distance(const Point &a, const Point &b)
{
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

struct Topology
{
    std::vector<Point> bs_positions;
    std::vector<Point> user_positions;
    double inter_site_distance = 500.0;
    Placement placement_mode = Placement::normal;
    // g(k, n): linear power gain from BS n to user k, normalized to the
    // receiver noise power (so it is also the per-entry channel variance).
    Eigen::MatrixXd g;

    int K() const { return static_cast<int>(bs_positions.size()); }
};

inline double min_serving_distance(Placement p)
{
    return p == Placement::edge ? 180.0 : 80.0;
}

/// Linear gain 10^(-PL(d)/10) of the log-distance model.
inline double path_gain(double distance_m, const PathLossModel &model = {})
{
    if (!(distance_m > 0))
        throw std::domain_error("path_gain: distance must be positive");
    const double pl_db = model.intercept_db + 10.0 * model.exponent * std::log10(distance_m / model.ref_distance_m);
    return std::pow(10.0, -pl_db / 10.0);
}

namespace topology_detail
{

// Hexagonal site centers ordered center first, then ring by ring.
inline std::vector<Point> hex_sites(int count, double isd)
{
    std::vector<Point> out;
    auto push_axial = [&](int q, int r) {
        out.push_back({isd * (q + 0.5 * r), isd * (std::sqrt(3.0) / 2.0) * r});
    };
    push_axial(0, 0);
    // Axial neighbor directions, walked around each ring.
    const int dq[6] = {1, 0, -1, -1, 0, 1};
    const int dr[6] = {0, 1, 1, 0, -1, -1};
    for (int ring = 1; static_cast<int>(out.size()) < count; ++ring)
    {
        int q = ring * dq[4], r = ring * dr[4];
        for (int side = 0; side < 6; ++side)
            for (int step = 0; step < ring; ++step)
            {
                push_axial(q, r);
                q += dq[side];
                r += dr[side];
            }
    }
    out.resize(static_cast<std::size_t>(count));
    return out;
}

// Voronoi cell of a hex site: |p . u| <= isd/2 for the three neighbor axes.
inline bool in_hex_cell(double dx, double dy, double isd)
{
    const double h = 0.5 * isd;
    const double c = 0.5, s = std::sqrt(3.0) / 2.0;
    return std::abs(dx) <= h && std::abs(c * dx + s * dy) <= h && std::abs(-c * dx + s * dy) <= h;
}

} // namespace topology_detail

inline void fill_gains(Topology &t, const PathLossModel &model, double noise_power_w)
{
    const int K = t.K();
    t.g.resize(K, K);
    for (int k = 0; k < K; ++k)
        for (int n = 0; n < K; ++n)
            t.g(k, n) = path_gain(distance(t.user_positions[k], t.bs_positions[n]), model) / noise_power_w;
}

/// Places K sites on the hexagonal grid and one user per cell by rejection
/// sampling under the placement mode's minimum serving distance.
inline Topology build_topology(const SystemConfig &cfg, Placement mode, Rng &rng)
{
    constexpr int kMaxAttempts = 100000;
    Topology t;
    t.inter_site_distance = cfg.isd_m;
    t.placement_mode = mode;
    t.bs_positions = topology_detail::hex_sites(cfg.K, cfg.isd_m);
    const double dmin = min_serving_distance(mode);
    const double R = cfg.isd_m / std::sqrt(3.0);
    std::uniform_real_distribution<double> U(-R, R);
    for (const auto &bs : t.bs_positions)
    {
        bool placed = false;
        for (int a = 0; a < kMaxAttempts && !placed; ++a)
        {
            const double dx = U(rng), dy = U(rng);
            if (!topology_detail::in_hex_cell(dx, dy, cfg.isd_m) || std::hypot(dx, dy) <= dmin)
                continue;
            t.user_positions.push_back({bs[0] + dx, bs[1] + dy});
            placed = true;
        }
        if (!placed)
            throw ConfigError("build_topology: cannot place a user farther than " + std::to_string(dmin) +
                              " m inside a cell with inter-site distance " + std::to_string(cfg.isd_m) + " m");
    }
    fill_gains(t, cfg.path_loss, cfg.noise_power_w());
    return t;
}

inline Topology build_topology(const SystemConfig &cfg, Placement mode)
{
    auto rng = rng::make(cfg.rng_seed, rng::Stream::topology);
    return build_topology(cfg, mode, rng);
}

inline void write_topology_csv(std::ostream &os, const Topology &t)
{
    os.precision(15);
    os << "bs_id,x,y\n";
    for (int n = 0; n < t.K(); ++n)
        os << n + 1 << ',' << t.bs_positions[n][0] << ',' << t.bs_positions[n][1] << '\n';
    os << "\nuser_id,x,y,serving_bs";
    for (int n = 0; n < t.K(); ++n)
        os << ",g_" << n + 1;
    os << '\n';
    for (int k = 0; k < t.K(); ++k)
    {
        os << k + 1 << ',' << t.user_positions[k][0] << ',' << t.user_positions[k][1] << ',' << k + 1;
        for (int n = 0; n < t.K(); ++n)
            os << ',' << t.g(k, n);
        os << '\n';
    }
}

struct ChannelDims
{
    int M = 1;
    int K = 1;
    int N_R = 1;
    int N_T = 1;
};

/// Per-slot CSI: H(m, k, n) is the N_R x N_T channel from BS n to user k on
/// subcarrier m (all indices zero-based).
class ChannelState
{
  public:
    ChannelState() = default;
    ChannelState(ChannelDims dims, long long slot = 0)
        : dims_(dims), slot_(slot),
          blocks_(static_cast<std::size_t>(dims.M * dims.K * dims.K), CMat::Zero(dims.N_R, dims.N_T))
    {
    }

    const ChannelDims &dims() const { return dims_; }
    int M() const { return dims_.M; }
    int K() const { return dims_.K; }
    int N_R() const { return dims_.N_R; }
    int N_T() const { return dims_.N_T; }
    long long slot_index() const { return slot_; }

    CMat &H(int m, int k, int n) { return blocks_[index(m, k, n)]; }
    const CMat &H(int m, int k, int n) const { return blocks_[index(m, k, n)]; }

    // [H(m,k,0), ..., H(m,k,K-1)], N_R x K*N_T.
    CMat composite(int m, int k) const
    {
        CMat out(dims_.N_R, dims_.K * dims_.N_T);
        for (int n = 0; n < dims_.K; ++n)
            out.middleCols(n * dims_.N_T, dims_.N_T) = H(m, k, n);
        return out;
    }

    std::size_t block_count() const { return blocks_.size(); }

    bool operator==(const ChannelState &o) const
    {
        if (dims_.M != o.dims_.M || dims_.K != o.dims_.K || dims_.N_R != o.dims_.N_R || dims_.N_T != o.dims_.N_T)
            return false;
        for (std::size_t i = 0; i < blocks_.size(); ++i)
            if (blocks_[i] != o.blocks_[i])
                return false;
        return slot_ == o.slot_;
    }

  private:
    std::size_t index(int m, int k, int n) const
    {
        return static_cast<std::size_t>((m * dims_.K + k) * dims_.K + n);
    }

    ChannelDims dims_;
    long long slot_ = 0;
    std::vector<CMat> blocks_;
};

// Replaces the M independent blocks of one link by correlated ones. Must
// preserve the per-entry variance for the channel statistics to hold.
using SubcarrierMixer = std::function<void(std::vector<CMat> &per_subcarrier)>;

/// Exponential correlation across subcarriers, corr(m, m') = r^|m - m'|.
inline SubcarrierMixer exponential_subcarrier_correlation(double r)
{
    return [r](std::vector<CMat> &blocks) {
        const int M = static_cast<int>(blocks.size());
        Eigen::MatrixXd R(M, M);
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j)
                R(i, j) = std::pow(r, std::abs(i - j));
        const Eigen::MatrixXd C = R.llt().matrixL();
        std::vector<CMat> mixed(blocks.size(), CMat::Zero(blocks[0].rows(), blocks[0].cols()));
        for (int i = 0; i < M; ++i)
            for (int j = 0; j <= i; ++j)
                mixed[i] += C(i, j) * blocks[j];
        blocks = std::move(mixed);
    };
}

/// Draws one slot of CSI. Entry variance of H(m,k,n) is g(k,n); real and
/// imaginary parts are independent N(0, g/2). Each (slot, m, k, n) block has
/// its own RNG stream derived from the master seed.
inline ChannelState draw_channel(const Topology &topo, ChannelDims dims, std::uint64_t master_seed, long long slot,
                                 const SubcarrierMixer &mixer = {})
{
    require(dims.K == topo.K() && topo.g.rows() == dims.K && topo.g.cols() == dims.K,
            "draw_channel: topology and dimensions disagree on K");
    ChannelState cs(dims, slot);
    std::vector<CMat> link(static_cast<std::size_t>(dims.M));
    for (int k = 0; k < dims.K; ++k)
        for (int n = 0; n < dims.K; ++n)
        {
            const double sd = std::sqrt(topo.g(k, n) / 2.0);
            for (int m = 0; m < dims.M; ++m)
            {
                auto gen = rng::make(master_seed, rng::Stream::channel,
                                     {static_cast<std::uint64_t>(slot), static_cast<std::uint64_t>(m),
                                      static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(n)});
                // Fresh distribution per block: it caches a spare variate.
                std::normal_distribution<double> N01(0.0, 1.0);
                CMat B(dims.N_R, dims.N_T);
                for (int i = 0; i < dims.N_R; ++i)
                    for (int j = 0; j < dims.N_T; ++j)
                    {
                        const double re = N01(gen);
                        const double im = N01(gen);
                        B(i, j) = cplx(sd * re, sd * im);
                    }
                link[static_cast<std::size_t>(m)] = std::move(B);
            }
            if (mixer)
                mixer(link);
            for (int m = 0; m < dims.M; ++m)
                cs.H(m, k, n) = link[static_cast<std::size_t>(m)];
        }
    return cs;
}

inline ChannelState draw_channel(const Topology &topo, const SystemConfig &cfg, long long slot,
                                 const SubcarrierMixer &mixer = {})
{
    return draw_channel(topo, ChannelDims{cfg.M, cfg.K, cfg.N_R, cfg.N_T}, cfg.rng_seed, slot, mixer);
}

// Membership in the feasible channel set: every direct link carries energy.
inline bool in_feasible_set(const ChannelState &H, double threshold = 1e-30)
{
    for (int m = 0; m < H.M(); ++m)
        for (int k = 0; k < H.K(); ++k)
            if (!(H.H(m, k, k).squaredNorm() > threshold))
                return false;
    return true;
}

} // namespace cachecomp

#endif
