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

#ifndef CACHECOMP_PRECODER_HPP
#define CACHECOMP_PRECODER_HPP

#include "channel.hpp"
#include "errors.hpp"
#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace cachecomp
{

enum class Mode
{
    coordinated, // BS k serves user k only
    comp         // all BSs jointly serve every user
};

inline int stream_count(Mode mode, int K, int N_T, int N_R)
{
    return mode == Mode::coordinated ? std::min(N_T, N_R) : std::min(K * N_T, N_R);
}

/// Precoders V(m, k) for every subcarrier and user. Coordinated blocks are
/// N_T x d, CoMP blocks are (K N_T) x d~.
struct PrecoderSet
{
    Mode mode = Mode::coordinated;
    int M = 0;
    int K = 0;
    std::vector<CMat> blocks;

    PrecoderSet() = default;
    PrecoderSet(Mode mode_, int M_, int K_, Eigen::Index rows, Eigen::Index cols)
        : mode(mode_), M(M_), K(K_), blocks(static_cast<std::size_t>(M_ * K_), CMat::Zero(rows, cols))
    {
    }

    static PrecoderSet zeros(Mode mode, const ChannelDims &d)
    {
        const Eigen::Index rows = mode == Mode::coordinated ? d.N_T : d.K * d.N_T;
        return PrecoderSet(mode, d.M, d.K, rows, stream_count(mode, d.K, d.N_T, d.N_R));
    }

    CMat &V(int m, int k) { return blocks[static_cast<std::size_t>(m * K + k)]; }
    const CMat &V(int m, int k) const { return blocks[static_cast<std::size_t>(m * K + k)]; }

    bool all_finite() const
    {
        return std::all_of(blocks.begin(), blocks.end(), [](const CMat &b) { return b.allFinite(); });
    }
};

/// Channels seen by the precoder of user n at receiver k. Coordinated: the
/// direct/cross block H(m,k,n). CoMP: the composite H~(m,k) for every n.
class EffectiveLinks
{
  public:
    EffectiveLinks(const ChannelState &H, Mode mode) : H_(&H), mode_(mode)
    {
        if (mode_ == Mode::comp)
        {
            composite_.reserve(static_cast<std::size_t>(H.M() * H.K()));
            for (int m = 0; m < H.M(); ++m)
                for (int k = 0; k < H.K(); ++k)
                    composite_.push_back(H.composite(m, k));
        }
    }

    const CMat &G(int m, int k, int n) const
    {
        if (mode_ == Mode::coordinated)
            return H_->H(m, k, n);
        return composite_[static_cast<std::size_t>(m * H_->K() + k)];
    }

    Mode mode() const { return mode_; }
    int M() const { return H_->M(); }
    int K() const { return H_->K(); }
    int N_R() const { return H_->N_R(); }
    int tx_dim() const { return mode_ == Mode::coordinated ? H_->N_T() : H_->K() * H_->N_T(); }
    int streams() const { return stream_count(mode_, H_->K(), H_->N_T(), H_->N_R()); }
    const ChannelState &channel() const { return *H_; }

  private:
    const ChannelState *H_;
    Mode mode_;
    std::vector<CMat> composite_;
};

inline void check_shape(const EffectiveLinks &G, const PrecoderSet &V)
{
    require(V.mode == G.mode(), "precoder mode does not match the requested mode");
    require(V.M == G.M() && V.K == G.K() && static_cast<int>(V.blocks.size()) == G.M() * G.K(),
            "precoder set has the wrong number of blocks");
    for (const auto &b : V.blocks)
        require(b.rows() == G.tx_dim(), "precoder block has the wrong number of rows");
}

/// Rate requirement per user. `nats` is the per-subcarrier-use target
/// mu * ln2 / B_W.
struct RateConstraint
{
    std::vector<double> mu_bps;
    double B_W = 1.0;

    RateConstraint() = default;
    RateConstraint(std::vector<double> mu, double bandwidth) : mu_bps(std::move(mu)), B_W(bandwidth)
    {
        require(B_W > 0, "RateConstraint: bandwidth must be positive");
        for (double x : mu_bps)
            require(x >= 0, "RateConstraint: rates must be nonnegative");
    }

    int K() const { return static_cast<int>(mu_bps.size()); }
    double nats(int k) const { return mu_bps[static_cast<std::size_t>(k)] * std::numbers::ln2 / B_W; }
};

/// Omega(m,k) = I + sum_{n != k} G V V^H G^H.
inline CMat interference_covariance(const EffectiveLinks &G, const PrecoderSet &V, int m, int k)
{
    CMat Om = linalg::identity(G.N_R());
    for (int n = 0; n < G.K(); ++n)
    {
        if (n == k)
            continue;
        const CMat GV = G.G(m, k, n) * V.V(m, n);
        Om.noalias() += GV * GV.adjoint();
    }
    return Om;
}

inline CMat mmse_receiver(const EffectiveLinks &G, const PrecoderSet &V, int m, int k)
{
    const CMat Om = interference_covariance(G, V, m, k);
    const CMat GV = G.G(m, k, k) * V.V(m, k);
    return linalg::solve_hpd(Om + GV * GV.adjoint(), GV);
}

/// MMSE receiver U(m,k) = (Omega + H V V^H H^H)^{-1} H V.
inline CMat mmse_receiver(const ChannelState &H, const PrecoderSet &V, int m, int k)
{
    const EffectiveLinks G(H, V.mode);
    check_shape(G, V);
    return mmse_receiver(G, V, m, k);
}

/// log|I + S Omega^{-1}| in nats for user k on subcarrier m.
inline double link_rate_nats(const EffectiveLinks &G, const PrecoderSet &V, int m, int k)
{
    const CMat Om = interference_covariance(G, V, m, k);
    const CMat GV = G.G(m, k, k) * V.V(m, k);
    return linalg::logdet_hpd(Om + GV * GV.adjoint()) - linalg::logdet_hpd(Om);
}

inline RVec user_rates(const EffectiveLinks &G, const PrecoderSet &V, double B_W)
{
    RVec R = RVec::Zero(G.K());
    for (int k = 0; k < G.K(); ++k)
    {
        double s = 0.0;
        for (int m = 0; m < G.M(); ++m)
            s += link_rate_nats(G, V, m, k);
        R(k) = B_W / (G.M() * std::numbers::ln2) * s;
    }
    return R;
}

/// Achieved rates in bits/s: B_W / (M ln2) * sum_m log|I + S Omega^{-1}|.
inline RVec user_rates(const ChannelState &H, const PrecoderSet &V, double B_W)
{
    const EffectiveLinks G(H, V.mode);
    check_shape(G, V);
    return user_rates(G, V, B_W);
}

struct PowerBreakdown
{
    double total = 0.0;
    RVec per_bs;
};

/// Sum transmit power and its split across BSs. In CoMP mode BS b owns the
/// b-th block of N_T rows of every composite precoder.
inline PowerBreakdown sum_power(const PrecoderSet &V)
{
    PowerBreakdown out;
    out.per_bs = RVec::Zero(V.K);
    for (int m = 0; m < V.M; ++m)
        for (int k = 0; k < V.K; ++k)
        {
            const CMat &B = V.V(m, k);
            if (V.mode == Mode::coordinated)
                out.per_bs(k) += B.squaredNorm();
            else
            {
                const Eigen::Index nt = B.rows() / V.K;
                for (int b = 0; b < V.K; ++b)
                    out.per_bs(b) += B.middleRows(b * nt, nt).squaredNorm();
            }
        }
    out.total = out.per_bs.sum();
    return out;
}

inline double total_power(const PrecoderSet &V)
{
    double s = 0.0;
    for (const auto &b : V.blocks)
        s += b.squaredNorm();
    return s;
}

inline CMat mse_matrix(const EffectiveLinks &G, const PrecoderSet &V, const CMat &U, int m, int k)
{
    const Eigen::Index d = V.V(m, k).cols();
    const CMat A = linalg::identity(d) - U.adjoint() * G.G(m, k, k) * V.V(m, k);
    const CMat Om = interference_covariance(G, V, m, k);
    return linalg::hermitian_part(A * A.adjoint() + U.adjoint() * Om * U);
}

/// E(m,k) = (I - U^H H V)(I - U^H H V)^H + U^H Omega U.
inline CMat mse_matrix(const ChannelState &H, const PrecoderSet &V, const CMat &U, int m, int k)
{
    const EffectiveLinks G(H, V.mode);
    check_shape(G, V);
    return mse_matrix(G, V, U, m, k);
}

/// Interference-free feasible point: user k transmits only on subcarrier k,
/// along the dominant right singular vector of H(k,k,k), replicated over the
/// d streams with power chosen so that its rate equals the target exactly.
inline PrecoderSet feasible_init(const ChannelState &H, const RateConstraint &rc)
{
    require(rc.K() == H.K(), "feasible_init: rate constraint has the wrong length");
    if (H.K() > H.M())
        throw InfeasibleError("feasible_init: construction needs at least as many subcarriers as users");
    if (!in_feasible_set(H))
        throw InfeasibleError("feasible_init: channel has a zero direct link");
    PrecoderSet V = PrecoderSet::zeros(Mode::coordinated, H.dims());
    const int d = static_cast<int>(V.V(0, 0).cols());
    for (int k = 0; k < H.K(); ++k)
    {
        const double target = rc.nats(k) * H.M();
        if (target <= 0.0)
            continue;
        const auto [e, sigma] = linalg::dominant_right_singular(H.H(k, k, k));
        const double p = std::expm1(target) / (sigma * sigma);
        CMat B(H.N_T(), d);
        for (int j = 0; j < d; ++j)
            B.col(j) = std::sqrt(p / d) * e;
        V.V(k, k) = B;
    }
    return V;
}

/// Embeds coordinated precoders into composite CoMP precoders: rows of BS k
/// carry V*(m,k) in the leading columns, everything else is zero. Rates and
/// power are unchanged.
inline PrecoderSet comp_initial_point(const PrecoderSet &Vc, int N_T, int N_R)
{
    require(Vc.mode == Mode::coordinated, "comp_initial_point: input must be coordinated precoders");
    const int d = std::min(N_T, N_R);
    const int dt = std::min(Vc.K * N_T, N_R);
    PrecoderSet out(Mode::comp, Vc.M, Vc.K, static_cast<Eigen::Index>(Vc.K) * N_T, dt);
    for (int m = 0; m < Vc.M; ++m)
        for (int k = 0; k < Vc.K; ++k)
        {
            const CMat &B = Vc.V(m, k);
            require(B.rows() == N_T && B.cols() == d, "comp_initial_point: coordinated block has the wrong shape");
            out.V(m, k).block(static_cast<Eigen::Index>(k) * N_T, 0, N_T, d) = B;
        }
    return out;
}

/// Projects each precoder onto span(H(m,k,k)^H) and refactors it with the
/// mode's stream count, keeping V V^H of the projection. The direct-link
/// signal is unchanged and per-BS powers do not increase. Rates cannot drop
/// when N_T <= N_R; otherwise leakage to other users may grow.
inline PrecoderSet project_streams(const PrecoderSet &wide, const ChannelState &H)
{
    const EffectiveLinks G(H, wide.mode);
    check_shape(G, wide);
    const int d = G.streams();
    PrecoderSet out(wide.mode, wide.M, wide.K, G.tx_dim(), d);
    for (int m = 0; m < wide.M; ++m)
        for (int k = 0; k < wide.K; ++k)
        {
            const CMat Q = linalg::orth(G.G(m, k, k).adjoint());
            const CMat Vbar = Q * (Q.adjoint() * wide.V(m, k));
            const CMat C = linalg::hermitian_part(Vbar * Vbar.adjoint());
            Eigen::SelfAdjointEigenSolver<CMat> es(C);
            const Eigen::Index n = C.rows();
            CMat B = CMat::Zero(n, d);
            // Eigenvalues ascend; take the largest d.
            for (int j = 0; j < d && j < n; ++j)
            {
                const double ev = std::max(es.eigenvalues()(n - 1 - j), 0.0);
                B.col(j) = std::sqrt(ev) * es.eigenvectors().col(n - 1 - j);
            }
            out.V(m, k) = B;
        }
    return out;
}

} // namespace cachecomp

#endif
