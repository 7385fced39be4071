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

#ifndef CACHECOMP_WMMSE_HPP
#define CACHECOMP_WMMSE_HPP

#include "precoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

namespace cachecomp
{

/// Receivers and MSE weights for every (m, k), indexed like PrecoderSet.
struct ReceiverSet
{
    std::vector<CMat> U;
    std::vector<CMat> W;
};

/// Step 1 and Step 2: MMSE receivers for V, then W = (I - U^H H V)^{-1},
/// which equals E^{-1} at the MMSE receiver.
inline ReceiverSet update_receivers(const EffectiveLinks &G, const PrecoderSet &V)
{
    ReceiverSet r;
    r.U.resize(V.blocks.size());
    r.W.resize(V.blocks.size());
    for (int m = 0; m < G.M(); ++m)
        for (int k = 0; k < G.K(); ++k)
        {
            const auto i = static_cast<std::size_t>(m * G.K() + k);
            r.U[i] = mmse_receiver(G, V, m, k);
            const Eigen::Index d = V.V(m, k).cols();
            const CMat A = linalg::identity(d) - r.U[i].adjoint() * G.G(m, k, k) * V.V(m, k);
            r.W[i] = linalg::hermitian_part(linalg::solve_general(A, linalg::identity(d)));
        }
    return r;
}

/// The convex subproblem with U, W held fixed. Precomputes
/// Q(m,n,k) = G(m,n,k)^H U(m,n) W(m,n) U(m,n)^H G(m,n,k) and
/// B(m,k) = G(m,k,k)^H U(m,k) W(m,k).
class DualProblem
{
  public:
    DualProblem(const EffectiveLinks &G, const ReceiverSet &rw, const RateConstraint &rc)
        : G_(&G), rw_(&rw), K_(G.K()), M_(G.M()), d_(G.streams())
    {
        require(rc.K() == K_, "DualProblem: rate constraint has the wrong length");
        require(static_cast<int>(rw.U.size()) == M_ * K_ && rw.W.size() == rw.U.size(),
                "DualProblem: receiver set has the wrong size");
        target_.resize(K_);
        for (int k = 0; k < K_; ++k)
            target_(k) = rc.nats(k);
        Q_.resize(static_cast<std::size_t>(M_ * K_ * K_));
        B_.resize(static_cast<std::size_t>(M_ * K_));
        logdetW_ = Eigen::MatrixXd::Zero(M_, K_);
        for (int m = 0; m < M_; ++m)
            for (int n = 0; n < K_; ++n)
            {
                const CMat &U = rw.U[idx(m, n)];
                const CMat &W = rw.W[idx(m, n)];
                const CMat UWU = U * W * U.adjoint();
                for (int k = 0; k < K_; ++k)
                {
                    const CMat &Gnk = G.G(m, n, k);
                    Q_[qidx(m, n, k)] = linalg::hermitian_part(Gnk.adjoint() * UWU * Gnk);
                }
                B_[idx(m, n)] = G.G(m, n, n).adjoint() * U * W;
                logdetW_(m, n) = linalg::logdet_hpd(W);
            }
    }

    int K() const { return K_; }
    int M() const { return M_; }
    int streams() const { return d_; }
    double target(int k) const { return target_(k); }
    bool constrained(int k) const { return target_(k) > 0.0; }

    /// Closed-form minimizer of the Lagrangian for fixed multipliers:
    /// V(m,k) = (sum_n lambda_n/M Q(m,n,k) + I)^{-1} lambda_k/M B(m,k).
    PrecoderSet inner_precoders(const RVec &lambda) const
    {
        require(lambda.size() == K_, "inner_precoders: multiplier vector has the wrong length");
        require((lambda.array() >= 0).all(), "inner_precoders: multipliers must be nonnegative");
        PrecoderSet V(G_->mode(), M_, K_, G_->tx_dim(), d_);
        const bool shared = G_->mode() == Mode::comp;
        for (int m = 0; m < M_; ++m)
        {
            std::optional<Eigen::LDLT<CMat>> common;
            for (int k = 0; k < K_; ++k)
            {
                const CMat rhs = (lambda(k) / M_) * B_[idx(m, k)];
                if (lambda(k) == 0.0)
                {
                    V.V(m, k) = CMat::Zero(G_->tx_dim(), d_);
                    continue;
                }
                if (shared)
                {
                    if (!common)
                        common.emplace(system_matrix(lambda, m, k));
                    V.V(m, k) = common->solve(rhs);
                }
                else
                    V.V(m, k) = linalg::solve_hpd(system_matrix(lambda, m, k), rhs);
            }
        }
        return V;
    }

    // Tr(W E(V)) with E evaluated at the fixed receiver.
    double weighted_mse(const PrecoderSet &V, int m, int k) const
    {
        const CMat &U = rw_->U[idx(m, k)];
        const CMat &W = rw_->W[idx(m, k)];
        const CMat E = mse_matrix(*G_, V, U, m, k);
        return (W * E).trace().real();
    }

    /// Constraint values at V: (1/M) sum_m (Tr(W E) - log|W|) - d + target.
    /// At V = V*(lambda) this is the gradient of the dual function.
    RVec constraint_values(const PrecoderSet &V) const
    {
        RVec c(K_);
        for (int k = 0; k < K_; ++k)
        {
            double s = 0.0;
            for (int m = 0; m < M_; ++m)
                s += weighted_mse(V, m, k) - logdetW_(m, k);
            c(k) = s / M_ - d_ + target_(k);
        }
        return c;
    }

    double lagrangian(const RVec &lambda, const PrecoderSet &V) const
    {
        return total_power(V) + lambda.dot(constraint_values(V));
    }

    /// Jacobian of the dual gradient, d c_k / d lambda_j at V*(lambda).
    /// Symmetric and negative semidefinite.
    Eigen::MatrixXd jacobian(const RVec &lambda, const PrecoderSet &V) const
    {
        Eigen::MatrixXd Jac = Eigen::MatrixXd::Zero(K_, K_);
        std::vector<CMat> dV(static_cast<std::size_t>(K_ * K_)); // dV[n*K + j] = dV_n / dlambda_j
        std::vector<CMat> grad(static_cast<std::size_t>(K_ * K_)); // grad[k*K + n] = Q(k,n) V_n - delta B_k
        for (int m = 0; m < M_; ++m)
        {
            for (int n = 0; n < K_; ++n)
            {
                Eigen::LDLT<CMat> A(system_matrix(lambda, m, n));
                const CMat &Vn = V.V(m, n);
                for (int j = 0; j < K_; ++j)
                {
                    CMat rhs = -(1.0 / M_) * (Q_[qidx(m, j, n)] * Vn);
                    if (j == n)
                        rhs += (1.0 / M_) * B_[idx(m, n)];
                    dV[static_cast<std::size_t>(n * K_ + j)] = A.solve(rhs);
                }
                for (int k = 0; k < K_; ++k)
                {
                    CMat gk = Q_[qidx(m, k, n)] * Vn;
                    if (k == n)
                        gk -= B_[idx(m, k)];
                    grad[static_cast<std::size_t>(k * K_ + n)] = std::move(gk);
                }
            }
            for (int k = 0; k < K_; ++k)
                for (int j = 0; j < K_; ++j)
                {
                    double s = 0.0;
                    for (int n = 0; n < K_; ++n)
                        s += 2.0 * (grad[static_cast<std::size_t>(k * K_ + n)].adjoint() *
                                    dV[static_cast<std::size_t>(n * K_ + j)])
                                       .trace()
                                       .real();
                    Jac(k, j) += s / M_;
                }
        }
        return 0.5 * (Jac + Jac.transpose());
    }

    /// Conjugate gradient dL/dV*(m,n) of the Lagrangian at fixed U, W.
    CMat lagrangian_gradient(const RVec &lambda, const PrecoderSet &V, int m, int n) const
    {
        CMat g = V.V(m, n);
        for (int k = 0; k < K_; ++k)
            if (lambda(k) != 0.0)
                g.noalias() += (lambda(k) / M_) * (Q_[qidx(m, k, n)] * V.V(m, n));
        g -= (lambda(n) / M_) * B_[idx(m, n)];
        return g;
    }

  private:
    std::size_t idx(int m, int k) const { return static_cast<std::size_t>(m * K_ + k); }
    std::size_t qidx(int m, int n, int k) const { return static_cast<std::size_t>((m * K_ + n) * K_ + k); }

    CMat system_matrix(const RVec &lambda, int m, int k) const
    {
        CMat A = linalg::identity(G_->tx_dim());
        for (int n = 0; n < K_; ++n)
            if (lambda(n) != 0.0)
                A.noalias() += (lambda(n) / M_) * Q_[qidx(m, n, k)];
        return A;
    }

    const EffectiveLinks *G_;
    const ReceiverSet *rw_;
    int K_, M_, d_;
    RVec target_;
    std::vector<CMat> Q_;
    std::vector<CMat> B_;
    Eigen::MatrixXd logdetW_;
};

inline PrecoderSet dual_inner_precoders(const RVec &lambda, const ReceiverSet &rw, const ChannelState &H, Mode mode,
                                        const RateConstraint &rc)
{
    const EffectiveLinks G(H, mode);
    return DualProblem(G, rw, rc).inner_precoders(lambda);
}

/// Subgradient of the dual function: constraint values at V*(lambda).
inline RVec dual_subgradient(const RVec &lambda, const ChannelState &H, Mode mode, const ReceiverSet &rw,
                             const RateConstraint &rc)
{
    const EffectiveLinks G(H, mode);
    const DualProblem dp(G, rw, rc);
    return dp.constraint_values(dp.inner_precoders(lambda));
}

/// Dual function J(lambda) = min_V L(lambda, V).
inline double dual_value(const RVec &lambda, const ChannelState &H, Mode mode, const ReceiverSet &rw,
                         const RateConstraint &rc)
{
    const EffectiveLinks G(H, mode);
    const DualProblem dp(G, rw, rc);
    return dp.lagrangian(lambda, dp.inner_precoders(lambda));
}

struct DualOptions
{
    // Stationarity tolerance on the dual gradient, in nats per subcarrier.
    double grad_tol = 1e-11;
    // Complementary slackness |lambda_k c_k| relative to the primal power.
    double slack_tol = 1e-6;
    int max_iter = 2000;
};

struct DualResult
{
    RVec lambda;
    PrecoderSet V;
    RVec gradient;
    int iterations = 0;
    bool converged = false;
};

namespace dual_detail
{

inline double projected_gradient_norm(const RVec &lambda, const RVec &g, const DualProblem &dp)
{
    double r = 0.0;
    for (int k = 0; k < lambda.size(); ++k)
    {
        if (!dp.constrained(k))
            continue;
        r = std::max(r, lambda(k) > 0.0 ? std::abs(g(k)) : std::max(g(k), 0.0));
    }
    return r;
}

inline bool done(const RVec &lambda, const RVec &g, const PrecoderSet &V, const DualProblem &dp,
                 const DualOptions &opt)
{
    if (projected_gradient_norm(lambda, g, dp) > opt.grad_tol)
        return false;
    const double P = std::max(total_power(V), std::numeric_limits<double>::min());
    for (int k = 0; k < lambda.size(); ++k)
        if (std::abs(lambda(k) * g(k)) > opt.slack_tol * P)
            return false;
    return true;
}

// Single multiplier: the dual gradient is nonincreasing in lambda, so bracket
// the root and bisect. Returns the feasible end of the bracket.
inline DualResult bisect_scalar(const DualProblem &dp, const DualOptions &opt, double hint)
{
    DualResult r;
    RVec lam = RVec::Zero(1);
    auto eval = [&](double x) {
        lam(0) = x;
        PrecoderSet V = dp.inner_precoders(lam);
        RVec g = dp.constraint_values(V);
        return std::pair{std::move(V), std::move(g)};
    };
    auto [V0, g0] = eval(0.0);
    r.iterations = 1;
    if (!dp.constrained(0) || g0(0) <= 0.0)
    {
        r.lambda = RVec::Zero(1);
        r.V = std::move(V0);
        r.gradient = std::move(g0);
        r.converged = true;
        return r;
    }
    double lo = 0.0, hi = hint > 0.0 ? hint : 1.0;
    auto [Vh, gh] = eval(hi);
    while (gh(0) > 0.0 && r.iterations < opt.max_iter)
    {
        lo = hi;
        hi *= 4.0;
        std::tie(Vh, gh) = eval(hi);
        ++r.iterations;
    }
    if (hint > 0.0 && lo == 0.0)
    {
        // Hint was already feasible; tighten the lower end quickly.
        double x = hi;
        while (r.iterations < opt.max_iter)
        {
            x *= 0.25;
            auto [Vx, gx] = eval(x);
            ++r.iterations;
            if (gx(0) > 0.0)
            {
                lo = x;
                break;
            }
            hi = x;
            Vh = std::move(Vx);
            gh = std::move(gx);
            if (x < 1e-300)
                break;
        }
    }
    while (r.iterations < opt.max_iter && hi - lo > 1e-15 * hi)
    {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        auto [Vm, gm] = eval(mid);
        ++r.iterations;
        if (gm(0) > 0.0)
            lo = mid;
        else
        {
            hi = mid;
            Vh = std::move(Vm);
            gh = std::move(gm);
        }
        if (std::abs(gh(0)) <= opt.grad_tol)
            break;
    }
    r.converged = gh(0) <= opt.grad_tol && (std::abs(gh(0)) <= opt.grad_tol || hi - lo <= 1e-15 * hi);
    r.lambda = RVec::Constant(1, hi);
    r.V = std::move(Vh);
    r.gradient = std::move(gh);
    return r;
}

} // namespace dual_detail

/// Maximizes the concave dual over lambda >= 0 for fixed U, W and returns
/// the multipliers with the matching closed-form precoders. One multiplier
/// uses bisection; otherwise a projected Newton method with the analytic
/// dual Hessian and an Armijo search on J.
inline DualResult solve_dual(const DualProblem &dp, const DualOptions &opt = {},
                             const std::optional<RVec> &warm = std::nullopt)
{
    const int K = dp.K();
    if (K == 1)
        return dual_detail::bisect_scalar(dp, opt, warm ? (*warm)(0) : 0.0);

    RVec lam = RVec::Zero(K);
    if (warm && warm->size() == K)
        lam = warm->cwiseMax(0.0);
    for (int k = 0; k < K; ++k)
        if (!dp.constrained(k))
            lam(k) = 0.0;

    DualResult r;
    PrecoderSet V = dp.inner_precoders(lam);
    RVec g = dp.constraint_values(V);
    double J = total_power(V) + lam.dot(g);
    for (r.iterations = 0; r.iterations < opt.max_iter; ++r.iterations)
    {
        if (dual_detail::done(lam, g, V, dp, opt))
        {
            r.converged = true;
            break;
        }
        const Eigen::MatrixXd Hs = dp.jacobian(lam, V);

        // Variables held at the bound: at zero and the gradient pushes out,
        // or not constrained at all.
        std::vector<int> free_idx;
        RVec dir = RVec::Zero(K);
        for (int k = 0; k < K; ++k)
        {
            if (!dp.constrained(k))
                continue;
            if (lam(k) <= 0.0 && g(k) <= 0.0)
                continue;
            free_idx.push_back(k);
        }
        if (free_idx.empty())
        {
            r.converged = true;
            break;
        }
        const int nf = static_cast<int>(free_idx.size());
        Eigen::MatrixXd A(nf, nf);
        RVec b(nf);
        for (int i = 0; i < nf; ++i)
        {
            b(i) = g(free_idx[i]);
            for (int j = 0; j < nf; ++j)
                A(i, j) = -Hs(free_idx[i], free_idx[j]);
        }
        // -Hessian is PSD; a tiny ridge keeps the solve defined.
        const double ridge = 1e-14 * std::max(A.diagonal().cwiseAbs().maxCoeff(), 1e-300);
        A.diagonal().array() += ridge;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        RVec step = ldlt.solve(b);
        bool newton_ok = ldlt.info() == Eigen::Success && step.allFinite() && b.dot(step) > 0.0;
        for (int i = 0; i < nf; ++i)
        {
            const double fallback = b(i) / std::max(A(i, i), 1e-300);
            dir(free_idx[i]) = newton_ok ? step(i) : fallback;
        }

        const double pg0 = dual_detail::projected_gradient_norm(lam, g, dp);
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls, t *= 0.5)
        {
            RVec cand = (lam + t * dir).cwiseMax(0.0);
            PrecoderSet Vc = dp.inner_precoders(cand);
            RVec gc = dp.constraint_values(Vc);
            const double Jc = total_power(Vc) + cand.dot(gc);
            const double gain = g.dot(cand - lam);
            const bool armijo = Jc >= J + 1e-4 * gain && gain >= 0.0;
            // Near the optimum J is flat to rounding; accept steps that shrink
            // the projected gradient instead.
            const bool residual = dual_detail::projected_gradient_norm(cand, gc, dp) < 0.9 * pg0;
            if (armijo || residual)
            {
                lam = std::move(cand);
                V = std::move(Vc);
                g = std::move(gc);
                J = Jc;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break;
    }
    if (!r.converged)
        r.converged = dual_detail::done(lam, g, V, dp, opt);
    r.lambda = std::move(lam);
    r.V = std::move(V);
    r.gradient = std::move(g);
    return r;
}

inline DualResult solve_dual(const ReceiverSet &rw, const ChannelState &H, Mode mode, const RateConstraint &rc,
                             const DualOptions &opt = {})
{
    const EffectiveLinks G(H, mode);
    const DualProblem dp(G, rw, rc);
    return solve_dual(dp, opt);
}

struct KktResidual
{
    double stationarity = 0.0; // max |dL/dV*| over max |V|
    double slackness = 0.0;    // max |lambda_k (target_k - Rbar_k)| over P
    double value() const { return std::max(stationarity, slackness); }
};

/// KKT residual of the rate-constrained problem at V with multipliers lambda,
/// using receivers and weights recomputed from V itself (at which point the
/// weighted-MSE Lagrangian and the rate Lagrangian share gradients).
inline KktResidual kkt_residual(const EffectiveLinks &G, const PrecoderSet &V, const ReceiverSet &rw,
                                const RVec &lambda, const RateConstraint &rc)
{
    const DualProblem dp(G, rw, rc);
    KktResidual out;
    double vmax = 0.0, gmax = 0.0;
    for (int m = 0; m < G.M(); ++m)
        for (int n = 0; n < G.K(); ++n)
        {
            vmax = std::max(vmax, V.V(m, n).cwiseAbs().maxCoeff());
            gmax = std::max(gmax, dp.lagrangian_gradient(lambda, V, m, n).cwiseAbs().maxCoeff());
        }
    out.stationarity = vmax > 0.0 ? gmax / vmax : gmax;
    const RVec c = dp.constraint_values(V);
    const double P = total_power(V);
    double s = 0.0;
    for (int k = 0; k < G.K(); ++k)
        s = std::max(s, std::abs(lambda(k) * c(k)));
    out.slackness = P > 0.0 ? s / P : s;
    return out;
}

struct SpOptions
{
    double tol = 1e-5;     // relative power change between iterations
    int max_iter = 200;
    double kkt_tol = 1e-4; // also required before declaring convergence
    DualOptions dual;
};

/// State of one SP run. U and W always correspond to V (Steps 1-2 applied to
/// the final precoders).
struct WmmseState
{
    PrecoderSet V;
    ReceiverSet rw;
    RVec lambda;
    int iteration = 0;
    std::vector<double> objective_trace; // P(V) at init and after each iteration
    std::vector<double> kkt_trace;
    bool converged = false;
    bool dual_converged = true;

    double power() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
};

/// Feasible starting point with every block in use. The interference-free
/// construction leaves most blocks at zero or rank one, and the WMMSE updates
/// can never grow a zero receiver, so a small full-rank component is added
/// and backed off until every rate constraint holds again.
inline PrecoderSet spread_init(const ChannelState &H, const RateConstraint &rc)
{
    PrecoderSet base = feasible_init(H, rc);
    const int d = static_cast<int>(base.V(0, 0).cols());
    bool deficient = false;
    for (int m = 0; m < H.M() && !deficient; ++m)
        for (int k = 0; k < H.K() && !deficient; ++k)
        {
            if (rc.nats(k) <= 0.0)
                continue;
            Eigen::JacobiSVD<CMat> svd(base.V(m, k));
            const auto &s = svd.singularValues();
            const int rank = static_cast<int>((s.array() > 1e-12 * std::max(s.maxCoeff(), 1e-300)).count());
            deficient = rank < d;
        }
    if (!deficient)
        return base;

    std::vector<double> boosted = rc.mu_bps;
    for (auto &x : boosted)
        x *= 1.05;
    const PrecoderSet lifted = feasible_init(H, RateConstraint(boosted, rc.B_W));
    const double pref = total_power(lifted) / H.K();
    const EffectiveLinks G(H, Mode::coordinated);
    for (double eps = 0.1; eps > 1e-12; eps *= 0.5)
    {
        PrecoderSet V = lifted;
        for (int m = 0; m < H.M(); ++m)
            for (int k = 0; k < H.K(); ++k)
            {
                if (rc.nats(k) <= 0.0)
                    continue;
                Eigen::JacobiSVD<CMat> svd(H.H(m, k, k), Eigen::ComputeFullV);
                const CMat dirs = svd.matrixV().leftCols(d);
                V.V(m, k) += std::sqrt(eps * pref / (H.M() * d)) * dirs;
            }
        const RVec R = user_rates(G, V, rc.B_W);
        bool ok = true;
        for (int k = 0; k < H.K(); ++k)
            ok = ok && R(k) >= rc.mu_bps[static_cast<std::size_t>(k)];
        if (ok)
            return V;
    }
    return base;
}

/// Alternates MMSE receivers, MSE weights and the dual-optimal precoders
/// until the relative power change is below tol and the KKT residual is
/// below kkt_tol, or max_iter is reached. Coordinated mode defaults to
/// spread_init; CoMP mode must be given a starting point.
inline WmmseState algorithm_sp(const ChannelState &H, const RateConstraint &rc, Mode mode,
                               const std::optional<PrecoderSet> &init = std::nullopt, const SpOptions &opt = {})
{
    require(rc.K() == H.K(), "algorithm_sp: rate constraint has the wrong length");
    if (!in_feasible_set(H))
        throw InfeasibleError("algorithm_sp: channel has a zero direct link");
    if (mode == Mode::comp && !init)
        throw ContractError("algorithm_sp: CoMP mode needs an initial point (see comp_initial_point)");

    const EffectiveLinks G(H, mode);
    WmmseState st;
    st.V = init ? *init : spread_init(H, rc);
    check_shape(G, st.V);
    require(st.V.all_finite(), "algorithm_sp: initial precoders contain non-finite entries");
    st.rw = update_receivers(G, st.V);
    st.lambda = RVec::Zero(H.K());
    st.objective_trace.push_back(total_power(st.V));

    std::optional<RVec> warm;
    for (st.iteration = 0; st.iteration < opt.max_iter;)
    {
        const DualProblem dp(G, st.rw, rc);
        DualResult dr = solve_dual(dp, opt.dual, warm);
        ++st.iteration;
        st.dual_converged = st.dual_converged && dr.converged;
        st.V = std::move(dr.V);
        st.lambda = dr.lambda;
        warm = dr.lambda;
        st.rw = update_receivers(G, st.V);

        const double prev = st.objective_trace.back();
        const double P = total_power(st.V);
        st.objective_trace.push_back(P);
        const double kkt = kkt_residual(G, st.V, st.rw, st.lambda, rc).value();
        st.kkt_trace.push_back(kkt);
        if (P == 0.0 || (std::abs(prev - P) <= opt.tol * P && kkt <= opt.kkt_tol))
        {
            st.converged = true;
            break;
        }
    }
    return st;
}

/// Weighted-MSE rate surrogate Rbar_k = d - (1/M) sum_m (Tr(W E) - log|W|)
/// in nats per subcarrier use.
inline RVec surrogate_rates(const ChannelState &H, const WmmseState &st, const RateConstraint &rc)
{
    const EffectiveLinks G(H, st.V.mode);
    const DualProblem dp(G, st.rw, rc);
    const RVec c = dp.constraint_values(st.V);
    RVec out(c.size());
    for (int k = 0; k < c.size(); ++k)
        out(k) = rc.nats(k) - c(k);
    return out;
}

/// CSV trace: iteration, objective, max_kkt. Row 0 is the initial point and
/// has no KKT value.
inline void write_sp_trace(std::ostream &os, const WmmseState &st)
{
    const auto old = os.precision(17);
    os << "iteration,objective,max_kkt\n";
    for (std::size_t i = 0; i < st.objective_trace.size(); ++i)
    {
        os << i << ',' << st.objective_trace[i] << ',';
        if (i > 0 && i - 1 < st.kkt_trace.size())
            os << st.kkt_trace[i - 1];
        os << '\n';
    }
    os.precision(old);
}

} // namespace cachecomp

#endif
