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

#ifndef CACHECOMP_CONFIG_HPP
#define CACHECOMP_CONFIG_HPP

#include "errors.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <locale>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace cachecomp
{

enum class Placement
{
    normal,
    edge
};

// Log-distance path loss: PL(d) = intercept + 10 * exponent * log10(d / ref).
struct PathLossModel
{
    double intercept_db = 128.1;
    double exponent = 3.76;
    double ref_distance_m = 1000.0;
};

struct SystemConfig
{
    int K = 3;            // BS-user pairs
    int L = 3;            // media files
    int M = 3;            // subcarriers
    int N_T = 2;          // antennas per BS
    int N_R = 2;          // antennas per user
    double B_W = 1e6;     // Hz
    double tau = 5e-3;    // slot duration, s
    int T_S = 10;         // slots per frame
    double T_C = 604800;  // cache update interval, s
    double B_C = 0.0;     // cache size per BS, bits
    std::vector<double> F;   // file sizes, bits
    std::vector<double> mu;  // streaming rates, bits/s
    std::vector<double> rho; // request popularity
    int urp_hold = 200;      // slots per URP interval
    std::uint64_t rng_seed = 1;

    Placement placement = Placement::normal;
    double isd_m = 500.0;
    PathLossModel path_loss;
    // Receiver noise power over the band. Path gains are divided by this so
    // the unit-noise signal model holds with transmit power in watts.
    double noise_power_dbm = -114.0;

    int horizon_slots = 1000;
    double lc_step0 = 1.0;
    // Divide cache subgradients by the first interval's mean coordinated
    // power, making lc_step0 dimensionless.
    bool lc_step_normalize = true;

    double sp_tol = 1e-5;
    int sp_max_iter = 200;
    double dual_tol = 1e-6;
    int dual_max_iter = 2000;

    double noise_power_w() const { return std::pow(10.0, (noise_power_dbm - 30.0) / 10.0); }

    void validate() const
    {
        auto fail = [](const std::string &m) { throw ConfigError(m); };
        if (K <= 0 || L <= 0 || M <= 0 || N_T <= 0 || N_R <= 0)
            fail("K, L, M, N_T, N_R must be positive");
        if (N_T < 2)
            fail("N_T must be at least 2");
        if (M < K)
            fail("M must be >= K");
        if (!(B_W > 0) || !(tau > 0) || T_S < 1 || !(T_C > 0) || urp_hold < 1)
            fail("B_W, tau, T_C must be positive and T_S, urp_hold >= 1");
        if (!(B_C >= 0))
            fail("B_C must be nonnegative");
        if (static_cast<int>(F.size()) != L || static_cast<int>(mu.size()) != L || static_cast<int>(rho.size()) != L)
            fail("F, mu, rho must each have L entries");
        for (int l = 0; l < L; ++l)
        {
            if (!(F[l] > 0))
                fail("F entries must be positive");
            if (!(mu[l] > 0))
                fail("mu entries must be positive");
            if (!(rho[l] >= 0))
                fail("rho entries must be nonnegative");
        }
        const double s = std::accumulate(rho.begin(), rho.end(), 0.0);
        if (std::abs(s - 1.0) > 1e-12)
            fail("rho must sum to 1");
        if (!(isd_m > 0) || !(path_loss.ref_distance_m > 0))
            fail("isd and path-loss reference distance must be positive");
        if (horizon_slots < 0)
            fail("horizon_slots must be nonnegative");
        if (!(lc_step0 >= 0))
            fail("lc_step0 must be nonnegative");
    }
};

namespace config_detail
{

inline std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string &key, const std::string &v)
{
    std::istringstream is(trim(v));
    is.imbue(std::locale::classic());
    double x = 0;
    std::string rest;
    if (trim(v) == "inf")
        return std::numeric_limits<double>::infinity();
    if (!(is >> x) || (is >> rest))
        throw ConfigError("malformed number for '" + key + "': '" + v + "'");
    return x;
}

inline long long parse_int(const std::string &key, const std::string &v)
{
    const double x = parse_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 9.0e15)
        throw ConfigError("expected integer for '" + key + "': '" + v + "'");
    return static_cast<long long>(x);
}

inline std::vector<double> parse_list(const std::string &key, const std::string &v)
{
    std::vector<double> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ','))
        out.push_back(parse_double(key, item));
    if (out.empty())
        throw ConfigError("empty list for '" + key + "'");
    return out;
}

inline bool parse_bool(const std::string &key, const std::string &v)
{
    const auto t = trim(v);
    if (t == "1" || t == "true")
        return true;
    if (t == "0" || t == "false")
        return false;
    throw ConfigError("expected boolean for '" + key + "': '" + v + "'");
}

inline std::string fmt(double x)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << x;
    return os.str();
}

inline std::string fmt_list(const std::vector<double> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + fmt(v[i]);
    return s;
}

} // namespace config_detail

// Applies one key=value assignment. Unknown keys are rejected. `mu0` and `F0`
// broadcast a single value to every file (L must already be set).
inline void apply_setting(SystemConfig &c, const std::string &key_in, const std::string &value)
{
    using namespace config_detail;
    const std::string key = trim(key_in);
    auto I = [&] { return static_cast<int>(parse_int(key, value)); };
    auto D = [&] { return parse_double(key, value); };

    if (key == "K") c.K = I();
    else if (key == "L") c.L = I();
    else if (key == "M") c.M = I();
    else if (key == "N_T") c.N_T = I();
    else if (key == "N_R") c.N_R = I();
    else if (key == "B_W") c.B_W = D();
    else if (key == "tau") c.tau = D();
    else if (key == "T_S") c.T_S = I();
    else if (key == "T_C") c.T_C = D();
    else if (key == "B_C") c.B_C = D();
    else if (key == "F") c.F = parse_list(key, value);
    else if (key == "mu") c.mu = parse_list(key, value);
    else if (key == "rho") c.rho = parse_list(key, value);
    else if (key == "mu0") c.mu.assign(static_cast<std::size_t>(std::max(c.L, 0)), D());
    else if (key == "F0") c.F.assign(static_cast<std::size_t>(std::max(c.L, 0)), D());
    else if (key == "urp_hold") c.urp_hold = I();
    else if (key == "rng_seed") c.rng_seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "placement")
    {
        const auto t = trim(value);
        if (t == "normal") c.placement = Placement::normal;
        else if (t == "edge") c.placement = Placement::edge;
        else throw ConfigError("placement must be 'normal' or 'edge', got '" + t + "'");
    }
    else if (key == "isd") c.isd_m = D();
    else if (key == "pl_intercept_db") c.path_loss.intercept_db = D();
    else if (key == "pl_exponent") c.path_loss.exponent = D();
    else if (key == "pl_ref_distance") c.path_loss.ref_distance_m = D();
    else if (key == "noise_power_dbm") c.noise_power_dbm = D();
    else if (key == "horizon_slots") c.horizon_slots = I();
    else if (key == "lc_step0") c.lc_step0 = D();
    else if (key == "lc_step_normalize") c.lc_step_normalize = parse_bool(key, value);
    else if (key == "sp_tol") c.sp_tol = D();
    else if (key == "sp_max_iter") c.sp_max_iter = I();
    else if (key == "dual_tol") c.dual_tol = D();
    else if (key == "dual_max_iter") c.dual_max_iter = I();
    else throw ConfigError("unknown config key '" + key + "'");
}

inline SystemConfig parse_config(std::istream &in, const std::string &origin = "<stream>")
{
    SystemConfig c;
    // Vector defaults depend on L, so they are filled after parsing if absent.
    c.F.clear();
    c.mu.clear();
    c.rho.clear();
    std::string line;
    int lineno = 0;
    // mu0/F0 need the final L; defer them.
    std::vector<std::pair<std::string, std::string>> deferred;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = config_detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
        const auto key = config_detail::trim(line.substr(0, eq));
        const auto val = config_detail::trim(line.substr(eq + 1));
        if (key == "mu0" || key == "F0")
            deferred.emplace_back(key, val);
        else
            apply_setting(c, key, val);
    }
    for (const auto &[k, v] : deferred)
        apply_setting(c, k, v);
    if (c.rho.empty() && c.L > 0)
        c.rho.assign(static_cast<std::size_t>(c.L), 1.0 / c.L);
    if (c.mu.empty() && c.L > 0)
        c.mu.assign(static_cast<std::size_t>(c.L), 1e6);
    if (c.F.empty() && c.L > 0)
        c.F.assign(static_cast<std::size_t>(c.L), 4.8e9);
    return c;
}

inline SystemConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

// Flat key=value snapshot; parse_config(to_kv(c)) reproduces c.
inline std::string to_kv(const SystemConfig &c)
{
    using config_detail::fmt;
    using config_detail::fmt_list;
    std::ostringstream os;
    os << "K=" << c.K << "\nL=" << c.L << "\nM=" << c.M << "\nN_T=" << c.N_T << "\nN_R=" << c.N_R
       << "\nB_W=" << fmt(c.B_W) << "\ntau=" << fmt(c.tau) << "\nT_S=" << c.T_S << "\nT_C=" << fmt(c.T_C)
       << "\nB_C=" << fmt(c.B_C) << "\nF=" << fmt_list(c.F) << "\nmu=" << fmt_list(c.mu)
       << "\nrho=" << fmt_list(c.rho) << "\nurp_hold=" << c.urp_hold << "\nrng_seed=" << c.rng_seed
       << "\nplacement=" << (c.placement == Placement::edge ? "edge" : "normal") << "\nisd=" << fmt(c.isd_m)
       << "\npl_intercept_db=" << fmt(c.path_loss.intercept_db) << "\npl_exponent=" << fmt(c.path_loss.exponent)
       << "\npl_ref_distance=" << fmt(c.path_loss.ref_distance_m) << "\nnoise_power_dbm=" << fmt(c.noise_power_dbm)
       << "\nhorizon_slots=" << c.horizon_slots << "\nlc_step0=" << fmt(c.lc_step0)
       << "\nlc_step_normalize=" << (c.lc_step_normalize ? "true" : "false") << "\nsp_tol=" << fmt(c.sp_tol)
       << "\nsp_max_iter=" << c.sp_max_iter << "\ndual_tol=" << fmt(c.dual_tol)
       << "\ndual_max_iter=" << c.dual_max_iter << "\n";
    return os.str();
}

} // namespace cachecomp

#endif
