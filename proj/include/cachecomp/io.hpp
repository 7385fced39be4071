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

#ifndef CACHECOMP_IO_HPP
#define CACHECOMP_IO_HPP

#include "errors.hpp"
#include "sim.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#ifndef CACHECOMP_VERSION
#define CACHECOMP_VERSION "0.1.0"
#endif

namespace cachecomp
{

namespace io_detail
{

inline std::string num(double x)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(15);
    os << x;
    return os.str();
}

inline void write_file(const std::filesystem::path &path, const std::string &content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open " + path.string() + " for writing");
    f << content;
    f.flush();
    if (!f)
        throw IoError("write failed for " + path.string());
}

} // namespace io_detail

inline std::string metrics_csv(const std::vector<ExperimentResult> &results)
{
    using io_detail::num;
    const int K = results.empty() ? 0 : results.front().K;
    std::ostringstream os;
    os << "scheme,t,interval,S,sum_power";
    for (int k = 1; k <= K; ++k)
        os << ",rate_" << k;
    for (int k = 1; k <= K; ++k)
        os << ",buffer_" << k;
    os << ",backhaul_bits\n";
    for (const auto &r : results)
    {
        require(r.K == K, "metrics_csv: results disagree on K");
        for (const auto &m : r.metrics)
        {
            os << r.scheme << ',' << m.t << ',' << m.interval << ',' << m.S << ',' << num(m.sum_power);
            for (double x : m.rates)
                os << ',' << num(x);
            for (double x : m.buffers)
                os << ',' << num(x);
            os << ',' << num(m.backhaul_bits) << '\n';
        }
    }
    return os.str();
}

inline std::string lc_trace_csv(const std::vector<ExperimentResult> &results)
{
    using io_detail::num;
    const int L = results.empty() ? 0 : results.front().L;
    std::ostringstream os;
    os << "scheme,interval";
    for (int l = 1; l <= L; ++l)
        os << ",q_" << l;
    os << ",psi\n";
    for (const auto &r : results)
        for (const auto &row : r.lc_trace)
        {
            os << r.scheme << ',' << row.interval;
            for (Eigen::Index l = 0; l < row.q.size(); ++l)
                os << ',' << num(row.q(l));
            os << ',' << num(row.psi) << '\n';
        }
    return os.str();
}

inline std::string summary_header()
{
    return "scheme,slots,avg_power_w,avg_power_db,power_std_error,avg_backhaul_bps,online_backhaul_bps,"
           "cache_update_bps,comp_fraction,interruptions,sp_solves,sp_mean_iterations,sp_capped\n";
}

inline std::string summary_row(const ExperimentResult &r)
{
    using io_detail::num;
    std::ostringstream os;
    os << r.scheme << ',' << r.slots << ',' << num(r.avg_power_w) << ',' << num(r.avg_power_db) << ','
       << num(r.power_std_error) << ',' << num(r.avg_backhaul_bps) << ',' << num(r.online_backhaul_bps) << ','
       << num(r.cache_update_bps) << ',' << num(r.comp_fraction) << ',' << r.interruptions << ',' << r.sp.solves
       << ',' << num(r.sp.mean_iterations()) << ',' << r.sp.not_converged << '\n';
    return os.str();
}

/// Rows only for runs that simulated at least one slot.
inline std::string summary_csv(const std::vector<ExperimentResult> &results)
{
    std::string s = summary_header();
    for (const auto &r : results)
        if (r.slots > 0)
            s += summary_row(r);
    return s;
}

inline std::string manifest_text(const std::vector<ExperimentResult> &results, const std::string &command)
{
    std::ostringstream os;
    os << "cachecomp " << CACHECOMP_VERSION << '\n';
    os << "command: " << command << '\n';
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "timestamp: " << buf << '\n';
    for (const auto &r : results)
        os << "run: " << r.scheme << " seed=" << r.seed << " slots=" << r.slots << '\n';
    os << "config:\n";
    if (!results.empty())
        os << results.front().config_snapshot;
    return os.str();
}

/// Writes metrics.csv, lc_trace.csv, summary.csv and manifest.txt into dir.
inline void emit_results(const std::vector<ExperimentResult> &results, const std::filesystem::path &dir,
                         const std::string &command = "")
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    io_detail::write_file(dir / "metrics.csv", metrics_csv(results));
    io_detail::write_file(dir / "lc_trace.csv", lc_trace_csv(results));
    io_detail::write_file(dir / "summary.csv", summary_csv(results));
    io_detail::write_file(dir / "manifest.txt", manifest_text(results, command));
}

inline void emit_results(const ExperimentResult &result, const std::filesystem::path &dir,
                         const std::string &command = "")
{
    emit_results(std::vector<ExperimentResult>{result}, dir, command);
}

} // namespace cachecomp

#endif
