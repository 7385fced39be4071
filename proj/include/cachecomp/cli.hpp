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

#ifndef CACHECOMP_CLI_HPP
#define CACHECOMP_CLI_HPP

#include "errors.hpp"
#include "io.hpp"
#include "sim.hpp"
#include "validate.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace cachecomp::cli
{

class UsageError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class Command
{
    run,
    baseline,
    sweep,
    validate
};

enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 1,
    exit_config = 2,
    exit_solver = 3,
    exit_io = 4,
};

struct Override
{
    std::string key;
    std::string value;
};

struct SweepAxis
{
    std::string key;
    std::vector<std::string> values;
};

struct CliInvocation
{
    Command command = Command::run;
    std::string config_path;
    std::vector<Override> overrides;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<long long> slots;
    std::string baseline = "all";
    bool all_schemes = false;
    int jobs = 1;
    int instances = 20;
    std::optional<SweepAxis> sweep;
    std::string help; // set when --help was requested; nothing else is meaningful then
    std::string command_line;
};

namespace cli_detail
{

inline bool is_list_key(const std::string &k) { return k == "F" || k == "mu" || k == "rho"; }

inline Override split_override(const std::string &tok)
{
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError("malformed override '" + tok + "': expected key=value");
    return {config_detail::trim(tok.substr(0, eq)), config_detail::trim(tok.substr(eq + 1))};
}

// Rejects unknown keys and unparsable values up front.
inline void check_override(const Override &o, const std::string &tok)
{
    std::istringstream empty;
    SystemConfig scratch = parse_config(empty);
    try
    {
        apply_setting(scratch, o.key, o.value);
    }
    catch (const ConfigError &e)
    {
        throw UsageError("bad override '" + tok + "': " + e.what());
    }
}

inline std::vector<std::string> split_commas(const std::string &v)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ','))
        out.push_back(config_detail::trim(item));
    return out;
}

} // namespace cli_detail

/// Parses argv (without the program name). Throws UsageError naming the
/// offending token.
inline CliInvocation parse_invocation(const std::vector<std::string> &args)
{
    CliInvocation inv;
    for (const auto &a : args)
        inv.command_line += (inv.command_line.empty() ? "" : " ") + a;

    CLI::App app{"Cache-enabled opportunistic CoMP simulator", "cachecomp"};
    app.require_subcommand(1);
    std::vector<std::string> overrides;
    std::string output_dir;
    std::uint64_t seed = 0;
    long long slots = 0;

    auto common = [&](CLI::App *sub, bool need_config) {
        auto *c = sub->add_option("--config,-c", inv.config_path, "flat key=value configuration file");
        if (need_config)
            c->required();
        sub->add_option("--seed", seed, "master seed (overrides rng_seed)");
        sub->add_option("--override,-o", overrides, "key=value applied after the config file")
            ->allow_extra_args(false);
        sub->add_option("--output-dir", output_dir, "output directory (default $CACHECOMP_OUTPUT_DIR or ./out)");
        sub->add_option("--slots", slots, "horizon in slots (overrides horizon_slots)")->check(CLI::NonNegativeNumber);
    };

    auto *run = app.add_subcommand("run", "proposed mixed-timescale control");
    common(run, true);
    run->add_flag("--all-schemes", inv.all_schemes, "also run the three baselines");
    auto *base = app.add_subcommand("baseline", "baseline schemes");
    common(base, true);
    base->add_option("--baseline,-b", inv.baseline, "coordinated|conventional_comp|uniform_caching|all")
        ->check(CLI::IsMember({"coordinated", "conventional_comp", "uniform_caching", "all"}));
    auto *sweep = app.add_subcommand("sweep", "one run per value of a comma-separated override");
    common(sweep, true);
    sweep->add_flag("--all-schemes", inv.all_schemes, "also run the three baselines at every point");
    sweep->add_option("--jobs,-j", inv.jobs, "sweep points solved concurrently")->check(CLI::PositiveNumber);
    auto *val = app.add_subcommand("validate", "invariant suite");
    common(val, false);
    val->add_option("--instances", inv.instances, "random channel instances")->check(CLI::PositiveNumber);

    if (!args.empty() && !args.front().empty() && args.front()[0] != '-' && !app.get_subcommand_no_throw(args.front()))
        throw UsageError("unknown command '" + args.front() + "': expected run, baseline, sweep or validate");
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try
    {
        app.parse(rev);
    }
    catch (const CLI::CallForHelp &)
    {
        inv.help = app.help();
        for (auto *s : {run, base, sweep, val})
            if (s->parsed())
                inv.help = s->help();
        return inv;
    }
    catch (const CLI::ParseError &e)
    {
        throw UsageError(e.what());
    }

    if (run->parsed())
        inv.command = Command::run;
    else if (base->parsed())
        inv.command = Command::baseline;
    else if (sweep->parsed())
        inv.command = Command::sweep;
    else
        inv.command = Command::validate;

    for (const auto &tok : overrides)
    {
        Override o = cli_detail::split_override(tok);
        const bool axis = inv.command == Command::sweep && !cli_detail::is_list_key(o.key) &&
                          o.value.find(',') != std::string::npos;
        if (axis)
        {
            if (inv.sweep)
                throw UsageError("second sweep axis '" + tok + "': only one override may list several values");
            SweepAxis s{o.key, cli_detail::split_commas(o.value)};
            for (const auto &v : s.values)
                cli_detail::check_override({o.key, v}, tok);
            inv.sweep = std::move(s);
            continue;
        }
        cli_detail::check_override(o, tok);
        inv.overrides.push_back(std::move(o));
    }
    if (inv.command == Command::sweep && !inv.sweep)
        throw UsageError("sweep needs an override whose value is a comma-separated list, e.g. mu0=1e6,2e6");

    if (!inv.config_path.empty() && !std::filesystem::is_regular_file(inv.config_path))
        throw UsageError("config file not found: '" + inv.config_path + "'");

    if (!output_dir.empty())
        inv.output_dir = output_dir;
    else if (const char *env = std::getenv("CACHECOMP_OUTPUT_DIR"); env && *env)
        inv.output_dir = env;
    else
        inv.output_dir = "out";
    if (val->count("--seed") || run->count("--seed") || base->count("--seed") || sweep->count("--seed"))
        inv.seed = seed;
    if (val->count("--slots") || run->count("--slots") || base->count("--slots") || sweep->count("--slots"))
        inv.slots = slots;
    return inv;
}

inline CliInvocation parse_invocation(int argc, const char *const *argv)
{
    return parse_invocation(std::vector<std::string>(argv + std::min(argc, 1), argv + argc));
}

/// Config file, then overrides, then --seed and --slots.
inline SystemConfig resolve_config(const CliInvocation &inv)
{
    SystemConfig cfg;
    if (inv.config_path.empty())
    {
        std::istringstream empty;
        cfg = parse_config(empty);
    }
    else
        cfg = load_config(inv.config_path);
    // Overrides touching L must land before mu0/F0 broadcasts.
    for (const auto &o : inv.overrides)
        if (o.key != "mu0" && o.key != "F0")
            apply_setting(cfg, o.key, o.value);
    for (const auto &o : inv.overrides)
        if (o.key == "mu0" || o.key == "F0")
            apply_setting(cfg, o.key, o.value);
    if (inv.seed)
        cfg.rng_seed = *inv.seed;
    if (inv.slots)
        cfg.horizon_slots = static_cast<int>(*inv.slots);
    cfg.validate();
    return cfg;
}

namespace cli_detail
{

inline std::vector<ExperimentResult> run_schemes(const SystemConfig &cfg, const CliInvocation &inv)
{
    const long long T = cfg.horizon_slots;
    std::vector<ExperimentResult> out;
    auto baseline = [&](const std::string &name) {
        if (name == "coordinated")
            out.push_back(run_baseline(cfg, Baseline::coordinated, T));
        else if (name == "conventional_comp")
            out.push_back(run_baseline(cfg, Baseline::conventional_comp, T));
        else
            out.push_back(run_baseline(cfg, Baseline::uniform_caching, T));
    };
    if (inv.command == Command::baseline)
    {
        if (inv.baseline == "all")
            for (const char *b : {"coordinated", "conventional_comp", "uniform_caching"})
                baseline(b);
        else
            baseline(inv.baseline);
        return out;
    }
    out.push_back(run_mixed_timescale(cfg, T));
    if (inv.all_schemes)
        for (const char *b : {"coordinated", "conventional_comp", "uniform_caching"})
            baseline(b);
    return out;
}

inline void print_summary(std::ostream &out, const std::vector<ExperimentResult> &rs)
{
    out << summary_header();
    for (const auto &r : rs)
        out << summary_row(r);
}

inline int do_sweep(const CliInvocation &inv, std::ostream &out, std::ostream &err)
{
    const SweepAxis &ax = *inv.sweep;
    const std::size_t n = ax.values.size();
    std::vector<std::vector<ExperimentResult>> results(n);
    std::vector<SystemConfig> cfgs(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        CliInvocation p = inv;
        p.overrides.push_back({ax.key, ax.values[i]});
        SystemConfig c = resolve_config(p);
        c.rng_seed = rng::derive(c.rng_seed, rng::Stream::sweep, {static_cast<std::uint64_t>(i)});
        cfgs[i] = c;
    }

    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;)
        {
            try
            {
                results[i] = run_schemes(cfgs[i], inv);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t jobs = std::min<std::size_t>(static_cast<std::size_t>(inv.jobs), n);
    std::vector<std::thread> pool;
    for (std::size_t j = 1; j < jobs; ++j)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    for (std::size_t i = 0; i < n; ++i)
        if (errors[i])
        {
            err << "sweep point " << i << " (" << ax.key << '=' << ax.values[i] << ") failed\n";
            std::rethrow_exception(errors[i]);
        }

    const std::filesystem::path root = inv.output_dir;
    std::string table = "point," + ax.key + ",seed," + summary_header();
    for (std::size_t i = 0; i < n; ++i)
    {
        emit_results(results[i], root / ("point_" + std::to_string(i)), inv.command_line);
        for (const auto &r : results[i])
            if (r.slots > 0)
                table += std::to_string(i) + ',' + ax.values[i] + ',' + std::to_string(cfgs[i].rng_seed) + ',' +
                         summary_row(r);
    }
    io_detail::write_file(root / "sweep_summary.csv", table);
    out << table;
    return exit_ok;
}

} // namespace cli_detail

inline int execute(const CliInvocation &inv, std::ostream &out, std::ostream &err)
{
    if (!inv.help.empty())
    {
        out << inv.help;
        return exit_ok;
    }
    if (inv.command == Command::sweep)
        return cli_detail::do_sweep(inv, out, err);
    const SystemConfig cfg = resolve_config(inv);
    switch (inv.command)
    {
    case Command::validate: {
        ValidateOptions o;
        o.instances = inv.instances;
        o.seed = cfg.rng_seed;
        const auto checks = run_validation(cfg, o);
        for (const auto &c : checks)
            out << format_check(c) << '\n';
        return all_passed(checks) ? exit_ok : exit_solver;
    }
    case Command::run:
    case Command::baseline:
    case Command::sweep: {
        const auto rs = cli_detail::run_schemes(cfg, inv);
        emit_results(rs, inv.output_dir, inv.command_line);
        cli_detail::print_summary(out, rs);
        return exit_ok;
    }
    }
    return exit_usage;
}

/// Full front end: parse, execute, map exceptions to exit codes.
inline int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    try
    {
        return execute(parse_invocation(args), out, err);
    }
    catch (const UsageError &e)
    {
        err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
        return exit_usage;
    }
    catch (const ConfigError &e)
    {
        err << "configuration error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const InfeasibleError &e)
    {
        err << "infeasible: " << e.what() << '\n';
        return exit_config;
    }
    catch (const ContractError &e)
    {
        err << "invalid input: " << e.what() << '\n';
        return exit_config;
    }
    catch (const ConvergenceError &e)
    {
        err << "solver did not converge: " << e.what() << '\n';
        return exit_solver;
    }
    catch (const IoError &e)
    {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    }
    catch (const std::filesystem::filesystem_error &e)
    {
        err << "i/o error: " << e.what() << '\n';
        return exit_io;
    }
}

inline int run_cli(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
    return run_cli(std::vector<std::string>(argv + std::min(argc, 1), argv + argc), out, err);
}

} // namespace cachecomp::cli

#endif
