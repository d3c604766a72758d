#include "commands.hpp"
#include "io.hpp"

#include "gjbd/errors.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace {

using namespace gjbd::cli;

std::vector<double> parse_snrs(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (item == "inf" || item == "+inf")
        {
            out.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        std::size_t used = 0;
        double v = 0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception&)
        {
            used = 0;
        }
        if (used == 0 || used != item.size() || std::isnan(v)) throw FormatError("bad SNR list '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw FormatError("empty SNR list");
    return out;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

void add_solver_flags(CLI::App* cmd, std::string& method, gjbd::SolverConfig& cfg, std::optional<double>& mu)
{
    cmd->add_option("--method", method, "greedy, consv or exact")
        ->check(CLI::IsMember({"greedy", "consv", "exact"}));
    cmd->add_option("--gamma", cfg.gamma, "null-space threshold factor (> 1)");
    cmd->add_option("--mu", mu, "relative gap for clustering, default 1/(8(n-1))");
    cmd->add_option("--epsilon", cfg.epsilon, "acceptance tolerance for consv");
    cmd->add_option("--seed", cfg.seed, "random seed");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"general joint block diagonalization"};
    app.require_subcommand(1);

    SolveOptions solve;
    std::optional<double> solve_mu;
    auto* solve_cmd = app.add_subcommand("solve", "solve a matrix set");
    solve_cmd->add_option("input", solve.input, "matrix set JSON")->required();
    add_solver_flags(solve_cmd, solve.method, solve.config, solve_mu);
    solve_cmd->add_option("--out", solve.out, "result file (default stdout)");

    SynthOptions synth;
    std::string synth_snr = "40";
    auto* synth_cmd = app.add_subcommand("synth", "generate a model instance");
    synth_cmd->add_option("--partition", synth.partition, "block sizes, e.g. 3,3,3")->required();
    synth_cmd->add_option("--m", synth.m, "number of matrices");
    synth_cmd->add_option("--snr", synth_snr, "SNR in dB, or inf");
    synth_cmd->add_option("--seed", synth.seed, "random seed");
    synth_cmd->add_option("--out", synth.out, "output file (default stdout)");

    BenchOptions bench;
    std::string bench_snrs = "20,40,60,80", bench_methods = "greedy,consv";
    auto* bench_cmd = app.add_subcommand("bench", "run a seeded benchmark sweep");
    bench_cmd->add_option("--case", bench.bench_case, "1, 2 or custom")->check(CLI::IsMember({"1", "2", "custom"}));
    bench_cmd->add_option("--partition", bench.partition, "block sizes for --case custom");
    bench_cmd->add_option("--snrs", bench_snrs, "comma separated SNR values");
    bench_cmd->add_option("--trials", bench.trials, "trials per SNR")->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--methods", bench_methods, "comma separated methods");
    bench_cmd->add_option("--seed", bench.seed, "base seed");
    bench_cmd->add_option("--m", bench.m, "number of matrices");
    bench_cmd->add_option("--threads", bench.threads, "worker threads (0: all cores)");
    bench_cmd->add_flag("--timing", bench.timing, "record wall-clock runtimes");
    bench_cmd->add_option("--out", bench.out, "CSV file (default stdout)");

    CheckOptions check;
    std::optional<double> check_mu;
    std::string solution_path;
    auto* check_cmd = app.add_subcommand("check", "verify bounds and equivalence");
    check_cmd->add_option("input", check.input, "matrix set JSON")->required();
    check_cmd->add_option("--solution", solution_path, "solve result JSON");
    check_cmd->add_flag("--bounds", check.bounds, "verify the error bounds on a traced solve");
    check_cmd->add_flag("--equivalence", check.equivalence, "check uniqueness of the exact solution");
    add_solver_flags(check_cmd, check.method, check.config, check_mu);
    check_cmd->add_option("--out", check.out, "report file (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kBadInput;
    }

    try
    {
        if (*solve_cmd)
        {
            solve.config.mu = solve_mu;
            return cmd_solve(solve, std::cerr);
        }
        if (*synth_cmd)
        {
            synth.snr = parse_snrs(synth_snr).at(0);
            return cmd_synth(synth, std::cerr);
        }
        if (*bench_cmd)
        {
            bench.snrs = parse_snrs(bench_snrs);
            bench.methods = split_list(bench_methods);
            return cmd_bench(bench, std::cerr);
        }
        if (*check_cmd)
        {
            check.config.mu = check_mu;
            if (!solution_path.empty()) check.solution = solution_path;
            return cmd_check(check, std::cerr);
        }
    }
    catch (const FormatError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    catch (const gjbd::Error& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
