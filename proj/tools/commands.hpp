#pragma once

#include "gjbd/partition.hpp"
#include "gjbd/solvers.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gjbd::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kBadInput = 2;
inline constexpr int kTrivial = 3;
inline constexpr int kCheckFailed = 4;

struct SolveOptions
{
    std::string input;
    std::string method = "greedy";  // greedy | consv | exact
    SolverConfig config;
    std::string out = "-";
};

struct SynthOptions
{
    std::string partition;
    Index m = 20;
    double snr = 40.0;
    std::uint64_t seed = 0;
    std::string out = "-";
};

struct BenchOptions
{
    std::string bench_case = "1";  // 1 | 2 | custom
    std::string partition;         // for custom
    std::vector<double> snrs{20, 40, 60, 80};
    int trials = 50;
    std::vector<std::string> methods{"greedy", "consv"};
    std::uint64_t seed = 0;
    Index m = 20;
    bool timing = false;
    unsigned threads = 0;  // 0: hardware concurrency
    std::string out = "-";
};

struct CheckOptions
{
    std::string input;
    std::optional<std::string> solution;
    bool bounds = false;
    bool equivalence = false;
    std::string method = "greedy";
    SolverConfig config;
    std::string out = "-";
};

int cmd_solve(const SolveOptions& opt, std::ostream& err);
int cmd_synth(const SynthOptions& opt, std::ostream& err);
int cmd_bench(const BenchOptions& opt, std::ostream& err);
int cmd_check(const CheckOptions& opt, std::ostream& err);

/// epsilon = 3 n^2 10^(-snr/20); at infinite SNR 1e-8 sqrt(sum ||A_i||_F^2).
double bench_epsilon(Index n, double snr, double scale);

/// One benchmark row: snr,trial,method,card,correct,pi,cost,runtime_ms
std::string format_bench_row(double snr, int trial, const std::string& method, Index card, bool correct,
                             std::optional<double> pi, double cost, double runtime_ms);

}  // namespace gjbd::cli
