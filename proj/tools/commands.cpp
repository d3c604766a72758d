#include "commands.hpp"

#include "io.hpp"

#include "gjbd/analysis.hpp"
#include "gjbd/datagen.hpp"
#include "gjbd/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

namespace gjbd::cli {

namespace {

bool verbose()
{
    const char* v = std::getenv("GJBD_LOG");
    return v != nullptr && *v != '\0' && std::string(v) != "0";
}

Solution run_method(const std::string& method, const MatrixSet& a, const SolverConfig& cfg)
{
    if (method == "greedy") return greedy_solve(a, cfg);
    if (method == "consv") return conservative_solve(a, cfg);
    if (method == "exact") return exact_solve(a, cfg.seed);
    throw std::invalid_argument("unknown method '" + method + "'");
}

Json config_to_json(const SolverConfig& cfg, Index n)
{
    return Json{{"gamma", cfg.gamma}, {"mu", number(cfg.mu_for(n))}, {"epsilon", cfg.epsilon}, {"seed", cfg.seed}};
}

Json report_to_json(const BoundReport& r)
{
    Json comps = Json::object();
    for (const auto& [k, v] : r.components) comps[k] = number(v);
    return Json{{"lhs", number(r.lhs)},       {"rhs", number(r.rhs)},   {"satisfied", r.satisfied},
                {"applicable", r.applicable}, {"flag", r.flag},         {"components", comps}};
}

}  // namespace

double bench_epsilon(Index n, double snr, double scale)
{
    if (std::isinf(snr) && snr > 0) return 1e-8 * std::sqrt(scale);
    return 3.0 * static_cast<double>(n * n) * std::pow(10.0, -snr / 20.0);
}

std::string format_bench_row(double snr, int trial, const std::string& method, Index card, bool correct,
                             std::optional<double> pi, double cost, double runtime_ms)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.17g,%d,%s,%lld,%d,%.17g,%.17g,%.17g", snr, trial, method.c_str(),
                  static_cast<long long>(card), correct ? 1 : 0,
                  pi ? *pi : std::numeric_limits<double>::quiet_NaN(), cost, runtime_ms);
    return buf;
}

int cmd_solve(const SolveOptions& opt, std::ostream& err)
{
    MatrixSetFile f = read_matrix_set(opt.input);
    const Index n = f.a.order();
    const Solution s = run_method(opt.method, f.a, opt.config);

    Json doc;
    doc["method"] = opt.method;
    doc["parameters"] = config_to_json(opt.config, n);
    doc["n"] = n;
    doc["partition"] = s.partition.sizes();
    doc["w"] = matrix_to_json(s.w);
    doc["cost"] = s.cost;
    doc["trivial"] = s.trivial;
    if (f.v_inv && f.p_true)
    {
        const auto pi = performance_index(*f.v_inv, s.w, *f.p_true, s.partition);
        doc["performance_index"] = pi ? Json(*pi) : Json(nullptr);
        doc["correct"] = pi.has_value();
    }
    write_json(doc, opt.out);
    if (verbose())
        err << "solve: method=" << opt.method << " card=" << s.partition.card() << " cost=" << s.cost << '\n';
    return s.trivial ? kTrivial : kOk;
}

int cmd_synth(const SynthOptions& opt, std::ostream&)
{
    const Partition p = parse_partition(opt.partition);
    ModelInstance inst = generate_model(p, opt.m, opt.snr, opt.seed);
    MatrixSetFile f{inst.a, inst.v_inv, inst.p_true, opt.snr, opt.seed};
    write_json(to_json(f), opt.out);
    return kOk;
}

int cmd_bench(const BenchOptions& opt, std::ostream& err)
{
    Partition p = Partition::whole(1);
    if (opt.bench_case == "1")
        p = Partition({3, 3, 3});
    else if (opt.bench_case == "2")
        p = Partition({1, 2, 3, 4});
    else if (opt.bench_case == "custom")
        p = parse_partition(opt.partition);
    else
        throw FormatError("unknown case '" + opt.bench_case + "'");
    for (const auto& method : opt.methods)
        if (method != "greedy" && method != "consv" && method != "exact")
            throw FormatError("unknown method '" + method + "'");

    struct Task
    {
        std::size_t snr_index;
        int trial;
    };
    std::vector<Task> tasks;
    for (std::size_t s = 0; s < opt.snrs.size(); ++s)
        for (int t = 0; t < opt.trials; ++t) tasks.push_back({s, t});

    // rows[task][method]
    std::vector<std::vector<std::string>> rows(tasks.size());
    std::vector<std::string> notes(tasks.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++)
        {
            const double snr = opt.snrs[tasks[k].snr_index];
            const int trial = tasks[k].trial;
            const ModelInstance inst =
                generate_model(p, opt.m, snr, opt.seed + static_cast<std::uint64_t>(trial));
            SolverConfig cfg;
            cfg.seed = opt.seed + static_cast<std::uint64_t>(trial);
            cfg.epsilon = bench_epsilon(p.order(), snr, inst.a.squared_norm());

            std::vector<std::pair<std::string, std::string>> sorted;
            for (const auto& method : opt.methods)
            {
                const auto t0 = std::chrono::steady_clock::now();
                Solution s = Solution::trivial_for(p.order());
                try
                {
                    s = run_method(method, inst.a, cfg);
                }
                catch (const Error& e)
                {
                    notes[k] += "snr=" + std::to_string(snr) + " trial=" + std::to_string(trial) + " " + method +
                                ": " + e.what() + "\n";
                }
                const auto t1 = std::chrono::steady_clock::now();
                const double ms =
                    opt.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
                const auto pi = performance_index(inst.v_inv, s.w, p, s.partition);
                sorted.emplace_back(method, format_bench_row(snr, trial, method, s.partition.card(), pi.has_value(),
                                                             pi, s.cost, ms));
            }
            std::sort(sorted.begin(), sorted.end());
            for (auto& r : sorted) rows[k].push_back(std::move(r.second));
        }
    };

    unsigned nthreads = opt.threads != 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    // Sorted by (snr, trial, method): order tasks by snr value, then trial.
    std::vector<std::size_t> order(tasks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const double sx = opt.snrs[tasks[x].snr_index], sy = opt.snrs[tasks[y].snr_index];
        if (sx != sy) return sx < sy;
        return tasks[x].trial < tasks[y].trial;
    });

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (opt.out != "-")
    {
        file.open(opt.out, std::ios::binary);
        if (!file) throw FormatError("cannot write " + opt.out);
        out = &file;
    }
    *out << "snr,trial,method,card,correct,pi,cost,runtime_ms\n";
    for (std::size_t k : order)
        for (const auto& r : rows[k]) *out << r << '\n';
    for (std::size_t k : order) err << notes[k];
    return kOk;
}

int cmd_check(const CheckOptions& opt, std::ostream& err)
{
    MatrixSetFile f = read_matrix_set(opt.input);
    const MatrixSet& a = f.a;
    const Index n = a.order();
    std::optional<Solution> given;
    if (opt.solution) given = solution_from_json(read_json(*opt.solution), n);

    Json doc;
    bool ok = true;

    if (given)
    {
        const double recomputed = cost_ls(a, given->partition, given->w);
        const double diff = std::abs(recomputed - given->cost);
        const bool match = diff <= 1e-12 * std::max(std::abs(given->cost), std::abs(recomputed)) ||
                           diff <= 1e-300;
        doc["cost_check"] = {{"stored", number(given->cost)},
                             {"recomputed", number(recomputed)},
                             {"abs_diff", number(diff)},
                             {"satisfied", match}};
        ok = ok && match;
    }

    if (opt.bounds)
    {
        Json b;
        b["method"] = opt.method;
        Json offblock = Json::array(), imag = Json::array(), gap = Json::array();
        auto add = [&](Json& list, const BoundReport& r) {
            list.push_back(report_to_json(r));
            ok = ok && (!r.applicable || r.satisfied);
        };
        if (opt.method == "consv")
        {
            const ConservativeTrace trace = conservative_solve_traced(a, opt.config);
            for (const SplitRecord& rec : trace.splits)
            {
                const OneStepResult& s = rec.split;
                add(offblock, verify_offblock_bound(rec.compressed, s.z, s.delta, Solution{s.partition, s.w, s.cost}));
                for (const BoundReport& r : verify_imag_bound(rec.compressed, s.z, s.delta)) add(imag, r);
                add(gap, gap_lower_bound(s.z));
            }
        }
        else
        {
            const GreedyTrace trace =
                opt.method == "exact" ? exact_solve_traced(a, opt.config.seed) : greedy_solve_traced(a, opt.config);
            if (!trace.solution.trivial)
            {
                add(offblock, verify_offblock_bound(a, trace.z, trace.delta, trace.solution));
                for (const BoundReport& r : verify_imag_bound(a, trace.z, trace.delta)) add(imag, r);
            }
        }
        b["offblock"] = offblock;
        b["imag"] = imag;
        b["gap"] = gap;
        doc["bounds"] = b;
    }

    if (opt.equivalence)
    {
        const Solution s = given ? *given : exact_solve(a, opt.config.seed);
        const EquivalenceReport r = equivalence_check(a, s.partition, s.w, opt.config.seed);
        Json pairs = Json::array();
        for (const auto& [j, k] : r.singular_pairs) pairs.push_back({j + 1, k + 1});
        Json sig = Json::array();
        for (double x : r.pair_sigma_min) sig.push_back(x);
        const NullDimensionReport nd = null_dimension_check(a, s.partition, s.w);
        doc["equivalence"] = {{"partition", s.partition.sizes()},
                              {"all_equivalent", r.all_equivalent},
                              {"singular_pairs", pairs},
                              {"pair_sigma_min", sig},
                              {"per_block_spectra_ok", r.per_block_spectra_ok},
                              {"null_dimension", nd.total},
                              {"block_null_dimensions", nd.per_block}};
    }

    doc["all_satisfied"] = ok;
    write_json(doc, opt.out);
    if (!ok) err << "check: some bounds are violated\n";
    return ok ? kOk : kCheckFailed;
}

}  // namespace gjbd::cli
