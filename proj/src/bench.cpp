#include "hatsga/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace hatsga {

namespace {

std::string dashed(const std::vector<int>& ids) {
    std::string out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k) out += '-';
        out += std::to_string(ids[k]);
    }
    return out;
}

std::string fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fixed9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

// the values printed in the CSV, parsed back, so recomputed statistics
// match the emitted ones
double round6(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(fixed6(v));
}

}  // namespace

RunStatistics compute_stats(std::span<const double> values) {
    RunStatistics s;
    const std::size_t n = values.size();
    if (n == 0) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double acc = 0.0;
        for (double v : values) acc += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(acc / static_cast<double>(n - 1));
    }
    const double half = 1.96 * s.stddev / std::sqrt(static_cast<double>(n));
    s.ci95_low = s.mean - half;
    s.ci95_high = s.mean + half;
    return s;
}

std::vector<double> random_priorities(const Network& net, std::mt19937_64& rng) {
    std::vector<double> w(net.branch_count());
    for (double& v : w) v = 1.0 + static_cast<double>(rng() % 1000);
    return w;
}

BenchReport run_bench(const Network& net, int runs, std::uint64_t seed,
                      const SearchOptions& opts) {
    if (runs < 2) throw std::invalid_argument("bench: runs must be >= 2");

    BenchReport report;
    report.seed = seed;
    report.options = opts;

    std::mt19937_64 rng(seed);
    std::set<std::vector<int>> used_initial;
    long long rejections = 0;

    while (static_cast<int>(report.runs.size()) < runs) {
        const std::vector<double> priorities = random_priorities(net, rng);
        const Topology tree0 = prim_mst(net, priorities);
        if (!used_initial.insert(tree0.open).second) {
            if (++rejections > 100LL * runs)
                throw std::runtime_error(
                    "bench: could not find " + std::to_string(runs) +
                    " distinct initial topologies after " + std::to_string(rejections) +
                    " rejections");
            continue;
        }
        const SearchResult res = search(net, priorities, opts);

        BenchRun row;
        row.index = static_cast<int>(report.runs.size()) + 1;
        row.initial_open = res.initial_open;
        row.best_open = res.best_topology.open;
        row.loss_mw = res.best_loss;
        row.seconds = res.elapsed_seconds;
        row.evaluations = res.evaluations;
        report.runs.push_back(std::move(row));
    }

    std::vector<double> losses, times;
    for (const BenchRun& r : report.runs) {
        times.push_back(round6(r.seconds));
        if (std::isfinite(r.loss_mw)) losses.push_back(round6(r.loss_mw));
    }
    report.converged_runs = static_cast<int>(losses.size());
    report.loss_stats = compute_stats(losses);
    report.time_stats = compute_stats(times);
    return report;
}

std::string BenchReport::csv() const {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "# hatsga bench: runs=%zu seed=%llu tol=%g max_iter=%d keep_ratio=%g "
                  "max_evals=%d\n",
                  runs.size(), static_cast<unsigned long long>(seed), options.solver.tolerance,
                  options.solver.max_iterations, options.elitism.keep_ratio,
                  options.max_evaluations);
    out += buf;
    out += "# rng: mt19937_64(seed), priority = 1 + (next() mod 1000)\n";
    out += "# ci95 = mean +/- 1.96*stddev/sqrt(N), sample stddev; loss statistics cover the ";
    std::snprintf(buf, sizeof buf, "%d converged runs, time statistics all %zu runs\n",
                  converged_runs, runs.size());
    out += buf;
    out += "run,initial_open,best_open,loss_mw,seconds\n";
    for (const BenchRun& r : runs) {
        out += std::to_string(r.index);
        out += ',';
        out += dashed(r.initial_open);
        out += ',';
        out += dashed(r.best_open);
        out += ',';
        out += fixed6(r.loss_mw);
        out += ',';
        out += fixed6(r.seconds);
        out += '\n';
    }
    out += "mean,,," + fixed9(loss_stats.mean) + ',' + fixed9(time_stats.mean) + '\n';
    out += "stddev,,," + fixed9(loss_stats.stddev) + ',' + fixed9(time_stats.stddev) + '\n';
    out += "ci95_low,,," + fixed9(loss_stats.ci95_low) + ',' + fixed9(time_stats.ci95_low) + '\n';
    out += "ci95_high,,," + fixed9(loss_stats.ci95_high) + ',' + fixed9(time_stats.ci95_high) +
           '\n';
    return out;
}

}  // namespace hatsga
