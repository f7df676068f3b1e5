#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "hatsga/bench.hpp"
#include "hatsga/oracle.hpp"
#include "hatsga/search.hpp"

namespace {

using namespace hatsga;

std::string dashed(const std::vector<int>& ids) {
    std::string out;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k) out += '-';
        out += std::to_string(ids[k]);
    }
    return out;
}

void write_out(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << contents;
}

struct CommonOpts {
    std::uint64_t seed = 1;
    double tol = 1e-8;
    int max_iter = 50;
    double keep_ratio = 0.6;
    int max_evals = 60;

    SearchOptions search_options() const {
        SearchOptions o;
        o.solver.tolerance = tol;
        o.solver.max_iterations = max_iter;
        o.elitism.keep_ratio = keep_ratio;
        o.max_evaluations = max_evals;
        return o;
    }
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--seed", c.seed, "random seed (mt19937_64)");
    cmd->add_option("--tol", c.tol, "power-flow mismatch tolerance, pu");
    cmd->add_option("--max-iter", c.max_iter, "Newton-Raphson iteration limit");
    cmd->add_option("--keep-ratio", c.keep_ratio, "elitism keep ratio in (0,1]");
    cmd->add_option("--max-evals", c.max_evals, "search evaluation budget");
}

int cmd_run(const std::string& path, const CommonOpts& c, bool file_priorities) {
    const Network net = Network::load_file(path);
    std::vector<double> priorities;
    if (file_priorities) {
        for (const BranchRecord& br : net.branches())
            priorities.push_back(static_cast<double>(br.priority));
    } else {
        std::mt19937_64 rng(c.seed);
        priorities = random_priorities(net, rng);
    }
    const SearchResult res = search(net, priorities, c.search_options());
    std::printf("initial open switches: %s\n", dashed(res.initial_open).c_str());
    std::printf("best open switches:    %s\n", dashed(res.best_topology.open).c_str());
    std::printf("best loss (MW):        %.6f\n", res.best_loss);
    std::printf("evaluations:           %d\n", res.evaluations);
    std::printf("elapsed seconds:       %.6f\n", res.elapsed_seconds);
    return 0;
}

int cmd_bench(const std::string& path, int runs, const std::string& out_path,
              const CommonOpts& c) {
    const Network net = Network::load_file(path);
    const BenchReport report = run_bench(net, runs, c.seed, c.search_options());
    const std::string csv = report.csv();
    if (!out_path.empty()) {
        write_out(out_path, csv);
        std::printf("wrote %s (%d runs, %d converged)\n", out_path.c_str(),
                    static_cast<int>(report.runs.size()), report.converged_runs);
    } else {
        std::fputs(csv.c_str(), stdout);
    }
    std::printf("loss MW:  mean=%.6f stddev=%.6f ci95=[%.6f - %.6f] over %d converged runs\n",
                report.loss_stats.mean, report.loss_stats.stddev, report.loss_stats.ci95_low,
                report.loss_stats.ci95_high, report.converged_runs);
    std::printf("seconds:  mean=%.6f stddev=%.6f ci95=[%.6f - %.6f]\n", report.time_stats.mean,
                report.time_stats.stddev, report.time_stats.ci95_low,
                report.time_stats.ci95_high);
    return 0;
}

int cmd_oracle(const std::string& path, const std::string& out_path, const CommonOpts& c) {
    const Network net = Network::load_file(path);
    SolverConfig cfg;
    cfg.tolerance = c.tol;
    cfg.max_iterations = c.max_iter;
    const OracleReport report = exhaustive_min_loss(net, cfg);

    std::printf("spanning trees:        %lld\n", report.tree_count);
    if (report.tree_count == kReferenceTreeCount)
        std::printf("reference tree count:  %lld (match)\n", kReferenceTreeCount);
    else
        std::printf("reference tree count:  %lld (MISMATCH with computed %lld)\n",
                    kReferenceTreeCount, report.tree_count);
    std::printf("converged trees:       %lld\n", report.converged_count);
    if (report.converged_count > 0) {
        std::printf("global minimum (MW):   %.6f\n", report.best_loss);
        std::printf("global best open:      %s\n", dashed(report.best_topology.open).c_str());
    } else {
        std::printf("global minimum:        none converged\n");
    }
    if (!out_path.empty()) {
        write_out(out_path, oracle_csv(report));
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_compare(const std::string& path, int runs, const CommonOpts& c) {
    const Network net = Network::load_file(path);

    // meshed base case: every switch closed
    std::vector<int> all;
    for (int id = 1; id <= net.branch_count(); ++id) all.push_back(id);
    const Topology meshed = Topology::from_closed(net, all);
    SolverConfig scfg;
    scfg.tolerance = c.tol;
    scfg.max_iterations = c.max_iter;
    const PowerFlowSolution base_sol = solve(net, meshed, scfg);
    if (!base_sol.converged) {
        std::fprintf(stderr, "error: power flow on the meshed base case did not converge\n");
        return 2;
    }

    const BenchReport bench = run_bench(net, runs, c.seed, c.search_options());
    double bench_best = std::numeric_limits<double>::infinity();
    for (const BenchRun& r : bench.runs) bench_best = std::min(bench_best, r.loss_mw);

    const OracleReport oracle = exhaustive_min_loss(net, scfg);

    std::printf("reference losses from the literature (MW):\n");
    for (const ReferenceLoss& ref : kReferenceLosses)
        std::printf("  %-28s %10.4f\n", ref.label, ref.loss_mw);
    std::printf("\ncomputed by this implementation (MW):\n");
    std::printf("  %-28s %10.4f\n", "meshed power flow loss", base_sol.loss_total);
    std::printf("  %-28s %10.4f\n", "oracle radial minimum", oracle.best_loss);
    std::printf("  %-28s %10.4f  (rank %lld of %lld converged trees)\n",
                "hatsga best of bench", bench_best, rank_of(oracle, bench_best),
                oracle.converged_count);
    std::printf("  %-28s %10.4f\n", "hatsga mean of bench", bench.loss_stats.mean);
    std::printf("\nspanning trees: computed %lld, reference %lld (%s)\n", oracle.tree_count,
                kReferenceTreeCount,
                oracle.tree_count == kReferenceTreeCount ? "match" : "mismatch");
    std::printf("bench timing: mean %.3f s over %d runs\n", bench.time_stats.mean,
                static_cast<int>(bench.runs.size()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial distribution network reconfiguration: hybrid tabu/elitism search "
                 "with a Newton-Raphson power flow and an exhaustive spanning-tree oracle"};
    app.require_subcommand(1);

    std::string net_path, out_path;
    int runs = 50;
    bool file_priorities = false;
    std::string format = "csv";
    CommonOpts common;

    CLI::App* run = app.add_subcommand("run", "one search on a network file");
    run->add_option("network", net_path, "network file")->required();
    run->add_flag("--file-priorities", file_priorities,
                  "use the priority column from the file instead of seeded random weights");
    add_common(run, common);

    CLI::App* bench = app.add_subcommand("bench", "N searches with distinct initial topologies");
    bench->add_option("network", net_path, "network file")->required();
    bench->add_option("--runs", runs, "number of runs (>= 2)");
    bench->add_option("--out", out_path, "write the CSV report here");
    bench->add_option("--format", format, "output format (csv)");
    add_common(bench, common);

    CLI::App* oracle = app.add_subcommand("oracle", "exhaustive spanning-tree ground truth");
    oracle->add_option("network", net_path, "network file")->required();
    oracle->add_option("--out", out_path, "write the CSV report here");
    oracle->add_option("--format", format, "output format (csv)");
    add_common(oracle, common);

    CLI::App* compare = app.add_subcommand("compare", "bench + oracle vs published results");
    compare->add_option("network", net_path, "network file")->required();
    compare->add_option("--runs", runs, "number of bench runs");
    add_common(compare, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (format != "csv") throw std::runtime_error("unsupported --format '" + format + "'");
        if (run->parsed()) return cmd_run(net_path, common, file_priorities);
        if (bench->parsed()) return cmd_bench(net_path, runs, out_path, common);
        if (oracle->parsed()) return cmd_oracle(net_path, out_path, common);
        if (compare->parsed()) return cmd_compare(net_path, runs, common);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
