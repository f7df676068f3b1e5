#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hatsga/network.hpp"
#include "hatsga/search.hpp"

namespace hatsga {

struct RunStatistics {
    double mean = 0.0;
    double stddev = 0.0;        // sample standard deviation (n - 1)
    double ci95_low = 0.0;      // mean -/+ 1.96 * stddev / sqrt(n)
    double ci95_high = 0.0;
};

RunStatistics compute_stats(std::span<const double> values);

struct BenchRun {
    int index = 0;              // 1-based
    std::vector<int> initial_open;
    std::vector<int> best_open;
    double loss_mw = 0.0;
    double seconds = 0.0;
    int evaluations = 0;
};

struct BenchReport {
    std::vector<BenchRun> runs;
    RunStatistics loss_stats;   // over converged (finite-loss) runs
    RunStatistics time_stats;   // over all runs
    int converged_runs = 0;
    std::uint64_t seed = 0;
    SearchOptions options;

    std::string csv() const;
};

// Priority vector for one run: branch weights drawn as 1 + (next() % 1000)
// from the supplied mt19937_64 stream, uniform integers 1..1000.
std::vector<double> random_priorities(const Network& net, std::mt19937_64& rng);

// N searches with per-run random priority vectors from a single seeded
// mt19937_64 stream. Priority vectors whose Prim tree repeats an already-used
// initial topology are rejected and redrawn, so all initial trigger topologies
// are distinct; throws std::runtime_error after 100*N rejections.
// Requires runs >= 2.
BenchReport run_bench(const Network& net, int runs, std::uint64_t seed,
                      const SearchOptions& opts);

// Published reference losses (MW) for the IEEE 14-bus reconfiguration studies
// this harness is compared against, and the published spanning-tree count.
struct ReferenceLoss {
    const char* label;
    double loss_mw;
};
inline constexpr ReferenceLoss kReferenceLosses[] = {
    {"Original network (IEEE-14)", 13.436},
    {"PSO", 9.9159},
    {"MPSO", 8.5053},
    {"ABC", 6.4611},
    {"FSS", 7.8457},
    {"HATSGA", 4.2796},
    {"GSA", 3.2764},
};
inline constexpr long long kReferenceTreeCount = 3909;

}  // namespace hatsga
