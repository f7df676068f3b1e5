#pragma once

#include <string>
#include <vector>

#include "hatsga/graph.hpp"
#include "hatsga/network.hpp"
#include "hatsga/powerflow.hpp"

namespace hatsga {

// Ground truth by exhaustion: the loss of every spanning tree of the network.
struct OracleReport {
    long long tree_count = 0;
    Topology best_topology;
    double best_loss = 0.0;         // MW; +infinity if nothing converged
    long long converged_count = 0;
    // Converged trees sorted by (loss, open-switch set), nondecreasing.
    struct Entry {
        double loss_mw;
        std::vector<int> open_switches;
    };
    std::vector<Entry> histogram;
};

// Evaluates the power flow on every spanning tree and reports the global
// minimum of the series-loss objective. Guarded against non-desk-scale
// inputs: throws std::invalid_argument if the tree count exceeds 100000.
OracleReport exhaustive_min_loss(const Network& net, const SolverConfig& cfg);

// 1-based rank of a loss among the converged losses (1 = global optimum),
// with 1e-9 MW equality tolerance. A loss above every entry ranks
// converged_count + 1.
long long rank_of(const OracleReport& report, double loss_mw);

// CSV rows `rank,loss_mw,open_switches` with open switches dash-separated
// ascending. Deterministic byte-for-byte for a given report.
std::string oracle_csv(const OracleReport& report);

}  // namespace hatsga
