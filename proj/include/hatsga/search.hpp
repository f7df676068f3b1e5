#pragma once

#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "hatsga/graph.hpp"
#include "hatsga/network.hpp"
#include "hatsga/powerflow.hpp"

namespace hatsga {

struct ElitismConfig {
    double keep_ratio = 0.6;    // fraction of loop edges retained, at least one
};

struct SearchOptions {
    SolverConfig solver;
    ElitismConfig elitism;
    int max_evaluations = 60;   // hard budget of distinct power-flow evaluations
    // Called once per actual power-flow evaluation (tests count solver calls).
    std::function<void(const Topology&)> on_evaluate;
};

// Persistent record of every evaluated open-switch set and its loss in MW.
// Entries keep insertion (evaluation) order; the canonical key is the sorted
// open-switch list. Non-converged evaluations store +infinity. The list is
// never cleared during a search.
class TabuList {
  public:
    struct Entry {
        std::vector<int> open_switches;
        double loss_mw;
    };

    bool contains(const std::vector<int>& open_switches) const;
    // Loss stored for a known key; throws std::out_of_range if absent.
    double loss_at(const std::vector<int>& open_switches) const;
    // Inserts a new entry; the topology must be radial and the key unseen.
    void insert(const Network& net, const Topology& topo, double loss_mw);

    const std::vector<Entry>& entries() const { return entries_; }
    int size() const { return static_cast<int>(entries_.size()); }

    const Topology& best_topology() const { return best_topology_; }
    double best_loss() const { return best_loss_; }

  private:
    std::vector<Entry> entries_;
    std::map<std::vector<int>, std::size_t> index_;
    Topology best_topology_;
    double best_loss_ = std::numeric_limits<double>::infinity();
};

struct SearchResult {
    Topology best_topology;
    double best_loss = 0.0;     // MW (series-loss objective)
    TabuList tabu;
    int evaluations = 0;        // distinct power-flow evaluations == tabu size
    double elapsed_seconds = 0.0;
    std::vector<int> initial_open;
};

// Ranks the edges of a sector loop by their estimated series-loss contribution
// r_i (P_i^2 + Q_i^2) / V_i^2 on the tree solution (the trigger, which carries
// no tree flow, scores r_i times the mean of the other edges' (P^2+Q^2)/V^2).
// Highest contribution first, ties to the lowest switch id. Returns the best
// max(1, ceil(keep_ratio * loop size)) switch ids as candidates to open.
// A non-converged solution scores every edge zero, leaving the id order.
std::vector<int> elitism_filter(const Network& net, const SectorLoop& loop,
                                const PowerFlowSolution& tree_solution,
                                const ElitismConfig& cfg);

// The HATSGA search. Starts from the Prim tree under `priorities`, then walks
// the open-switch list: each open switch is closed to form a sector loop, the
// loop's elitism candidates are opened one at a time, and every new open-switch
// set is power-flow evaluated once and recorded in the tabu list. Whenever a
// loop yields a topology better than the current tree, the search moves there
// and keeps sweeping until a full pass makes no move or the evaluation budget
// is spent. Returns the best topology over everything evaluated.
SearchResult search(const Network& net, const std::vector<double>& priorities,
                    const SearchOptions& opts);

}  // namespace hatsga
