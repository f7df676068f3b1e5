#pragma once

#include <functional>
#include <vector>

#include "hatsga/network.hpp"

namespace hatsga {

// A switch configuration: every switch is either closed or open.
// Both lists are kept sorted ascending; together they partition 1..m.
struct Topology {
    std::vector<int> closed;
    std::vector<int> open;

    static Topology from_closed(const Network& net, std::vector<int> closed_switches);
    bool is_closed(int switch_id) const;
};

// The unique cycle created by closing one open switch on a radial tree.
// loop_edges starts with the trigger, followed by the tree path between the
// trigger's endpoints.
struct SectorLoop {
    int trigger = 0;
    std::vector<int> loop_edges;
};

// True iff the closed switches form a spanning tree of the bus set.
bool is_radial(const Network& net, const Topology& topo);

// True iff the closed switches connect every bus (cycles allowed).
bool connects_all_buses(const Network& net, const std::vector<int>& closed);

// Prim's minimum spanning tree over the switch graph, rooted at the slack bus.
// Ties between equal-weight frontier edges go to the lowest switch id, which
// makes the result deterministic. weights[i] is the weight of switch id i+1.
Topology prim_mst(const Network& net, const std::vector<double>& weights);

// The sector loop obtained by closing `trigger` on a radial tree.
SectorLoop fundamental_cycle(const Network& net, const Topology& tree, int trigger);

// Spanning-tree count by the matrix-tree theorem: a cofactor of the integer
// graph Laplacian, evaluated with exact integer arithmetic.
long long count_spanning_trees(const Network& net);

// Visit every spanning tree exactly once (contraction/deletion recursion with
// connectivity pruning). Order is deterministic.
void for_each_spanning_tree(const Network& net,
                            const std::function<void(const Topology&)>& visit);

std::vector<Topology> enumerate_spanning_trees(const Network& net);

}  // namespace hatsga
