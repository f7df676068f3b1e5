#include "hatsga/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>

namespace hatsga {

namespace {

// adjacency over dense bus indices for a set of closed switches
std::vector<std::vector<std::pair<int, int>>> adjacency(const Network& net,
                                                        const std::vector<int>& closed) {
    std::vector<std::vector<std::pair<int, int>>> adj(net.bus_count());
    for (int id : closed) {
        const BranchRecord& br = net.branch(id);
        int f = net.bus_index(br.from_bus);
        int t = net.bus_index(br.to_bus);
        adj[f].emplace_back(t, id);
        adj[t].emplace_back(f, id);
    }
    return adj;
}

int reachable_count(const Network& net, const std::vector<int>& closed) {
    auto adj = adjacency(net, closed);
    std::vector<char> seen(net.bus_count(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (auto [v, id] : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                stack.push_back(v);
            }
    }
    return reached;
}

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

}  // namespace

Topology Topology::from_closed(const Network& net, std::vector<int> closed_switches) {
    std::sort(closed_switches.begin(), closed_switches.end());
    closed_switches.erase(std::unique(closed_switches.begin(), closed_switches.end()),
                          closed_switches.end());
    Topology t;
    t.closed = std::move(closed_switches);
    for (int id : t.closed)
        if (id < 1 || id > net.branch_count())
            throw std::invalid_argument("unknown switch id " + std::to_string(id));
    t.open.reserve(net.branch_count() - t.closed.size());
    std::size_t k = 0;
    for (int id = 1; id <= net.branch_count(); ++id) {
        if (k < t.closed.size() && t.closed[k] == id)
            ++k;
        else
            t.open.push_back(id);
    }
    return t;
}

bool Topology::is_closed(int switch_id) const {
    return std::binary_search(closed.begin(), closed.end(), switch_id);
}

bool connects_all_buses(const Network& net, const std::vector<int>& closed) {
    return reachable_count(net, closed) == net.bus_count();
}

bool is_radial(const Network& net, const Topology& topo) {
    if (static_cast<int>(topo.closed.size()) != net.bus_count() - 1) return false;
    return connects_all_buses(net, topo.closed);
}

Topology prim_mst(const Network& net, const std::vector<double>& weights) {
    if (static_cast<int>(weights.size()) != net.branch_count())
        throw std::invalid_argument("prim_mst: need one weight per branch");

    const int n = net.bus_count();
    std::vector<char> in_tree(n, 0);
    in_tree[net.slack_index()] = 1;
    std::vector<int> closed;
    closed.reserve(n - 1);

    // O(n * m) frontier scan; plenty at desk scale and trivially deterministic.
    for (int picked = 1; picked < n; ++picked) {
        int best_id = -1;
        double best_w = 0.0;
        int best_new = -1;
        for (const BranchRecord& br : net.branches()) {
            int f = net.bus_index(br.from_bus);
            int t = net.bus_index(br.to_bus);
            if (in_tree[f] == in_tree[t]) continue;
            double w = weights[br.switch_id - 1];
            if (best_id < 0 || w < best_w || (w == best_w && br.switch_id < best_id)) {
                best_id = br.switch_id;
                best_w = w;
                best_new = in_tree[f] ? t : f;
            }
        }
        if (best_id < 0) throw std::invalid_argument("prim_mst: network is disconnected");
        closed.push_back(best_id);
        in_tree[best_new] = 1;
    }
    return Topology::from_closed(net, std::move(closed));
}

SectorLoop fundamental_cycle(const Network& net, const Topology& tree, int trigger) {
    if (tree.is_closed(trigger))
        throw std::invalid_argument("fundamental_cycle: trigger switch is already closed");
    if (!is_radial(net, tree))
        throw std::invalid_argument("fundamental_cycle: topology is not radial");

    const BranchRecord& tb = net.branch(trigger);
    int src = net.bus_index(tb.from_bus);
    int dst = net.bus_index(tb.to_bus);

    auto adj = adjacency(net, tree.closed);
    // BFS parent pointers for the unique tree path src -> dst
    std::vector<int> prev_bus(net.bus_count(), -1), prev_edge(net.bus_count(), -1);
    std::deque<int> queue{src};
    prev_bus[src] = src;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        if (u == dst) break;
        for (auto [v, id] : adj[u])
            if (prev_bus[v] < 0) {
                prev_bus[v] = u;
                prev_edge[v] = id;
                queue.push_back(v);
            }
    }

    SectorLoop loop;
    loop.trigger = trigger;
    std::vector<int> path;
    for (int u = dst; u != src; u = prev_bus[u]) path.push_back(prev_edge[u]);
    loop.loop_edges.reserve(path.size() + 1);
    loop.loop_edges.push_back(trigger);
    loop.loop_edges.insert(loop.loop_edges.end(), path.rbegin(), path.rend());
    return loop;
}

long long count_spanning_trees(const Network& net) {
    const int n = net.bus_count();
    if (n == 1) return 1;

    // Integer Laplacian, slack row/column removed (any cofactor works).
    const int d = n - 1;
    std::vector<std::vector<__int128>> m(d, std::vector<__int128>(d, 0));
    for (const BranchRecord& br : net.branches()) {
        int f = net.bus_index(br.from_bus);
        int t = net.bus_index(br.to_bus);
        auto bump = [&](int i, int j, int v) {
            int s = net.slack_index();
            if (i == s || j == s) return;
            int ri = i < s ? i : i - 1;
            int rj = j < s ? j : j - 1;
            m[ri][rj] += v;
        };
        bump(f, f, 1);
        bump(t, t, 1);
        bump(f, t, -1);
        bump(t, f, -1);
    }

    // Bareiss fraction-free elimination: every intermediate is an exact minor.
    __int128 sign = 1;
    __int128 prev = 1;
    for (int c = 0; c < d; ++c) {
        int piv = -1;
        for (int r = c; r < d; ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            sign = -sign;
        }
        for (int r = c + 1; r < d; ++r) {
            for (int cc = c + 1; cc < d; ++cc)
                m[r][cc] = (m[r][cc] * m[c][c] - m[r][c] * m[c][cc]) / prev;
            m[r][c] = 0;
        }
        prev = m[c][c];
    }
    __int128 det = sign * m[d - 1][d - 1];
    if (det > std::numeric_limits<long long>::max())
        throw std::overflow_error("count_spanning_trees: count exceeds 64-bit range");
    return static_cast<long long>(det);
}

namespace {

// contraction/deletion recursion over branch indices with connectivity pruning
void enumerate_rec(const Network& net, int next_switch, Dsu dsu, int components,
                   std::vector<int>& chosen,
                   const std::function<void(const Topology&)>& visit) {
    if (components == 1) {
        visit(Topology::from_closed(net, chosen));
        return;
    }
    if (next_switch > net.branch_count()) return;

    const BranchRecord& br = net.branch(next_switch);
    int f = dsu.find(net.bus_index(br.from_bus));
    int t = dsu.find(net.bus_index(br.to_bus));
    if (f == t) {
        // self-loop under contraction: can never join a tree
        enumerate_rec(net, next_switch + 1, std::move(dsu), components, chosen, visit);
        return;
    }

    // include next_switch
    {
        Dsu with = dsu;
        with.unite(f, t);
        chosen.push_back(next_switch);
        enumerate_rec(net, next_switch + 1, std::move(with), components - 1, chosen, visit);
        chosen.pop_back();
    }
    // exclude it, but only if the remaining branches can still connect everything
    {
        Dsu rest = dsu;
        int comps = components;
        for (int id = next_switch + 1; id <= net.branch_count(); ++id) {
            const BranchRecord& b2 = net.branch(id);
            if (rest.unite(net.bus_index(b2.from_bus), net.bus_index(b2.to_bus))) --comps;
        }
        if (comps == 1)
            enumerate_rec(net, next_switch + 1, std::move(dsu), components, chosen, visit);
    }
}

}  // namespace

void for_each_spanning_tree(const Network& net,
                            const std::function<void(const Topology&)>& visit) {
    std::vector<int> chosen;
    chosen.reserve(net.bus_count() - 1);
    enumerate_rec(net, 1, Dsu(net.bus_count()), net.bus_count(), chosen, visit);
}

std::vector<Topology> enumerate_spanning_trees(const Network& net) {
    std::vector<Topology> out;
    for_each_spanning_tree(net, [&](const Topology& t) { out.push_back(t); });
    return out;
}

}  // namespace hatsga
