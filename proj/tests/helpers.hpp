#pragma once

// Shared fixtures and independent oracles for the test suite. Everything here
// deliberately avoids the library's own algorithms where it serves as a check:
// the brute-force enumerators and closed forms are the reference, the library
// is the thing under test.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hatsga/graph.hpp"
#include "hatsga/network.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) {
    return std::string(HATSGA_FIXTURE_DIR) + "/" + name;
}

inline hatsga::BusRecord bus(int id, hatsga::BusKind kind, double p_load = 0.0,
                             double q_load = 0.0, double v_set = 1.0) {
    hatsga::BusRecord b;
    b.id = id;
    b.kind = kind;
    b.v_mag = v_set;
    b.p_load = p_load;
    b.q_load = q_load;
    return b;
}

inline hatsga::BranchRecord branch(int switch_id, int from, int to, double r, double x,
                                   double b_half = 0.0, double tap = 1.0) {
    hatsga::BranchRecord br;
    br.switch_id = switch_id;
    br.from_bus = from;
    br.to_bus = to;
    br.r = r;
    br.x = x;
    br.b_half = b_half;
    br.tap = tap;
    br.limit_mva = 9900.0;
    br.priority = 1;
    return br;
}

// slack -- load chain of two buses joined by a single branch
inline hatsga::Network two_bus(double p_load_mw, double q_load_mvar, double r, double x) {
    return hatsga::Network({bus(1, hatsga::BusKind::Slack),
                            bus(2, hatsga::BusKind::Load, p_load_mw, q_load_mvar)},
                           {branch(1, 1, 2, r, x)});
}

// Closed-form two-bus solution: |V2| from the quartic
//   v^4 + v^2 (2(Pr + Qx) - V1^2) + (P^2 + Q^2)(r^2 + x^2) = 0
// with P,Q the pu load, taking the high-voltage root. Loss is r (P^2+Q^2)/v^2.
struct TwoBusOracle {
    double v2;
    double loss_mw;
};
inline TwoBusOracle two_bus_closed_form(double p_load_mw, double q_load_mvar, double r,
                                        double x, double base = 100.0, double v1 = 1.0) {
    const double p = p_load_mw / base, q = q_load_mvar / base;
    const double b = 2.0 * (p * r + q * x) - v1 * v1;
    const double c = (p * p + q * q) * (r * r + x * x);
    const double v2sq = (-b + std::sqrt(b * b - 4.0 * c)) / 2.0;
    return {std::sqrt(v2sq), r * (p * p + q * q) / v2sq * base};
}

// Random connected network: a random spanning tree plus extra edges, moderate
// loads, all-PQ except the slack. Deterministic per seed.
inline hatsga::Network random_network(std::uint64_t seed, int n_buses, int extra_edges,
                                      bool random_angles = false) {
    std::mt19937_64 rng(seed);
    auto unit = [&] { return (rng() % 1000000) / 999999.0; };

    std::vector<hatsga::BusRecord> buses;
    for (int i = 1; i <= n_buses; ++i) {
        auto b = bus(i, i == 1 ? hatsga::BusKind::Slack : hatsga::BusKind::Load,
                     1.0 + 9.0 * unit(), 3.0 * unit());
        if (random_angles) b.v_ang = 0.5 - unit();
        buses.push_back(b);
    }

    std::vector<hatsga::BranchRecord> branches;
    std::set<std::pair<int, int>> used;
    auto add_edge = [&](int a, int b2) {
        branches.push_back(branch(static_cast<int>(branches.size()) + 1, a, b2,
                                  0.01 + 0.05 * unit(), 0.03 + 0.15 * unit()));
        used.insert(std::minmax(a, b2));
    };
    for (int i = 2; i <= n_buses; ++i) add_edge(1 + static_cast<int>(rng() % (i - 1)), i);
    for (int tries = 0; extra_edges > 0 && tries < 200; ++tries) {
        int a = 1 + static_cast<int>(rng() % n_buses);
        int b2 = 1 + static_cast<int>(rng() % n_buses);
        if (a == b2 || used.count(std::minmax(a, b2))) continue;
        add_edge(a, b2);
        --extra_edges;
    }
    return hatsga::Network(std::move(buses), std::move(branches));
}

// Independent spanning-tree oracle: try every (n-1)-subset of branches and keep
// the ones that connect all buses. Exponential, so only for small graphs.
inline std::vector<std::vector<int>> brute_force_spanning_trees(const hatsga::Network& net) {
    const int m = net.branch_count();
    const int k = net.bus_count() - 1;
    std::vector<std::vector<int>> out;
    std::vector<int> pick(k);
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == k) {
            std::vector<int> closed(pick.begin(), pick.end());
            if (hatsga::connects_all_buses(net, closed)) out.push_back(closed);
            return;
        }
        for (int id = start; id <= m - (k - depth - 1); ++id) {
            pick[depth] = id;
            self(self, id + 1, depth + 1);
        }
    };
    if (k >= 0 && k <= m) rec(rec, 1, 0);
    return out;
}

inline hatsga::Topology all_closed(const hatsga::Network& net) {
    std::vector<int> ids;
    for (int id = 1; id <= net.branch_count(); ++id) ids.push_back(id);
    return hatsga::Topology::from_closed(net, ids);
}

}  // namespace testutil
