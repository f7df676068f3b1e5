#include "hatsga/oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace hatsga {

namespace {
constexpr long long kTreeGuard = 100000;
}

OracleReport exhaustive_min_loss(const Network& net, const SolverConfig& cfg) {
    OracleReport report;
    report.tree_count = count_spanning_trees(net);
    if (report.tree_count > kTreeGuard)
        throw std::invalid_argument("oracle: " + std::to_string(report.tree_count) +
                                    " spanning trees exceeds the desk-scale guard of " +
                                    std::to_string(kTreeGuard));

    report.best_loss = std::numeric_limits<double>::infinity();
    long long seen = 0;
    for_each_spanning_tree(net, [&](const Topology& topo) {
        ++seen;
        const PowerFlowSolution sol = solve(net, topo, cfg);
        if (!sol.converged) return;
        const double loss = eq1_loss_mw(net, topo, sol);
        ++report.converged_count;
        report.histogram.push_back({loss, topo.open});
        if (loss < report.best_loss) {
            report.best_loss = loss;
            report.best_topology = topo;
        }
    });
    if (seen != report.tree_count)
        throw std::logic_error("oracle: enumeration disagrees with the matrix-tree count");

    std::sort(report.histogram.begin(), report.histogram.end(),
              [](const OracleReport::Entry& a, const OracleReport::Entry& b) {
                  if (a.loss_mw != b.loss_mw) return a.loss_mw < b.loss_mw;
                  return a.open_switches < b.open_switches;
              });
    return report;
}

long long rank_of(const OracleReport& report, double loss_mw) {
    long long below = 0;
    for (const auto& e : report.histogram)
        if (e.loss_mw < loss_mw - 1e-9) ++below;
    return below + 1;
}

std::string oracle_csv(const OracleReport& report) {
    std::string out = "rank,loss_mw,open_switches\n";
    char buf[64];
    long long rank = 0;
    for (const auto& e : report.histogram) {
        ++rank;
        std::snprintf(buf, sizeof buf, "%lld,%.6f,", rank, e.loss_mw);
        out += buf;
        for (std::size_t k = 0; k < e.open_switches.size(); ++k) {
            if (k) out += '-';
            out += std::to_string(e.open_switches[k]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace hatsga
