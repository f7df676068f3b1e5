#include "hatsga/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace hatsga {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool TabuList::contains(const std::vector<int>& open_switches) const {
    return index_.count(open_switches) != 0;
}

double TabuList::loss_at(const std::vector<int>& open_switches) const {
    auto it = index_.find(open_switches);
    if (it == index_.end()) throw std::out_of_range("tabu list: unknown open-switch set");
    return entries_[it->second].loss_mw;
}

void TabuList::insert(const Network& net, const Topology& topo, double loss_mw) {
    if (!is_radial(net, topo))
        throw std::logic_error("tabu list: refusing to record a non-radial topology");
    auto [it, fresh] = index_.emplace(topo.open, entries_.size());
    if (!fresh) throw std::logic_error("tabu list: open-switch set already recorded");
    entries_.push_back(Entry{topo.open, loss_mw});
    if (loss_mw < best_loss_ || entries_.size() == 1) {
        best_loss_ = loss_mw;
        best_topology_ = topo;
    }
}

std::vector<int> elitism_filter(const Network& net, const SectorLoop& loop,
                                const PowerFlowSolution& tree_solution,
                                const ElitismConfig& cfg) {
    if (cfg.keep_ratio <= 0.0 || cfg.keep_ratio > 1.0)
        throw std::invalid_argument("elitism keep_ratio must be in (0, 1]");

    const double base = net.base_mva();
    const std::size_t m = loop.loop_edges.size();

    // (P^2 + Q^2) / V^2 of each non-trigger edge on the tree solution
    std::vector<double> flow_sq(m, 0.0);
    double flow_sq_sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const int id = loop.loop_edges[k];
        if (id == loop.trigger) continue;
        double val = 0.0;
        if (tree_solution.converged) {
            const BranchRecord& br = net.branch(id);
            const double p = tree_solution.p_branch[id - 1] / base;
            const double q = tree_solution.q_branch[id - 1] / base;
            const double v = tree_solution.v_mag[net.bus_index(br.from_bus)];
            val = (p * p + q * q) / (v * v);
        }
        flow_sq[k] = val;
        flow_sq_sum += val;
    }

    std::vector<std::pair<double, int>> ranked;  // (-score, switch_id)
    ranked.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        const int id = loop.loop_edges[k];
        double fs = flow_sq[k];
        if (id == loop.trigger && m > 1)
            fs = flow_sq_sum / static_cast<double>(m - 1);  // no tree flow: use the loop mean
        ranked.emplace_back(-net.branch(id).r * fs, id);
    }
    std::sort(ranked.begin(), ranked.end());

    const std::size_t keep =
        std::max<std::size_t>(1, static_cast<std::size_t>(
                                     std::ceil(cfg.keep_ratio * static_cast<double>(m))));
    std::vector<int> out;
    out.reserve(keep);
    for (std::size_t k = 0; k < std::min(keep, m); ++k) out.push_back(ranked[k].second);
    return out;
}

SearchResult search(const Network& net, const std::vector<double>& priorities,
                    const SearchOptions& opts) {
    if (opts.max_evaluations < 1)
        throw std::invalid_argument("search: max_evaluations must be >= 1");

    const auto t_start = std::chrono::steady_clock::now();

    SearchResult res;
    TabuList& tabu = res.tabu;

    // run-local cache of full solutions so adopting a known topology never
    // re-invokes the solver
    std::map<std::vector<int>, PowerFlowSolution> solutions;

    auto evaluate = [&](const Topology& topo) -> double {
        PowerFlowSolution sol = solve(net, topo, opts.solver);
        if (opts.on_evaluate) opts.on_evaluate(topo);
        const double loss = sol.converged ? eq1_loss_mw(net, topo, sol) : kInf;
        tabu.insert(net, topo, loss);
        solutions.emplace(topo.open, std::move(sol));
        return loss;
    };

    const Topology tree0 = prim_mst(net, priorities);
    res.initial_open = tree0.open;
    const double loss0 = evaluate(tree0);

    Topology current = tree0;
    double current_loss = loss0;

    bool out_of_budget = false;
    for (bool moved = true; moved && !out_of_budget;) {
        moved = false;
        const std::vector<int> triggers = current.open;  // snapshot for this pass
        for (int trigger : triggers) {
            if (current.is_closed(trigger)) continue;
            const SectorLoop loop = fundamental_cycle(net, current, trigger);
            const std::vector<int> candidates =
                elitism_filter(net, loop, solutions.at(current.open), opts.elitism);

            // best topology reachable through this sector loop
            std::vector<Topology> scratch;
            scratch.reserve(candidates.size());
            std::ptrdiff_t move_to = -1;
            double move_loss = kInf;
            for (int open_candidate : candidates) {
                if (open_candidate == trigger) continue;  // would reproduce the current tree
                std::vector<int> closed = current.closed;
                closed.push_back(trigger);
                closed.erase(std::remove(closed.begin(), closed.end(), open_candidate),
                             closed.end());
                scratch.push_back(Topology::from_closed(net, std::move(closed)));
                const Topology& cand = scratch.back();

                double loss;
                if (tabu.contains(cand.open)) {
                    loss = tabu.loss_at(cand.open);
                } else {
                    if (tabu.size() >= opts.max_evaluations) {
                        out_of_budget = true;
                        break;
                    }
                    loss = evaluate(cand);
                }
                if (loss < move_loss) {
                    move_loss = loss;
                    move_to = static_cast<std::ptrdiff_t>(scratch.size()) - 1;
                }
            }
            if (out_of_budget) break;
            if (move_to >= 0 && move_loss < current_loss) {
                current = scratch[move_to];
                current_loss = move_loss;
                moved = true;
            }
        }
    }

    res.best_topology = tabu.best_topology();
    res.best_loss = tabu.best_loss();
    res.evaluations = tabu.size();
    res.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

}  // namespace hatsga
