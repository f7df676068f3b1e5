#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hatsga {

enum class BusKind { Slack, Generator, Load };

// One row of the vertex table: everything attached to a bus.
// Loads and generation are stored in physical units (MW / MVAr),
// voltages and shunts in per-unit.
struct BusRecord {
    int id = 0;                 // external bus id (as written in the file)
    BusKind kind = BusKind::Load;
    double v_mag = 1.0;         // pu setpoint (slack/gen) or initial guess (load)
    double v_ang = 0.0;         // radians
    double p_load = 0.0, q_load = 0.0;
    double p_gen = 0.0, q_gen = 0.0;
    double q_min = 0.0, q_max = 0.0;
    double shunt_b = 0.0;       // pu susceptance connected at the bus
};

// One row of the edge table: a switchable branch with its line parameters.
struct BranchRecord {
    int switch_id = 0;          // S1..Sm, assigned by file order
    int from_bus = 0, to_bus = 0;
    double r = 0.0, x = 0.0;    // pu series impedance
    double b_half = 0.0;        // pu line charging per end (B/2)
    double tap = 1.0;           // off-nominal ratio on the from side, 1.0 = none
    double limit_mva = 0.0;
    int priority = 1;           // edge weight seed, >= 1
    bool closed_by_default = true;
};

struct ParseError : std::runtime_error {
    ParseError(int line_no, const std::string& what)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what
                                         : what),
          line(line_no) {}
    int line;
};

// Immutable, validated network model: bus and branch tables plus the MVA base.
// Validation enforces a single slack bus, unique bus ids, dense switch ids,
// a connected switch graph and sane electrical parameters.
class Network {
  public:
    Network(std::vector<BusRecord> buses, std::vector<BranchRecord> branches,
            double base_mva = 100.0);

    static Network parse(std::string_view text);
    static Network load_file(const std::string& path);
    std::string serialize() const;

    const std::vector<BusRecord>& buses() const { return buses_; }
    const std::vector<BranchRecord>& branches() const { return branches_; }
    double base_mva() const { return base_mva_; }

    int bus_count() const { return static_cast<int>(buses_.size()); }
    int branch_count() const { return static_cast<int>(branches_.size()); }

    // Dense 0-based index of a bus id; throws on unknown id.
    int bus_index(int bus_id) const;
    int slack_index() const { return slack_index_; }

    const BranchRecord& branch(int switch_id) const;

  private:
    void validate();

    std::vector<BusRecord> buses_;
    std::vector<BranchRecord> branches_;
    double base_mva_;
    std::vector<std::pair<int, int>> id_to_index_;  // sorted (bus id, dense index)
    int slack_index_ = -1;
};

}  // namespace hatsga
