#include "hatsga/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hatsga {

namespace {

constexpr double kPi = 3.14159265358979323846;
// one shared constant so parsing and serialization round identically
constexpr double kDegToRad = kPi / 180.0;

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line_no, std::string("bad number for ") + what + ": '" + tok + "'");
    }
}

int parse_int(const std::string& tok, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line_no, std::string("bad integer for ") + what + ": '" + tok + "'");
    }
}

// connectivity of the graph over ALL branches, by bus indices
bool graph_connected(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n == 0) return false;
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                stack.push_back(v);
            }
    }
    return reached == n;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Degrees value that re-parses to exactly `rad`. The nominal quotient can be
// one rounding step off the preimage of rad under d -> fl(d * pi/180), so walk
// neighbouring doubles until the product rounds back (the original file value
// is in the preimage, so this terminates).
double degrees_for(double rad) {
    const double c = kDegToRad;
    double d = rad / c;
    if (d * c == rad) return d;
    for (int step = 1; step <= 8; ++step) {
        double up = d, down = d;
        for (int k = 0; k < step; ++k) {
            up = std::nextafter(up, std::numeric_limits<double>::infinity());
            down = std::nextafter(down, -std::numeric_limits<double>::infinity());
        }
        if (up * c == rad) return up;
        if (down * c == rad) return down;
    }
    return d;
}

}  // namespace

Network::Network(std::vector<BusRecord> buses, std::vector<BranchRecord> branches,
                 double base_mva)
    : buses_(std::move(buses)), branches_(std::move(branches)), base_mva_(base_mva) {
    validate();
}

void Network::validate() {
    if (buses_.empty()) throw ParseError(0, "network has no buses");
    if (base_mva_ <= 0.0) throw ParseError(0, "BASE_MVA must be positive");

    id_to_index_.clear();
    id_to_index_.reserve(buses_.size());
    slack_index_ = -1;
    for (std::size_t i = 0; i < buses_.size(); ++i) {
        const BusRecord& b = buses_[i];
        id_to_index_.emplace_back(b.id, static_cast<int>(i));
        if (b.kind == BusKind::Slack) {
            if (slack_index_ >= 0) throw ParseError(0, "multiple slack buses");
            slack_index_ = static_cast<int>(i);
        }
        if (b.kind != BusKind::Load && b.v_mag <= 0.0)
            throw ParseError(0, "bus " + std::to_string(b.id) +
                                    ": slack/generator voltage setpoint must be positive");
        if (std::isfinite(b.q_min) && std::isfinite(b.q_max) && b.q_min > b.q_max)
            throw ParseError(0, "bus " + std::to_string(b.id) + ": q_min exceeds q_max");
    }
    if (slack_index_ < 0) throw ParseError(0, "no slack bus");
    std::sort(id_to_index_.begin(), id_to_index_.end());
    for (std::size_t i = 1; i < id_to_index_.size(); ++i)
        if (id_to_index_[i - 1].first == id_to_index_[i].first)
            throw ParseError(0, "duplicate bus id " + std::to_string(id_to_index_[i].first));

    std::vector<std::pair<int, int>> edges;
    edges.reserve(branches_.size());
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        BranchRecord& br = branches_[i];
        if (br.switch_id != static_cast<int>(i) + 1)
            throw ParseError(0, "switch ids must be dense 1..m in branch order");
        if (br.from_bus == br.to_bus)
            throw ParseError(0, "branch S" + std::to_string(br.switch_id) + ": from == to");
        if (br.r < 0.0)
            throw ParseError(0, "branch S" + std::to_string(br.switch_id) + ": negative resistance");
        if (br.x == 0.0 && br.r <= 0.0)
            throw ParseError(0, "branch S" + std::to_string(br.switch_id) + ": zero impedance");
        if (br.tap <= 0.0)
            throw ParseError(0, "branch S" + std::to_string(br.switch_id) + ": tap must be positive");
        if (br.priority < 1)
            throw ParseError(0, "branch S" + std::to_string(br.switch_id) + ": priority must be >= 1");
        int fi, ti;
        try {
            fi = bus_index(br.from_bus);
            ti = bus_index(br.to_bus);
        } catch (const std::exception&) {
            throw ParseError(0, "branch S" + std::to_string(br.switch_id) + ": unknown bus");
        }
        edges.emplace_back(fi, ti);
    }
    if (!graph_connected(bus_count(), edges))
        throw ParseError(0, "network graph is not connected");
}

int Network::bus_index(int bus_id) const {
    auto it = std::lower_bound(id_to_index_.begin(), id_to_index_.end(),
                               std::make_pair(bus_id, -1));
    if (it == id_to_index_.end() || it->first != bus_id)
        throw std::out_of_range("unknown bus id " + std::to_string(bus_id));
    return it->second;
}

const BranchRecord& Network::branch(int switch_id) const {
    if (switch_id < 1 || switch_id > branch_count())
        throw std::out_of_range("unknown switch id " + std::to_string(switch_id));
    return branches_[switch_id - 1];
}

Network Network::parse(std::string_view text) {
    std::vector<BusRecord> buses;
    std::vector<BranchRecord> branches;
    double base = 100.0;  // used when no BASE_MVA line is given

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        auto fields = split_fields(raw);
        if (fields.empty()) continue;
        const std::string& kw = fields[0];

        if (kw == "BASE_MVA") {
            if (fields.size() != 2) throw ParseError(line_no, "BASE_MVA takes one value");
            base = parse_number(fields[1], line_no, "BASE_MVA");
        } else if (kw == "BUS") {
            if (fields.size() != 12)
                throw ParseError(line_no, "BUS needs 11 fields, got " +
                                              std::to_string(fields.size() - 1));
            BusRecord b;
            b.id = parse_int(fields[1], line_no, "bus id");
            if (fields[2] == "slack")
                b.kind = BusKind::Slack;
            else if (fields[2] == "gen")
                b.kind = BusKind::Generator;
            else if (fields[2] == "load")
                b.kind = BusKind::Load;
            else
                throw ParseError(line_no, "bus kind must be slack|gen|load, got '" + fields[2] + "'");
            b.v_mag = parse_number(fields[3], line_no, "v_mag");
            b.v_ang = parse_number(fields[4], line_no, "v_ang_deg") * kDegToRad;
            b.p_load = parse_number(fields[5], line_no, "p_load");
            b.q_load = parse_number(fields[6], line_no, "q_load");
            b.p_gen = parse_number(fields[7], line_no, "p_gen");
            b.q_gen = parse_number(fields[8], line_no, "q_gen");
            b.q_min = parse_number(fields[9], line_no, "q_min");
            b.q_max = parse_number(fields[10], line_no, "q_max");
            b.shunt_b = parse_number(fields[11], line_no, "shunt_b");
            buses.push_back(b);
        } else if (kw == "BRANCH") {
            if (fields.size() != 10)
                throw ParseError(line_no, "BRANCH needs 9 fields, got " +
                                              std::to_string(fields.size() - 1));
            BranchRecord br;
            br.switch_id = static_cast<int>(branches.size()) + 1;
            br.from_bus = parse_int(fields[1], line_no, "from bus");
            br.to_bus = parse_int(fields[2], line_no, "to bus");
            br.r = parse_number(fields[3], line_no, "r");
            br.x = parse_number(fields[4], line_no, "x");
            br.b_half = parse_number(fields[5], line_no, "b_half");
            br.tap = parse_number(fields[6], line_no, "tap");
            br.limit_mva = parse_number(fields[7], line_no, "limit_mva");
            br.priority = parse_int(fields[8], line_no, "priority");
            if (fields[9] == "open")
                br.closed_by_default = false;
            else if (fields[9] == "closed")
                br.closed_by_default = true;
            else
                throw ParseError(line_no, "branch state must be open|closed, got '" + fields[9] + "'");
            branches.push_back(br);
        } else {
            throw ParseError(line_no, "unknown keyword '" + kw + "'");
        }
    }
    return Network(std::move(buses), std::move(branches), base);
}

Network Network::load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("file not found: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string Network::serialize() const {
    std::ostringstream out;
    out << "BASE_MVA " << format_g17(base_mva_) << "\n";
    for (const BusRecord& b : buses_) {
        const char* kind = b.kind == BusKind::Slack ? "slack"
                           : b.kind == BusKind::Generator ? "gen" : "load";
        out << "BUS " << b.id << ' ' << kind << ' ' << format_g17(b.v_mag) << ' '
            << format_g17(degrees_for(b.v_ang)) << ' ' << format_g17(b.p_load) << ' '
            << format_g17(b.q_load) << ' ' << format_g17(b.p_gen) << ' '
            << format_g17(b.q_gen) << ' ' << format_g17(b.q_min) << ' '
            << format_g17(b.q_max) << ' ' << format_g17(b.shunt_b) << "\n";
    }
    for (const BranchRecord& br : branches_) {
        out << "BRANCH " << br.from_bus << ' ' << br.to_bus << ' ' << format_g17(br.r) << ' '
            << format_g17(br.x) << ' ' << format_g17(br.b_half) << ' ' << format_g17(br.tap)
            << ' ' << format_g17(br.limit_mva) << ' ' << br.priority << ' '
            << (br.closed_by_default ? "closed" : "open") << "\n";
    }
    return out.str();
}

}  // namespace hatsga
