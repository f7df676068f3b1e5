#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "hatsga/bench.hpp"
#include "hatsga/oracle.hpp"
#include "helpers.hpp"

using namespace hatsga;
using testutil::fixture;

namespace {

// strip the trailing (wall-clock) column of every csv row
std::string without_seconds(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            auto cut = line.rfind(',');
            if (cut != std::string::npos) line.erase(cut);
        }
        out += line;
        out += '\n';
    }
    return out;
}

struct ParsedRows {
    std::vector<double> losses;
    std::vector<std::string> initial_open;
    double mean = 0.0, stddev = 0.0, ci_low = 0.0, ci_high = 0.0;
};

ParsedRows parse_csv(const std::string& csv) {
    ParsedRows rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (fields.empty()) continue;
        if (std::isdigit(static_cast<unsigned char>(fields[0][0]))) {
            rows.losses.push_back(std::stod(fields[3]));
            rows.initial_open.push_back(fields[1]);
        } else if (fields[0] == "mean") {
            rows.mean = std::stod(fields[3]);
        } else if (fields[0] == "stddev") {
            rows.stddev = std::stod(fields[3]);
        } else if (fields[0] == "ci95_low") {
            rows.ci_low = std::stod(fields[3]);
        } else if (fields[0] == "ci95_high") {
            rows.ci_high = std::stod(fields[3]);
        }
    }
    return rows;
}

}  // namespace

TEST_CASE("statistics formulas on a hand-checked sample") {
    const double vals[] = {1.0, 2.0, 3.0, 4.0};
    const RunStatistics s = compute_stats(vals);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));  // sample stddev
    const double half = 1.96 * std::sqrt(5.0 / 3.0) / 2.0;
    CHECK(s.ci95_low == doctest::Approx(2.5 - half));
    CHECK(s.ci95_high == doctest::Approx(2.5 + half));
    CHECK(s.ci95_low <= s.mean);
    CHECK(s.mean <= s.ci95_high);
    CHECK(s.stddev >= 0.0);

    const double single[] = {7.0};
    const RunStatistics one = compute_stats(single);
    CHECK(one.mean == 7.0);
    CHECK(one.stddev == 0.0);
}

TEST_CASE("priority vectors are uniform integers 1..1000 from the documented stream") {
    const Network net = Network::load_file(fixture("ieee14.net"));
    std::mt19937_64 rng(123);
    const auto w = random_priorities(net, rng);
    REQUIRE(w.size() == 20);
    std::mt19937_64 replay(123);
    for (double v : w) {
        CHECK(v == 1.0 + static_cast<double>(replay() % 1000));
        CHECK(v >= 1.0);
        CHECK(v <= 1000.0);
        CHECK(v == std::floor(v));
    }
}

TEST_CASE("bench rejects fewer than two runs") {
    const Network net = Network::load_file(fixture("triangle.net"));
    CHECK_THROWS_WITH(run_bench(net, 1, 1, SearchOptions{}), doctest::Contains(">= 2"));
}

TEST_CASE("bench fails loudly when distinct initial topologies run out") {
    // the triangle has only three spanning trees, so four distinct initial
    // trigger topologies cannot exist
    const Network net = Network::load_file(fixture("triangle.net"));
    CHECK_THROWS_WITH(run_bench(net, 4, 7, SearchOptions{}),
                      doctest::Contains("distinct initial topologies"));
}

TEST_CASE("bench guarantees distinct initial topologies and an oracle-consistent floor") {
    const Network net = Network::load_file(fixture("triangle.net"));
    const BenchReport report = run_bench(net, 3, 5, SearchOptions{});
    REQUIRE(report.runs.size() == 3);
    std::set<std::vector<int>> initials;
    for (const BenchRun& r : report.runs) initials.insert(r.initial_open);
    CHECK(initials.size() == 3);

    const OracleReport oracle = exhaustive_min_loss(net, SolverConfig{});
    for (const BenchRun& r : report.runs) CHECK(r.loss_mw >= oracle.best_loss - 1e-9);
    // one of the three initial trees IS the optimum, so the best run hits it
    double best = report.runs[0].loss_mw;
    for (const BenchRun& r : report.runs) best = std::min(best, r.loss_mw);
    CHECK(best == doctest::Approx(oracle.best_loss).epsilon(1e-9));
}

TEST_CASE("bench csv is reproducible apart from wall-clock columns") {
    const Network net = Network::load_file(fixture("ieee14.net"));
    SearchOptions opts;
    const BenchReport a = run_bench(net, 8, 99, opts);
    const BenchReport b = run_bench(net, 8, 99, opts);
    CHECK(without_seconds(a.csv()) == without_seconds(b.csv()));

    // different seed, different report
    const BenchReport c = run_bench(net, 8, 100, opts);
    CHECK(without_seconds(a.csv()) != without_seconds(c.csv()));
}

TEST_CASE("statistics recomputed from the emitted rows match the emitted statistics") {
    const Network net = Network::load_file(fixture("ieee14.net"));
    const BenchReport report = run_bench(net, 10, 3, SearchOptions{});
    const ParsedRows rows = parse_csv(report.csv());
    REQUIRE(rows.losses.size() == 10);

    std::vector<double> finite;
    for (double v : rows.losses)
        if (std::isfinite(v)) finite.push_back(v);
    const RunStatistics recomputed = compute_stats(finite);
    CHECK(std::abs(recomputed.mean - rows.mean) <= 1e-9);
    CHECK(std::abs(recomputed.stddev - rows.stddev) <= 1e-9);
    CHECK(std::abs(recomputed.ci95_low - rows.ci_low) <= 1e-9);
    CHECK(std::abs(recomputed.ci95_high - rows.ci_high) <= 1e-9);
}

TEST_CASE("bench rows expose the searched topologies, ascending and dash-separated") {
    const Network net = Network::load_file(fixture("ieee14.net"));
    const BenchReport report = run_bench(net, 3, 21, SearchOptions{});
    const ParsedRows rows = parse_csv(report.csv());
    REQUIRE(rows.initial_open.size() == 3);
    for (const std::string& s : rows.initial_open) {
        std::istringstream ss(s);
        std::string tok;
        int prev = 0, count = 0;
        while (std::getline(ss, tok, '-')) {
            const int v = std::stoi(tok);
            CHECK(v > prev);
            prev = v;
            ++count;
        }
        CHECK(count == net.branch_count() - (net.bus_count() - 1));  // 20 - 13 = 7 open
    }
}
