#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vigil/detector.hpp"
#include "vigil/feed_stream.hpp"
#include "vigil/harness/csv.hpp"
#include "vigil/harness/experiment.hpp"
#include "vigil/harness/sweep.hpp"
#include "vigil/sim/oracle.hpp"

using namespace vigil;
using namespace vigil::harness;

namespace {

IpPrefix p(const char* text) { return parse_prefix(text); }

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& stem) {
        static int counter = 0;
        path = stem + "_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter++) + ".tmp";
    }
    ~TempPath() {
        std::remove(path.c_str());
        std::remove((path + ".series.csv").c_str());
    }
};

sim::Topology small_topology(uint64_t seed, bool high_degree = false,
                             int providers = 1) {
    sim::GeneratorParams params;
    params.total_nodes = 80;
    params.seed = seed;
    params.legit_provider_count = providers;
    params.hijacker_profile = high_degree
                                  ? sim::GeneratorParams::HijackerProfile::HighDegree
                                  : sim::GeneratorParams::HijackerProfile::Stub;
    return sim::generate_topology(params);
}

ExperimentConfig base_config(const sim::Topology& topo, const char* kind,
                             const char* mitigation, uint64_t seed) {
    ExperimentConfig config;
    config.topology = &topo;
    config.scenario = make_scenario(kind, mitigation);
    config.seed = seed;
    config.scenario_id = std::string(kind) + "-" + mitigation;
    return config;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("sub-prefix experiment detects, mitigates and fully recovers") {
    auto topo = small_topology(1001);
    auto config = base_config(topo, "subprefix", "immediate", 42);
    sim::EventTrace trace;
    auto result = run_experiment(config, &trace);

    CHECK(result.detected);
    CHECK(result.alarm_kind == AlarmKind::SubPrefix);
    CHECK(result.mitigation_outcome == MitigationOutcome::Split);
    REQUIRE(result.overall_delay_ms);
    CHECK(*result.overall_delay_ms >= 0);
    REQUIRE(result.t_start_ms);
    REQUIRE(result.t_total_ms);
    CHECK(*result.t_total_ms >= *result.t_start_ms);
    CHECK(result.final_infected_fraction == 0.0);
    CHECK(result.mitigation_complete);

    // overall delay is the min over per-source delays
    REQUIRE(!result.per_source_delay_ms.empty());
    int64_t min_delay = INT64_MAX;
    for (const auto& [source, delay] : result.per_source_delay_ms)
        min_delay = std::min(min_delay, delay);
    CHECK(*result.overall_delay_ms == min_delay);

    // series is a sane fraction-over-time curve
    REQUIRE(!result.infected_series.empty());
    CHECK(result.infected_series.front().first == 0);
    for (size_t i = 0; i < result.infected_series.size(); ++i) {
        const auto& [t, fraction] = result.infected_series[i];
        CHECK(fraction >= 0.0);
        CHECK(fraction <= 1.0);
        if (i) CHECK(result.infected_series[i - 1].first < t);
    }

    // ground truth markers made it into the trace
    CHECK(trace.hijack_start_ms >= 0);
    CHECK(trace.mitigation_start_ms > trace.hijack_start_ms);
    CHECK(trace.recovered_ms > trace.mitigation_start_ms);

    // pipeline consistency: the alarm's first_seen is the earliest violating
    // delivered feed event
    int64_t earliest = INT64_MAX;
    for (const auto& ev : trace.feed_events) {
        if (ev.kind == FeedEventKind::Announce && ev.origin() == sim::kHijackerAsn)
            earliest = std::min(earliest, ev.timestamp_ms);
    }
    CHECK(earliest - trace.hijack_start_ms == *result.overall_delay_ms);

    // the mitigation /24s were applied as commands
    REQUIRE(trace.commands.size() == 2);
    CHECK(trace.commands[0].prefix == p("184.164.228.0/24"));
    CHECK(trace.commands[1].prefix == p("184.164.229.0/24"));
}

TEST_CASE("exact-prefix experiment infects part of the topology, then recovers") {
    auto topo = small_topology(1002);
    auto config = base_config(topo, "exact", "immediate", 43);
    sim::EventTrace trace;
    auto result = run_experiment(config, &trace);
    CHECK(result.detected);
    CHECK(result.alarm_kind == AlarmKind::Exact);
    // partial infection before mitigation: peak strictly between 0 and 1
    double peak = 0;
    for (const auto& [t, fraction] : result.infected_series)
        peak = std::max(peak, fraction);
    CHECK(peak > 0.0);
    CHECK(peak < 1.0);
    CHECK(result.final_infected_fraction == 0.0);
    REQUIRE(result.t_total_ms);
}

TEST_CASE("deferred mitigation starts the configured delay after detection") {
    auto topo = small_topology(1003);
    auto config = base_config(topo, "subprefix", "defer:60000", 44);
    config.command_delay_ms = 100;
    auto result = run_experiment(config);
    REQUIRE(result.detected);
    REQUIRE(result.t_start_ms);
    CHECK(*result.t_start_ms == *result.overall_delay_ms + 60000 + 100);
}

TEST_CASE("with mitigation off the infection never recedes") {
    auto topo = small_topology(1004);
    auto config = base_config(topo, "subprefix", "off", 45);
    auto result = run_experiment(config);
    CHECK(result.detected);
    CHECK(result.mitigation_outcome == MitigationOutcome::None);
    CHECK_FALSE(result.t_start_ms);
    CHECK_FALSE(result.t_total_ms);
    for (size_t i = 1; i < result.infected_series.size(); ++i)
        CHECK(result.infected_series[i].second >=
              result.infected_series[i - 1].second);
    CHECK(result.final_infected_fraction == 1.0);
}

TEST_CASE("a /24 hijack escalates as filtered floor and stays infected") {
    auto topo = small_topology(1005);
    ExperimentConfig config;
    config.topology = &topo;
    config.seed = 46;
    config.scenario_id = "floor";
    sim::Scenario sc;
    sc.legitimate.push_back({sim::kLegitimateAsn, p("184.164.228.0/22"),
                             {sim::kLegitimateAsn}});
    sc.hijacker_asn = sim::kHijackerAsn;
    sc.hijack_prefix = p("184.164.228.0/24");
    sc.mitigation = sim::Scenario::MitigationMode::Immediate;
    config.scenario = sc;
    sim::EventTrace trace;
    auto result = run_experiment(config, &trace);
    CHECK(result.detected);
    CHECK(result.mitigation_outcome == MitigationOutcome::FilteredFloor);
    CHECK(trace.commands.empty());
    CHECK_FALSE(result.t_start_ms);
    CHECK_FALSE(result.t_total_ms);
    // infected set matches the unmitigated oracle exactly
    auto oracle = sim::fixpoint_oracle(topo, sc.base_announcements());
    CHECK(result.final_infected_fraction ==
          sim::infected_fraction(oracle, topo, sc.hijack_prefix, sim::kHijackerAsn));
}

TEST_CASE("experiment is deterministic per seed") {
    auto topo = small_topology(1006);
    auto run_to_string = [&](uint64_t seed) {
        auto config = base_config(topo, "subprefix", "immediate", seed);
        std::vector<ExperimentResult> results = {run_experiment(config)};
        TempPath csv("det");
        emit_csv(results, csv.path);
        return slurp(csv.path) + slurp(csv.path + ".series.csv");
    };
    CHECK(run_to_string(7) == run_to_string(7));
    CHECK(run_to_string(7) != run_to_string(8));
}

TEST_CASE("recorded trace replays into the same detection") {
    auto topo = small_topology(1007);
    auto config = base_config(topo, "subprefix", "immediate", 48);
    TempPath trace_file("trace");
    config.trace_path = trace_file.path;
    sim::EventTrace trace;
    auto result = run_experiment(config, &trace);
    REQUIRE(result.detected);

    // the trace file reproduces the delivered event multiset exactly
    ReplayStream replay(trace_file.path);
    std::vector<std::string> from_file, from_memory;
    while (auto ev = replay.next()) from_file.push_back(format_record(*ev));
    for (const auto& ev : trace.feed_events) from_memory.push_back(format_record(ev));
    std::sort(from_file.begin(), from_file.end());
    std::sort(from_memory.begin(), from_memory.end());
    CHECK(from_file == from_memory);
    CHECK(replay.rejected_records() == 0);
    CHECK(replay.ground_truth().at("hijack_start") == trace.hijack_start_ms);

    // monitoring the replayed trace raises the same alarm
    OwnedPrefixTable table;
    table.add(p("184.164.228.0/22"), {sim::kLegitimateAsn});
    Detector detector(std::move(table));
    ReplayStream again(trace_file.path);
    std::optional<HijackAlarm> alarm;
    while (auto ev = again.next()) {
        if (auto fired = detector.process(*ev)) {
            if (!alarm) alarm = fired;
        }
    }
    REQUIRE(alarm);
    CHECK(alarm->first_seen - trace.hijack_start_ms == *result.overall_delay_ms);
    CHECK(alarm->offending_origin == sim::kHijackerAsn);
}

TEST_CASE("earlier mitigation dominates pointwise under matched seeds") {
    auto topo = small_topology(1008);
    auto immediate_cfg = base_config(topo, "subprefix", "immediate", 49);
    auto deferred_cfg = base_config(topo, "subprefix", "defer:60000", 49);
    auto immediate = run_experiment(immediate_cfg);
    auto deferred = run_experiment(deferred_cfg);
    REQUIRE(immediate.detected);
    REQUIRE(deferred.detected);

    auto value_at = [](const std::vector<std::pair<int64_t, double>>& series,
                      int64_t t) {
        double v = 0.0;
        for (const auto& [ts, fraction] : series) {
            if (ts > t) break;
            v = fraction;
        }
        return v;
    };
    std::vector<int64_t> grid;
    for (const auto& [t, f] : immediate.infected_series) grid.push_back(t);
    for (const auto& [t, f] : deferred.infected_series) grid.push_back(t);
    for (int64_t t : grid)
        CHECK(value_at(immediate.infected_series, t) <=
              value_at(deferred.infected_series, t));
    REQUIRE(immediate.t_total_ms);
    REQUIRE(deferred.t_total_ms);
    CHECK(*immediate.t_total_ms <= *deferred.t_total_ms);
}

TEST_CASE("run_sweep yields one result per cell and repetition, deterministically") {
    SweepSpec spec;
    spec.master_seed = 99;
    spec.repetitions = 2;
    spec.total_nodes = 60;
    spec.kinds = {"exact", "subprefix"};
    spec.mitigations = {"immediate", "off"};
    auto results = run_sweep(spec);
    CHECK(results.size() == 2 * 2 * 2);
    for (const auto& r : results) CHECK(r.error.empty());

    TempPath a("sweep_a"), b("sweep_b");
    emit_csv(results, a.path);
    emit_csv(run_sweep(spec), b.path);
    CHECK(slurp(a.path) == slurp(b.path));
    CHECK(slurp(a.path + ".series.csv") == slurp(b.path + ".series.csv"));
}

TEST_CASE("sweep spec parsing") {
    std::istringstream in(
        "master_seed 42\n"
        "repetitions 3\n"
        "nodes 120\n"
        "axis kind exact subprefix\n"
        "axis mitigation immediate defer:30000\n"
        "axis providers 1 2\n");
    auto spec = parse_sweep(in, "test");
    CHECK(spec.master_seed == 42);
    CHECK(spec.repetitions == 3);
    CHECK(spec.total_nodes == 120);
    CHECK(spec.kinds.size() == 2);
    CHECK(spec.mitigations.size() == 2);
    CHECK(spec.provider_counts == std::vector<int>{1, 2});

    std::istringstream bad("axis kind sideways\n");
    CHECK_THROWS_AS(parse_sweep(bad, "test"), ParseError);
    std::istringstream bad2("axis mitigation defer:oops\n");
    CHECK_THROWS_AS(parse_sweep(bad2, "test"), std::exception);
}

TEST_CASE("summarize uses nearest-rank quantiles") {
    std::vector<ExperimentResult> results;
    for (int64_t d : {1, 2, 3, 4, 5}) {
        ExperimentResult r;
        r.scenario_id = "cell";
        r.seed = static_cast<uint64_t>(d);
        r.detected = true;
        r.overall_delay_ms = d;
        r.per_source_delay_ms["stream-a"] = d;
        results.push_back(r);
    }
    ExperimentResult undetected;
    undetected.scenario_id = "cell";
    undetected.seed = 6;
    undetected.detected = false;
    results.push_back(undetected);

    auto rows = summarize(results);
    REQUIRE(rows.size() == 2);  // overall + stream-a
    for (const auto& row : rows) {
        CHECK(row.count == 5);
        CHECK(row.undetected == 1);
        CHECK(row.min == 1);
        CHECK(row.q1 == 2);
        CHECK(row.median == 3);
        CHECK(row.q3 == 4);
        CHECK(row.max == 5);
        CHECK(row.mean == doctest::Approx(3.0));
    }

    // single result: every quantile is that value
    std::vector<ExperimentResult> one(results.begin(), results.begin() + 1);
    auto single = summarize(one);
    REQUIRE(!single.empty());
    CHECK(single[0].min == 1);
    CHECK(single[0].median == 1);
    CHECK(single[0].max == 1);

    CHECK_THROWS_AS(nearest_rank({}, 0.5), std::invalid_argument);
}

TEST_CASE("csv round-trips every numeric field") {
    auto topo = small_topology(1009);
    auto config = base_config(topo, "subprefix", "immediate", 50);
    std::vector<ExperimentResult> results = {run_experiment(config)};
    ExperimentResult undetected;
    undetected.scenario_id = "quiet";
    undetected.seed = 51;
    results.push_back(undetected);

    TempPath csv("roundtrip");
    emit_csv(results, csv.path);

    std::ifstream in(csv.path);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("scenario,seed,detected,", 0) == 0);
    size_t rows = 0;
    std::string line;
    std::vector<std::vector<std::string>> parsed;
    while (std::getline(in, line)) {
        ++rows;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        parsed.push_back(fields);
    }
    CHECK(rows == 2);  // one per result

    // numeric fidelity on the detected row
    const auto& row = parsed[0];
    CHECK(row[0] == results[0].scenario_id);
    CHECK(std::stoull(row[1]) == results[0].seed);
    CHECK(row[2] == "1");
    CHECK(std::stoll(row[4]) == *results[0].overall_delay_ms);
    CHECK(std::stoll(row[5]) == *results[0].t_start_ms);
    CHECK(std::stoll(row[6]) == *results[0].t_total_ms);
    double fraction = 0;
    auto [ptr, ec] = std::from_chars(row[8].data(), row[8].data() + row[8].size(),
                                     fraction);
    CHECK(ec == std::errc{});
    CHECK(fraction == results[0].final_infected_fraction);

    // series file round-trips fractions exactly
    std::ifstream series(csv.path + ".series.csv");
    std::getline(series, header);
    CHECK(header == "scenario,seed,time_ms,fraction");
    size_t series_rows = 0;
    while (std::getline(series, line)) {
        std::istringstream ls(line);
        std::string scenario, seed_tok, time_tok, fraction_tok;
        std::getline(ls, scenario, ',');
        std::getline(ls, seed_tok, ',');
        std::getline(ls, time_tok, ',');
        std::getline(ls, fraction_tok, ',');
        size_t idx = series_rows++;
        REQUIRE(idx < results[0].infected_series.size());
        CHECK(std::stoll(time_tok) == results[0].infected_series[idx].first);
        double f = 0;
        std::from_chars(fraction_tok.data(), fraction_tok.data() + fraction_tok.size(), f);
        CHECK(f == results[0].infected_series[idx].second);
    }
    CHECK(series_rows == results[0].infected_series.size());
}

TEST_CASE("experiment rejects scenarios over unknown ASes") {
    auto topo = small_topology(1010);
    ExperimentConfig config;
    config.topology = &topo;
    sim::Scenario sc;
    sc.legitimate.push_back({424242, p("10.0.0.0/8"), {424242}});
    sc.hijacker_asn = sim::kHijackerAsn;
    sc.hijack_prefix = p("10.0.0.0/9");
    config.scenario = sc;
    CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
}
