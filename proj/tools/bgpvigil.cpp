#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "vigil/detector.hpp"
#include "vigil/feed_stream.hpp"
#include "vigil/harness/csv.hpp"
#include "vigil/harness/experiment.hpp"
#include "vigil/harness/sweep.hpp"
#include "vigil/sim/oracle.hpp"
#include "vigil/sim/scenario.hpp"
#include "vigil/sim/topology.hpp"

namespace {

using namespace vigil;

int cmd_simulate(const std::string& topology_path, const std::string& scenario_path,
                 uint64_t seed, const std::string& trace_path,
                 const std::string& alarm_log, const std::string& progress_csv,
                 bool realtime, double speed) {
    auto topo = sim::load_topology(topology_path);
    harness::ExperimentConfig config;
    config.topology = &topo;
    config.scenario = sim::load_scenario(scenario_path);
    config.seed = seed;
    config.scenario_id = scenario_path;
    if (!trace_path.empty()) config.trace_path = trace_path;
    if (!alarm_log.empty()) config.alarm_log_path = alarm_log;
    if (!progress_csv.empty()) config.progress_csv_path = progress_csv;
    config.pace_realtime = realtime;
    config.realtime_speed = speed;

    auto result = harness::run_experiment(config);

    std::cout << "scenario:          " << scenario_path << " (seed " << seed << ")\n";
    std::cout << "detected:          " << (result.detected ? "yes" : "no") << '\n';
    if (result.detected) {
        std::cout << "alarm kind:        "
                  << (result.alarm_kind == AlarmKind::Exact ? "exact" : "subprefix")
                  << '\n';
        std::cout << "detection delay:   " << *result.overall_delay_ms << " ms\n";
        for (const auto& [source, delay] : result.per_source_delay_ms)
            std::cout << "  " << source << ": " << delay << " ms\n";
    }
    if (result.t_start_ms)
        std::cout << "mitigation start:  " << *result.t_start_ms << " ms after hijack\n";
    std::cout << "mitigation:        " << harness::to_string(result.mitigation_outcome)
              << '\n';
    if (result.t_total_ms)
        std::cout << "full recovery:     " << *result.t_total_ms << " ms after hijack\n";
    std::cout << "final infected:    " << harness::format_double(result.final_infected_fraction)
              << '\n';
    return 0;
}

int cmd_monitor(const std::string& config_path, const std::vector<std::string>& replays,
                const std::string& alarm_log, double speed, int64_t window_ms) {
    auto table = load_config(config_path);
    Detector detector(std::move(table));

    std::vector<std::unique_ptr<EventStream>> inputs;
    std::vector<ReplayStream*> raw;
    std::map<std::string, int64_t> ground_truth;
    for (const auto& path : replays) {
        auto stream = open_replay(path, speed);
        raw.push_back(stream.get());
        inputs.push_back(std::move(stream));
    }
    Mux mux(std::move(inputs), window_ms);

    std::unique_ptr<std::ofstream> log;
    if (!alarm_log.empty()) {
        log = std::make_unique<std::ofstream>(alarm_log, std::ios::app);
        if (!*log) throw std::runtime_error("cannot open alarm log: " + alarm_log);
    }

    size_t events = 0;
    while (auto ev = mux.next()) {
        ++events;
        if (auto alarm = detector.process(*ev)) {
            std::cout << format_alarm(*alarm) << '\n';
            if (log) *log << format_alarm(*alarm) << '\n';
        }
    }
    size_t rejected = 0;
    for (auto* stream : raw) {
        rejected += stream->rejected_records();
        for (const auto& [marker, ms] : stream->ground_truth()) ground_truth[marker] = ms;
    }
    std::cout << events << " events, " << detector.alarms().size() << " alarms, "
              << rejected << " rejected records\n";
    if (auto it = ground_truth.find("hijack_start"); it != ground_truth.end()) {
        for (const auto& alarm : detector.alarms()) {
            std::cout << "detection delay for " << format_prefix(alarm.announced_prefix)
                      << " origin " << alarm.offending_origin << ": "
                      << detection_delay(alarm, it->second) << " ms";
            if (const auto* sources = detector.per_source_first_seen(
                    alarm.announced_prefix, alarm.offending_origin)) {
                for (const auto& [source, ts] : *sources)
                    std::cout << "  " << source << "=" << (ts - it->second) << "ms";
            }
            std::cout << '\n';
        }
    }
    return 0;
}

int cmd_experiment(const std::string& sweep_path, const std::string& out_path,
                   const std::string& summary_path) {
    auto spec = harness::load_sweep(sweep_path);
    auto results = harness::run_sweep(spec);
    harness::emit_csv(results, out_path);
    auto summary = harness::summarize(results);
    if (!summary_path.empty()) harness::emit_summary_csv(summary, summary_path);

    size_t failed = 0;
    for (const auto& r : results)
        if (!r.error.empty()) ++failed;
    std::cout << results.size() << " runs -> " << out_path;
    if (failed) std::cout << " (" << failed << " failed)";
    std::cout << '\n';
    for (const auto& row : summary) {
        std::cout << row.scenario_id << " [" << row.metric << "] n=" << row.count;
        if (row.undetected) std::cout << " undetected=" << row.undetected;
        if (row.count)
            std::cout << " min=" << row.min << " q1=" << row.q1 << " median=" << row.median
                      << " q3=" << row.q3 << " max=" << row.max
                      << " mean=" << harness::format_double(row.mean);
        std::cout << '\n';
    }
    return 0;
}

int cmd_oracle(const std::string& topology_path, const std::string& scenario_path) {
    auto topo = sim::load_topology(topology_path);
    auto sc = sim::load_scenario(scenario_path);
    for (const auto& entry : sc.legitimate)
        if (!topo.has_node(entry.asn))
            throw std::runtime_error("scenario references unknown AS " +
                                     std::to_string(entry.asn));
    if (!topo.has_node(sc.hijacker_asn))
        throw std::runtime_error("scenario references unknown AS " +
                                 std::to_string(sc.hijacker_asn));

    auto print_state = [&](const sim::RibSnapshot& ribs, const char* label) {
        std::map<uint32_t, size_t> by_origin;
        for (uint32_t asn : topo.nodes()) {
            auto it = ribs.find(asn);
            if (it == ribs.end()) continue;
            for (const auto& [prefix, route] : it->second)
                if (prefix == sc.hijack_prefix) ++by_origin[route.origin()];
        }
        std::cout << label << '\n';
        for (const auto& [origin, count] : by_origin)
            std::cout << "  " << format_prefix(sc.hijack_prefix) << " via origin " << origin
                      << ": " << count << " ASes\n";
        double infected = sim::infected_fraction(ribs, topo, sc.hijack_prefix,
                                                 sc.hijacker_asn);
        std::cout << "  infected fraction: " << harness::format_double(infected) << '\n';
    };

    auto base = sim::fixpoint_oracle(topo, sc.base_announcements(), sc.floor_length);
    print_state(base, "converged, hijack unmitigated:");

    if (sc.mitigation != sim::Scenario::MitigationMode::Off) {
        auto outcome = deaggregate(sc.hijack_prefix, sc.floor_length);
        if (outcome.filtered()) {
            std::cout << "mitigation: filtered floor (no sub-prefixes possible)\n";
        } else {
            auto announcements = sc.base_announcements();
            for (const auto& half : outcome.halves)
                announcements.push_back({sc.legitimate.front().asn, half});
            auto mitigated = sim::fixpoint_oracle(topo, announcements, sc.floor_length);
            print_state(mitigated, "converged, de-aggregation applied:");
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BGP prefix-hijack monitoring, detection and mitigation workbench"};
    app.require_subcommand(1);

    std::string topology_path, scenario_path, trace_path, alarm_log, progress_csv;
    uint64_t seed = 1;
    bool realtime = false;
    double speed = 1.0;
    auto* simulate = app.add_subcommand("simulate", "run one closed-loop experiment");
    simulate->add_option("topology", topology_path, "topology file")->required();
    simulate->add_option("scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--seed", seed, "random seed");
    simulate->add_option("--trace", trace_path, "write the delivered-feed trace here");
    simulate->add_option("--alarm-log", alarm_log, "append alarm records here");
    simulate->add_option("--progress-csv", progress_csv, "write mitigation progress here");
    simulate->add_flag("--realtime", realtime, "pace the run against the wall clock");
    simulate->add_option("--speed", speed, "realtime speed factor");

    std::string config_path;
    std::vector<std::string> replays;
    std::string monitor_alarm_log;
    double replay_speed = ReplayStream::kAsFastAsPossible;
    int64_t window_ms = Mux::kDefaultReorderWindowMs;
    auto* monitor = app.add_subcommand("monitor", "run the detector over replay files");
    monitor->add_option("--config", config_path, "owned-prefix config")->required();
    monitor->add_option("--replay", replays, "replay file (repeatable)")->required();
    monitor->add_option("--alarm-log", monitor_alarm_log, "append alarm records here");
    monitor->add_option("--speed", replay_speed, "replay speed factor (0 = max)");
    monitor->add_option("--reorder-window", window_ms, "mux reorder window, ms");

    std::string sweep_path, out_path, summary_path;
    auto* experiment = app.add_subcommand("experiment", "run a scenario sweep");
    experiment->add_option("sweep", sweep_path, "sweep spec file")->required();
    experiment->add_option("--out", out_path, "results CSV path")->required();
    experiment->add_option("--summary", summary_path, "summary CSV path");

    std::string oracle_topology, oracle_scenario;
    auto* oracle = app.add_subcommand("oracle", "print converged routing for a scenario");
    oracle->add_option("topology", oracle_topology, "topology file")->required();
    oracle->add_option("scenario", oracle_scenario, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_simulate(topology_path, scenario_path, seed, trace_path, alarm_log,
                                progress_csv, realtime, speed);
        if (monitor->parsed())
            return cmd_monitor(config_path, replays, monitor_alarm_log, replay_speed,
                               window_ms);
        if (experiment->parsed()) return cmd_experiment(sweep_path, out_path, summary_path);
        if (oracle->parsed()) return cmd_oracle(oracle_topology, oracle_scenario);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
