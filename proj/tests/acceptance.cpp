// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Run via `ctest -R acceptance` or directly from the build tree.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "vigil/detector.hpp"
#include "vigil/feed_stream.hpp"
#include "vigil/forwarding.hpp"
#include "vigil/harness/csv.hpp"
#include "vigil/harness/experiment.hpp"
#include "vigil/harness/sweep.hpp"
#include "vigil/mitigator.hpp"
#include "vigil/sim/engine.hpp"
#include "vigil/sim/oracle.hpp"

using namespace vigil;
using namespace vigil::harness;

namespace {

IpPrefix p(const char* text) { return parse_prefix(text); }

struct Check {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        ok = false;
        if (detail.empty()) detail = why;
    }
    void expect(bool condition, const std::string& why) {
        if (!condition) fail(why);
    }
};

sim::Topology generated(int nodes, uint64_t seed,
                        sim::GeneratorParams::HijackerProfile profile =
                            sim::GeneratorParams::HijackerProfile::Stub,
                        int providers = 1) {
    sim::GeneratorParams params;
    params.total_nodes = nodes;
    params.seed = seed;
    params.hijacker_profile = profile;
    params.legit_provider_count = providers;
    return sim::generate_topology(params);
}

sim::RibSnapshot converge(const sim::Topology& topo,
                          const std::vector<sim::OriginAnnouncement>& anns,
                          uint64_t seed) {
    sim::Simulation simu(topo, seed);
    for (const auto& a : anns) simu.schedule_origin_announce(0, a.asn, a.prefix);
    simu.run();
    return simu.rib_snapshot();
}

// ---------------------------------------------------------------------------
// 1. No false positives: randomized legitimate-only replay streams
// ---------------------------------------------------------------------------
Check criterion_no_false_positives() {
    Check check;
    std::mt19937_64 rng(20240501);
    size_t total_events = 0;
    for (int stream = 0; stream < 1000; ++stream) {
        OwnedPrefixTable table;
        struct Owned {
            IpPrefix prefix;
            std::vector<uint32_t> origins;
        };
        std::vector<Owned> owned;
        size_t entries = 1 + rng() % 6;
        for (size_t i = 0; i < entries; ++i) {
            auto len = static_cast<uint8_t>(8 + rng() % 15);
            IpPrefix q{static_cast<uint32_t>(rng()) & prefix_mask(len), len};
            if (table.exact(q)) continue;
            std::vector<uint32_t> origins;
            size_t n = 1 + rng() % 3;
            for (size_t k = 0; k < n; ++k)
                origins.push_back(static_cast<uint32_t>(60000 + rng() % 2000));
            table.add(q, origins);
            owned.push_back({q, origins});
        }
        Detector detector(std::move(table));
        int64_t ts = 0;
        for (int i = 0; i < 250; ++i) {
            ts += static_cast<int64_t>(rng() % 500);
            const auto& entry = owned[rng() % owned.size()];
            auto len = static_cast<uint8_t>(
                std::min<int>(32, entry.prefix.length + static_cast<int>(rng() % 3)));
            IpPrefix q{(entry.prefix.base |
                        (static_cast<uint32_t>(rng()) & ~prefix_mask(entry.prefix.length))) &
                           prefix_mask(len),
                       len};
            auto covering = detector.table().covering(q);
            const auto& legit = covering->value->origins;
            FeedEvent ev;
            ev.timestamp_ms = ts;
            ev.source_id = "s" + std::to_string(rng() % 3);
            ev.vantage_asn = static_cast<uint32_t>(1 + rng() % 500);
            if (rng() % 8 == 0) {
                ev.kind = FeedEventKind::Withdraw;
                ev.prefix = q;
            } else {
                ev.kind = FeedEventKind::Announce;
                ev.prefix = q;
                ev.as_path = {ev.vantage_asn,
                              static_cast<uint32_t>(3000 + rng() % 1000),
                              legit[rng() % legit.size()]};
            }
            // through the record format, like a real replay
            auto replayed = normalize(format_record(ev));
            ++total_events;
            if (detector.process(replayed)) {
                check.fail("alarm raised on legitimate-only stream " +
                           std::to_string(stream));
                return check;
            }
        }
        if (!detector.alarms().empty()) {
            check.fail("alarm list not empty");
            return check;
        }
    }
    check.detail = "0 alarms over 1000 streams, " + std::to_string(total_events) +
                   " events";
    return check;
}

// ---------------------------------------------------------------------------
// 2. Sub-prefix totality: infected fraction exactly 1.0 at convergence
// ---------------------------------------------------------------------------
Check criterion_subprefix_totality() {
    Check check;
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        auto topo = generated(500, 9000 + seed);
        std::vector<sim::OriginAnnouncement> anns = {
            {sim::kLegitimateAsn, p("184.164.228.0/22")},
            {sim::kHijackerAsn, p("184.164.228.0/23")},
        };
        auto ribs = converge(topo, anns, seed * 13);
        double fraction =
            sim::infected_fraction(ribs, topo, p("184.164.228.0/23"), sim::kHijackerAsn);
        if (fraction != 1.0) {
            check.fail("seed " + std::to_string(seed) + ": fraction " +
                       format_double(fraction) + " != 1.0");
            return check;
        }
    }
    check.detail = "fraction == 1.0 exactly on 20 topologies of 500 ASes";
    return check;
}

// ---------------------------------------------------------------------------
// 3. Exact-prefix partiality: fraction strictly inside (0,1), oracle-exact
// ---------------------------------------------------------------------------
Check criterion_exact_partiality() {
    Check check;
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        auto topo = generated(500, 9000 + seed);
        if (topo.provider_count(sim::kLegitimateAsn) < 1 ||
            topo.provider_count(sim::kHijackerAsn) < 1) {
            check.fail("generator produced a subject without a provider");
            return check;
        }
        std::vector<sim::OriginAnnouncement> anns = {
            {sim::kLegitimateAsn, p("184.164.228.0/23")},
            {sim::kHijackerAsn, p("184.164.228.0/23")},
        };
        auto ribs = converge(topo, anns, seed * 17);
        double fraction =
            sim::infected_fraction(ribs, topo, p("184.164.228.0/23"), sim::kHijackerAsn);
        double oracle_fraction = sim::infected_fraction(
            sim::fixpoint_oracle(topo, anns), topo, p("184.164.228.0/23"),
            sim::kHijackerAsn);
        check.expect(fraction > 0.0 && fraction < 1.0,
                     "seed " + std::to_string(seed) + ": fraction " +
                         format_double(fraction) + " not strictly inside (0,1)");
        check.expect(fraction == oracle_fraction,
                     "seed " + std::to_string(seed) + ": engine " +
                         format_double(fraction) + " != oracle " +
                         format_double(oracle_fraction));
        if (!check.ok) return check;
    }
    check.detail = "partial infection, oracle-exact, on 20 topologies";
    return check;
}

// ---------------------------------------------------------------------------
// 4. Oracle equivalence on 50 randomized instances up to 1000 ASes
// ---------------------------------------------------------------------------
Check criterion_oracle_equivalence() {
    Check check;
    int instance = 0;
    for (uint64_t seed = 1; seed <= 25 && check.ok; ++seed) {
        int nodes = 200 + static_cast<int>(seed % 5) * 200;  // 200..1000
        auto profile = seed % 2 ? sim::GeneratorParams::HijackerProfile::Stub
                                : sim::GeneratorParams::HijackerProfile::HighDegree;
        auto topo = generated(nodes, 5000 + seed, profile, 1 + static_cast<int>(seed % 2));
        for (const char* kind : {"exact", "subprefix"}) {
            ++instance;
            std::vector<sim::OriginAnnouncement> anns;
            if (std::string(kind) == "exact") {
                anns = {{sim::kLegitimateAsn, p("184.164.228.0/23")},
                        {sim::kHijackerAsn, p("184.164.228.0/23")}};
            } else {
                anns = {{sim::kLegitimateAsn, p("184.164.228.0/22")},
                        {sim::kHijackerAsn, p("184.164.228.0/23")}};
            }
            auto engine = converge(topo, anns, seed * 1000 + instance);
            auto oracle = sim::fixpoint_oracle(topo, anns);
            if (engine != oracle) {
                check.fail("instance " + std::to_string(instance) + " (" +
                           std::to_string(nodes) + " ASes, " + kind +
                           "): converged RIBs differ from the fixpoint");
                return check;
            }
        }
    }
    check.detail = "50 instances (200-1000 ASes), exact RIB match";
    return check;
}

// ---------------------------------------------------------------------------
// 5. Mitigation completeness below the floor; /24 escalates unchanged
// ---------------------------------------------------------------------------
Check criterion_mitigation_completeness() {
    Check check;
    // lengths below the floor: full pipeline runs end recovered everywhere
    struct Case {
        const char* owned;
        const char* hijacked;
    };
    for (const auto& c : {Case{"184.164.228.0/22", "184.164.228.0/23"},
                          Case{"184.164.0.0/15", "184.164.0.0/16"},
                          Case{"184.160.0.0/19", "184.160.0.0/20"}}) {
        auto topo = generated(300, 777);
        ExperimentConfig config;
        config.topology = &topo;
        config.seed = 99;
        config.scenario_id = std::string("complete-") + c.hijacked;
        sim::Scenario sc;
        sc.legitimate.push_back({sim::kLegitimateAsn, p(c.owned), {sim::kLegitimateAsn}});
        sc.hijacker_asn = sim::kHijackerAsn;
        sc.hijack_prefix = p(c.hijacked);
        sc.mitigation = sim::Scenario::MitigationMode::Immediate;
        config.scenario = sc;
        auto result = run_experiment(config);
        check.expect(result.detected, std::string(c.hijacked) + ": not detected");
        check.expect(result.mitigation_outcome == MitigationOutcome::Split,
                     std::string(c.hijacked) + ": no split plan");
        check.expect(result.t_total_ms.has_value(),
                     std::string(c.hijacked) + ": never fully recovered");
        check.expect(result.final_infected_fraction == 0.0,
                     std::string(c.hijacked) + ": residual infection");
        check.expect(result.mitigation_complete,
                     std::string(c.hijacked) + ": monitor does not report complete");
        if (!check.ok) return check;
    }

    // hijacked /24: empty plan, FilteredFloor escalation, infection unchanged
    auto topo = generated(300, 778);
    ExperimentConfig config;
    config.topology = &topo;
    config.seed = 100;
    config.scenario_id = "floor-24";
    sim::Scenario sc;
    sc.legitimate.push_back(
        {sim::kLegitimateAsn, p("184.164.228.0/22"), {sim::kLegitimateAsn}});
    sc.hijacker_asn = sim::kHijackerAsn;
    sc.hijack_prefix = p("184.164.228.0/24");
    sc.mitigation = sim::Scenario::MitigationMode::Immediate;
    config.scenario = sc;
    sim::EventTrace trace;
    auto result = run_experiment(config, &trace);
    check.expect(result.detected, "/24 hijack not detected");
    check.expect(result.mitigation_outcome == MitigationOutcome::FilteredFloor,
                 "/24 plan was not FilteredFloor");
    check.expect(trace.commands.empty(), "commands issued despite the floor");
    auto oracle_fraction = sim::infected_fraction(
        sim::fixpoint_oracle(topo, sc.base_announcements()), topo, sc.hijack_prefix,
        sim::kHijackerAsn);
    check.expect(result.final_infected_fraction == oracle_fraction,
                 "infected set changed despite the empty plan");
    if (check.ok)
        check.detail = "full recovery at /16, /20, /23; /24 escalated, unchanged";
    return check;
}

// ---------------------------------------------------------------------------
// 6. Overall delay = min over sources; dropping a source never helps
// ---------------------------------------------------------------------------
Check criterion_multi_source_minimum() {
    Check check;
    SweepSpec spec;
    spec.master_seed = 4242;
    spec.repetitions = 10;
    spec.total_nodes = 300;
    spec.kinds = {"exact", "subprefix"};
    spec.provider_counts = {1, 2};
    spec.mitigations = {"immediate"};
    auto results = run_sweep(spec);
    check.expect(results.size() == 40, "sweep did not yield 40 runs");
    size_t detected = 0;
    for (const auto& r : results) {
        if (!r.error.empty()) {
            check.fail("sweep cell failed: " + r.error);
            return check;
        }
        if (!r.detected) continue;
        ++detected;
        int64_t min_delay = INT64_MAX;
        for (const auto& [source, delay] : r.per_source_delay_ms)
            min_delay = std::min(min_delay, delay);
        check.expect(*r.overall_delay_ms == min_delay,
                     "overall delay is not the per-source minimum");
        // removing any one source: min over the rest is never smaller
        for (const auto& [removed, unused] : r.per_source_delay_ms) {
            (void)unused;
            int64_t rest = INT64_MAX;
            for (const auto& [source, delay] : r.per_source_delay_ms)
                if (source != removed) rest = std::min(rest, delay);
            check.expect(rest >= *r.overall_delay_ms,
                         "removing a source decreased the delay");
        }
        if (!check.ok) return check;
    }
    check.expect(detected >= 35, "too few detected runs: " + std::to_string(detected));
    if (check.ok)
        check.detail = "40-run sweep, " + std::to_string(detected) +
                       " detected, min-decomposition exact";
    return check;
}

// ---------------------------------------------------------------------------
// 7. Delay orderings: (a) push vs poll, (b) hijacker degree, (c) attack kind
// ---------------------------------------------------------------------------
Check criterion_delay_orderings() {
    Check check;

    // (a) push streams detect no later than the 60 s poller in >= 95% of runs
    size_t comparable = 0, push_no_later = 0;
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        for (const char* kind : {"exact", "subprefix"}) {
            auto topo = generated(300, 3000 + seed);
            ExperimentConfig config;
            config.topology = &topo;
            config.scenario = make_scenario(kind, "immediate");
            config.seed = seed;
            config.scenario_id = kind;
            auto r = run_experiment(config);
            if (!r.detected) continue;
            int64_t push_min = INT64_MAX;
            std::optional<int64_t> poll;
            for (const auto& [source, delay] : r.per_source_delay_ms) {
                if (source == "lg-pool")
                    poll = delay;
                else
                    push_min = std::min(push_min, delay);
            }
            if (push_min == INT64_MAX) continue;  // push never saw it
            ++comparable;
            if (!poll || push_min <= *poll) ++push_no_later;
        }
    }
    check.expect(comparable >= 30, "too few detected runs for the push/poll ordering");
    double ratio = comparable ? static_cast<double>(push_no_later) /
                                    static_cast<double>(comparable)
                              : 0.0;
    check.expect(ratio >= 0.95,
                 "push beat poll in only " + format_double(ratio) + " of runs");

    // (b) matched seeds: well-connected hijacker detected no later on average
    double high_sum = 0, stub_sum = 0;
    int pairs = 0;
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        auto high_topo = generated(300, 6000 + seed,
                                   sim::GeneratorParams::HijackerProfile::HighDegree);
        auto stub_topo = generated(300, 6000 + seed,
                                   sim::GeneratorParams::HijackerProfile::Stub);
        ExperimentConfig config;
        config.scenario = make_scenario("exact", "immediate");
        config.seed = seed;
        config.scenario_id = "degree";
        config.topology = &high_topo;
        auto high = run_experiment(config);
        config.topology = &stub_topo;
        auto stub = run_experiment(config);
        if (!high.detected || !stub.detected) continue;
        high_sum += static_cast<double>(*high.overall_delay_ms);
        stub_sum += static_cast<double>(*stub.overall_delay_ms);
        ++pairs;
    }
    check.expect(pairs >= 8, "too few detected pairs for the degree ordering");
    check.expect(pairs > 0 && high_sum / pairs <= stub_sum / pairs,
                 "high-degree hijacker mean delay " +
                     format_double(pairs ? high_sum / pairs : 0) + " > stub mean " +
                     format_double(pairs ? stub_sum / pairs : 0));

    // (c) matched seeds: sub-prefix detection is no slower at the median
    std::vector<int64_t> sub_delays, exact_delays;
    for (uint64_t seed = 1; seed <= 15; ++seed) {
        auto topo = generated(300, 4500 + seed);
        for (const char* kind : {"exact", "subprefix"}) {
            ExperimentConfig config;
            config.topology = &topo;
            config.scenario = make_scenario(kind, "immediate");
            config.seed = seed;
            config.scenario_id = kind;
            auto r = run_experiment(config);
            if (!r.detected) continue;
            (std::string(kind) == "subprefix" ? sub_delays : exact_delays)
                .push_back(*r.overall_delay_ms);
        }
    }
    check.expect(sub_delays.size() >= 12 && exact_delays.size() >= 12,
                 "too few detected runs for the kind ordering");
    std::sort(sub_delays.begin(), sub_delays.end());
    std::sort(exact_delays.begin(), exact_delays.end());
    int64_t sub_median = nearest_rank(sub_delays, 0.5);
    int64_t exact_median = nearest_rank(exact_delays, 0.5);
    check.expect(sub_median <= exact_median,
                 "sub-prefix median " + std::to_string(sub_median) +
                     " > exact median " + std::to_string(exact_median));
    if (check.ok)
        check.detail = "push<=poll in " + format_double(ratio * 100) +
                       "% of runs; degree and kind orderings hold";
    return check;
}

// ---------------------------------------------------------------------------
// 8. Earlier mitigation dominates pointwise under matched seeds
// ---------------------------------------------------------------------------
Check criterion_mitigation_dominance() {
    Check check;
    auto value_at = [](const std::vector<std::pair<int64_t, double>>& series,
                      int64_t t) {
        double v = 0.0;
        for (const auto& [ts, fraction] : series) {
            if (ts > t) break;
            v = fraction;
        }
        return v;
    };
    int pairs = 0;
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        auto topo = generated(300, 8800 + seed);
        for (const char* kind : {"exact", "subprefix"}) {
            ExperimentConfig config;
            config.topology = &topo;
            config.seed = seed;
            config.scenario_id = kind;
            config.scenario = make_scenario(kind, "immediate");
            auto immediate = run_experiment(config);
            config.scenario = make_scenario(kind, "defer:60000");
            auto deferred = run_experiment(config);
            if (!immediate.detected || !deferred.detected) continue;
            ++pairs;
            std::vector<int64_t> grid;
            for (const auto& [t, f] : immediate.infected_series) grid.push_back(t);
            for (const auto& [t, f] : deferred.infected_series) grid.push_back(t);
            for (int64_t t : grid) {
                if (value_at(immediate.infected_series, t) >
                    value_at(deferred.infected_series, t) + 1e-12) {
                    check.fail("seed " + std::to_string(seed) + " " + kind +
                               ": immediate curve above deferred at t=" +
                               std::to_string(t));
                    return check;
                }
            }
            if (immediate.t_total_ms && deferred.t_total_ms) {
                check.expect(*immediate.t_total_ms <= *deferred.t_total_ms,
                             "immediate recovery later than deferred");
            } else {
                check.expect(immediate.t_total_ms.has_value() ||
                                 !deferred.t_total_ms.has_value(),
                             "deferred recovered but immediate did not");
            }
            if (!check.ok) return check;
        }
    }
    check.expect(pairs >= 10, "too few detected pairs: " + std::to_string(pairs));
    if (check.ok)
        check.detail = "pointwise dominance and recovery ordering on " +
                       std::to_string(pairs) + " matched pairs";
    return check;
}

// ---------------------------------------------------------------------------
// 9. Determinism: the experiment pipeline emits byte-identical CSV per seed
// ---------------------------------------------------------------------------
Check criterion_determinism() {
    Check check;
    SweepSpec spec;
    spec.master_seed = 31337;
    spec.repetitions = 3;
    spec.total_nodes = 200;
    spec.kinds = {"exact", "subprefix"};
    spec.mitigations = {"immediate"};

    auto emit_once = [&](const std::string& path) {
        auto results = run_sweep(spec);
        emit_csv(results, path);
        std::ifstream main_in(path), series_in(path + ".series.csv");
        std::ostringstream all;
        all << main_in.rdbuf() << series_in.rdbuf();
        return all.str();
    };
    auto first = emit_once("acceptance_det_a.csv");
    auto second = emit_once("acceptance_det_b.csv");
    std::remove("acceptance_det_a.csv");
    std::remove("acceptance_det_a.csv.series.csv");
    std::remove("acceptance_det_b.csv");
    std::remove("acceptance_det_b.csv.series.csv");
    check.expect(!first.empty(), "no CSV output produced");
    check.expect(first == second, "two runs with the same master seed differ");
    if (check.ok)
        check.detail = std::to_string(first.size()) + " bytes, identical across runs";
    return check;
}

// ---------------------------------------------------------------------------
// 10. De-aggregation arithmetic over 10^5 random prefixes + RIB overhead
// ---------------------------------------------------------------------------
Check criterion_deaggregation_arithmetic() {
    Check check;
    std::mt19937_64 rng(55);
    int splits = 0, floored = 0;
    for (int i = 0; i < 100000; ++i) {
        auto len = static_cast<uint8_t>(rng() % 33);
        IpPrefix q{static_cast<uint32_t>(rng()) & prefix_mask(len), len};
        auto out = deaggregate(q, 24);
        if (q.length >= 24) {
            ++floored;
            if (!out.filtered() || !out.halves.empty()) {
                check.fail("floor behavior wrong at " + format_prefix(q));
                return check;
            }
            continue;
        }
        ++splits;
        if (out.halves.size() != 2 || out.halves[0].length != q.length + 1 ||
            out.halves[1].length != q.length + 1 || out.halves[0].base != q.base ||
            out.halves[1].base != (q.base | (1u << (31 - q.length))) ||
            contains(out.halves[0], out.halves[1]) ||
            contains(out.halves[1], out.halves[0]) ||
            !contains(q, out.halves[0]) || !contains(q, out.halves[1])) {
            check.fail("split arithmetic wrong at " + format_prefix(q));
            return check;
        }
    }

    // rib_overhead counts one net table entry per active split plan
    OwnedPrefixTable table;
    table.add(p("10.0.0.0/8"), {64500});
    std::vector<MitigationPlan> plans;
    std::mt19937_64 prng(56);
    int expected = 0;
    for (int i = 0; i < 200; ++i) {
        auto len = static_cast<uint8_t>(9 + prng() % 16);  // /9../24
        IpPrefix hijacked{
            ((10u << 24) | (static_cast<uint32_t>(prng()) & 0x00ffffffu)) &
                prefix_mask(len),
            len};
        HijackAlarm alarm;
        alarm.owned_prefix = p("10.0.0.0/8");
        alarm.announced_prefix = hijacked;
        alarm.offending_origin = 61575;
        alarm.kind = AlarmKind::SubPrefix;
        plans.push_back(plan(alarm, table));
        if (len < 24) ++expected;
        if (rib_overhead(plans) != expected) {
            check.fail("rib overhead " + std::to_string(rib_overhead(plans)) +
                       " != active split plans " + std::to_string(expected));
            return check;
        }
    }
    check.detail = std::to_string(splits) + " splits and " + std::to_string(floored) +
                   " floor hits verified; overhead tracks plan count";
    return check;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "no false positives on legitimate-only streams", criterion_no_false_positives},
        {2, "sub-prefix hijack infects everything", criterion_subprefix_totality},
        {3, "exact-prefix hijack infects strictly part", criterion_exact_partiality},
        {4, "event engine equals fixpoint oracle", criterion_oracle_equivalence},
        {5, "de-aggregation fully cures below the floor", criterion_mitigation_completeness},
        {6, "detection delay is the min over sources", criterion_multi_source_minimum},
        {7, "delay orderings: push/poll, degree, attack kind", criterion_delay_orderings},
        {8, "earlier mitigation dominates pointwise", criterion_mitigation_dominance},
        {9, "experiment output is byte-deterministic", criterion_determinism},
        {10, "de-aggregation arithmetic and RIB overhead",
         criterion_deaggregation_arithmetic},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        Check check;
        try {
            check = criterion.run();
        } catch (const std::exception& e) {
            check.ok = false;
            check.detail = std::string("exception: ") + e.what();
        }
        auto seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        char timing[32];
        std::snprintf(timing, sizeof(timing), "%.1fs", seconds);
        std::cout << (check.ok ? "PASS" : "FAIL") << "  " << criterion.id << ". "
                  << criterion.name << " [" << timing << "]";
        if (!check.detail.empty()) std::cout << " -- " << check.detail;
        std::cout << '\n';
        if (!check.ok) ++failures;
    }
    if (failures) std::cout << failures << " criterion(s) failed\n";
    return failures == 0 ? 0 : 1;
}
