#include "vigil/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <thread>

#include "vigil/forwarding.hpp"
#include "vigil/poller.hpp"
#include "vigil/sim/oracle.hpp"

namespace vigil::harness {

CommandResult SimRouterInterface::announce(const IpPrefix& prefix, uint32_t origin) {
    if (!sim_.topology().has_node(origin))
        return {false, sim_.now(), "origin AS " + std::to_string(origin) + " unknown"};
    int64_t apply_at = sim_.now() + delay_;
    sim_.schedule_origin_announce(apply_at, origin, prefix, /*command=*/true);
    announced_[prefix] = origin;
    return {true, apply_at, {}};
}

CommandResult SimRouterInterface::withdraw(const IpPrefix& prefix) {
    auto it = announced_.find(prefix);
    if (it == announced_.end())
        return {false, sim_.now(), "prefix was not announced through this interface"};
    int64_t apply_at = sim_.now() + delay_;
    sim_.schedule_origin_withdraw(apply_at, it->second, prefix, /*command=*/true);
    announced_.erase(it);
    return {true, apply_at, {}};
}

const char* to_string(MitigationOutcome outcome) {
    switch (outcome) {
        case MitigationOutcome::None: return "none";
        case MitigationOutcome::Split: return "split";
        case MitigationOutcome::FilteredFloor: return "filtered_floor";
    }
    return "?";
}

namespace {

struct PushSourceModel {
    const SourceDescriptor* desc;
    std::map<uint32_t, uint64_t> counters;  // per vantage
};

struct PollSourceModel {
    explicit PollSourceModel(const SourceDescriptor& d) : poller(d) {}
    PollingSource poller;
    int64_t next_grid_ms = 0;
    uint64_t scheduled = 0;  // outstanding tick callbacks
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config,
                                sim::EventTrace* trace_out) {
    if (!config.topology) throw std::invalid_argument("experiment without topology");
    const sim::Topology& topo = *config.topology;
    const sim::Scenario& sc = config.scenario;

    for (const auto& entry : sc.legitimate) {
        if (!topo.has_node(entry.asn))
            throw std::invalid_argument("scenario references unknown AS " +
                                        std::to_string(entry.asn));
    }
    if (!topo.has_node(sc.hijacker_asn))
        throw std::invalid_argument("scenario references unknown AS " +
                                    std::to_string(sc.hijacker_asn));

    OwnedPrefixTable table;
    for (const auto& entry : sc.legitimate) table.add(entry.prefix, entry.origins);

    sim::Simulation simu(topo, config.seed, sc.floor_length);
    Detector detector(std::move(table));
    SimRouterInterface router(simu, config.command_delay_ms);

    std::optional<HijackAlarm> alarm;
    bool alarm_cleared = false;
    bool mitigation_scheduled = false;
    std::map<std::string, int64_t> per_source_first;
    std::optional<MitigationPlan> active_plan;
    std::unique_ptr<MitigationMonitor> monitor;
    MitigationOutcome outcome = MitigationOutcome::None;

    // --- source models -----------------------------------------------------
    std::vector<PushSourceModel> pushes;
    std::vector<std::unique_ptr<PollSourceModel>> polls;
    std::map<uint32_t, std::vector<PushSourceModel*>> push_by_vantage;
    for (const auto& desc : topo.sources()) {
        if (desc.archetype == SourceArchetype::PushStream)
            pushes.push_back(PushSourceModel{&desc, {}});
        else
            polls.push_back(std::make_unique<PollSourceModel>(desc));
    }
    for (auto& model : pushes)
        for (uint32_t vantage : model.desc->vantage_asns)
            push_by_vantage[vantage].push_back(&model);

    SnapshotProvider provider = [&](uint32_t vantage) {
        return std::optional<std::vector<SnapshotEntry>>(simu.snapshot(vantage));
    };

    // --- pipeline ----------------------------------------------------------
    std::function<void()> start_mitigation = [&] {
        active_plan = plan(*alarm, detector.table(), sc.floor_length, simu.now());
        if (active_plan->filtered_floor()) {
            outcome = MitigationOutcome::FilteredFloor;
            return;
        }
        outcome = MitigationOutcome::Split;
        execute(*active_plan, router);
        auto covering = detector.table().covering(alarm->announced_prefix);
        monitor = std::make_unique<MitigationMonitor>(
            alarm->announced_prefix, alarm->offending_origin, covering->value->origins);
        for (const auto& ev : simu.trace().feed_events) monitor->track_progress(ev);
    };

    std::function<void(const FeedEvent&)> deliver = [&](const FeedEvent& ev) {
        simu.trace().feed_events.push_back(ev);
        auto fired = detector.process(ev);
        if (monitor) {
            const auto& progress = monitor->track_progress(ev);
            if (progress.complete && alarm && !alarm_cleared) {
                detector.clear_alarm(alarm->announced_prefix, alarm->offending_origin);
                alarm_cleared = true;
            }
        }
        if (fired && !alarm) alarm = fired;
        // per-source first observations span the whole episode: a slow
        // poller's first sighting still counts after the alarm was cleared
        // (the paper defers mitigation for exactly this measurement)
        if (alarm && ev.kind == FeedEventKind::Announce &&
            ev.prefix == alarm->announced_prefix &&
            ev.origin() == alarm->offending_origin) {
            auto [it, fresh] = per_source_first.try_emplace(ev.source_id,
                                                            ev.timestamp_ms);
            if (!fresh && ev.timestamp_ms < it->second) it->second = ev.timestamp_ms;
        }
        if (alarm && !mitigation_scheduled &&
            sc.mitigation != sim::Scenario::MitigationMode::Off) {
            mitigation_scheduled = true;
            int64_t when = simu.now();
            if (sc.mitigation == sim::Scenario::MitigationMode::Defer)
                when += sc.defer_ms;
            simu.schedule_callback(when, start_mitigation);
        }
    };

    // --- polling drivers ---------------------------------------------------
    std::function<void(PollSourceModel&)> schedule_poll = [&](PollSourceModel& model) {
        const int64_t interval_ms = model.poller.descriptor().poll_interval_s * 1000;
        int64_t grid = model.next_grid_ms;
        if (grid < simu.now())
            grid = ((simu.now() + interval_ms - 1) / interval_ms) * interval_ms;
        model.next_grid_ms = grid + interval_ms;
        ++model.scheduled;
        uint64_t tick_index = static_cast<uint64_t>(grid / interval_ms);
        int64_t latency = model.poller.descriptor().per_event_latency.sample(
            mix64(config.seed, fnv1a(model.poller.descriptor().source_id), 0x706f6c6c,
                  tick_index));
        simu.schedule_callback(
            grid + latency,
            [&, grid, latency] {
                --model.scheduled;
                auto events = model.poller.poll_tick(grid + latency, provider);
                for (const auto& ev : events) deliver(ev);
                // keep ticking while anything is still in flight; otherwise
                // sleep until the change listener wakes us
                if (!events.empty() || !simu.idle_except_aux()) schedule_poll(model);
            },
            /*auxiliary=*/true);
    };

    simu.set_change_listener([&](const sim::BestRouteChange& change) {
        for (auto& model : polls)
            if (model->scheduled == 0) schedule_poll(*model);
        auto it = push_by_vantage.find(change.asn);
        if (it == push_by_vantage.end()) return;
        for (PushSourceModel* model : it->second) {
            uint64_t n = model->counters[change.asn]++;
            int64_t latency = model->desc->per_event_latency.sample(
                mix64(config.seed, fnv1a(model->desc->source_id), change.asn, n));
            FeedEvent ev;
            ev.timestamp_ms = change.time_ms + latency;
            ev.source_id = model->desc->source_id;
            ev.vantage_asn = change.asn;
            if (change.best) {
                ev.kind = FeedEventKind::Announce;
                ev.prefix = change.prefix;
                ev.as_path = sim::export_path(*change.best, change.asn);
            } else {
                ev.kind = FeedEventKind::Withdraw;
                ev.prefix = change.prefix;
            }
            simu.schedule_callback(ev.timestamp_ms, [&deliver, ev] { deliver(ev); });
        }
    });

    // --- drive -------------------------------------------------------------
    auto run_all = [&] {
        if (!config.pace_realtime) {
            simu.run();
            return;
        }
        int64_t last = simu.now();
        while (auto t = simu.next_event_time()) {
            auto gap = static_cast<int64_t>(static_cast<double>(*t - last) /
                                            std::max(config.realtime_speed, 1e-9));
            if (gap > 0) std::this_thread::sleep_for(std::chrono::milliseconds(gap));
            simu.step();
            last = *t;
        }
    };

    for (const auto& entry : sc.legitimate)
        simu.schedule_origin_announce(0, entry.asn, entry.prefix);
    for (auto& model : polls) schedule_poll(*model);

    int64_t hijack_abs;
    if (sc.hijack_at_ms) {
        hijack_abs = *sc.hijack_at_ms;
        simu.schedule_origin_announce(hijack_abs, sc.hijacker_asn, sc.hijack_prefix);
        simu.trace().hijack_start_ms = hijack_abs;
        run_all();
    } else {
        run_all();  // let the legitimate announcement converge first
        hijack_abs = simu.now() + config.auto_hijack_margin_ms;
        simu.schedule_origin_announce(hijack_abs, sc.hijacker_asn, sc.hijack_prefix);
        simu.trace().hijack_start_ms = hijack_abs;
        run_all();
    }

    // --- metrics -----------------------------------------------------------
    sim::EventTrace& trace = simu.trace();
    ExperimentResult result;
    result.scenario_id = config.scenario_id;
    result.seed = config.seed;
    result.mitigation_outcome = outcome;
    result.detected = alarm.has_value();
    if (alarm) {
        result.alarm_kind = alarm->kind;
        result.overall_delay_ms = detection_delay(*alarm, hijack_abs);
        for (const auto& [source, ts] : per_source_first)
            result.per_source_delay_ms[source] = ts - hijack_abs;
    }
    if (trace.mitigation_start_ms >= 0)
        result.t_start_ms = trace.mitigation_start_ms - hijack_abs;

    sim::InfectionTimeline timeline(trace, topo, sc.hijack_prefix, sc.hijacker_asn);
    for (const auto& [t, fraction] : timeline.series()) {
        if (t <= hijack_abs && fraction == 0.0) {
            if (result.infected_series.empty()) result.infected_series.emplace_back(0, 0.0);
            continue;
        }
        int64_t rel = t - hijack_abs;
        if (!result.infected_series.empty() && result.infected_series.back().first == rel)
            result.infected_series.back().second = fraction;
        else
            result.infected_series.emplace_back(rel, fraction);
    }
    result.final_infected_fraction =
        timeline.series().empty() ? 0.0 : timeline.series().back().second;

    if (auto recovered = timeline.recovered_at()) {
        // full recovery also means the whole hijacked space resolves to a
        // legitimate origin everywhere, not merely "offender gone"
        std::set<uint32_t> legit;
        if (auto covering = detector.table().covering(sc.hijack_prefix))
            legit.insert(covering->value->origins.begin(), covering->value->origins.end());
        bool complete = true;
        for (uint32_t asn : topo.nodes()) {
            if (!resolve_forwarding(simu.route_origins(asn), sc.hijack_prefix)
                     .all_within(legit)) {
                complete = false;
                break;
            }
        }
        if (complete) {
            trace.recovered_ms = *recovered;
            result.t_total_ms = *recovered - hijack_abs;
        }
    }
    result.mitigation_complete = monitor && monitor->progress().complete;

    if (config.trace_path) trace.write(*config.trace_path);
    if (config.alarm_log_path) {
        std::ofstream log(*config.alarm_log_path, std::ios::app);
        if (!log) throw std::runtime_error("cannot open alarm log: " + *config.alarm_log_path);
        for (const auto& a : detector.alarms()) log << format_alarm(a) << '\n';
    }
    if (config.progress_csv_path && monitor)
        monitor->write_progress_csv(*config.progress_csv_path);
    if (trace_out) *trace_out = std::move(trace);

    return result;
}

}  // namespace vigil::harness
