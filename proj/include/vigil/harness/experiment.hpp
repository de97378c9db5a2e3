#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vigil/detector.hpp"
#include "vigil/mitigator.hpp"
#include "vigil/sim/engine.hpp"
#include "vigil/sim/scenario.hpp"
#include "vigil/sim/topology.hpp"

namespace vigil::harness {

/// Router interface that injects origin announcements into a running
/// simulation at a configured local-router apply delay. Acks carry the
/// simulated apply time.
class SimRouterInterface : public RouterCommandInterface {
public:
    SimRouterInterface(sim::Simulation& simu, int64_t command_delay_ms)
        : sim_(simu), delay_(command_delay_ms) {}

    CommandResult announce(const IpPrefix& prefix, uint32_t origin) override;
    CommandResult withdraw(const IpPrefix& prefix) override;

private:
    sim::Simulation& sim_;
    int64_t delay_;
    std::map<IpPrefix, uint32_t> announced_;
};

enum class MitigationOutcome { None, Split, FilteredFloor };

const char* to_string(MitigationOutcome outcome);

struct ExperimentConfig {
    const sim::Topology* topology = nullptr;
    sim::Scenario scenario;
    uint64_t seed = 1;
    std::string scenario_id = "scenario";
    int64_t command_delay_ms = 100;
    int64_t auto_hijack_margin_ms = 1000;
    std::optional<std::string> trace_path;
    std::optional<std::string> alarm_log_path;
    std::optional<std::string> progress_csv_path;
    bool pace_realtime = false;
    double realtime_speed = 1.0;
};

/// Everything one run yields. Times are relative to the hijack start; a
/// field is absent when the event never happened (no detection, no recovery).
struct ExperimentResult {
    std::string scenario_id;
    uint64_t seed = 0;
    bool detected = false;
    AlarmKind alarm_kind = AlarmKind::Exact;
    std::map<std::string, int64_t> per_source_delay_ms;
    std::optional<int64_t> overall_delay_ms;
    std::optional<int64_t> t_start_ms;
    std::optional<int64_t> t_total_ms;
    std::vector<std::pair<int64_t, double>> infected_series;
    MitigationOutcome mitigation_outcome = MitigationOutcome::None;
    double final_infected_fraction = 0.0;
    bool mitigation_complete = false;
    std::string error;  // set by run_sweep when a cell run threw
};

/// Run the whole pipeline — simulator, source models, detector, mitigator,
/// mitigation monitor — against the simulated clock. Ground truth (hijack
/// start, mitigation start, recovery) comes from the trace markers, which
/// land in `trace_out` when given.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                sim::EventTrace* trace_out = nullptr);

}  // namespace vigil::harness
