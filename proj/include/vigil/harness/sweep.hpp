#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vigil/harness/experiment.hpp"
#include "vigil/sim/topology.hpp"

namespace vigil::harness {

/// A grid of scenario cells over generated topologies. File format
/// ('#' comments allowed):
///   master_seed <n>
///   repetitions <n>
///   nodes <n>
///   peer_density <fraction>
///   axis kind <exact|subprefix> ...
///   axis hijacker <stub|high> ...
///   axis providers <n> ...
///   axis mitigation <immediate|defer:<ms>|off> ...
/// Omitted axes default to a single value.
struct SweepSpec {
    uint64_t master_seed = 1;
    int repetitions = 10;
    int total_nodes = 500;
    double tier2_peer_density = 0.06;
    std::vector<std::string> kinds = {"subprefix"};
    std::vector<std::string> hijacker_profiles = {"stub"};
    std::vector<int> provider_counts = {1};
    std::vector<std::string> mitigations = {"immediate"};
    int64_t command_delay_ms = 100;
};

SweepSpec parse_sweep(std::istream& in, const std::string& name);
SweepSpec load_sweep(const std::string& path);

/// The standard experiment scenario for an attack kind: the legitimate AS
/// announces its prefix, the hijacker announces the same prefix (exact) or a
/// covered /23 (subprefix announces the owned /22's half).
sim::Scenario make_scenario(const std::string& kind, const std::string& mitigation_token);

sim::GeneratorParams make_generator_params(const SweepSpec& spec,
                                           const std::string& hijacker_profile,
                                           int provider_count, uint64_t seed);

/// One result per (cell, repetition); per-cell seeds derive deterministically
/// from the master seed. A failing cell run yields a result with `error` set
/// instead of aborting the sweep.
std::vector<ExperimentResult> run_sweep(const SweepSpec& spec);

/// Five-number summary plus mean, per (scenario cell, metric). Metrics are
/// the overall detection delay ("overall") and each source's delay.
/// Undetected runs are excluded from the order statistics and counted.
struct SummaryRow {
    std::string scenario_id;
    std::string metric;
    size_t count = 0;
    size_t undetected = 0;
    int64_t min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    double mean = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<ExperimentResult>& results);

/// Nearest-rank quantile of a sorted sample: value at index ceil(p*n).
int64_t nearest_rank(const std::vector<int64_t>& sorted, double p);

}  // namespace vigil::harness
