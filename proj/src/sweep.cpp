#include "vigil/harness/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace vigil::harness {

SweepSpec parse_sweep(std::istream& in, const std::string& name) {
    SweepSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::string where = name + ":" + std::to_string(lineno);
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "master_seed") {
            if (!(ls >> spec.master_seed)) throw ParseError(where + ": master_seed needs <n>");
        } else if (kw == "repetitions") {
            if (!(ls >> spec.repetitions) || spec.repetitions < 1)
                throw ParseError(where + ": repetitions needs n >= 1");
        } else if (kw == "nodes") {
            if (!(ls >> spec.total_nodes) || spec.total_nodes < 20)
                throw ParseError(where + ": nodes needs n >= 20");
        } else if (kw == "peer_density") {
            if (!(ls >> spec.tier2_peer_density) || spec.tier2_peer_density < 0)
                throw ParseError(where + ": bad peer_density");
        } else if (kw == "command_delay_ms") {
            if (!(ls >> spec.command_delay_ms) || spec.command_delay_ms < 0)
                throw ParseError(where + ": bad command_delay_ms");
        } else if (kw == "axis") {
            std::string axis;
            if (!(ls >> axis)) throw ParseError(where + ": axis needs a name");
            std::vector<std::string> values;
            std::string v;
            while (ls >> v) values.push_back(v);
            if (values.empty()) throw ParseError(where + ": axis needs values");
            if (axis == "kind") {
                for (const auto& k : values)
                    if (k != "exact" && k != "subprefix")
                        throw ParseError(where + ": kind must be exact or subprefix");
                spec.kinds = values;
            } else if (axis == "hijacker") {
                for (const auto& h : values)
                    if (h != "stub" && h != "high")
                        throw ParseError(where + ": hijacker must be stub or high");
                spec.hijacker_profiles = values;
            } else if (axis == "providers") {
                spec.provider_counts.clear();
                for (const auto& p : values) {
                    int n = 0;
                    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), n);
                    if (ec != std::errc{} || n < 1)
                        throw ParseError(where + ": bad provider count '" + p + "'");
                    spec.provider_counts.push_back(n);
                }
            } else if (axis == "mitigation") {
                for (const auto& m : values) make_scenario("exact", m);  // validates
                spec.mitigations = values;
            } else {
                throw ParseError(where + ": unknown axis '" + axis + "'");
            }
        } else {
            throw ParseError(where + ": unknown keyword '" + kw + "'");
        }
    }
    return spec;
}

SweepSpec load_sweep(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sweep spec: " + path);
    return parse_sweep(in, path);
}

sim::Scenario make_scenario(const std::string& kind, const std::string& mitigation_token) {
    sim::Scenario sc;
    if (kind == "exact") {
        sc.legitimate.push_back(
            {sim::kLegitimateAsn, parse_prefix("184.164.228.0/23"), {sim::kLegitimateAsn}});
        sc.hijack_prefix = parse_prefix("184.164.228.0/23");
    } else if (kind == "subprefix") {
        sc.legitimate.push_back(
            {sim::kLegitimateAsn, parse_prefix("184.164.228.0/22"), {sim::kLegitimateAsn}});
        sc.hijack_prefix = parse_prefix("184.164.228.0/23");
    } else {
        throw std::invalid_argument("unknown attack kind '" + kind + "'");
    }
    sc.hijacker_asn = sim::kHijackerAsn;

    if (mitigation_token == "immediate") {
        sc.mitigation = sim::Scenario::MitigationMode::Immediate;
    } else if (mitigation_token == "off") {
        sc.mitigation = sim::Scenario::MitigationMode::Off;
    } else if (mitigation_token.rfind("defer:", 0) == 0) {
        std::string ms = mitigation_token.substr(6);
        int64_t v = 0;
        auto [ptr, ec] = std::from_chars(ms.data(), ms.data() + ms.size(), v);
        if (ec != std::errc{} || ptr != ms.data() + ms.size() || v < 0)
            throw std::invalid_argument("bad mitigation token '" + mitigation_token + "'");
        sc.mitigation = sim::Scenario::MitigationMode::Defer;
        sc.defer_ms = v;
    } else {
        throw std::invalid_argument("bad mitigation token '" + mitigation_token + "'");
    }
    return sc;
}

sim::GeneratorParams make_generator_params(const SweepSpec& spec,
                                           const std::string& hijacker_profile,
                                           int provider_count, uint64_t seed) {
    sim::GeneratorParams params;
    params.total_nodes = spec.total_nodes;
    params.tier2_peer_density = spec.tier2_peer_density;
    params.hijacker_profile = hijacker_profile == "high"
                                  ? sim::GeneratorParams::HijackerProfile::HighDegree
                                  : sim::GeneratorParams::HijackerProfile::Stub;
    params.legit_provider_count = provider_count;
    params.seed = seed;
    return params;
}

namespace {

std::string sanitize(const std::string& token) {
    std::string out = token;
    std::replace(out.begin(), out.end(), ':', '_');
    return out;
}

}  // namespace

std::vector<ExperimentResult> run_sweep(const SweepSpec& spec) {
    std::vector<ExperimentResult> results;
    uint64_t cell_index = 0;
    for (const auto& kind : spec.kinds) {
        for (const auto& profile : spec.hijacker_profiles) {
            for (int providers : spec.provider_counts) {
                for (const auto& mitigation : spec.mitigations) {
                    ++cell_index;
                    std::string id = kind + "-" + profile + "-p" +
                                     std::to_string(providers) + "-" + sanitize(mitigation);
                    for (int rep = 0; rep < spec.repetitions; ++rep) {
                        uint64_t seed = mix64(spec.master_seed, cell_index,
                                              static_cast<uint64_t>(rep) + 1);
                        ExperimentResult result;
                        try {
                            auto topo = sim::generate_topology(make_generator_params(
                                spec, profile, providers, seed));
                            ExperimentConfig config;
                            config.topology = &topo;
                            config.scenario = make_scenario(kind, mitigation);
                            config.seed = seed;
                            config.scenario_id = id;
                            config.command_delay_ms = spec.command_delay_ms;
                            result = run_experiment(config);
                        } catch (const std::exception& e) {
                            result.scenario_id = id;
                            result.seed = seed;
                            result.error = e.what();
                        }
                        results.push_back(std::move(result));
                    }
                }
            }
        }
    }
    return results;
}

int64_t nearest_rank(const std::vector<int64_t>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    auto rank = static_cast<size_t>(std::ceil(p * static_cast<double>(sorted.size())));
    if (rank == 0) rank = 1;
    if (rank > sorted.size()) rank = sorted.size();
    return sorted[rank - 1];
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentResult>& results) {
    // (cell, metric) -> delays of detected runs
    std::map<std::pair<std::string, std::string>, std::vector<int64_t>> samples;
    std::map<std::string, size_t> undetected;
    std::vector<std::string> cell_order;
    for (const auto& r : results) {
        if (!r.error.empty()) continue;
        if (!undetected.count(r.scenario_id)) {
            undetected[r.scenario_id] = 0;
            cell_order.push_back(r.scenario_id);
        }
        if (!r.detected) {
            ++undetected[r.scenario_id];
            continue;
        }
        samples[{r.scenario_id, "overall"}].push_back(*r.overall_delay_ms);
        for (const auto& [source, delay] : r.per_source_delay_ms)
            samples[{r.scenario_id, source}].push_back(delay);
    }

    std::vector<SummaryRow> rows;
    for (const auto& cell : cell_order) {
        if (!samples.count({cell, "overall"})) {
            // nothing detected in this cell; keep the undetected count visible
            SummaryRow row;
            row.scenario_id = cell;
            row.metric = "overall";
            row.undetected = undetected[cell];
            rows.push_back(std::move(row));
            continue;
        }
        for (auto& [key, delays] : samples) {
            if (key.first != cell) continue;
            std::sort(delays.begin(), delays.end());
            SummaryRow row;
            row.scenario_id = cell;
            row.metric = key.second;
            row.count = delays.size();
            row.undetected = undetected[cell];
            row.min = delays.front();
            row.q1 = nearest_rank(delays, 0.25);
            row.median = nearest_rank(delays, 0.50);
            row.q3 = nearest_rank(delays, 0.75);
            row.max = delays.back();
            double sum = 0;
            for (int64_t d : delays) sum += static_cast<double>(d);
            row.mean = sum / static_cast<double>(delays.size());
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace vigil::harness
