#include "vigil/harness/csv.hpp"

#include <charconv>
#include <fstream>
#include <set>

namespace vigil::harness {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

void emit_csv(const std::vector<ExperimentResult>& results, const std::string& path) {
    std::set<std::string> source_union;
    for (const auto& r : results)
        for (const auto& [source, delay] : r.per_source_delay_ms) source_union.insert(source);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    out << "scenario,seed,detected,alarm_kind,overall_delay_ms,t_start_ms,t_total_ms,"
           "mitigation_outcome,final_infected_fraction";
    for (const auto& source : source_union) out << ",delay." << source;
    out << ",error\n";
    for (const auto& r : results) {
        out << r.scenario_id << ',' << r.seed << ',' << (r.detected ? 1 : 0) << ',';
        if (r.detected)
            out << (r.alarm_kind == AlarmKind::Exact ? "exact" : "subprefix");
        out << ',';
        if (r.overall_delay_ms) out << *r.overall_delay_ms;
        out << ',';
        if (r.t_start_ms) out << *r.t_start_ms;
        out << ',';
        if (r.t_total_ms) out << *r.t_total_ms;
        out << ',' << to_string(r.mitigation_outcome) << ','
            << format_double(r.final_infected_fraction);
        for (const auto& source : source_union) {
            out << ',';
            auto it = r.per_source_delay_ms.find(source);
            if (it != r.per_source_delay_ms.end()) out << it->second;
        }
        out << ',' << r.error << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);

    std::ofstream series(path + ".series.csv");
    if (!series) throw std::runtime_error("cannot write csv: " + path + ".series.csv");
    series << "scenario,seed,time_ms,fraction\n";
    for (const auto& r : results) {
        for (const auto& [t, fraction] : r.infected_series)
            series << r.scenario_id << ',' << r.seed << ',' << t << ','
                   << format_double(fraction) << '\n';
    }
    if (!series) throw std::runtime_error("write failed: " + path + ".series.csv");
}

void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    out << "scenario,metric,count,undetected,min_ms,q1_ms,median_ms,q3_ms,max_ms,mean_ms\n";
    for (const auto& row : rows) {
        out << row.scenario_id << ',' << row.metric << ',' << row.count << ','
            << row.undetected << ',' << row.min << ',' << row.q1 << ',' << row.median
            << ',' << row.q3 << ',' << row.max << ',' << format_double(row.mean) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace vigil::harness
