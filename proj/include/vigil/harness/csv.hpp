#pragma once

#include <string>
#include <vector>

#include "vigil/harness/sweep.hpp"

namespace vigil::harness {

/// Headered CSV, one row per result. Per-source delay columns are the sorted
/// union of sources seen across all results; absent values are empty cells.
/// The infected-fraction series goes to `<path>.series.csv` with columns
/// scenario,seed,time_ms,fraction. Numbers are written with shortest
/// round-trip formatting so a parse-back reproduces them exactly.
void emit_csv(const std::vector<ExperimentResult>& results, const std::string& path);

void emit_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);

std::string format_double(double value);

}  // namespace vigil::harness
