#pragma once

#include <string>
#include <vector>

#include "sim/run.hpp"

namespace aitax::report {

// summary.json: breakdown, verdict, busy fractions and counters of one run.
std::string summary_json(const sim::RunResult& run);

// utilization.csv: one row per resource per sampling window.
inline constexpr const char* kUtilizationCsvHeader = "resource,unit,window_start,busy_fraction,served";
std::string utilization_csv(const sim::RunResult& run);

// Fixed-precision decimal used in every CSV; same bytes on every platform.
std::string fixed(double v, int decimals);

}  // namespace aitax::report
