#pragma once

#include <string>
#include <vector>

#include "sim/rate_resource.hpp"
#include "telemetry/breakdown.hpp"
#include "telemetry/instability.hpp"

namespace aitax::telemetry {

struct UtilizationPoint {
    double window_start = 0.0;  // seconds
    double busy_fraction = 0.0;
    double served = 0.0;        // resource units (bytes, bits, requests, items)
};

struct UtilizationSeries {
    std::string resource;
    std::string unit;
    std::vector<UtilizationPoint> points;
    double mean_busy = 0.0;  // over the measurement window
    double served_total = 0.0;
};

// One point per sampling window in [0, horizon). Throws for a nonpositive window.
UtilizationSeries utilization(const std::string& resource, const std::string& unit, const sim::UsageWindows& usage,
                              SimTime horizon, SimTime warmup = 0);

struct WaitFractionPoint {
    double acceleration = 1.0;
    BreakdownReport report;
    InstabilityVerdict verdict;
};

struct WaitFractionSeries {
    std::vector<double> accelerations;
    std::vector<double> fractions;
    bool nondecreasing = true;
};

// Throws std::invalid_argument when any input run is unstable.
WaitFractionSeries waiting_fraction_series(const std::vector<WaitFractionPoint>& runs);

}  // namespace aitax::telemetry
