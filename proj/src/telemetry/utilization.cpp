#include "telemetry/utilization.hpp"

#include <algorithm>
#include <stdexcept>

namespace aitax::telemetry {

UtilizationSeries utilization(const std::string& resource, const std::string& unit, const sim::UsageWindows& usage,
                              SimTime horizon, SimTime warmup) {
    const SimTime w = usage.window();
    if (w <= 0) throw std::invalid_argument("sampling interval must be positive");
    UtilizationSeries s;
    s.resource = resource;
    s.unit = unit;
    const auto windows = static_cast<std::size_t>((horizon + w - 1) / w);
    const double denom = static_cast<double>(w) * static_cast<double>(std::max<std::size_t>(1, usage.members()));
    for (std::size_t i = 0; i < windows; ++i) {
        UtilizationPoint p;
        p.window_start = sim::to_seconds(static_cast<SimTime>(i) * w);
        p.busy_fraction = std::min(1.0, static_cast<double>(usage.busy(i)) / denom);
        p.served = usage.units(i);
        s.served_total += p.served;
        s.points.push_back(p);
    }
    s.mean_busy = usage.busy_fraction(warmup, horizon);
    return s;
}

WaitFractionSeries waiting_fraction_series(const std::vector<WaitFractionPoint>& runs) {
    WaitFractionSeries out;
    for (const auto& r : runs) {
        if (!r.verdict.stable)
            throw std::invalid_argument("run at acceleration " + std::to_string(r.acceleration) + " is unstable");
        out.accelerations.push_back(r.acceleration);
        out.fractions.push_back(r.report.wait_fraction);
    }
    for (std::size_t i = 1; i < out.fractions.size(); ++i)
        if (out.fractions[i] < out.fractions[i - 1]) out.nondecreasing = false;
    return out;
}

}  // namespace aitax::telemetry
