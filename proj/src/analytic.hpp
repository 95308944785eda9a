#pragma once

#include <map>
#include <string>

#include "scenario.hpp"

namespace aitax::analytic {

// Fractions of producer runtime spent in AI kernels. The fitted values match
// the stated asymptotes (1.74x, 8x); the prose figures are rounded.
inline constexpr double kDetectFractionFitted = 0.425;
inline constexpr double kDetectFractionProse = 0.42;
inline constexpr double kIdentifyFractionFitted = 0.875;
inline constexpr double kIdentifyFractionProse = 0.88;

// 1 / ((1 - f) + f / a). a may be +infinity. Throws std::domain_error.
double amdahl_speedup(double f, double a);

// nominal: producers emit 1/frame_interval frames per second times a.
// closed_loop: self-paced producers emit 1 / (compute / a + send) frames per
// second, the rate the simulator actually sustains.
enum class RateModel { nominal, closed_loop };

struct DemandEstimate {
    double frames_per_producer = 0.0;    // frames/s
    double per_broker_write = 0.0;       // bytes/s
    double aggregate_write = 0.0;        // bytes/s
    double per_broker_network_in = 0.0;  // bits/s
    double per_broker_network_out = 0.0; // bits/s
    double per_producer_send = 0.0;      // bytes/s
    double per_broker_requests = 0.0;    // requests/s
    double consumer_busy = 0.0;          // mean busy consumers
};

DemandEstimate estimate_demand(const ScenarioSpec& spec, double a, RateModel model = RateModel::nominal);

struct StabilityVerdict {
    std::map<std::string, double> utilizations;
    bool stable = true;
    std::string binding_resource;  // empty when stable
};

StabilityVerdict predict_stability(const ScenarioSpec& spec, double a, RateModel model = RateModel::nominal);

struct AxisResult {
    bool feasible = false;
    double value = 0.0;            // drives, brokers, or scale factor
    std::string binding_resource;  // set when infeasible
};

struct MitigationOptions {
    AxisResult drives;
    AxisResult brokers;
    AxisResult size;
};

struct MitigationPlan {
    MitigationOptions pure_storage;  // nominal rates
    MitigationOptions calibrated;    // closed-loop rates
};

MitigationOptions min_mitigation(const ScenarioSpec& spec, double target_a, RateModel model);
MitigationPlan min_mitigation(const ScenarioSpec& spec, double target_a);

inline constexpr unsigned kMaxDrives = 64;
inline constexpr unsigned kMaxBrokers = 256;
inline constexpr int kMaxSizeHalvings = 10;

}  // namespace aitax::analytic
