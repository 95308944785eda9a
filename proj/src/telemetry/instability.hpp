#pragma once

#include <string>
#include <vector>

#include "telemetry/breakdown.hpp"

namespace aitax::telemetry {

inline constexpr int kEpochs = 10;
inline constexpr int kMinIncreasingEpochs = 8;
inline constexpr double kGrowthRatioThreshold = 1.5;

// A queue-length gauge sampled at the end of each epoch.
struct QueueTrace {
    std::string resource;
    std::vector<double> samples;
    bool strictly_increasing() const;
};

struct InstabilityVerdict {
    bool stable = true;
    std::vector<double> epoch_means;  // seconds; NaN for epochs without completions
    int increasing_epochs = 0;        // epochs whose mean exceeds the previous one
    double growth_ratio = 0.0;        // last / first epoch mean
    bool max_queue_trend = false;     // some queue grew across every epoch
    std::vector<std::string> growing_queues;
    std::string binding_resource;     // empty when stable
};

// Epoch mean end-to-end latency, bucketed by completion time.
class EpochAccumulator {
public:
    EpochAccumulator(SimTime warmup, SimTime horizon, int epochs = kEpochs);
    void add(SimTime finish, SimTime latency);
    std::vector<double> means() const;
    SimTime boundary(int k) const;  // end of epoch k (0-based)
    int epochs() const { return epochs_; }

private:
    SimTime warmup_;
    SimTime span_;
    int epochs_;
    std::vector<__int128> sums_;
    std::vector<std::uint64_t> counts_;
};

// Applies the verdict rule. `binding_hint` names the busiest resource and is
// used when only latency growth flags the run.
InstabilityVerdict classify(const std::vector<double>& epoch_means, const std::vector<QueueTrace>& queues,
                            const std::string& binding_hint = "");

// From a frame log: epochs over [warmup, horizon) keyed by completion of
// broker-traversing frames. Throws std::invalid_argument when the horizon
// leaves fewer than one nanosecond per epoch after warmup.
InstabilityVerdict detect_instability(const std::vector<FrameRecord>& log, SimTime warmup, SimTime horizon,
                                      const std::vector<QueueTrace>& queues = {});

}  // namespace aitax::telemetry
