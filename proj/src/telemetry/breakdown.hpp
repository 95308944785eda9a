#pragma once

#include <string>
#include <vector>

#include "telemetry/frame_record.hpp"
#include "telemetry/histogram.hpp"

namespace aitax::telemetry {

// Which latency components a pipeline has, in order. A scheduled pipeline
// adds "delay"; a single-stage producer has no producer-side detect.
struct PipelineShape {
    bool scheduled = false;
    bool producer_detect = true;
    std::string consumer_stage = "identify";

    std::vector<std::string> component_names() const;
};

// Per-frame components in component_names() order. Broker-side components
// are only meaningful when frame.fanout > 0.
struct FrameComponents {
    SimTime values[5] = {0, 0, 0, 0, 0};
    std::size_t count = 0;
    SimTime end_to_end = 0;
};

FrameComponents decompose(const PipelineShape& shape, const FrameRecord& frame);

struct StageStats {
    std::string name;
    double mean = 0.0;  // seconds
    double p99 = 0.0;   // seconds
    std::uint64_t samples = 0;
};

struct BreakdownReport {
    std::vector<StageStats> stages;  // pipeline order
    StageStats end_to_end;
    double wait_fraction = 0.0;
    double throughput = 0.0;  // frames/s
    std::uint64_t samples = 0;

    const StageStats* stage(const std::string& name) const;
};

struct MeasurementWindow {
    SimTime warmup = 0;
    SimTime horizon = 0;
    bool contains(SimTime t) const { return t >= warmup && t < horizon; }
};

// Exact nearest-rank report over a complete log. Frames whose scheduled start
// falls in the window count toward throughput; those that also finished count
// toward latency. Throws std::invalid_argument on an empty or unordered log.
BreakdownReport breakdown(const std::vector<FrameRecord>& log, const PipelineShape& shape,
                          const MeasurementWindow& window);

// Throws std::invalid_argument naming the first out-of-order field.
void check_ordered(const FrameRecord& frame);

// Streaming counterpart used inside simulation runs; percentiles come from a
// log-linear histogram (within 0.1% of the exact value).
class BreakdownAccumulator {
public:
    BreakdownAccumulator(PipelineShape shape, MeasurementWindow window);

    void frame_started(SimTime scheduled_start, std::uint64_t frames = 1);
    void frame_finished(const FrameRecord& frame);
    BreakdownReport report() const;

private:
    struct Acc {
        __int128 sum = 0;
        std::uint64_t n = 0;
        LatencyHistogram hist;
        void add(SimTime v) {
            sum += v;
            ++n;
            hist.add(v);
        }
    };
    PipelineShape shape_;
    MeasurementWindow window_;
    std::vector<std::string> names_;
    std::vector<Acc> parts_;
    Acc e2e_;
    std::uint64_t started_ = 0;
};

}  // namespace aitax::telemetry
