#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scenario.hpp"
#include "telemetry/breakdown.hpp"
#include "telemetry/csv.hpp"
#include "telemetry/instability.hpp"
#include "telemetry/utilization.hpp"

namespace aitax::sim {

struct RunOptions {
    std::uint64_t seed = 1;
    double sim_time = 600.0;       // seconds
    double warmup = 60.0;          // seconds
    double sample_interval = 1.0;  // seconds
    // Stop early once any queue holds more than this many seconds of work
    // (0 disables). Bounds memory on hopeless sweep points.
    double max_backlog = 0.0;
    // After the horizon, stop producers and run until every frame finished.
    bool drain = false;
};

// Throws std::invalid_argument naming the offending option.
void validate(const RunOptions& options);

struct RunCounters {
    std::uint64_t frames_emitted = 0;
    std::uint64_t frames_completed = 0;      // with items, identify finished
    std::uint64_t frames_without_items = 0;  // fanout 0
    std::uint64_t frames_in_flight = 0;
    std::uint64_t messages_produced = 0;
    std::uint64_t messages_fetched = 0;
    std::uint64_t messages_resident = 0;     // in partition logs
    std::uint64_t messages_unappended = 0;   // producer batches and leader transit
    std::uint64_t bytes_produced = 0;
    std::uint64_t storage_bytes_written = 0;
    std::uint64_t storage_read_bytes = 0;
    std::vector<std::uint64_t> storage_bytes_by_broker;
    std::uint64_t events = 0;
};

struct RunResult {
    std::string scenario;
    double acceleration = 1.0;
    std::uint64_t seed = 0;
    double horizon = 0.0;
    double warmup = 0.0;
    double ended_at = 0.0;
    bool aborted = false;
    bool drained = false;
    telemetry::BreakdownReport breakdown;
    telemetry::InstabilityVerdict verdict;
    std::vector<telemetry::UtilizationSeries> utilization;
    std::map<std::string, double> busy;  // resource class -> busy fraction after warmup
    RunCounters counters;
};

RunResult simulate(const ScenarioSpec& spec, const RunOptions& options, telemetry::FrameSink* sink = nullptr);

telemetry::PipelineShape shape_of(const ScenarioSpec& spec);

}  // namespace aitax::sim
