#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "scenario.hpp"
#include "sim/broker.hpp"
#include "sim/kernel.hpp"
#include "sim/rate_resource.hpp"
#include "sim/rng.hpp"
#include "telemetry/frame_record.hpp"

namespace aitax::sim {

using telemetry::FrameRecord;

// Draws stage durations from a ComputeProfile, divided by the acceleration.
class StageSampler {
public:
    StageSampler(const ComputeProfile& profile, double acceleration);
    double sample_seconds(Rng& rng) const;  // before acceleration
    SimTime sample(Rng& rng) const;         // after acceleration, in ns
    double acceleration() const { return accel_; }

private:
    ComputeProfile profile_;
    double accel_;
    double mu_ = 0.0;
    double sigma_ = 0.0;
};

class FanoutSampler {
public:
    explicit FanoutSampler(const FanoutModel& model);
    std::uint32_t sample(Rng& rng) const;

private:
    FanoutModel model_;
    std::vector<double> cumulative_;
};

class FrameObserver {
public:
    virtual ~FrameObserver() = default;
    virtual void frames_started(SimTime scheduled_start, std::uint64_t count) = 0;
    virtual void frame_finished(const FrameRecord& frame) = 0;
};

struct PipelineCounters {
    std::uint64_t frames_emitted = 0;
    std::uint64_t frames_with_items_finished = 0;
    std::uint64_t frames_without_items = 0;
    std::uint64_t items_processed = 0;
    std::uint64_t messages_consumed = 0;
};

// Producers (ingest, optional detect, send) and consumers (fetch, per-item
// compute) of one scenario.
class Pipeline : public EventHandler, public FetchListener {
public:
    Pipeline(Simulator& sim, const ScenarioSpec& spec, BrokerCluster& cluster, FrameObserver& observer,
             std::uint64_t seed, SimTime usage_window);

    void start();
    // No new frames or frame sets start after this call.
    void stop_producers() { stopped_ = true; }

    std::vector<FrameRecord> in_flight() const;  // ordered by frame id
    std::uint64_t live_frames() const { return live_; }
    const PipelineCounters& counters() const { return counters_; }

    // Seconds by which scheduled producers trail their wall-clock schedule.
    double schedule_lag_seconds(SimTime now) const;
    SimTime tick_time(std::uint32_t producer, std::uint64_t k) const;

    UsageWindows& send_usage() { return send_usage_; }
    UsageWindows& compute_usage() { return compute_usage_; }
    const RateResource& send_path(std::uint32_t producer) const { return producers_[producer].send; }

    void on_event(std::uint32_t kind, std::uint64_t arg) override;
    void on_fetch(std::uint32_t consumer, std::vector<Message>& batch, SimTime delivered_at) override;

private:
    enum Kind : std::uint32_t { kCycleStart, kHandoff, kBatchDone };

    struct Producer {
        Rng ingest_rng, detect_rng, fanout_rng;
        RateResource send;
        SimTime phase = 0;
        std::uint64_t tick = 0;
        std::uint32_t remaining = 0;  // frames of the current set not yet handed off
    };
    struct Consumer {
        Rng rng;
        std::vector<std::uint64_t> batch;  // frame slots in the current batch
    };
    struct Slot {
        FrameRecord rec;
        std::uint32_t pending_messages = 0;
        bool live = false;
    };

    void start_cycle(std::uint32_t producer);
    void handoff(std::uint64_t slot);
    void finish(std::uint64_t slot);
    std::uint64_t alloc_slot();

    Simulator& sim_;
    const ScenarioSpec& spec_;
    BrokerCluster& cluster_;
    FrameObserver& observer_;
    std::uint64_t seed_;
    double accel_;
    bool scheduled_;
    bool producer_detect_;
    std::uint32_t item_bytes_;
    StageSampler ingest_;
    std::unique_ptr<StageSampler> detect_;
    StageSampler consume_;
    bool per_item_;
    FanoutSampler fanout_;
    UsageWindows send_usage_;
    UsageWindows compute_usage_;
    std::vector<Producer> producers_;
    std::vector<Consumer> consumers_;
    std::vector<Slot> slots_;
    std::vector<std::uint64_t> free_slots_;
    std::uint64_t next_frame_id_ = 0;
    std::uint64_t live_ = 0;
    bool stopped_ = false;
    PipelineCounters counters_;
};

// Per-set start delay for one producer of a scheduled pipeline: for each
// frame set, earliest ingest_start minus its scheduled start, in seconds.
// Throws std::invalid_argument for a self-paced scenario.
std::vector<double> od_frameset_delay(const std::vector<FrameRecord>& producer_log, Pacing pacing);

}  // namespace aitax::sim
