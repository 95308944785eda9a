#pragma once

#include <cstdint>

#include "sim/kernel.hpp"

namespace aitax::telemetry {

using sim::SimTime;

inline constexpr SimTime kAbsent = -1;

// Lifecycle of one frame. Timestamps are nondecreasing in declaration order;
// broker-side fields stay kAbsent for fanout-0 frames and frames in flight.
struct FrameRecord {
    std::uint64_t frame_id = 0;
    std::uint32_t producer_id = 0;
    std::uint32_t fanout = 0;
    std::uint32_t item_bytes = 0;
    SimTime scheduled_start = kAbsent;
    SimTime ingest_start = kAbsent;
    SimTime ingest_end = kAbsent;
    SimTime detect_end = kAbsent;
    SimTime produce_enqueue = kAbsent;
    SimTime fetch_deliver = kAbsent;
    SimTime identify_start = kAbsent;
    SimTime identify_end = kAbsent;

    bool traverses_broker() const { return fanout > 0; }
    // Producer side finished and, when it has items, the consumer side too.
    bool complete() const { return detect_end != kAbsent && (fanout == 0 || identify_end != kAbsent); }
    SimTime finish_time() const { return fanout == 0 ? detect_end : identify_end; }
};

}  // namespace aitax::telemetry
