#pragma once

#include <ostream>
#include <string>

#include "telemetry/frame_record.hpp"

namespace aitax::telemetry {

class FrameSink {
public:
    virtual ~FrameSink() = default;
    virtual void write(const FrameRecord& frame, bool complete) = 0;
};

// Column order is a stable contract; see docs/output-formats.md.
inline constexpr const char* kFrameCsvHeader =
    "frame_id,producer_id,status,fanout,item_bytes,bytes,scheduled_start,ingest_start,ingest_end,detect_end,"
    "produce_enqueue,fetch_deliver,identify_start,identify_end";

// Seconds with nine decimals; empty for kAbsent.
std::string format_time(SimTime ns);

class FrameCsvWriter : public FrameSink {
public:
    explicit FrameCsvWriter(std::ostream& out);
    void write(const FrameRecord& frame, bool complete) override;
    std::uint64_t rows() const { return rows_; }

private:
    std::ostream& out_;
    std::string line_;
    std::uint64_t rows_ = 0;
};

}  // namespace aitax::telemetry
