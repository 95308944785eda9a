#include "telemetry/csv.hpp"

#include <charconv>

namespace aitax::telemetry {

namespace {

void append_uint(std::string& s, std::uint64_t v) {
    char buf[24];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    s.append(buf, r.ptr);
}

void append_time(std::string& s, SimTime ns) {
    if (ns == kAbsent) return;
    if (ns < 0) {
        s.push_back('-');
        ns = -ns;
    }
    append_uint(s, static_cast<std::uint64_t>(ns / 1'000'000'000));
    s.push_back('.');
    char frac[9];
    auto rem = static_cast<std::uint64_t>(ns % 1'000'000'000);
    for (int i = 8; i >= 0; --i) {
        frac[i] = static_cast<char>('0' + rem % 10);
        rem /= 10;
    }
    s.append(frac, 9);
}

}  // namespace

std::string format_time(SimTime ns) {
    std::string s;
    append_time(s, ns);
    return s;
}

FrameCsvWriter::FrameCsvWriter(std::ostream& out) : out_(out) { out_ << kFrameCsvHeader << '\n'; }

void FrameCsvWriter::write(const FrameRecord& f, bool complete) {
    line_.clear();
    append_uint(line_, f.frame_id);
    line_.push_back(',');
    append_uint(line_, f.producer_id);
    line_.append(complete ? ",complete," : ",in_flight,");
    append_uint(line_, f.fanout);
    line_.push_back(',');
    append_uint(line_, f.item_bytes);
    line_.push_back(',');
    append_uint(line_, static_cast<std::uint64_t>(f.fanout) * f.item_bytes);
    for (SimTime t : {f.scheduled_start, f.ingest_start, f.ingest_end, f.detect_end, f.produce_enqueue,
                      f.fetch_deliver, f.identify_start, f.identify_end}) {
        line_.push_back(',');
        append_time(line_, t);
    }
    line_.push_back('\n');
    out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
    ++rows_;
}

}  // namespace aitax::telemetry
