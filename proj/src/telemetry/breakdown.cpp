#include "telemetry/breakdown.hpp"

#include <stdexcept>

namespace aitax::telemetry {

std::vector<std::string> PipelineShape::component_names() const {
    std::vector<std::string> names;
    if (scheduled) names.push_back("delay");
    names.push_back("ingest");
    if (producer_detect) names.push_back("detect");
    names.push_back("wait");
    names.push_back(consumer_stage);
    return names;
}

FrameComponents decompose(const PipelineShape& shape, const FrameRecord& f) {
    FrameComponents c;
    if (shape.scheduled) c.values[c.count++] = f.ingest_start - f.scheduled_start;
    c.values[c.count++] = f.ingest_end - f.ingest_start;
    if (shape.producer_detect) c.values[c.count++] = f.detect_end - f.ingest_end;
    if (f.fanout > 0 && f.identify_end != kAbsent) {
        c.values[c.count++] = f.identify_start - f.detect_end;
        c.values[c.count++] = f.identify_end - f.identify_start;
        c.end_to_end = f.identify_end - f.scheduled_start;
    } else {
        c.end_to_end = f.detect_end - f.scheduled_start;
    }
    return c;
}

const StageStats* BreakdownReport::stage(const std::string& name) const {
    for (const auto& s : stages)
        if (s.name == name) return &s;
    return nullptr;
}

void check_ordered(const FrameRecord& f) {
    const SimTime seq[] = {f.scheduled_start, f.ingest_start,   f.ingest_end,     f.detect_end,
                           f.produce_enqueue, f.fetch_deliver,  f.identify_start, f.identify_end};
    const char* names[] = {"scheduled_start", "ingest_start",   "ingest_end",     "detect_end",
                           "produce_enqueue", "fetch_deliver",  "identify_start", "identify_end"};
    SimTime last = kAbsent;
    for (int i = 0; i < 8; ++i) {
        if (seq[i] == kAbsent) continue;
        if (last != kAbsent && seq[i] < last)
            throw std::invalid_argument("frame " + std::to_string(f.frame_id) + ": " + names[i] +
                                        " precedes an earlier lifecycle timestamp");
        last = seq[i];
    }
    if (f.scheduled_start == kAbsent || f.ingest_start == kAbsent)
        throw std::invalid_argument("frame " + std::to_string(f.frame_id) + ": missing start timestamps");
}

namespace {
bool producer_done(const FrameRecord& f) { return f.detect_end != kAbsent; }
}  // namespace

BreakdownReport breakdown(const std::vector<FrameRecord>& log, const PipelineShape& shape,
                          const MeasurementWindow& window) {
    if (log.empty()) throw std::invalid_argument("breakdown of an empty log");
    const auto names = shape.component_names();
    const std::size_t wait_index = names.size() - 2;
    std::vector<std::vector<double>> parts(names.size());
    std::vector<__int128> sums(names.size(), 0);
    std::vector<double> e2e;
    __int128 e2e_sum = 0;
    std::uint64_t started = 0;
    for (const auto& f : log) {
        check_ordered(f);
        if (!window.contains(f.scheduled_start)) continue;
        ++started;
        if (!producer_done(f)) continue;
        const FrameComponents c = decompose(shape, f);
        for (std::size_t i = 0; i < c.count; ++i) {
            if (i >= wait_index && f.fanout == 0) break;
            parts[i].push_back(sim::to_seconds(c.values[i]));
            sums[i] += c.values[i];
        }
        if (f.fanout > 0 && f.identify_end != kAbsent) {
            e2e.push_back(sim::to_seconds(c.end_to_end));
            e2e_sum += c.end_to_end;
        }
    }
    BreakdownReport r;
    for (std::size_t i = 0; i < names.size(); ++i) {
        StageStats st;
        st.name = names[i];
        st.samples = parts[i].size();
        if (st.samples) {
            st.mean = static_cast<double>(sums[i]) / static_cast<double>(st.samples) * 1e-9;
            st.p99 = nearest_rank(parts[i], 0.99);
        }
        r.stages.push_back(st);
    }
    r.end_to_end.name = "end_to_end";
    r.end_to_end.samples = e2e.size();
    if (!e2e.empty()) {
        r.end_to_end.mean = static_cast<double>(e2e_sum) / static_cast<double>(e2e.size()) * 1e-9;
        r.end_to_end.p99 = nearest_rank(e2e, 0.99);
        r.wait_fraction = r.stages[wait_index].mean / r.end_to_end.mean;
    }
    r.samples = e2e.size();
    const double span = sim::to_seconds(window.horizon - window.warmup);
    r.throughput = span > 0 ? static_cast<double>(started) / span : 0.0;
    return r;
}

BreakdownAccumulator::BreakdownAccumulator(PipelineShape shape, MeasurementWindow window)
    : shape_(std::move(shape)), window_(window), names_(shape_.component_names()), parts_(names_.size()) {}

void BreakdownAccumulator::frame_started(SimTime scheduled_start, std::uint64_t frames) {
    if (window_.contains(scheduled_start)) started_ += frames;
}

void BreakdownAccumulator::frame_finished(const FrameRecord& f) {
    if (!window_.contains(f.scheduled_start)) return;
    const FrameComponents c = decompose(shape_, f);
    const std::size_t wait_index = names_.size() - 2;
    for (std::size_t i = 0; i < c.count; ++i) {
        if (i >= wait_index && f.fanout == 0) break;
        parts_[i].add(c.values[i]);
    }
    if (f.fanout > 0 && f.identify_end != kAbsent) e2e_.add(c.end_to_end);
}

BreakdownReport BreakdownAccumulator::report() const {
    BreakdownReport r;
    auto fill = [](const Acc& a, StageStats& st) {
        st.samples = a.n;
        if (a.n) {
            st.mean = static_cast<double>(a.sum) / static_cast<double>(a.n) * 1e-9;
            st.p99 = static_cast<double>(a.hist.quantile(0.99)) * 1e-9;
        }
    };
    for (std::size_t i = 0; i < names_.size(); ++i) {
        StageStats st;
        st.name = names_[i];
        fill(parts_[i], st);
        r.stages.push_back(st);
    }
    r.end_to_end.name = "end_to_end";
    fill(e2e_, r.end_to_end);
    r.samples = e2e_.n;
    if (e2e_.n) r.wait_fraction = r.stages[names_.size() - 2].mean / r.end_to_end.mean;
    const double span = sim::to_seconds(window_.horizon - window_.warmup);
    r.throughput = span > 0 ? static_cast<double>(started_) / span : 0.0;
    return r;
}

}  // namespace aitax::telemetry
