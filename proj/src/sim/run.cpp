#include "sim/run.hpp"

#include <algorithm>
#include <stdexcept>

#include "sim/broker.hpp"
#include "sim/kernel.hpp"
#include "sim/stages.hpp"

namespace aitax::sim {

using telemetry::FrameRecord;

void validate(const RunOptions& o) {
    if (!(o.sample_interval > 0.0)) throw std::invalid_argument("sample_interval: must be > 0");
    if (!(o.warmup >= 0.0)) throw std::invalid_argument("warmup: must be >= 0");
    if (!(o.sim_time > o.warmup)) throw std::invalid_argument("sim_time: must exceed warmup");
    if (o.sim_time - o.warmup < telemetry::kEpochs * o.sample_interval)
        throw std::invalid_argument("sim_time: horizon too short for " + std::to_string(telemetry::kEpochs) +
                                    " epochs after warmup");
    if (!(o.max_backlog >= 0.0)) throw std::invalid_argument("max_backlog: must be >= 0");
}

telemetry::PipelineShape shape_of(const ScenarioSpec& spec) {
    telemetry::PipelineShape s;
    s.scheduled = spec.pacing == Pacing::scheduled;
    s.producer_detect = spec.producer_stages.size() > 1;
    s.consumer_stage = spec.consumer_stage;
    return s;
}

namespace {

class Collector : public FrameObserver {
public:
    Collector(const telemetry::PipelineShape& shape, telemetry::MeasurementWindow window,
              telemetry::FrameSink* sink)
        : acc(shape, window), epochs(window.warmup, window.horizon), sink_(sink) {}

    void frames_started(SimTime scheduled, std::uint64_t count) override { acc.frame_started(scheduled, count); }

    void frame_finished(const FrameRecord& f) override {
        acc.frame_finished(f);
        if (f.fanout > 0) epochs.add(f.identify_end, f.identify_end - f.scheduled_start);
        if (sink_) sink_->write(f, true);
    }

    telemetry::BreakdownAccumulator acc;
    telemetry::EpochAccumulator epochs;

private:
    telemetry::FrameSink* sink_;
};

FrameRecord clip(FrameRecord f, SimTime end) {
    for (SimTime* t : {&f.scheduled_start, &f.ingest_start, &f.ingest_end, &f.detect_end, &f.produce_enqueue,
                       &f.fetch_deliver, &f.identify_start, &f.identify_end})
        if (*t > end) *t = telemetry::kAbsent;
    return f;
}

}  // namespace

RunResult simulate(const ScenarioSpec& spec, const RunOptions& opt, telemetry::FrameSink* sink) {
    validate_or_throw(spec);
    validate(opt);
    const SimTime horizon = from_seconds(opt.sim_time);
    const SimTime warmup = from_seconds(opt.warmup);
    const SimTime window = from_seconds(opt.sample_interval);

    Simulator sim;
    ClusterConfig cc;
    cc.brokers = spec.brokers;
    cc.producers = spec.producers;
    cc.consumers = spec.consumers;
    cc.network_capacity = spec.network_capacity;
    cc.storage_capacity = spec.storage_capacity_per_broker();
    cc.proc_capacity = spec.broker_proc_capacity;
    cc.storage_request_overhead = spec.storage_request_overhead;
    cc.linger = from_seconds(spec.batching.producer_linger);
    cc.max_batch = spec.batching.producer_max_batch;
    cc.fetch_min = spec.batching.fetch_min_bytes;
    cc.fetch_max_wait = from_seconds(spec.batching.fetch_max_wait);
    cc.round_robin = spec.partition_choice == PartitionChoice::round_robin;
    cc.seed = opt.seed;
    cc.usage_window = window;
    BrokerCluster cluster(sim, cc, create_topic("frames", spec.partitions, spec.replication_factor, spec.brokers));

    const auto shape = shape_of(spec);
    Collector collector(shape, {warmup, horizon}, sink);
    Pipeline pipeline(sim, spec, cluster, collector, opt.seed, window);
    pipeline.start();

    // Queue gauges sampled at every epoch boundary.
    const char* gauge_names[] = {"broker-storage", "broker-proc", "broker-network-in", "broker-network-out",
                                 "producer-send", "consumer-compute"};
    std::vector<telemetry::QueueTrace> traces;
    for (const char* n : gauge_names) traces.push_back({n, {}});
    auto sample_gauges = [&] {
        const SimTime now = sim.now();
        double storage = 0, proc = 0, in = 0, out = 0;
        for (auto& b : cluster.brokers()) {
            storage += static_cast<double>(b.storage->queue_length(now));
            proc += static_cast<double>(b.proc->queue_length(now));
            in += static_cast<double>(b.net_in->queue_length(now));
            out += static_cast<double>(b.net_out->queue_length(now));
        }
        traces[0].samples.push_back(storage);
        traces[1].samples.push_back(proc);
        traces[2].samples.push_back(in);
        traces[3].samples.push_back(out);
        traces[4].samples.push_back(pipeline.schedule_lag_seconds(now));
        traces[5].samples.push_back(static_cast<double>(cluster.resident_messages()));
    };
    for (int k = 0; k < collector.epochs.epochs(); ++k) sim.schedule(collector.epochs.boundary(k), sample_gauges);

    bool aborted = false;
    std::string abort_resource;
    if (opt.max_backlog > 0.0) {
        for (SimTime t = window; t < horizon; t += window) {
            sim.schedule(t, [&] {
                const SimTime now = sim.now();
                for (auto& b : cluster.brokers()) {
                    for (RateResource* r : {b.storage.get(), b.proc.get(), b.net_in.get(), b.net_out.get()}) {
                        if (!aborted && r->backlog_seconds(now) > opt.max_backlog) {
                            aborted = true;
                            const std::string& n = r->name();
                            abort_resource = "broker-" + n.substr(n.find('-', 7) + 1);
                        }
                    }
                }
                if (!aborted && spec.pacing == Pacing::scheduled &&
                    pipeline.schedule_lag_seconds(now) / spec.producers > opt.max_backlog) {
                    aborted = true;
                    abort_resource = "producer-send";
                }
            });
        }
    }

    while (!aborted && !sim.empty() && sim.next_time() <= horizon) sim.step();
    if (!aborted) sim.run_until(horizon);
    const SimTime stopped_at = sim.now();

    bool drained = false;
    if (opt.drain && !aborted) {
        pipeline.stop_producers();
        cluster.flush_all();
        while (!(pipeline.live_frames() == 0 && cluster.idle()) && sim.step()) {
        }
        const SimTime q = cluster.storage_quiescent_at();
        if (q > sim.now()) sim.run_until(q);
        drained = true;
    }
    const SimTime end = sim.now();

    RunResult r;
    r.scenario = spec.name;
    r.acceleration = spec.acceleration;
    r.seed = opt.seed;
    r.horizon = opt.sim_time;
    r.warmup = opt.warmup;
    r.ended_at = to_seconds(end);
    r.aborted = aborted;
    r.drained = drained;
    r.breakdown = collector.acc.report();

    // Utilization after warmup, per broker resource and per client class.
    const SimTime util_end = aborted ? stopped_at - stopped_at % window : horizon;
    const SimTime util_start = std::min(warmup, util_end);
    double storage = 0, in = 0, out = 0, proc = 0;
    for (auto& b : cluster.brokers()) {
        const std::string tag = "broker-" + std::to_string(b.id);
        auto add = [&](const std::string& n, const char* unit, UsageWindows& w) {
            r.utilization.push_back(telemetry::utilization(n, unit, w, util_end, util_start));
            return r.utilization.back().mean_busy;
        };
        storage += add(tag + "-storage", "bytes", *b.storage_usage);
        in += add(tag + "-network-in", "bits", *b.net_in_usage);
        out += add(tag + "-network-out", "bits", *b.net_out_usage);
        proc += add(tag + "-proc", "requests", *b.proc_usage);
    }
    const double nb = static_cast<double>(spec.brokers);
    r.busy["broker-storage"] = storage / nb;
    r.busy["broker-network-in"] = in / nb;
    r.busy["broker-network-out"] = out / nb;
    r.busy["broker-network"] = std::max(in, out) / nb;
    r.busy["broker-proc"] = proc / nb;
    r.utilization.push_back(telemetry::utilization("producer-send", "bytes", pipeline.send_usage(), util_end, util_start));
    r.busy["producer-send"] = r.utilization.back().mean_busy;
    r.utilization.push_back(
        telemetry::utilization("producer-network-out", "bits", cluster.producer_nic_usage(), util_end, util_start));
    r.busy["producer-network-out"] = r.utilization.back().mean_busy;
    r.utilization.push_back(
        telemetry::utilization("consumer-network-in", "bits", cluster.consumer_nic_usage(), util_end, util_start));
    r.busy["consumer-network-in"] = r.utilization.back().mean_busy;
    r.utilization.push_back(
        telemetry::utilization("consumer-compute", "items", pipeline.compute_usage(), util_end, util_start));
    r.busy["consumer-compute"] = r.utilization.back().mean_busy;

    // Growing queues are attributed to the busiest class among them.
    auto busy_of = [&](const std::string& n) {
        auto it = r.busy.find(n);
        return it == r.busy.end() ? 0.0 : it->second;
    };
    std::stable_sort(traces.begin(), traces.end(),
                     [&](const auto& a, const auto& b) { return busy_of(a.resource) > busy_of(b.resource); });
    std::string hint;
    double best = -1.0;
    for (const char* n : gauge_names) {
        if (busy_of(n) > best) {
            best = busy_of(n);
            hint = n;
        }
    }
    r.verdict = telemetry::classify(collector.epochs.means(), traces, hint);
    if (aborted) {
        r.verdict.stable = false;
        r.verdict.binding_resource = abort_resource;
    }

    auto& c = r.counters;
    const auto& pc = pipeline.counters();
    const auto& kc = cluster.counters();
    c.frames_emitted = pc.frames_emitted;
    c.frames_completed = pc.frames_with_items_finished;
    c.frames_without_items = pc.frames_without_items;
    c.frames_in_flight = pipeline.live_frames();
    c.messages_produced = kc.messages_produced;
    c.messages_fetched = kc.messages_fetched;
    c.messages_resident = cluster.resident_messages();
    c.messages_unappended = cluster.unappended_messages();
    c.bytes_produced = kc.bytes_produced;
    c.storage_bytes_written = cluster.storage_bytes_written();
    c.storage_read_bytes = cluster.storage_read_bytes();
    for (const auto& b : cluster.brokers())
        c.storage_bytes_by_broker.push_back(b.storage_written_bytes);
    c.events = sim.dispatched();

    if (sink) {
        for (const auto& f : pipeline.in_flight()) sink->write(clip(f, end), false);
    }
    return r;
}

}  // namespace aitax::sim
