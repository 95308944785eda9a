#include "sim/stages.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace aitax::sim {

StageSampler::StageSampler(const ComputeProfile& profile, double acceleration)
    : profile_(profile), accel_(acceleration) {
    if (profile.family == DistributionFamily::lognormal) {
        LognormalParams lp;
        if (!fit_lognormal(profile.mean, profile.p99, lp))
            throw std::invalid_argument("stage profile has no lognormal fit");
        mu_ = lp.mu;
        sigma_ = lp.sigma;
    }
}

double StageSampler::sample_seconds(Rng& rng) const {
    switch (profile_.family) {
        case DistributionFamily::deterministic:
            return profile_.mean;
        case DistributionFamily::lognormal:
            return std::exp(mu_ + sigma_ * rng.normal());
        case DistributionFamily::empirical:
            return knots_quantile(profile_.knots, rng.uniform());
    }
    return profile_.mean;
}

SimTime StageSampler::sample(Rng& rng) const {
    return static_cast<SimTime>(std::llround(sample_seconds(rng) * 1e9 / accel_));
}

FanoutSampler::FanoutSampler(const FanoutModel& model) : model_(model) {
    double acc = 0.0;
    for (const auto& [count, p] : model.categorical) {
        acc += p;
        cumulative_.push_back(acc);
    }
}

std::uint32_t FanoutSampler::sample(Rng& rng) const {
    if (model_.kind == FanoutKind::constant) return model_.constant_value;
    const double u = rng.uniform() * cumulative_.back();
    for (std::size_t i = 0; i < cumulative_.size(); ++i)
        if (u < cumulative_[i]) return model_.categorical[i].first;
    return model_.categorical.back().first;
}

Pipeline::Pipeline(Simulator& sim, const ScenarioSpec& spec, BrokerCluster& cluster, FrameObserver& observer,
                   std::uint64_t seed, SimTime usage_window)
    : sim_(sim),
      spec_(spec),
      cluster_(cluster),
      observer_(observer),
      seed_(seed),
      accel_(spec.acceleration),
      scheduled_(spec.pacing == Pacing::scheduled),
      producer_detect_(spec.producer_stages.size() > 1),
      item_bytes_(spec.message_size_model.item_bytes()),
      ingest_(spec.profile("ingest"), spec.acceleration),
      consume_(spec.profile(spec.consumer_stage), spec.acceleration),
      per_item_(spec.profile(spec.consumer_stage).per_item_scaling),
      fanout_(spec.fanout_model),
      send_usage_(usage_window, spec.producers),
      compute_usage_(usage_window, spec.consumers) {
    if (producer_detect_) detect_ = std::make_unique<StageSampler>(spec.profile("detect"), spec.acceleration);
    producers_.reserve(spec.producers);
    for (std::uint32_t p = 0; p < spec.producers; ++p) {
        producers_.push_back(Producer{Rng::derive(seed, site::ingest, p), Rng::derive(seed, site::detect, p),
                                      Rng::derive(seed, site::fanout, p),
                                      RateResource("producer-" + std::to_string(p) + "-send",
                                                   spec.producer_send_capacity, &send_usage_)});
    }
    consumers_.reserve(spec.consumers);
    for (std::uint32_t c = 0; c < spec.consumers; ++c)
        consumers_.push_back(Consumer{Rng::derive(seed, site::identify, c), {}});
    cluster_.set_listener(this);
}

SimTime Pipeline::tick_time(std::uint32_t producer, std::uint64_t k) const {
    return producers_[producer].phase +
           static_cast<SimTime>(std::llround(static_cast<double>(k) * spec_.frame_interval * 1e9));
}

void Pipeline::start() {
    double cycle = spec_.profile("ingest").mean;
    if (producer_detect_) cycle += spec_.profile("detect").mean;
    cycle /= accel_;
    for (std::uint32_t p = 0; p < spec_.producers; ++p) {
        Rng phase_rng = Rng::derive(seed_, site::phase, p);
        const double span = scheduled_ ? spec_.frame_interval : cycle;
        producers_[p].phase = static_cast<SimTime>(std::llround(phase_rng.uniform() * span * 1e9));
        sim_.schedule(producers_[p].phase, *this, kCycleStart, p);
    }
    for (std::uint32_t c = 0; c < spec_.consumers; ++c) cluster_.fetch(c);
}

std::uint64_t Pipeline::alloc_slot() {
    std::uint64_t s;
    if (!free_slots_.empty()) {
        s = free_slots_.back();
        free_slots_.pop_back();
    } else {
        slots_.emplace_back();
        s = slots_.size() - 1;
    }
    slots_[s].live = true;
    slots_[s].pending_messages = 0;
    ++live_;
    return s;
}

void Pipeline::start_cycle(std::uint32_t p) {
    Producer& pr = producers_[p];
    const SimTime now = sim_.now();
    std::uint32_t frames = 1;
    SimTime scheduled = now;
    if (scheduled_) {
        const auto k = static_cast<double>(pr.tick);
        frames = static_cast<std::uint32_t>(std::floor((k + 1.0) * accel_) - std::floor(k * accel_));
        scheduled = tick_time(p, pr.tick);
    }
    pr.remaining = frames;
    SimTime cursor = now;
    for (std::uint32_t j = 0; j < frames; ++j) {
        const std::uint64_t s = alloc_slot();
        FrameRecord& f = slots_[s].rec;
        f = FrameRecord{};
        f.frame_id = next_frame_id_++;
        f.producer_id = p;
        f.scheduled_start = scheduled;
        f.ingest_start = cursor;
        f.ingest_end = cursor + ingest_.sample(pr.ingest_rng);
        f.detect_end = producer_detect_ ? f.ingest_end + detect_->sample(pr.detect_rng) : f.ingest_end;
        f.fanout = fanout_.sample(pr.fanout_rng);
        f.item_bytes = item_bytes_;
        SimTime ready = f.detect_end;
        if (f.fanout > 0) {
            ready = pr.send.acquire(f.detect_end, static_cast<double>(f.fanout) * item_bytes_);
            f.produce_enqueue = ready;
        }
        cursor = ready;
        ++counters_.frames_emitted;
        sim_.schedule(ready, *this, kHandoff, s);
    }
    observer_.frames_started(scheduled, frames);
}

void Pipeline::handoff(std::uint64_t s) {
    FrameRecord& f = slots_[s].rec;
    const std::uint32_t p = f.producer_id;
    if (f.fanout > 0) {
        Message m;
        m.frame_slot = s;
        m.bytes = f.fanout * item_bytes_;
        slots_[s].pending_messages = 1;
        cluster_.produce(p, m);
    } else {
        ++counters_.frames_without_items;
        finish(s);
    }
    Producer& pr = producers_[p];
    if (--pr.remaining > 0 || stopped_) return;
    if (!scheduled_) {
        start_cycle(p);
        return;
    }
    ++pr.tick;
    const SimTime next = tick_time(p, pr.tick);
    if (next <= sim_.now())
        start_cycle(p);
    else
        sim_.schedule(next, *this, kCycleStart, p);
}

void Pipeline::finish(std::uint64_t s) {
    Slot& slot = slots_[s];
    observer_.frame_finished(slot.rec);
    slot.live = false;
    free_slots_.push_back(s);
    --live_;
}

void Pipeline::on_fetch(std::uint32_t c, std::vector<Message>& batch, SimTime delivered) {
    if (batch.empty()) {
        cluster_.fetch(c);
        return;
    }
    Consumer& con = consumers_[c];
    SimTime cursor = delivered;
    std::uint64_t items_total = 0;
    for (const Message& m : batch) {
        FrameRecord& f = slots_[m.frame_slot].rec;
        const std::uint32_t items = per_item_ ? f.fanout : 1;
        f.fetch_deliver = delivered;
        f.identify_start = cursor;
        for (std::uint32_t i = 0; i < items; ++i) cursor += consume_.sample(con.rng);
        f.identify_end = cursor;
        items_total += items;
        con.batch.push_back(m.frame_slot);
    }
    counters_.items_processed += items_total;
    counters_.messages_consumed += batch.size();
    if (cursor > delivered) compute_usage_.add(delivered, cursor, static_cast<double>(items_total));
    sim_.schedule(cursor, *this, kBatchDone, c);
}

void Pipeline::on_event(std::uint32_t kind, std::uint64_t arg) {
    switch (kind) {
        case kCycleStart:
            if (!stopped_) start_cycle(static_cast<std::uint32_t>(arg));
            break;
        case kHandoff:
            handoff(arg);
            break;
        case kBatchDone: {
            Consumer& con = consumers_[arg];
            for (std::uint64_t s : con.batch) {
                if (--slots_[s].pending_messages == 0) {
                    ++counters_.frames_with_items_finished;
                    finish(s);
                }
            }
            con.batch.clear();
            cluster_.fetch(static_cast<std::uint32_t>(arg));
            break;
        }
        default:
            throw std::logic_error("unknown pipeline event");
    }
}

std::vector<FrameRecord> Pipeline::in_flight() const {
    std::vector<FrameRecord> out;
    for (const auto& s : slots_)
        if (s.live) out.push_back(s.rec);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.frame_id < b.frame_id; });
    return out;
}

double Pipeline::schedule_lag_seconds(SimTime now) const {
    if (!scheduled_) return 0.0;
    double lag = 0.0;
    for (std::uint32_t p = 0; p < producers_.size(); ++p) {
        const SimTime due = tick_time(p, producers_[p].tick);
        if (now > due) lag += to_seconds(now - due);
    }
    return lag;
}

std::vector<double> od_frameset_delay(const std::vector<FrameRecord>& log, Pacing pacing) {
    if (pacing != Pacing::scheduled) throw std::invalid_argument("frame-set delay needs a scheduled pipeline");
    std::map<SimTime, SimTime> first_start;
    for (const auto& f : log) {
        auto it = first_start.find(f.scheduled_start);
        if (it == first_start.end())
            first_start.emplace(f.scheduled_start, f.ingest_start);
        else
            it->second = std::min(it->second, f.ingest_start);
    }
    std::vector<double> out;
    out.reserve(first_start.size());
    for (const auto& [sched, start] : first_start) out.push_back(to_seconds(start - sched));
    return out;
}

}  // namespace aitax::sim
