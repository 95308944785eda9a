#include "telemetry/instability.hpp"

#include <cmath>
#include <stdexcept>

namespace aitax::telemetry {

bool QueueTrace::strictly_increasing() const {
    if (samples.size() < 2) return false;
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i] > samples[i - 1])) return false;
    return true;
}

EpochAccumulator::EpochAccumulator(SimTime warmup, SimTime horizon, int epochs)
    : warmup_(warmup), span_(horizon - warmup), epochs_(epochs), sums_(epochs, 0), counts_(epochs, 0) {
    if (epochs < 1 || span_ < epochs) throw std::invalid_argument("horizon too short for the epoch count");
}

void EpochAccumulator::add(SimTime finish, SimTime latency) {
    if (finish < warmup_ || finish >= warmup_ + span_) return;
    const auto k = static_cast<std::size_t>(static_cast<__int128>(finish - warmup_) * epochs_ / span_);
    sums_[k] += latency;
    ++counts_[k];
}

std::vector<double> EpochAccumulator::means() const {
    std::vector<double> out(epochs_, NAN);
    for (int k = 0; k < epochs_; ++k)
        if (counts_[k]) out[k] = static_cast<double>(sums_[k]) / static_cast<double>(counts_[k]) * 1e-9;
    return out;
}

SimTime EpochAccumulator::boundary(int k) const {
    return warmup_ + static_cast<SimTime>(static_cast<__int128>(span_) * (k + 1) / epochs_);
}

InstabilityVerdict classify(const std::vector<double>& means, const std::vector<QueueTrace>& queues,
                            const std::string& binding_hint) {
    InstabilityVerdict v;
    v.epoch_means = means;
    for (std::size_t k = 1; k < means.size(); ++k)
        if (means[k] > means[k - 1]) ++v.increasing_epochs;
    if (!means.empty() && means.front() > 0.0) v.growth_ratio = means.back() / means.front();
    const bool latency_growth =
        v.increasing_epochs >= kMinIncreasingEpochs && v.growth_ratio > kGrowthRatioThreshold;
    for (const auto& q : queues) {
        if (q.strictly_increasing()) v.growing_queues.push_back(q.resource);
    }
    v.max_queue_trend = !v.growing_queues.empty();
    v.stable = !(latency_growth || v.max_queue_trend);
    if (!v.stable) v.binding_resource = v.max_queue_trend ? v.growing_queues.front() : binding_hint;
    return v;
}

InstabilityVerdict detect_instability(const std::vector<FrameRecord>& log, SimTime warmup, SimTime horizon,
                                      const std::vector<QueueTrace>& queues) {
    EpochAccumulator acc(warmup, horizon);
    for (const auto& f : log)
        if (f.fanout > 0 && f.identify_end != kAbsent) acc.add(f.identify_end, f.identify_end - f.scheduled_start);
    return classify(acc.means(), queues);
}

}  // namespace aitax::telemetry
