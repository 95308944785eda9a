#include "telemetry/histogram.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace aitax::telemetry {

namespace {
constexpr std::int64_t kLinear = 2048;
constexpr int kSubBits = 10;
}  // namespace

std::size_t LatencyHistogram::index_of(std::int64_t ns) {
    if (ns < 0) ns = 0;
    if (ns < kLinear) return static_cast<std::size_t>(ns);
    const int e = 63 - std::countl_zero(static_cast<std::uint64_t>(ns));
    const int shift = e - kSubBits;
    const std::int64_t sub = (ns >> shift) - (std::int64_t{1} << kSubBits);
    return static_cast<std::size_t>(kLinear + static_cast<std::int64_t>(e - 11) * 1024 + sub);
}

std::int64_t LatencyHistogram::lower_bound(std::size_t index) {
    if (index < static_cast<std::size_t>(kLinear)) return static_cast<std::int64_t>(index);
    const std::size_t rel = index - kLinear;
    const int e = static_cast<int>(rel / 1024) + 11;
    const std::int64_t sub = static_cast<std::int64_t>(rel % 1024);
    return (sub + 1024) << (e - kSubBits);
}

std::int64_t LatencyHistogram::width(std::size_t index) {
    if (index < static_cast<std::size_t>(kLinear)) return 1;
    const int e = static_cast<int>((index - kLinear) / 1024) + 11;
    return std::int64_t{1} << (e - kSubBits);
}

void LatencyHistogram::add(std::int64_t ns) {
    const std::size_t i = index_of(ns);
    if (i >= buckets_.size()) buckets_.resize(i + 1, 0);
    ++buckets_[i];
    ++count_;
}

std::int64_t LatencyHistogram::quantile(double p) const {
    if (count_ == 0) return 0;
    std::uint64_t rank = static_cast<std::uint64_t>(std::ceil(p * static_cast<double>(count_)));
    rank = std::clamp<std::uint64_t>(rank, 1, count_);
    std::uint64_t seen = 0;
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
        seen += buckets_[i];
        if (seen >= rank) return lower_bound(i) + (width(i) - 1) / 2;
    }
    return lower_bound(buckets_.size() - 1);
}

double nearest_rank(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("nearest_rank of an empty sample");
    std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size())));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
    return values[rank - 1];
}

}  // namespace aitax::telemetry
