#pragma once

#include <cstdint>
#include <vector>

namespace aitax::telemetry {

// Log-linear histogram of nanosecond values: exact below 2048 ns, relative
// bucket width 1/1024 above.
class LatencyHistogram {
public:
    void add(std::int64_t ns);
    std::uint64_t count() const { return count_; }
    // Nearest-rank quantile, reported at the bucket midpoint. Returns 0 when empty.
    std::int64_t quantile(double p) const;

    static std::size_t index_of(std::int64_t ns);
    static std::int64_t lower_bound(std::size_t index);
    static std::int64_t width(std::size_t index);

private:
    std::vector<std::uint64_t> buckets_;
    std::uint64_t count_ = 0;
};

// Nearest-rank quantile of raw samples: the ceil(p * n)-th smallest.
double nearest_rank(std::vector<double> values, double p);

}  // namespace aitax::telemetry
