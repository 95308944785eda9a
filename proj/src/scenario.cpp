#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aitax {

namespace {
const char* const kStageNames[] = {"ingest", "detect", "identify"};

bool known_stage(const std::string& s) {
    return std::find(std::begin(kStageNames), std::end(kStageNames), s) != std::end(kStageNames);
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += "; ";
        out += p;
    }
    return out;
}

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}
}  // namespace

double FanoutModel::mean() const {
    if (kind == FanoutKind::constant) return constant_value;
    double m = 0.0;
    for (const auto& [count, p] : categorical) m += count * p;
    return m;
}

std::uint32_t SizeModel::item_bytes() const {
    return static_cast<std::uint32_t>(std::max(1.0, std::round(mean_bytes * scale_factor)));
}

const ComputeProfile& ScenarioSpec::profile(const std::string& stage) const {
    auto it = stage_profiles.find(stage);
    if (it == stage_profiles.end()) throw std::out_of_range("no profile for stage " + stage);
    return it->second;
}

ScenarioError::ScenarioError(Kind kind, std::vector<std::string> issues)
    : std::runtime_error(join(issues)), kind_(kind), issues_(std::move(issues)) {}

bool fit_lognormal(double mean, double p99, LognormalParams& out) {
    if (!(mean > 0.0) || !(p99 > mean)) return false;
    const double r = std::log(p99 / mean);
    const double disc = kZ99 * kZ99 - 2.0 * r;
    if (disc < 0.0) return false;
    out.sigma = kZ99 - std::sqrt(disc);
    out.mu = std::log(mean) - 0.5 * out.sigma * out.sigma;
    return true;
}

double knots_mean(const std::vector<QuantileKnot>& k) {
    double m = 0.0;
    for (std::size_t i = 1; i < k.size(); ++i)
        m += (k[i].probability - k[i - 1].probability) * 0.5 * (k[i].seconds + k[i - 1].seconds);
    return m;
}

double knots_quantile(const std::vector<QuantileKnot>& k, double p) {
    if (k.empty()) return 0.0;
    if (p <= k.front().probability) return k.front().seconds;
    for (std::size_t i = 1; i < k.size(); ++i) {
        if (p <= k[i].probability) {
            const double w = (p - k[i - 1].probability) / (k[i].probability - k[i - 1].probability);
            return k[i - 1].seconds + w * (k[i].seconds - k[i - 1].seconds);
        }
    }
    return k.back().seconds;
}

static void validate_profile(const std::string& path, const ComputeProfile& p, std::vector<std::string>& out) {
    if (!(p.mean > 0.0)) out.push_back(path + ".mean: must be > 0");
    if (!(p.p99 >= p.mean)) out.push_back(path + ".p99: must be >= mean");
    switch (p.family) {
        case DistributionFamily::deterministic:
            break;
        case DistributionFamily::lognormal: {
            LognormalParams lp;
            if (p.mean > 0.0 && p.p99 >= p.mean && !fit_lognormal(p.mean, p.p99, lp)) {
                out.push_back(path + ": no lognormal has mean " + num(p.mean) + " and p99 " + num(p.p99) +
                              " (needs 1 < p99/mean <= " + num(std::exp(kZ99 * kZ99 / 2)) + ")");
            }
            break;
        }
        case DistributionFamily::empirical: {
            const auto& k = p.knots;
            if (k.size() < 2) {
                out.push_back(path + ".quantiles: need at least 2 knots");
                break;
            }
            if (k.front().probability != 0.0 || k.back().probability != 1.0)
                out.push_back(path + ".quantiles: must start at probability 0 and end at 1");
            bool ordered = true;
            for (std::size_t i = 1; i < k.size(); ++i)
                if (!(k[i].probability > k[i - 1].probability) || k[i].seconds < k[i - 1].seconds) ordered = false;
            if (!ordered) out.push_back(path + ".quantiles: probabilities must increase and times must not decrease");
            if (k.front().seconds < 0.0) out.push_back(path + ".quantiles: times must be >= 0");
            if (ordered) {
                const double m = knots_mean(k);
                const double q = knots_quantile(k, 0.99);
                if (std::abs(m - p.mean) > 1e-9 * std::max(1.0, m))
                    out.push_back(path + ".mean: " + num(p.mean) + " disagrees with quantile knots (" + num(m) + ")");
                if (std::abs(q - p.p99) > 1e-9 * std::max(1.0, q))
                    out.push_back(path + ".p99: " + num(p.p99) + " disagrees with quantile knots (" + num(q) + ")");
            }
            break;
        }
    }
}

std::vector<std::string> validate(const ScenarioSpec& s) {
    std::vector<std::string> out;
    if (s.name.empty()) out.push_back("name: must not be empty");
    if (s.producers < 1) out.push_back("producers: must be >= 1");
    if (s.consumers < 1) out.push_back("consumers: must be >= 1");
    if (s.brokers < 1) out.push_back("brokers: must be >= 1");
    if (s.drives_per_broker < 1) out.push_back("drives_per_broker: must be >= 1");
    if (s.replication_factor < 1) out.push_back("replication_factor: must be >= 1");
    if (s.replication_factor > s.brokers)
        out.push_back("replication_factor: " + std::to_string(s.replication_factor) + " exceeds brokers (" +
                      std::to_string(s.brokers) + ")");
    if (s.partitions < s.consumers)
        out.push_back("partitions: " + std::to_string(s.partitions) + " is fewer than consumers (" +
                      std::to_string(s.consumers) + ")");
    auto positive = [&](const char* field, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) out.push_back(std::string(field) + ": must be > 0");
    };
    positive("frame_interval", s.frame_interval);
    positive("network_capacity", s.network_capacity);
    positive("storage_write_capacity", s.storage_write_capacity);
    positive("broker_proc_capacity", s.broker_proc_capacity);
    positive("producer_send_capacity", s.producer_send_capacity);
    if (!(s.storage_request_overhead >= 0.0) || !std::isfinite(s.storage_request_overhead))
        out.push_back("storage_request_overhead: must be >= 0");
    if (!(s.storage_effective_ceiling > 0.0 && s.storage_effective_ceiling <= 1.0))
        out.push_back("storage_effective_ceiling: must be in (0, 1]");
    if (!(s.acceleration >= 1.0) || !std::isfinite(s.acceleration)) out.push_back("acceleration: must be >= 1");
    positive("batching.producer_linger", s.batching.producer_linger);
    positive("batching.producer_max_batch", s.batching.producer_max_batch);
    positive("batching.fetch_min_bytes", s.batching.fetch_min_bytes);
    positive("batching.fetch_max_wait", s.batching.fetch_max_wait);
    positive("message_size_model.mean_bytes", s.message_size_model.mean_bytes);
    if (!(s.message_size_model.scale_factor > 0.0 && s.message_size_model.scale_factor <= 1.0))
        out.push_back("message_size_model.scale_factor: must be in (0, 1]");

    if (s.fanout_model.kind == FanoutKind::categorical) {
        const auto& c = s.fanout_model.categorical;
        if (c.empty()) out.push_back("fanout_model.categorical: must not be empty");
        double sum = 0.0;
        bool neg = false;
        for (const auto& [count, p] : c) {
            sum += p;
            if (!(p >= 0.0)) neg = true;
        }
        if (neg) out.push_back("fanout_model.categorical: probabilities must be >= 0");
        if (!c.empty() && std::abs(sum - 1.0) > 1e-9)
            out.push_back("fanout_model.categorical: probabilities sum to " + num(sum) + ", expected 1");
    }

    const auto& ps = s.producer_stages;
    const bool layout_ok = (ps == std::vector<std::string>{"ingest"} ||
                            ps == std::vector<std::string>{"ingest", "detect"});
    if (!layout_ok) out.push_back("producer_stages: must be [ingest] or [ingest, detect]");
    if (std::find(ps.begin(), ps.end(), s.consumer_stage) != ps.end() || s.consumer_stage == "ingest" ||
        !known_stage(s.consumer_stage))
        out.push_back("consumer_stage: must be a stage not run by producers (detect or identify)");
    std::vector<std::string> used = ps;
    used.push_back(s.consumer_stage);
    for (const auto& st : used) {
        if (known_stage(st) && !s.stage_profiles.count(st))
            out.push_back("stage_profiles." + st + ": missing profile for a stage in use");
    }
    for (const auto& [st, p] : s.stage_profiles) {
        if (!known_stage(st)) {
            out.push_back("stage_profiles." + st + ": unknown stage");
            continue;
        }
        validate_profile("stage_profiles." + st, p, out);
    }
    return out;
}

void validate_or_throw(const ScenarioSpec& spec) {
    auto issues = validate(spec);
    if (!issues.empty()) throw ScenarioError(ScenarioError::Kind::validation, std::move(issues));
}

}  // namespace aitax
