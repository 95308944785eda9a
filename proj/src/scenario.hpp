#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aitax {

enum class DistributionFamily { deterministic, lognormal, empirical };

struct QuantileKnot {
    double probability = 0.0;
    double seconds = 0.0;
    bool operator==(const QuantileKnot&) const = default;
};

struct ComputeProfile {
    double mean = 0.0;  // seconds
    double p99 = 0.0;   // seconds
    DistributionFamily family = DistributionFamily::deterministic;
    bool per_item_scaling = false;
    std::vector<QuantileKnot> knots;  // empirical only; inverse CDF, linear between knots
    bool operator==(const ComputeProfile&) const = default;
};

enum class FanoutKind { constant, categorical };

struct FanoutModel {
    FanoutKind kind = FanoutKind::constant;
    std::uint32_t constant_value = 1;
    std::vector<std::pair<std::uint32_t, double>> categorical;  // (count, probability)
    double mean() const;
    bool operator==(const FanoutModel&) const = default;
};

struct SizeModel {
    double mean_bytes = 37300.0;
    double scale_factor = 1.0;
    std::uint32_t item_bytes() const;  // rounded mean_bytes * scale_factor
    bool operator==(const SizeModel&) const = default;
};

struct BatchingParams {
    double producer_linger = 0.010;         // seconds
    double producer_max_batch = 1048576.0;  // bytes
    double fetch_min_bytes = 65536.0;       // bytes
    double fetch_max_wait = 0.100;          // seconds
    bool operator==(const BatchingParams&) const = default;
};

// self_paced: the next frame starts when the previous one is handed off.
// scheduled: frame sets start on a fixed wall-clock tick.
enum class Pacing { self_paced, scheduled };
enum class PartitionChoice { uniform, round_robin };

struct ScenarioSpec {
    std::string name = "scenario";
    std::uint32_t producers = 1;
    std::uint32_t consumers = 1;
    std::uint32_t brokers = 1;
    std::uint32_t drives_per_broker = 1;
    std::uint32_t replication_factor = 1;
    std::uint32_t partitions = 1;
    Pacing pacing = Pacing::self_paced;
    std::vector<std::string> producer_stages{"ingest", "detect"};
    std::string consumer_stage = "identify";
    std::map<std::string, ComputeProfile> stage_profiles;
    FanoutModel fanout_model;
    SizeModel message_size_model;
    double frame_interval = 0.1;             // seconds
    double network_capacity = 100e9;         // bits/s per node
    double storage_write_capacity = 1.1e9;   // bytes/s per drive
    double storage_effective_ceiling = 0.8;  // fraction
    double broker_proc_capacity = 250000.0;  // requests/s per broker
    // Storage-path seconds per write request; not divided across drives.
    double storage_request_overhead = 0.0;
    double producer_send_capacity = 27e6;    // bytes/s per producer
    BatchingParams batching;
    double acceleration = 1.0;
    PartitionChoice partition_choice = PartitionChoice::uniform;

    const ComputeProfile& profile(const std::string& stage) const;
    double storage_capacity_per_broker() const {
        return drives_per_broker * storage_write_capacity * storage_effective_ceiling;
    }
    bool operator==(const ScenarioSpec&) const = default;
};

class ScenarioError : public std::runtime_error {
public:
    enum class Kind { parse, validation, unknown_builtin };
    ScenarioError(Kind kind, std::vector<std::string> issues);
    Kind kind() const { return kind_; }
    const std::vector<std::string>& issues() const { return issues_; }

private:
    Kind kind_;
    std::vector<std::string> issues_;
};

struct LognormalParams {
    double mu = 0.0;
    double sigma = 0.0;
};

inline constexpr double kZ99 = 2.3263478740408408;

// Fit exp(N(mu, sigma^2)) to a mean and 99th percentile. Returns false when no
// lognormal has that pair, i.e. unless 1 < p99/mean <= exp(z99^2 / 2).
bool fit_lognormal(double mean, double p99, LognormalParams& out);

// Mean and p99 implied by empirical knots.
double knots_mean(const std::vector<QuantileKnot>& knots);
double knots_quantile(const std::vector<QuantileKnot>& knots, double p);

// Every violated invariant, each prefixed with its field path. Empty when valid.
std::vector<std::string> validate(const ScenarioSpec& spec);
void validate_or_throw(const ScenarioSpec& spec);

ScenarioSpec load_scenario(const std::string& document);
ScenarioSpec load_scenario_file(const std::string& path);
std::string to_document(const ScenarioSpec& spec);

std::vector<std::string> builtin_names();
ScenarioSpec builtin_scenario(const std::string& name);

// Builtin name, or otherwise a path to a scenario document.
ScenarioSpec resolve_scenario(const std::string& ref);

}  // namespace aitax
