#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "sim/kernel.hpp"
#include "sim/rate_resource.hpp"
#include "sim/rng.hpp"

namespace aitax::sim {

struct Message {
    std::uint64_t frame_slot = 0;  // opaque owner reference, echoed back on fetch
    std::uint32_t bytes = 0;
    std::uint32_t producer = 0;
    std::uint32_t partition = 0;
    SimTime enqueued_at = 0;
    SimTime appended_at = 0;
    std::uint64_t offset = 0;
};

struct PartitionInfo {
    std::uint32_t id = 0;
    std::uint32_t leader = 0;
    std::vector<std::uint32_t> followers;
    std::int64_t assigned_consumer = -1;
};

struct Topic {
    std::string name;
    std::vector<PartitionInfo> partitions;
};

// Leaders round-robin over brokers, followers are the next brokers after the
// leader. Throws std::invalid_argument when replication exceeds brokers.
Topic create_topic(const std::string& name, std::uint32_t partitions, std::uint32_t replication,
                   std::uint32_t brokers);

// Partition p goes to consumer p % consumers. Also records the owner in the
// topic. Throws std::invalid_argument when partitions < consumers.
std::vector<std::vector<std::uint32_t>> assign_partitions(Topic& topic, std::uint32_t consumers);

struct ClusterConfig {
    std::uint32_t brokers = 1;
    std::uint32_t producers = 1;
    std::uint32_t consumers = 1;
    double network_capacity = 100e9;          // bits/s per node
    double storage_capacity = 0.88e9;         // bytes/s per broker, all drives, after ceiling
    double proc_capacity = 250000.0;          // requests/s per broker
    // Storage-path time per write request (log append bookkeeping). Extra
    // drives do not shorten it; extra brokers spread it.
    double storage_request_overhead = 0.0;    // seconds
    SimTime linger = 10'000'000;
    double max_batch = 1048576.0;
    double fetch_min = 65536.0;
    SimTime fetch_max_wait = 100'000'000;
    bool round_robin = false;
    std::uint64_t seed = 1;
    SimTime usage_window = kNanosPerSecond;
};

class FetchListener {
public:
    virtual ~FetchListener() = default;
    // `delivered_at` is when the batch has fully crossed the consumer NIC.
    virtual void on_fetch(std::uint32_t consumer, std::vector<Message>& batch, SimTime delivered_at) = 0;
};

struct BrokerNode {
    std::uint32_t id = 0;
    std::unique_ptr<UsageWindows> storage_usage, net_in_usage, net_out_usage, proc_usage;
    std::unique_ptr<RateResource> storage, net_in, net_out, proc;
    std::uint64_t storage_read_bytes = 0;  // reads are served from page cache
    std::uint64_t storage_written_bytes = 0;
    std::uint64_t cache_read_bytes = 0;
};

struct ClusterCounters {
    std::uint64_t messages_produced = 0;
    std::uint64_t bytes_produced = 0;
    std::uint64_t messages_appended = 0;
    std::uint64_t messages_fetched = 0;
    std::uint64_t bytes_fetched = 0;
    std::uint64_t batches_flushed = 0;
    std::uint64_t fetch_responses = 0;
    std::uint64_t empty_fetches = 0;
};

class BrokerCluster : public EventHandler {
public:
    BrokerCluster(Simulator& sim, const ClusterConfig& cfg, Topic topic);

    void set_listener(FetchListener* l) { listener_ = l; }

    // Adds the message to the producer's open batch for a chosen partition.
    void produce(std::uint32_t producer, Message msg);
    // Starts a fetch for the consumer at the current time. Throws
    // std::logic_error when the consumer has no partitions.
    void fetch(std::uint32_t consumer);
    // Sends every open producer batch now.
    void flush_all();

    bool idle() const;
    SimTime storage_quiescent_at() const;
    std::uint64_t resident_messages() const;    // in partition logs
    std::uint64_t unappended_messages() const;  // open batches plus batches in transit
    std::uint64_t storage_bytes_written() const;
    std::uint64_t storage_read_bytes() const;

    const Topic& topic() const { return topic_; }
    const std::vector<std::uint32_t>& partitions_of(std::uint32_t consumer) const {
        return fetchers_[consumer].partitions;
    }
    std::vector<BrokerNode>& brokers() { return brokers_; }
    const std::vector<BrokerNode>& brokers() const { return brokers_; }
    const ClusterCounters& counters() const { return counters_; }
    UsageWindows& producer_nic_usage() { return producer_nic_usage_; }
    UsageWindows& consumer_nic_usage() { return consumer_nic_usage_; }

    void on_event(std::uint32_t kind, std::uint64_t arg) override;

private:
    enum Kind : std::uint32_t { kLinger, kLeaderArrive, kLeaderWritten, kFollowerArrive, kFetchTimeout };

    struct Batch {
        std::uint32_t producer = 0;
        std::uint32_t partition = 0;
        std::uint32_t generation = 0;
        bool open = false;
        std::uint64_t bytes = 0;
        std::vector<Message> msgs;
    };

    struct PartitionLog {
        std::deque<Message> log;  // appended, not yet fetched
        std::uint64_t pending_bytes = 0;
        std::uint64_t next_offset = 0;
    };

    struct Fetcher {
        std::vector<std::uint32_t> partitions;
        bool waiting = false;
        std::uint32_t generation = 0;
    };

    std::uint32_t choose_partition(std::uint32_t producer);
    std::uint32_t alloc_batch();
    void flush(std::uint32_t batch_id);
    void leader_written(std::uint32_t batch_id);
    std::uint64_t pending_for(std::uint32_t consumer) const;
    void respond(std::uint32_t consumer);
    void check_waiting(std::uint32_t partition);

    Simulator& sim_;
    ClusterConfig cfg_;
    double overhead_units_ = 0.0;  // storage units equal to one request overhead
    Topic topic_;
    FetchListener* listener_ = nullptr;
    std::vector<BrokerNode> brokers_;
    std::vector<PartitionLog> logs_;
    std::vector<Fetcher> fetchers_;
    std::vector<Batch> batches_;
    std::vector<std::uint32_t> free_batches_;
    std::unordered_map<std::uint64_t, std::uint32_t> open_batch_;
    std::vector<Rng> partition_rng_;
    std::vector<std::uint32_t> rr_next_;
    UsageWindows producer_nic_usage_;
    UsageWindows consumer_nic_usage_;
    std::vector<RateResource> producer_nic_;
    std::vector<RateResource> consumer_nic_;
    std::uint64_t open_messages_ = 0;
    std::uint64_t transit_messages_ = 0;
    std::uint64_t replicas_in_flight_ = 0;
    std::vector<std::uint32_t> leader_scratch_;
    std::vector<std::uint64_t> leader_bytes_;
    ClusterCounters counters_;
};

}  // namespace aitax::sim
