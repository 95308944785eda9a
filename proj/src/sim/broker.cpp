#include "sim/broker.hpp"

#include <algorithm>
#include <stdexcept>

namespace aitax::sim {

Topic create_topic(const std::string& name, std::uint32_t partitions, std::uint32_t replication,
                   std::uint32_t brokers) {
    if (brokers == 0) throw std::invalid_argument("cluster has no brokers");
    if (partitions == 0) throw std::invalid_argument("topic needs at least one partition");
    if (replication == 0 || replication > brokers)
        throw std::invalid_argument("replication " + std::to_string(replication) + " exceeds brokers (" +
                                    std::to_string(brokers) + ")");
    Topic t;
    t.name = name;
    t.partitions.resize(partitions);
    for (std::uint32_t p = 0; p < partitions; ++p) {
        auto& part = t.partitions[p];
        part.id = p;
        part.leader = p % brokers;
        for (std::uint32_t r = 1; r < replication; ++r) part.followers.push_back((p + r) % brokers);
    }
    return t;
}

std::vector<std::vector<std::uint32_t>> assign_partitions(Topic& topic, std::uint32_t consumers) {
    const auto n = static_cast<std::uint32_t>(topic.partitions.size());
    if (consumers == 0) throw std::invalid_argument("no consumers to assign");
    if (n < consumers)
        throw std::invalid_argument("topic " + topic.name + " has " + std::to_string(n) + " partitions for " +
                                    std::to_string(consumers) + " consumers");
    std::vector<std::vector<std::uint32_t>> out(consumers);
    for (std::uint32_t p = 0; p < n; ++p) {
        out[p % consumers].push_back(p);
        topic.partitions[p].assigned_consumer = p % consumers;
    }
    return out;
}

BrokerCluster::BrokerCluster(Simulator& sim, const ClusterConfig& cfg, Topic topic)
    : sim_(sim),
      cfg_(cfg),
      overhead_units_(cfg.storage_request_overhead * cfg.storage_capacity),
      topic_(std::move(topic)),
      producer_nic_usage_(cfg.usage_window, cfg.producers),
      consumer_nic_usage_(cfg.usage_window, cfg.consumers) {
    brokers_.resize(cfg.brokers);
    for (std::uint32_t b = 0; b < cfg.brokers; ++b) {
        auto& n = brokers_[b];
        const std::string tag = "broker-" + std::to_string(b);
        n.id = b;
        n.storage_usage = std::make_unique<UsageWindows>(cfg.usage_window);
        n.net_in_usage = std::make_unique<UsageWindows>(cfg.usage_window);
        n.net_out_usage = std::make_unique<UsageWindows>(cfg.usage_window);
        n.proc_usage = std::make_unique<UsageWindows>(cfg.usage_window);
        n.storage = std::make_unique<RateResource>(tag + "-storage", cfg.storage_capacity, n.storage_usage.get(), true);
        n.net_in = std::make_unique<RateResource>(tag + "-network-in", cfg.network_capacity, n.net_in_usage.get(), true);
        n.net_out =
            std::make_unique<RateResource>(tag + "-network-out", cfg.network_capacity, n.net_out_usage.get(), true);
        n.proc = std::make_unique<RateResource>(tag + "-proc", cfg.proc_capacity, n.proc_usage.get(), true);
    }
    logs_.resize(topic_.partitions.size());
    auto assignment = assign_partitions(topic_, cfg.consumers);
    fetchers_.resize(cfg.consumers);
    for (std::uint32_t c = 0; c < cfg.consumers; ++c) fetchers_[c].partitions = std::move(assignment[c]);
    partition_rng_.reserve(cfg.producers);
    for (std::uint32_t p = 0; p < cfg.producers; ++p) partition_rng_.push_back(Rng::derive(cfg.seed, site::partition, p));
    rr_next_.assign(cfg.producers, 0);
    producer_nic_.reserve(cfg.producers);
    for (std::uint32_t p = 0; p < cfg.producers; ++p)
        producer_nic_.emplace_back("producer-" + std::to_string(p) + "-network-out", cfg.network_capacity,
                                   &producer_nic_usage_);
    consumer_nic_.reserve(cfg.consumers);
    for (std::uint32_t c = 0; c < cfg.consumers; ++c)
        consumer_nic_.emplace_back("consumer-" + std::to_string(c) + "-network-in", cfg.network_capacity,
                                   &consumer_nic_usage_);
    leader_bytes_.assign(cfg.brokers, 0);
}

std::uint32_t BrokerCluster::choose_partition(std::uint32_t producer) {
    const auto n = static_cast<std::uint32_t>(topic_.partitions.size());
    if (cfg_.round_robin) {
        std::uint32_t p = (rr_next_[producer] + producer) % n;
        rr_next_[producer] = (rr_next_[producer] + 1) % n;
        return p;
    }
    return static_cast<std::uint32_t>(partition_rng_[producer].below(n));
}

std::uint32_t BrokerCluster::alloc_batch() {
    if (!free_batches_.empty()) {
        std::uint32_t id = free_batches_.back();
        free_batches_.pop_back();
        return id;
    }
    batches_.emplace_back();
    return static_cast<std::uint32_t>(batches_.size() - 1);
}

void BrokerCluster::produce(std::uint32_t producer, Message msg) {
    if (producer >= cfg_.producers) throw std::out_of_range("unknown producer");
    msg.partition = choose_partition(producer);
    msg.producer = producer;
    msg.enqueued_at = sim_.now();
    ++counters_.messages_produced;
    counters_.bytes_produced += msg.bytes;
    ++open_messages_;

    const std::uint64_t key = static_cast<std::uint64_t>(producer) << 32 | msg.partition;
    auto it = open_batch_.find(key);
    std::uint32_t id;
    if (it == open_batch_.end()) {
        id = alloc_batch();
        Batch& b = batches_[id];
        b.producer = producer;
        b.partition = msg.partition;
        b.open = true;
        b.bytes = 0;
        b.msgs.clear();
        open_batch_.emplace(key, id);
        sim_.schedule(sim_.now() + cfg_.linger, *this, kLinger, static_cast<std::uint64_t>(b.generation) << 32 | id);
    } else {
        id = it->second;
    }
    Batch& b = batches_[id];
    b.bytes += msg.bytes;
    b.msgs.push_back(msg);
    if (static_cast<double>(b.bytes) >= cfg_.max_batch) flush(id);
}

void BrokerCluster::flush(std::uint32_t id) {
    Batch& b = batches_[id];
    b.open = false;
    ++b.generation;  // stale linger timers see a different generation
    open_batch_.erase(static_cast<std::uint64_t>(b.producer) << 32 | b.partition);
    open_messages_ -= b.msgs.size();
    transit_messages_ += b.msgs.size();
    ++counters_.batches_flushed;
    const SimTime sent = producer_nic_[b.producer].acquire(sim_.now(), 8.0 * static_cast<double>(b.bytes));
    sim_.schedule(sent, *this, kLeaderArrive, id);
}

void BrokerCluster::flush_all() {
    std::vector<std::uint32_t> ids;
    ids.reserve(open_batch_.size());
    for (const auto& [key, id] : open_batch_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());  // map iteration order is not part of the contract
    for (auto id : ids) flush(id);
}

void BrokerCluster::on_event(std::uint32_t kind, std::uint64_t arg) {
    switch (kind) {
        case kLinger: {
            const auto id = static_cast<std::uint32_t>(arg & 0xffffffffu);
            const auto gen = static_cast<std::uint32_t>(arg >> 32);
            if (batches_[id].open && batches_[id].generation == gen) flush(id);
            break;
        }
        case kLeaderArrive: {
            Batch& b = batches_[static_cast<std::uint32_t>(arg)];
            BrokerNode& leader = brokers_[topic_.partitions[b.partition].leader];
            const double bytes = static_cast<double>(b.bytes);
            const SimTime t1 = leader.net_in->acquire(sim_.now(), 8.0 * bytes);
            const SimTime t2 = leader.proc->acquire(t1, 1.0);
            const SimTime t3 = leader.storage->acquire(t2, bytes + overhead_units_);
            leader.storage_written_bytes += b.bytes;
            sim_.schedule(t3, *this, kLeaderWritten, arg);
            break;
        }
        case kLeaderWritten:
            leader_written(static_cast<std::uint32_t>(arg));
            break;
        case kFollowerArrive: {
            const auto follower = static_cast<std::uint32_t>(arg & 0xfffff);
            const double bytes = static_cast<double>(arg >> 20);
            BrokerNode& f = brokers_[follower];
            const SimTime t1 = f.net_in->acquire(sim_.now(), 8.0 * bytes);
            const SimTime t2 = f.proc->acquire(t1, 1.0);
            f.storage->acquire(t2, bytes + overhead_units_);
            f.storage_written_bytes += arg >> 20;
            --replicas_in_flight_;
            break;
        }
        case kFetchTimeout: {
            const auto consumer = static_cast<std::uint32_t>(arg & 0xffffffffu);
            const auto gen = static_cast<std::uint32_t>(arg >> 32);
            Fetcher& f = fetchers_[consumer];
            if (f.waiting && f.generation == gen) respond(consumer);
            break;
        }
        default:
            throw std::logic_error("unknown broker event");
    }
}

void BrokerCluster::leader_written(std::uint32_t id) {
    Batch& b = batches_[id];
    const PartitionInfo& part = topic_.partitions[b.partition];
    PartitionLog& log = logs_[b.partition];
    const SimTime now = sim_.now();
    for (Message& m : b.msgs) {
        m.offset = log.next_offset++;
        m.appended_at = now;
        log.pending_bytes += m.bytes;
        log.log.push_back(m);
    }
    counters_.messages_appended += b.msgs.size();
    transit_messages_ -= b.msgs.size();
    BrokerNode& leader = brokers_[part.leader];
    for (std::uint32_t f : part.followers) {
        const SimTime sent = leader.net_out->acquire(now, 8.0 * static_cast<double>(b.bytes));
        ++replicas_in_flight_;
        sim_.schedule(sent, *this, kFollowerArrive, b.bytes << 20 | f);
    }
    const std::uint32_t partition = b.partition;
    b.msgs.clear();
    free_batches_.push_back(id);
    check_waiting(partition);
}

std::uint64_t BrokerCluster::pending_for(std::uint32_t consumer) const {
    std::uint64_t total = 0;
    for (std::uint32_t p : fetchers_[consumer].partitions) total += logs_[p].pending_bytes;
    return total;
}

void BrokerCluster::check_waiting(std::uint32_t partition) {
    const std::int64_t c = topic_.partitions[partition].assigned_consumer;
    if (c < 0) return;
    Fetcher& f = fetchers_[static_cast<std::size_t>(c)];
    if (f.waiting && static_cast<double>(pending_for(static_cast<std::uint32_t>(c))) >= cfg_.fetch_min)
        respond(static_cast<std::uint32_t>(c));
}

void BrokerCluster::fetch(std::uint32_t consumer) {
    if (consumer >= fetchers_.size() || fetchers_[consumer].partitions.empty())
        throw std::logic_error("consumer " + std::to_string(consumer) + " has no assigned partition");
    Fetcher& f = fetchers_[consumer];
    if (static_cast<double>(pending_for(consumer)) >= cfg_.fetch_min) {
        respond(consumer);
        return;
    }
    f.waiting = true;
    ++f.generation;
    sim_.schedule(sim_.now() + cfg_.fetch_max_wait, *this, kFetchTimeout,
                  static_cast<std::uint64_t>(f.generation) << 32 | consumer);
}

void BrokerCluster::respond(std::uint32_t consumer) {
    Fetcher& f = fetchers_[consumer];
    f.waiting = false;
    ++f.generation;
    ++counters_.fetch_responses;
    std::vector<Message> batch;
    leader_scratch_.clear();
    std::uint64_t total = 0;
    for (std::uint32_t p : f.partitions) {
        PartitionLog& log = logs_[p];
        if (log.log.empty()) continue;
        const std::uint32_t leader = topic_.partitions[p].leader;
        if (leader_bytes_[leader] == 0) leader_scratch_.push_back(leader);
        leader_bytes_[leader] += log.pending_bytes;
        total += log.pending_bytes;
        batch.insert(batch.end(), log.log.begin(), log.log.end());
        log.log.clear();
        log.pending_bytes = 0;
    }
    const SimTime now = sim_.now();
    SimTime arrived = now;
    for (std::uint32_t leader : leader_scratch_) {
        BrokerNode& n = brokers_[leader];
        const double bytes = static_cast<double>(leader_bytes_[leader]);
        n.cache_read_bytes += leader_bytes_[leader];
        arrived = std::max(arrived, n.net_out->acquire(now, 8.0 * bytes));
        leader_bytes_[leader] = 0;
    }
    SimTime delivered = now;
    if (total > 0) {
        delivered = consumer_nic_[consumer].acquire(arrived, 8.0 * static_cast<double>(total));
        counters_.messages_fetched += batch.size();
        counters_.bytes_fetched += total;
    } else {
        ++counters_.empty_fetches;
    }
    if (listener_) listener_->on_fetch(consumer, batch, delivered);
}

bool BrokerCluster::idle() const {
    return open_messages_ == 0 && transit_messages_ == 0 && replicas_in_flight_ == 0;
}

SimTime BrokerCluster::storage_quiescent_at() const {
    SimTime t = 0;
    for (const auto& b : brokers_) t = std::max(t, b.storage->busy_until());
    return t;
}

std::uint64_t BrokerCluster::resident_messages() const {
    std::uint64_t n = 0;
    for (const auto& l : logs_) n += l.log.size();
    return n;
}

std::uint64_t BrokerCluster::unappended_messages() const { return open_messages_ + transit_messages_; }

std::uint64_t BrokerCluster::storage_bytes_written() const {
    std::uint64_t total = 0;
    for (const auto& b : brokers_) total += b.storage_written_bytes;
    return total;
}

std::uint64_t BrokerCluster::storage_read_bytes() const {
    std::uint64_t total = 0;
    for (const auto& b : brokers_) total += b.storage_read_bytes;
    return total;
}

}  // namespace aitax::sim
