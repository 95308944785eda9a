#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scenario.hpp"

namespace aitax {

using nlohmann::json;

namespace {

// Walks one object, records type problems and unknown keys as issues.
class Reader {
public:
    Reader(const json& obj, std::string path, std::vector<std::string>& issues)
        : obj_(obj), path_(std::move(path)), issues_(issues) {}

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* find(const std::string& key) {
        seen_.push_back(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void count(const std::string& key, std::uint32_t& out) {
        if (const json* v = find(key)) {
            if (v->is_number_integer() && v->get<std::int64_t>() >= 0 && v->get<std::int64_t>() <= 0xffffffffLL)
                out = static_cast<std::uint32_t>(v->get<std::int64_t>());
            else if (v->is_number_integer())
                issues_.push_back(at(key) + ": must be >= 0");
            else
                issues_.push_back(at(key) + ": expected an integer count");
        }
    }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (v->is_number())
                out = v->get<double>();
            else
                issues_.push_back(at(key) + ": expected a number");
        }
    }

    void flag(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            if (v->is_boolean())
                out = v->get<bool>();
            else
                issues_.push_back(at(key) + ": expected true or false");
        }
    }

    void text(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (v->is_string())
                out = v->get<std::string>();
            else
                issues_.push_back(at(key) + ": expected a string");
        }
    }

    const json* object(const std::string& key) {
        const json* v = find(key);
        if (v && !v->is_object()) {
            issues_.push_back(at(key) + ": expected an object");
            return nullptr;
        }
        return v;
    }

    const json* array(const std::string& key) {
        const json* v = find(key);
        if (v && !v->is_array()) {
            issues_.push_back(at(key) + ": expected a list");
            return nullptr;
        }
        return v;
    }

    void finish() {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
                issues_.push_back(at(it.key()) + ": unknown key");
        }
    }

    std::vector<std::string>& issues() { return issues_; }

private:
    const json& obj_;
    std::string path_;
    std::vector<std::string>& issues_;
    std::vector<std::string> seen_;
};

const char* family_name(DistributionFamily f) {
    switch (f) {
        case DistributionFamily::deterministic: return "deterministic";
        case DistributionFamily::lognormal: return "lognormal";
        case DistributionFamily::empirical: return "empirical";
    }
    return "deterministic";
}

ComputeProfile read_profile(const json& obj, const std::string& path, std::vector<std::string>& issues) {
    ComputeProfile p;
    Reader r(obj, path, issues);
    std::string family = "lognormal";
    r.text("distribution", family);
    if (family == "deterministic")
        p.family = DistributionFamily::deterministic;
    else if (family == "lognormal")
        p.family = DistributionFamily::lognormal;
    else if (family == "empirical")
        p.family = DistributionFamily::empirical;
    else
        issues.push_back(r.at("distribution") + ": expected deterministic, lognormal or empirical");
    bool have_mean = obj.contains("mean"), have_p99 = obj.contains("p99");
    r.number("mean", p.mean);
    r.number("p99", p.p99);
    r.flag("per_item_scaling", p.per_item_scaling);
    if (const json* q = r.array("quantiles")) {
        for (std::size_t i = 0; i < q->size(); ++i) {
            const json& k = (*q)[i];
            if (k.is_array() && k.size() == 2 && k[0].is_number() && k[1].is_number())
                p.knots.push_back({k[0].get<double>(), k[1].get<double>()});
            else
                issues.push_back(r.at("quantiles") + "[" + std::to_string(i) + "]: expected [probability, seconds]");
        }
    }
    if (p.family == DistributionFamily::empirical && p.knots.size() >= 2) {
        if (!have_mean) p.mean = knots_mean(p.knots);
        if (!have_p99) p.p99 = knots_quantile(p.knots, 0.99);
    } else if (p.family == DistributionFamily::deterministic && !have_p99) {
        p.p99 = p.mean;
    }
    if (p.family != DistributionFamily::empirical && !p.knots.empty())
        issues.push_back(r.at("quantiles") + ": only valid for the empirical distribution");
    r.finish();
    return p;
}

json write_profile(const ComputeProfile& p) {
    json o = json::object();
    o["distribution"] = family_name(p.family);
    o["mean"] = p.mean;
    o["p99"] = p.p99;
    o["per_item_scaling"] = p.per_item_scaling;
    if (p.family == DistributionFamily::empirical) {
        json q = json::array();
        for (const auto& k : p.knots) q.push_back(json::array({k.probability, k.seconds}));
        o["quantiles"] = q;
    }
    return o;
}

ComputeProfile default_profile(const std::string& stage);

}  // namespace

ScenarioSpec load_scenario(const std::string& document) {
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ScenarioError(ScenarioError::Kind::parse, {std::string("malformed document: ") + e.what()});
    }
    if (!root.is_object()) throw ScenarioError(ScenarioError::Kind::parse, {"document root must be an object"});

    std::vector<std::string> issues;
    ScenarioSpec s;
    for (const char* st : {"ingest", "detect", "identify"}) s.stage_profiles[st] = default_profile(st);

    Reader r(root, "", issues);
    for (const char* key : {"producers", "consumers", "brokers"})
        if (!root.contains(key)) issues.push_back(std::string(key) + ": required");
    r.text("name", s.name);
    r.count("producers", s.producers);
    r.count("consumers", s.consumers);
    r.count("brokers", s.brokers);
    r.count("drives_per_broker", s.drives_per_broker);
    r.count("replication_factor", s.replication_factor);
    s.partitions = s.consumers;
    r.count("partitions", s.partitions);

    std::string pacing = "self-paced";
    r.text("pacing", pacing);
    if (pacing == "self-paced")
        s.pacing = Pacing::self_paced;
    else if (pacing == "scheduled")
        s.pacing = Pacing::scheduled;
    else
        issues.push_back("pacing: expected self-paced or scheduled");

    if (const json* st = r.array("producer_stages")) {
        s.producer_stages.clear();
        for (const auto& v : *st) {
            if (v.is_string())
                s.producer_stages.push_back(v.get<std::string>());
            else
                issues.push_back("producer_stages: expected stage names");
        }
    }
    r.text("consumer_stage", s.consumer_stage);

    std::set<std::string> given;
    if (const json* profiles = r.object("stage_profiles")) {
        for (auto it = profiles->begin(); it != profiles->end(); ++it) {
            const std::string path = "stage_profiles." + it.key();
            if (!it->is_object()) {
                issues.push_back(path + ": expected an object");
                continue;
            }
            s.stage_profiles[it.key()] = read_profile(*it, path, issues);
            given.insert(it.key());
        }
    }
    // Defaults only fill stages the pipeline runs.
    for (auto it = s.stage_profiles.begin(); it != s.stage_profiles.end();) {
        const bool used = it->first == s.consumer_stage ||
                          std::find(s.producer_stages.begin(), s.producer_stages.end(), it->first) !=
                              s.producer_stages.end();
        it = (used || given.count(it->first)) ? std::next(it) : s.stage_profiles.erase(it);
    }

    if (const json* f = r.object("fanout_model")) {
        Reader fr(*f, "fanout_model", issues);
        std::string kind = "constant";
        fr.text("kind", kind);
        if (kind == "constant")
            s.fanout_model.kind = FanoutKind::constant;
        else if (kind == "categorical")
            s.fanout_model.kind = FanoutKind::categorical;
        else
            issues.push_back("fanout_model.kind: expected constant or categorical");
        fr.count("constant_value", s.fanout_model.constant_value);
        if (const json* c = fr.array("categorical")) {
            for (std::size_t i = 0; i < c->size(); ++i) {
                const json& e = (*c)[i];
                if (e.is_array() && e.size() == 2 && e[0].is_number_integer() && e[0].get<std::int64_t>() >= 0 &&
                    e[1].is_number())
                    s.fanout_model.categorical.emplace_back(static_cast<std::uint32_t>(e[0].get<std::int64_t>()),
                                                            e[1].get<double>());
                else
                    issues.push_back("fanout_model.categorical[" + std::to_string(i) +
                                     "]: expected [count >= 0, probability]");
            }
        }
        fr.finish();
    }

    if (const json* m = r.object("message_size_model")) {
        Reader mr(*m, "message_size_model", issues);
        mr.number("mean_bytes", s.message_size_model.mean_bytes);
        mr.number("scale_factor", s.message_size_model.scale_factor);
        mr.finish();
    }

    r.number("frame_interval", s.frame_interval);
    r.number("network_capacity", s.network_capacity);
    r.number("storage_write_capacity", s.storage_write_capacity);
    r.number("storage_effective_ceiling", s.storage_effective_ceiling);
    r.number("broker_proc_capacity", s.broker_proc_capacity);
    r.number("storage_request_overhead", s.storage_request_overhead);
    r.number("producer_send_capacity", s.producer_send_capacity);

    if (const json* b = r.object("batching")) {
        Reader br(*b, "batching", issues);
        br.number("producer_linger", s.batching.producer_linger);
        br.number("producer_max_batch", s.batching.producer_max_batch);
        br.number("fetch_min_bytes", s.batching.fetch_min_bytes);
        br.number("fetch_max_wait", s.batching.fetch_max_wait);
        br.finish();
    }

    r.number("acceleration", s.acceleration);
    std::string choice = "uniform";
    r.text("partition_choice", choice);
    if (choice == "uniform")
        s.partition_choice = PartitionChoice::uniform;
    else if (choice == "round-robin")
        s.partition_choice = PartitionChoice::round_robin;
    else
        issues.push_back("partition_choice: expected uniform or round-robin");
    r.finish();

    if (!issues.empty()) throw ScenarioError(ScenarioError::Kind::validation, std::move(issues));
    validate_or_throw(s);
    return s;
}

ScenarioSpec load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(ScenarioError::Kind::parse, {"cannot read scenario file " + path});
    std::stringstream ss;
    ss << in.rdbuf();
    return load_scenario(ss.str());
}

std::string to_document(const ScenarioSpec& s) {
    json o = json::object();
    o["name"] = s.name;
    o["producers"] = s.producers;
    o["consumers"] = s.consumers;
    o["brokers"] = s.brokers;
    o["drives_per_broker"] = s.drives_per_broker;
    o["replication_factor"] = s.replication_factor;
    o["partitions"] = s.partitions;
    o["pacing"] = s.pacing == Pacing::self_paced ? "self-paced" : "scheduled";
    o["frame_interval"] = s.frame_interval;
    o["producer_stages"] = s.producer_stages;
    o["consumer_stage"] = s.consumer_stage;
    json profiles = json::object();
    for (const auto& [name, p] : s.stage_profiles) profiles[name] = write_profile(p);
    o["stage_profiles"] = profiles;
    json f = json::object();
    f["kind"] = s.fanout_model.kind == FanoutKind::constant ? "constant" : "categorical";
    if (s.fanout_model.kind == FanoutKind::constant) {
        f["constant_value"] = s.fanout_model.constant_value;
    } else {
        json c = json::array();
        for (const auto& [count, p] : s.fanout_model.categorical) c.push_back(json::array({count, p}));
        f["categorical"] = c;
    }
    o["fanout_model"] = f;
    o["message_size_model"] = {{"mean_bytes", s.message_size_model.mean_bytes},
                               {"scale_factor", s.message_size_model.scale_factor}};
    o["network_capacity"] = s.network_capacity;
    o["storage_write_capacity"] = s.storage_write_capacity;
    o["storage_effective_ceiling"] = s.storage_effective_ceiling;
    o["broker_proc_capacity"] = s.broker_proc_capacity;
    o["storage_request_overhead"] = s.storage_request_overhead;
    o["producer_send_capacity"] = s.producer_send_capacity;
    o["batching"] = {{"producer_linger", s.batching.producer_linger},
                     {"producer_max_batch", s.batching.producer_max_batch},
                     {"fetch_min_bytes", s.batching.fetch_min_bytes},
                     {"fetch_max_wait", s.batching.fetch_max_wait}};
    o["acceleration"] = s.acceleration;
    o["partition_choice"] = s.partition_choice == PartitionChoice::uniform ? "uniform" : "round-robin";
    return o.dump(2) + "\n";
}

namespace {
ComputeProfile default_profile(const std::string& stage) {
    return builtin_scenario("face-recognition-native").profile(stage);
}
}  // namespace

ScenarioSpec resolve_scenario(const std::string& ref) {
    for (const auto& name : builtin_names())
        if (name == ref) return builtin_scenario(ref);
    if (!std::ifstream(ref)) {
        std::string names;
        for (const auto& name : builtin_names()) names += (names.empty() ? "" : ", ") + name;
        throw ScenarioError(ScenarioError::Kind::unknown_builtin,
                            {"scenario '" + ref + "' is neither a builtin (" + names + ") nor a readable file"});
    }
    return load_scenario_file(ref);
}

}  // namespace aitax
