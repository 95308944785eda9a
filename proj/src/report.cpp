#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace aitax::report {

using nlohmann::ordered_json;

namespace {

ordered_json stats(const telemetry::StageStats& s) {
    return {{"name", s.name}, {"mean", s.mean}, {"p99", s.p99}, {"samples", s.samples}};
}

ordered_json maybe(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

}  // namespace

std::string fixed(double v, int decimals) {
    if (!std::isfinite(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s(buf);
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);  // no "-0.000"
    return s;
}

std::string summary_json(const sim::RunResult& r) {
    ordered_json j;
    j["scenario"] = r.scenario;
    j["acceleration"] = r.acceleration;
    j["seed"] = r.seed;
    j["sim_time"] = r.horizon;
    j["warmup"] = r.warmup;
    j["ended_at"] = r.ended_at;
    j["aborted"] = r.aborted;
    j["drained"] = r.drained;

    ordered_json v;
    v["stable"] = r.verdict.stable;
    v["binding_resource"] = r.verdict.binding_resource.empty() ? ordered_json(nullptr)
                                                               : ordered_json(r.verdict.binding_resource);
    ordered_json means = ordered_json::array();
    for (double m : r.verdict.epoch_means) means.push_back(maybe(m));
    v["epoch_means"] = std::move(means);
    v["increasing_epochs"] = r.verdict.increasing_epochs;
    v["growth_ratio"] = maybe(r.verdict.growth_ratio);
    v["growing_queues"] = r.verdict.growing_queues;
    j["verdict"] = std::move(v);

    ordered_json b;
    ordered_json stages = ordered_json::array();
    for (const auto& s : r.breakdown.stages) stages.push_back(stats(s));
    b["stages"] = std::move(stages);
    b["end_to_end"] = stats(r.breakdown.end_to_end);
    b["wait_fraction"] = r.breakdown.wait_fraction;
    b["throughput"] = r.breakdown.throughput;
    b["samples"] = r.breakdown.samples;
    j["breakdown"] = std::move(b);

    ordered_json busy = ordered_json::object();
    for (const auto& [k, x] : r.busy) busy[k] = x;
    j["busy"] = std::move(busy);

    const auto& c = r.counters;
    ordered_json cj;
    cj["frames_emitted"] = c.frames_emitted;
    cj["frames_completed"] = c.frames_completed;
    cj["frames_without_items"] = c.frames_without_items;
    cj["frames_in_flight"] = c.frames_in_flight;
    cj["messages_produced"] = c.messages_produced;
    cj["messages_fetched"] = c.messages_fetched;
    cj["messages_resident"] = c.messages_resident;
    cj["messages_unappended"] = c.messages_unappended;
    cj["bytes_produced"] = c.bytes_produced;
    cj["storage_bytes_written"] = c.storage_bytes_written;
    cj["storage_read_bytes"] = c.storage_read_bytes;
    cj["storage_bytes_by_broker"] = c.storage_bytes_by_broker;
    cj["events"] = c.events;
    j["counters"] = std::move(cj);
    return j.dump(2) + "\n";
}

std::string utilization_csv(const sim::RunResult& r) {
    std::string out = std::string(kUtilizationCsvHeader) + "\n";
    for (const auto& s : r.utilization)
        for (const auto& p : s.points) {
            out += s.resource;
            out += ',';
            out += s.unit;
            out += ',';
            out += fixed(p.window_start, 3);
            out += ',';
            out += fixed(p.busy_fraction, 6);
            out += ',';
            out += fixed(p.served, 0);
            out += '\n';
        }
    return out;
}

}  // namespace aitax::report
