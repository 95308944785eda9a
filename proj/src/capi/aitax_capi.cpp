#include "aitax/aitax.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include "analytic.hpp"
#include "io/atomic_file.hpp"
#include "report.hpp"
#include "scenario.hpp"
#include "sim/run.hpp"
#include "tco/tco.hpp"
#include "telemetry/csv.hpp"

struct aitax_scenario {
    aitax::ScenarioSpec spec;
};

struct aitax_run {
    aitax::sim::RunResult result;
};

struct aitax_tco {
    aitax::tco::TcoConfig config;
};

namespace {

thread_local std::string g_last_error;

aitax_status fail(aitax_status code, std::string message) {
    g_last_error = std::move(message);
    return code;
}

// Maps every exception the core throws onto a status code.
aitax_status guarded(const std::function<void()>& body) {
    try {
        body();
        g_last_error.clear();
        return AITAX_OK;
    } catch (const aitax::ScenarioError& e) {
        switch (e.kind()) {
            case aitax::ScenarioError::Kind::parse:
                return fail(AITAX_ERR_PARSE, e.what());
            case aitax::ScenarioError::Kind::validation:
                return fail(AITAX_ERR_VALIDATION, e.what());
            case aitax::ScenarioError::Kind::unknown_builtin:
                return fail(AITAX_ERR_NOT_FOUND, e.what());
        }
        return fail(AITAX_ERR_INTERNAL, e.what());
    } catch (const aitax::tco::CatalogError& e) {
        return fail(AITAX_ERR_PARSE, e.what());
    } catch (const std::out_of_range& e) {
        return fail(AITAX_ERR_NOT_FOUND, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(AITAX_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(AITAX_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(AITAX_ERR_INTERNAL, "out of memory");
    } catch (const std::runtime_error& e) {
        return fail(AITAX_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(AITAX_ERR_INTERNAL, e.what());
    }
}

void need(const void* p, const char* what) {
    if (!p) throw std::invalid_argument(std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <std::size_t N>
void copy_name(char (&dst)[N], const std::string& src) {
    std::memset(dst, 0, N);
    std::strncpy(dst, src.c_str(), N - 1);
}

std::uint32_t as_count(const char* field, double v) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 4294967295.0)
        throw std::invalid_argument(std::string(field) + ": expected a nonnegative integer");
    return static_cast<std::uint32_t>(v);
}

// Field table shared by set and get.
double* number_field(aitax::ScenarioSpec& s, const std::string& f) {
    if (f == "acceleration") return &s.acceleration;
    if (f == "size_scale") return &s.message_size_model.scale_factor;
    if (f == "frame_interval") return &s.frame_interval;
    if (f == "network_capacity") return &s.network_capacity;
    if (f == "storage_write_capacity") return &s.storage_write_capacity;
    if (f == "storage_effective_ceiling") return &s.storage_effective_ceiling;
    if (f == "broker_proc_capacity") return &s.broker_proc_capacity;
    if (f == "storage_request_overhead") return &s.storage_request_overhead;
    if (f == "producer_send_capacity") return &s.producer_send_capacity;
    if (f == "producer_linger") return &s.batching.producer_linger;
    if (f == "producer_max_batch") return &s.batching.producer_max_batch;
    if (f == "fetch_min_bytes") return &s.batching.fetch_min_bytes;
    if (f == "fetch_max_wait") return &s.batching.fetch_max_wait;
    return nullptr;
}

std::uint32_t* count_field(aitax::ScenarioSpec& s, const std::string& f) {
    if (f == "producers") return &s.producers;
    if (f == "consumers") return &s.consumers;
    if (f == "brokers") return &s.brokers;
    if (f == "partitions") return &s.partitions;
    if (f == "drives_per_broker") return &s.drives_per_broker;
    if (f == "replication_factor") return &s.replication_factor;
    return nullptr;
}

aitax::analytic::RateModel rate_model(aitax_rate_model m) {
    if (m == AITAX_NOMINAL) return aitax::analytic::RateModel::nominal;
    if (m == AITAX_CALIBRATED) return aitax::analytic::RateModel::closed_loop;
    throw std::invalid_argument("unknown rate model");
}

aitax::sim::RunOptions run_options(const aitax_run_options* o) {
    aitax::sim::RunOptions r;
    if (o) {
        r.seed = o->seed;
        r.sim_time = o->sim_time;
        r.warmup = o->warmup;
        r.sample_interval = o->sample_interval;
        r.max_backlog = o->max_backlog;
        r.drain = o->drain != 0;
    }
    return r;
}

void fill_axis(aitax_axis& dst, const aitax::analytic::AxisResult& src) {
    dst.feasible = src.feasible ? 1 : 0;
    dst.value = src.value;
    copy_name(dst.binding_resource, src.binding_resource);
}

}  // namespace

extern "C" {

const char* aitax_version(void) { return "1.0.0"; }

const char* aitax_last_error(void) { return g_last_error.c_str(); }

void aitax_string_free(char* s) { std::free(s); }

aitax_status aitax_builtin_names(char** out) {
    return guarded([&] {
        need(out, "out");
        std::string joined;
        for (const auto& n : aitax::builtin_names()) joined += n + "\n";
        *out = dup_string(joined);
    });
}

aitax_status aitax_scenario_builtin(const char* name, aitax_scenario** out) {
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        *out = new aitax_scenario{aitax::builtin_scenario(name)};
    });
}

aitax_status aitax_scenario_load(const char* ref, aitax_scenario** out) {
    return guarded([&] {
        need(ref, "ref");
        need(out, "out");
        *out = new aitax_scenario{aitax::resolve_scenario(ref)};
    });
}

aitax_status aitax_scenario_parse(const char* json, aitax_scenario** out) {
    return guarded([&] {
        need(json, "json");
        need(out, "out");
        *out = new aitax_scenario{aitax::load_scenario(json)};
    });
}

aitax_status aitax_scenario_clone(const aitax_scenario* s, aitax_scenario** out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        *out = new aitax_scenario{s->spec};
    });
}

void aitax_scenario_free(aitax_scenario* s) { delete s; }

aitax_status aitax_scenario_set(aitax_scenario* s, const char* field, double value) {
    return guarded([&] {
        need(s, "scenario");
        need(field, "field");
        aitax::ScenarioSpec next = s->spec;
        if (double* d = number_field(next, field)) {
            *d = value;
        } else if (std::uint32_t* c = count_field(next, field)) {
            *c = as_count(field, value);
            if (std::string(field) == "consumers" && next.partitions < next.consumers) next.partitions = next.consumers;
        } else {
            throw std::invalid_argument(std::string("unknown scenario field: ") + field);
        }
        aitax::validate_or_throw(next);
        s->spec = std::move(next);
    });
}

aitax_status aitax_scenario_get(const aitax_scenario* s, const char* field, double* out) {
    return guarded([&] {
        need(s, "scenario");
        need(field, "field");
        need(out, "out");
        auto& spec = const_cast<aitax::ScenarioSpec&>(s->spec);
        if (double* d = number_field(spec, field))
            *out = *d;
        else if (std::uint32_t* c = count_field(spec, field))
            *out = *c;
        else
            throw std::invalid_argument(std::string("unknown scenario field: ") + field);
    });
}

aitax_status aitax_scenario_name(const aitax_scenario* s, char** out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        *out = dup_string(s->spec.name);
    });
}

aitax_status aitax_scenario_to_json(const aitax_scenario* s, char** out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        *out = dup_string(aitax::to_document(s->spec));
    });
}

aitax_status aitax_amdahl(double f, double a, double* out) {
    return guarded([&] {
        need(out, "out");
        *out = aitax::analytic::amdahl_speedup(f, a);
    });
}

aitax_status aitax_predict(const aitax_scenario* s, double a, aitax_rate_model model, aitax_prediction* out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        if (!(a >= 1.0) || !std::isfinite(a)) throw std::invalid_argument("acceleration must be a finite value >= 1");
        const auto v = aitax::analytic::predict_stability(s->spec, a, rate_model(model));
        *out = aitax_prediction{};
        out->stable = v.stable ? 1 : 0;
        out->storage = v.utilizations.at("broker-storage");
        out->network = v.utilizations.at("broker-network");
        out->proc = v.utilizations.at("broker-proc");
        out->send = v.utilizations.at("producer-send");
        out->consumer = v.utilizations.at("consumer-compute");
        copy_name(out->binding_resource, v.binding_resource);
    });
}

aitax_status aitax_plan(const aitax_scenario* s, double target, aitax_rate_model model, aitax_mitigation* out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        const auto m = aitax::analytic::min_mitigation(s->spec, target, rate_model(model));
        fill_axis(out->drives, m.drives);
        fill_axis(out->brokers, m.brokers);
        fill_axis(out->size, m.size);
    });
}

void aitax_run_options_default(aitax_run_options* out) {
    if (!out) return;
    const aitax::sim::RunOptions d;
    out->seed = d.seed;
    out->sim_time = d.sim_time;
    out->warmup = d.warmup;
    out->sample_interval = d.sample_interval;
    out->max_backlog = d.max_backlog;
    out->drain = d.drain ? 1 : 0;
}

aitax_status aitax_simulate(const aitax_scenario* s, const aitax_run_options* options, const char* frames_csv,
                            aitax_run** out) {
    return guarded([&] {
        need(s, "scenario");
        need(out, "out");
        const auto opt = run_options(options);
        auto run = std::make_unique<aitax_run>();
        if (frames_csv) {
            aitax::io::AtomicOutFile file(frames_csv);
            aitax::telemetry::FrameCsvWriter writer(file.stream());
            run->result = aitax::sim::simulate(s->spec, opt, &writer);
            file.commit();
        } else {
            run->result = aitax::sim::simulate(s->spec, opt);
        }
        *out = run.release();
    });
}

void aitax_run_free(aitax_run* r) { delete r; }

aitax_status aitax_run_summary_get(const aitax_run* r, aitax_run_summary* out) {
    return guarded([&] {
        need(r, "run");
        need(out, "out");
        const auto& res = r->result;
        *out = aitax_run_summary{};
        out->stable = res.verdict.stable ? 1 : 0;
        copy_name(out->binding_resource, res.verdict.binding_resource);
        out->e2e_mean = res.breakdown.end_to_end.mean;
        out->e2e_p99 = res.breakdown.end_to_end.p99;
        out->wait_fraction = res.breakdown.wait_fraction;
        out->throughput = res.breakdown.throughput;
        out->samples = res.breakdown.samples;
        out->aborted = res.aborted ? 1 : 0;
        out->ended_at = res.ended_at;
        out->increasing_epochs = res.verdict.increasing_epochs;
        out->growth_ratio = res.verdict.growth_ratio;
    });
}

aitax_status aitax_run_stage(const aitax_run* r, const char* stage, double* mean, double* p99) {
    return guarded([&] {
        need(r, "run");
        need(stage, "stage");
        const auto* st = r->result.breakdown.stage(stage);
        if (!st) throw std::out_of_range(std::string("run has no stage named ") + stage);
        if (mean) *mean = st->mean;
        if (p99) *p99 = st->p99;
    });
}

aitax_status aitax_run_busy(const aitax_run* r, const char* resource, double* out) {
    return guarded([&] {
        need(r, "run");
        need(resource, "resource");
        need(out, "out");
        auto it = r->result.busy.find(resource);
        if (it == r->result.busy.end()) throw std::out_of_range(std::string("unknown resource class ") + resource);
        *out = it->second;
    });
}

aitax_status aitax_run_counters_get(const aitax_run* r, aitax_run_counters* out) {
    return guarded([&] {
        need(r, "run");
        need(out, "out");
        const auto& c = r->result.counters;
        out->frames_emitted = c.frames_emitted;
        out->frames_completed = c.frames_completed;
        out->frames_without_items = c.frames_without_items;
        out->frames_in_flight = c.frames_in_flight;
        out->messages_produced = c.messages_produced;
        out->messages_fetched = c.messages_fetched;
        out->messages_resident = c.messages_resident;
        out->messages_unappended = c.messages_unappended;
        out->bytes_produced = c.bytes_produced;
        out->storage_bytes_written = c.storage_bytes_written;
        out->storage_read_bytes = c.storage_read_bytes;
        out->events = c.events;
    });
}

aitax_status aitax_run_summary_json(const aitax_run* r, char** out) {
    return guarded([&] {
        need(r, "run");
        need(out, "out");
        *out = dup_string(aitax::report::summary_json(r->result));
    });
}

aitax_status aitax_run_utilization_csv(const aitax_run* r, char** out) {
    return guarded([&] {
        need(r, "run");
        need(out, "out");
        *out = dup_string(aitax::report::utilization_csv(r->result));
    });
}

aitax_status aitax_run_write_artifacts(const aitax_run* r, const char* dir) {
    return guarded([&] {
        need(r, "run");
        need(dir, "dir");
        aitax::io::ensure_directory(dir);
        const std::filesystem::path d(dir);
        aitax::io::write_file_atomic((d / "summary.json").string(), aitax::report::summary_json(r->result));
        aitax::io::write_file_atomic((d / "utilization.csv").string(), aitax::report::utilization_csv(r->result));
    });
}

aitax_status aitax_tco_load(const char* path, aitax_tco** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new aitax_tco{aitax::tco::load_tco_config_file(path)};
    });
}

aitax_status aitax_tco_parse(const char* json, aitax_tco** out) {
    return guarded([&] {
        need(json, "json");
        need(out, "out");
        *out = new aitax_tco{aitax::tco::load_tco_config(json)};
    });
}

void aitax_tco_free(aitax_tco* t) { delete t; }

aitax_status aitax_tco_compare(const aitax_tco* t, const char* design, aitax_tco_report* reports, size_t capacity,
                               size_t* count) {
    return guarded([&] {
        need(t, "tco");
        need(design, "design");
        need(count, "count");
        if (capacity > 0) need(reports, "reports");
        const auto cmp = aitax::tco::compare(t->config, design);
        *count = cmp.designs.size();
        for (std::size_t i = 0; i < cmp.designs.size() && i < capacity; ++i) {
            const auto& rep = cmp.designs[i].first;
            aitax_tco_report& o = reports[i];
            o = aitax_tco_report{};
            copy_name(o.design, rep.design);
            o.equipment_total_cents = rep.equipment_total;
            o.amortized_per_year_cents = rep.amortized_per_year;
            o.power_kw = rep.power_kw;
            o.power_cost_per_year_cents = rep.power_cost_per_year;
            o.yearly_total_cents = rep.yearly_total;
            o.has_delta = rep.delta_vs_baseline ? 1 : 0;
            o.delta_vs_baseline = rep.delta_vs_baseline.value_or(0.0);
        }
    });
}

aitax_status aitax_tco_render(const aitax_tco* t, const char* design, int as_json, char** out) {
    return guarded([&] {
        need(t, "tco");
        need(design, "design");
        need(out, "out");
        const auto cmp = aitax::tco::compare(t->config, design);
        *out = dup_string(as_json ? aitax::tco::comparison_json(cmp) : aitax::tco::comparison_text(cmp));
    });
}

aitax_status aitax_tco_quantity(const aitax_tco* t, const char* design, const char* sku, uint64_t* out) {
    return guarded([&] {
        need(t, "tco");
        need(design, "design");
        need(sku, "sku");
        need(out, "out");
        const std::string d(design);
        if (d != "homogeneous" && d != "purpose-built")
            throw std::invalid_argument("design must be homogeneous or purpose-built");
        const auto cmp = aitax::tco::compare(t->config, d);
        *out = cmp.designs.front().second.quantity_of(sku);
    });
}

aitax_status aitax_power_cost_cents(double kw, double rate, double hours, int64_t* out) {
    return guarded([&] {
        need(out, "out");
        *out = aitax::tco::power_cost(kw, rate, hours);
    });
}

aitax_status aitax_fat_tree(uint64_t nodes, uint32_t ports, uint64_t* switches, uint64_t* cables) {
    return guarded([&] {
        const auto t = aitax::tco::fat_tree_size(nodes, ports);
        if (switches) *switches = t.switches;
        if (cables) *cables = t.cables;
    });
}

}  // extern "C"
