/* aitax: simulator and capacity planner for brokered streaming-AI pipelines.
 *
 * Every function returns an aitax_status. On failure, aitax_last_error()
 * describes the problem for the calling thread. Handles are opaque and owned
 * by the caller; release them with the matching *_free function. Strings
 * returned through char** are heap-allocated and released with
 * aitax_string_free.
 *
 * Handles are not synchronized. Distinct handles may be used from distinct
 * threads concurrently, which is how sweeps run in parallel.
 */
#ifndef AITAX_AITAX_H
#define AITAX_AITAX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define AITAX_API __attribute__((visibility("default")))
#else
#define AITAX_API
#endif

typedef enum aitax_status {
    AITAX_OK = 0,
    AITAX_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad option, unknown field */
    AITAX_ERR_PARSE = 2,            /* malformed scenario or catalog document */
    AITAX_ERR_VALIDATION = 3,       /* well-formed but violates an invariant */
    AITAX_ERR_NOT_FOUND = 4,        /* unknown builtin, stage or design */
    AITAX_ERR_IO = 5,               /* file could not be read or written */
    AITAX_ERR_INTERNAL = 6
} aitax_status;

typedef struct aitax_scenario aitax_scenario;
typedef struct aitax_run aitax_run;
typedef struct aitax_tco aitax_tco;

AITAX_API const char* aitax_version(void);
/* Message for the last failure on this thread; "" when none. */
AITAX_API const char* aitax_last_error(void);
AITAX_API void aitax_string_free(char* s);

/* ---- scenarios ---------------------------------------------------------- */

/* Builtin names, one per line. */
AITAX_API aitax_status aitax_builtin_names(char** out);
AITAX_API aitax_status aitax_scenario_builtin(const char* name, aitax_scenario** out);
/* A builtin name or a path to a JSON scenario file. */
AITAX_API aitax_status aitax_scenario_load(const char* ref, aitax_scenario** out);
AITAX_API aitax_status aitax_scenario_parse(const char* json, aitax_scenario** out);
AITAX_API aitax_status aitax_scenario_clone(const aitax_scenario* s, aitax_scenario** out);
AITAX_API void aitax_scenario_free(aitax_scenario* s);

/* Numeric fields: producers, consumers, brokers, partitions,
 * drives_per_broker, replication_factor, acceleration, size_scale,
 * frame_interval, network_capacity, storage_write_capacity,
 * storage_effective_ceiling, broker_proc_capacity, storage_request_overhead,
 * producer_send_capacity, producer_linger, producer_max_batch,
 * fetch_min_bytes, fetch_max_wait. Setting consumers also raises partitions
 * to match when they would fall short. The result is validated. */
AITAX_API aitax_status aitax_scenario_set(aitax_scenario* s, const char* field, double value);
AITAX_API aitax_status aitax_scenario_get(const aitax_scenario* s, const char* field, double* out);
AITAX_API aitax_status aitax_scenario_name(const aitax_scenario* s, char** out);
AITAX_API aitax_status aitax_scenario_to_json(const aitax_scenario* s, char** out);

/* ---- analytic ----------------------------------------------------------- */

/* 1 / ((1 - f) + f / a); a may be INFINITY. */
AITAX_API aitax_status aitax_amdahl(double ai_fraction, double acceleration, double* out);

typedef enum aitax_rate_model {
    AITAX_NOMINAL = 0,    /* pure storage bandwidth, producers at 1 / frame_interval */
    AITAX_CALIBRATED = 1  /* closed-loop producer rates plus per-request overhead */
} aitax_rate_model;

typedef struct aitax_prediction {
    int stable;
    double storage;  /* utilization of each resource class */
    double network;
    double proc;
    double send;
    double consumer;
    char binding_resource[32]; /* "" when stable */
} aitax_prediction;

AITAX_API aitax_status aitax_predict(const aitax_scenario* s, double acceleration, aitax_rate_model model,
                                     aitax_prediction* out);

typedef struct aitax_axis {
    int feasible;
    double value; /* drives per broker, broker count, or size scale */
    char binding_resource[32];
} aitax_axis;

typedef struct aitax_mitigation {
    aitax_axis drives;
    aitax_axis brokers;
    aitax_axis size;
} aitax_mitigation;

AITAX_API aitax_status aitax_plan(const aitax_scenario* s, double target_acceleration, aitax_rate_model model,
                                  aitax_mitigation* out);

/* ---- simulation --------------------------------------------------------- */

typedef struct aitax_run_options {
    uint64_t seed;
    double sim_time;        /* virtual seconds */
    double warmup;          /* virtual seconds */
    double sample_interval; /* utilization window, seconds */
    double max_backlog;     /* stop once a queue holds this many seconds of work; 0 = never */
    int drain;              /* run until every frame finishes after the horizon */
} aitax_run_options;

AITAX_API void aitax_run_options_default(aitax_run_options* out);

/* Runs one simulation at the scenario's acceleration. When frames_csv is not
 * NULL the per-frame log is written there atomically. */
AITAX_API aitax_status aitax_simulate(const aitax_scenario* s, const aitax_run_options* options,
                                      const char* frames_csv, aitax_run** out);
AITAX_API void aitax_run_free(aitax_run* r);

typedef struct aitax_run_summary {
    int stable;
    char binding_resource[32];
    double e2e_mean; /* seconds */
    double e2e_p99;
    double wait_fraction;
    double throughput; /* frames/s */
    uint64_t samples;
    int aborted;
    double ended_at;
    int increasing_epochs;
    double growth_ratio;
} aitax_run_summary;

AITAX_API aitax_status aitax_run_summary_get(const aitax_run* r, aitax_run_summary* out);
/* Stage names: delay, ingest, detect, wait, identify (as present). */
AITAX_API aitax_status aitax_run_stage(const aitax_run* r, const char* stage, double* mean, double* p99);
/* Resource classes: broker-storage, broker-network, broker-network-in,
 * broker-network-out, broker-proc, producer-send, producer-network-out,
 * consumer-network-in, consumer-compute. */
AITAX_API aitax_status aitax_run_busy(const aitax_run* r, const char* resource, double* out);

typedef struct aitax_run_counters {
    uint64_t frames_emitted;
    uint64_t frames_completed;
    uint64_t frames_without_items;
    uint64_t frames_in_flight;
    uint64_t messages_produced;
    uint64_t messages_fetched;
    uint64_t messages_resident;
    uint64_t messages_unappended;
    uint64_t bytes_produced;
    uint64_t storage_bytes_written;
    uint64_t storage_read_bytes;
    uint64_t events;
} aitax_run_counters;

AITAX_API aitax_status aitax_run_counters_get(const aitax_run* r, aitax_run_counters* out);
AITAX_API aitax_status aitax_run_summary_json(const aitax_run* r, char** out);
AITAX_API aitax_status aitax_run_utilization_csv(const aitax_run* r, char** out);
/* Writes summary.json and utilization.csv into dir (created if missing). */
AITAX_API aitax_status aitax_run_write_artifacts(const aitax_run* r, const char* dir);

/* ---- total cost of ownership ------------------------------------------- */

AITAX_API aitax_status aitax_tco_load(const char* path, aitax_tco** out);
AITAX_API aitax_status aitax_tco_parse(const char* json, aitax_tco** out);
AITAX_API void aitax_tco_free(aitax_tco* t);

typedef struct aitax_tco_report {
    char design[32];
    int64_t equipment_total_cents;
    int64_t amortized_per_year_cents;
    double power_kw;
    int64_t power_cost_per_year_cents;
    int64_t yearly_total_cents;
    int has_delta;
    double delta_vs_baseline; /* 1 - this / homogeneous */
} aitax_tco_report;

/* design: "homogeneous", "purpose-built" or "both". Fills up to capacity
 * reports and sets *count to the number available, so a call with
 * capacity 0 and reports NULL sizes the buffer. */
AITAX_API aitax_status aitax_tco_compare(const aitax_tco* t, const char* design, aitax_tco_report* reports,
                                         size_t capacity, size_t* count);
/* Same comparison rendered as JSON (as_json != 0) or an aligned text table. */
AITAX_API aitax_status aitax_tco_render(const aitax_tco* t, const char* design, int as_json, char** out);
/* Quantity of one sku in a design's bill of materials. */
AITAX_API aitax_status aitax_tco_quantity(const aitax_tco* t, const char* design, const char* sku, uint64_t* out);

/* Utilities exposed for planning scripts. */
AITAX_API aitax_status aitax_power_cost_cents(double kw, double rate_per_kwh, double hours, int64_t* out);
AITAX_API aitax_status aitax_fat_tree(uint64_t nodes, uint32_t switch_ports, uint64_t* switches, uint64_t* cables);

#ifdef __cplusplus
}
#endif

#endif /* AITAX_AITAX_H */
