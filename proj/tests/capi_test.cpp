#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <aitax/aitax.h>

extern "C" int aitax_header_is_c(void);

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    aitax_string_free(s);
    return out;
}

aitax_scenario* small_scenario() {
    aitax_scenario* s = nullptr;
    REQUIRE(aitax_scenario_builtin("face-recognition-native", &s) == AITAX_OK);
    REQUIRE(aitax_scenario_set(s, "producers", 8) == AITAX_OK);
    REQUIRE(aitax_scenario_set(s, "consumers", 16) == AITAX_OK);
    return s;
}

aitax_run_options quick() {
    aitax_run_options o;
    aitax_run_options_default(&o);
    o.sim_time = 20;
    o.warmup = 4;
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("header compiles as C and defaults are sane") {
    CHECK(aitax_header_is_c() == 0);
    CHECK(std::string(aitax_version()) == "1.0.0");
    aitax_run_options o;
    aitax_run_options_default(&o);
    CHECK(o.sim_time == 600);
    CHECK(o.warmup == 60);
}

TEST_CASE("null arguments are rejected with a message") {
    CHECK(aitax_scenario_builtin(nullptr, nullptr) == AITAX_ERR_INVALID_ARGUMENT);
    CHECK(std::string(aitax_last_error()).size() > 0);
    double v;
    CHECK(aitax_scenario_get(nullptr, "brokers", &v) == AITAX_ERR_INVALID_ARGUMENT);
    CHECK(aitax_amdahl(0.5, 2, nullptr) == AITAX_ERR_INVALID_ARGUMENT);
    aitax_scenario_free(nullptr);
    aitax_run_free(nullptr);
    aitax_tco_free(nullptr);
    aitax_string_free(nullptr);
}

TEST_CASE("errors map to distinct status codes") {
    aitax_scenario* s = nullptr;
    CHECK(aitax_scenario_load("missing-builtin", &s) == AITAX_ERR_NOT_FOUND);
    CHECK(s == nullptr);
    CHECK(std::string(aitax_last_error()).find("neither a builtin") != std::string::npos);
    CHECK(aitax_scenario_parse("{oops", &s) == AITAX_ERR_PARSE);
    CHECK(aitax_scenario_parse(R"({"producers": 1, "consumers": 2, "brokers": 1, "replication_factor": 2})", &s) ==
          AITAX_ERR_VALIDATION);
    CHECK(std::string(aitax_last_error()).find("replication_factor") != std::string::npos);
    double out;
    CHECK(aitax_amdahl(2.0, 4.0, &out) == AITAX_ERR_INVALID_ARGUMENT);
    aitax_tco* t = nullptr;
    CHECK(aitax_tco_load("/nonexistent.json", &t) == AITAX_ERR_PARSE);
}

TEST_CASE("last error is cleared by a later success") {
    aitax_scenario* s = nullptr;
    CHECK(aitax_scenario_load("missing-builtin", &s) != AITAX_OK);
    double out;
    CHECK(aitax_amdahl(0.5, 2.0, &out) == AITAX_OK);
    CHECK(std::string(aitax_last_error()).empty());
}

TEST_CASE("scenario fields can be read, set and validated") {
    aitax_scenario* s = small_scenario();
    double v = 0;
    CHECK(aitax_scenario_get(s, "partitions", &v) == AITAX_OK);
    CHECK(v == 5040);  // raising consumers never lowers partitions
    CHECK(aitax_scenario_set(s, "consumers", 6000) == AITAX_OK);
    CHECK(aitax_scenario_get(s, "partitions", &v) == AITAX_OK);
    CHECK(v == 6000);
    CHECK(aitax_scenario_set(s, "replication_factor", 9) == AITAX_ERR_VALIDATION);
    CHECK(aitax_scenario_get(s, "replication_factor", &v) == AITAX_OK);
    CHECK(v == 3);  // failed set leaves the scenario untouched
    CHECK(aitax_scenario_set(s, "no_such_field", 1) == AITAX_ERR_INVALID_ARGUMENT);
    CHECK(aitax_scenario_set(s, "brokers", 2.5) == AITAX_ERR_INVALID_ARGUMENT);

    aitax_scenario* copy = nullptr;
    REQUIRE(aitax_scenario_clone(s, &copy) == AITAX_OK);
    CHECK(aitax_scenario_set(copy, "brokers", 6) == AITAX_OK);
    CHECK(aitax_scenario_get(s, "brokers", &v) == AITAX_OK);
    CHECK(v == 3);

    char* name = nullptr;
    REQUIRE(aitax_scenario_name(s, &name) == AITAX_OK);
    CHECK(take(name) == "face-recognition-native");

    char* json = nullptr;
    REQUIRE(aitax_scenario_to_json(copy, &json) == AITAX_OK);
    aitax_scenario* back = nullptr;
    REQUIRE(aitax_scenario_parse(take(json).c_str(), &back) == AITAX_OK);
    CHECK(aitax_scenario_get(back, "brokers", &v) == AITAX_OK);
    CHECK(v == 6);
    aitax_scenario_free(back);
    aitax_scenario_free(copy);
    aitax_scenario_free(s);
}

TEST_CASE("builtin names are listed") {
    char* names = nullptr;
    REQUIRE(aitax_builtin_names(&names) == AITAX_OK);
    CHECK(take(names) == "face-recognition-native\nface-recognition-accel\nobject-detection-accel\n");
}

TEST_CASE("analytic entry points") {
    double sp = 0;
    REQUIRE(aitax_amdahl(0.875, INFINITY, &sp) == AITAX_OK);
    CHECK(sp == doctest::Approx(8.0));

    aitax_scenario* s = nullptr;
    REQUIRE(aitax_scenario_builtin("face-recognition-accel", &s) == AITAX_OK);
    aitax_prediction p;
    REQUIRE(aitax_predict(s, 8, AITAX_CALIBRATED, &p) == AITAX_OK);
    CHECK_FALSE(p.stable);
    CHECK(std::string(p.binding_resource) == "broker-storage");
    REQUIRE(aitax_predict(s, 2, AITAX_NOMINAL, &p) == AITAX_OK);
    CHECK(p.stable);
    CHECK(p.binding_resource[0] == '\0');
    CHECK(aitax_predict(s, 2, static_cast<aitax_rate_model>(7), &p) == AITAX_ERR_INVALID_ARGUMENT);

    aitax_mitigation m;
    REQUIRE(aitax_plan(s, 16, AITAX_CALIBRATED, &m) == AITAX_OK);
    CHECK(m.drives.feasible);
    CHECK(m.drives.value == 3);
    CHECK(m.brokers.value == 6);
    CHECK(m.size.value == 0.25);
    aitax_scenario_free(s);
}

TEST_CASE("simulation results through the C API") {
    aitax_scenario* s = small_scenario();
    const auto dir = std::filesystem::temp_directory_path() / "aitax_capi_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto frames = (dir / "frames.csv").string();
    const aitax_run_options o = quick();
    aitax_run* r = nullptr;
    REQUIRE(aitax_simulate(s, &o, frames.c_str(), &r) == AITAX_OK);

    aitax_run_summary sum;
    REQUIRE(aitax_run_summary_get(r, &sum) == AITAX_OK);
    CHECK(sum.stable);
    CHECK(sum.samples > 0);
    CHECK(sum.wait_fraction > 0);
    CHECK(sum.wait_fraction < 1);

    double mean = 0, p99 = 0;
    REQUIRE(aitax_run_stage(r, "identify", &mean, &p99) == AITAX_OK);
    CHECK(mean == doctest::Approx(0.1315).epsilon(0.2));
    CHECK(p99 >= mean);
    CHECK(aitax_run_stage(r, "delay", &mean, &p99) == AITAX_ERR_NOT_FOUND);

    double busy = -1;
    REQUIRE(aitax_run_busy(r, "broker-storage", &busy) == AITAX_OK);
    CHECK(busy > 0);
    CHECK(busy < 1);
    CHECK(aitax_run_busy(r, "flux-capacitor", &busy) == AITAX_ERR_NOT_FOUND);

    aitax_run_counters c;
    REQUIRE(aitax_run_counters_get(r, &c) == AITAX_OK);
    CHECK(c.frames_emitted == c.frames_completed + c.frames_without_items + c.frames_in_flight);
    CHECK(c.storage_read_bytes == 0);

    REQUIRE(aitax_run_write_artifacts(r, dir.string().c_str()) == AITAX_OK);
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK(std::filesystem::exists(dir / "utilization.csv"));
    char* js = nullptr;
    REQUIRE(aitax_run_summary_json(r, &js) == AITAX_OK);
    CHECK(take(js) == slurp(dir / "summary.json"));
    const std::string csv = slurp(frames);
    CHECK(csv.rfind("frame_id,producer_id,status,", 0) == 0);
    // No temp files are left beside the artifacts.
    for (const auto& e : std::filesystem::directory_iterator(dir))
        CHECK(e.path().filename().string().find(".tmp") == std::string::npos);

    aitax_run* again = nullptr;
    const auto frames2 = (dir / "frames2.csv").string();
    REQUIRE(aitax_simulate(s, &o, frames2.c_str(), &again) == AITAX_OK);
    CHECK(slurp(frames2) == csv);
    aitax_run_free(again);
    aitax_run_free(r);
    aitax_scenario_free(s);
    std::filesystem::remove_all(dir);
}

TEST_CASE("bad run options are rejected") {
    aitax_scenario* s = small_scenario();
    aitax_run_options o = quick();
    o.warmup = 50;
    aitax_run* r = nullptr;
    CHECK(aitax_simulate(s, &o, nullptr, &r) == AITAX_ERR_INVALID_ARGUMENT);
    CHECK(r == nullptr);
    o = quick();
    CHECK(aitax_simulate(s, &o, "/nonexistent-dir/frames.csv", &r) == AITAX_ERR_IO);
    aitax_scenario_free(s);
}

TEST_CASE("tco through the C API") {
    aitax_tco* t = nullptr;
    REQUIRE(aitax_tco_load(AITAX_SOURCE_DIR "/data/catalogs/datacenter.json", &t) == AITAX_OK);
    aitax_tco_report reps[2];
    size_t n = 0;
    REQUIRE(aitax_tco_compare(t, "both", reps, 2, &n) == AITAX_OK);
    REQUIRE(n == 2);
    CHECK(std::string(reps[0].design) == "homogeneous");
    CHECK(reps[0].equipment_total_cents == 3357776000LL);
    CHECK(reps[1].equipment_total_cents == 2787843100LL);
    CHECK_FALSE(reps[0].has_delta);
    CHECK(reps[1].has_delta);
    n = 0;
    CHECK(aitax_tco_compare(t, "both", nullptr, 0, &n) == AITAX_OK);  // size query
    CHECK(n == 2);
    CHECK(aitax_tco_compare(t, "bespoke", reps, 2, &n) != AITAX_OK);

    std::uint64_t q = 0;
    REQUIRE(aitax_tco_quantity(t, "homogeneous", "MSN2700-CS2F", &q) == AITAX_OK);
    CHECK(q == 160);
    CHECK(aitax_tco_quantity(t, "homogeneous", "NOPE", &q) == AITAX_OK);
    CHECK(q == 0);

    char* text = nullptr;
    REQUIRE(aitax_tco_render(t, "homogeneous", 0, &text) == AITAX_OK);
    CHECK(take(text).find("$33,577,760") != std::string::npos);
    aitax_tco_free(t);

    std::int64_t cents = 0;
    REQUIRE(aitax_power_cost_cents(1842, 0.10, 1, &cents) == AITAX_OK);
    CHECK(cents == 18420);
    std::uint64_t sw = 0, cables = 0;
    REQUIRE(aitax_fat_tree(1024, 32, &sw, &cables) == AITAX_OK);
    CHECK(sw == 160);
    CHECK(cables == 3072);
    CHECK(aitax_fat_tree(1024, 31, &sw, &cables) == AITAX_ERR_INVALID_ARGUMENT);
}
