// Command-line front end. Links only the C API; exit codes are the machine
// contract (0 ok, 1 configuration or runtime error, 2 unstable run under
// --require-stable).

#include <aitax/aitax.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnstable = 2;

struct Failure {
    std::string message;
};

void check(aitax_status st, const std::string& context) {
    if (st != AITAX_OK) throw Failure{context + ": " + aitax_last_error()};
}

struct ScenarioDeleter {
    void operator()(aitax_scenario* s) const { aitax_scenario_free(s); }
};
struct RunDeleter {
    void operator()(aitax_run* r) const { aitax_run_free(r); }
};
struct TcoDeleter {
    void operator()(aitax_tco* t) const { aitax_tco_free(t); }
};
using Scenario = std::unique_ptr<aitax_scenario, ScenarioDeleter>;
using Run = std::unique_ptr<aitax_run, RunDeleter>;
using Tco = std::unique_ptr<aitax_tco, TcoDeleter>;

std::string take(char* s) {
    std::string out = s ? s : "";
    aitax_string_free(s);
    return out;
}

Scenario load(const std::string& ref) {
    aitax_scenario* s = nullptr;
    check(aitax_scenario_load(ref.c_str(), &s), "scenario");
    return Scenario(s);
}

Scenario clone(const aitax_scenario* s) {
    aitax_scenario* out = nullptr;
    check(aitax_scenario_clone(s, &out), "scenario");
    return Scenario(out);
}

void set(aitax_scenario* s, const char* field, double v) { check(aitax_scenario_set(s, field, v), field); }

double get(const aitax_scenario* s, const char* field) {
    double v = 0;
    check(aitax_scenario_get(s, field, &v), field);
    return v;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("AITAX_OUT_DIR"); env && *env) return env;
    return "aitax-out";
}

std::string fixed(double v, int decimals) {
    if (!std::isfinite(v)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s(buf);
    if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string shortest(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Comma-separated doubles; "inf" allowed where noted.
std::vector<double> parse_list(const std::string& text, const char* flag, bool allow_inf = false) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) continue;
        if (allow_inf && (item == "inf" || item == "infinity")) {
            out.push_back(INFINITY);
            continue;
        }
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0' || !std::isfinite(v))
            throw Failure{std::string(flag) + ": cannot parse '" + item + "'"};
        out.push_back(v);
    }
    if (out.empty()) throw Failure{std::string(flag) + ": empty list"};
    return out;
}

std::string verdict_line(const aitax_run_summary& s) {
    std::string line = s.stable ? "stable" : "unstable";
    if (!s.stable && s.binding_resource[0]) line += " binding=" + std::string(s.binding_resource);
    line += " wait_fraction=" + fixed(s.wait_fraction, 4) + " e2e_mean_ms=" + fixed(s.e2e_mean * 1e3, 1) +
            " e2e_p99_ms=" + fixed(s.e2e_p99 * 1e3, 1) + " throughput_fps=" + fixed(s.throughput, 1);
    if (s.aborted) line += " aborted_at=" + fixed(s.ended_at, 1);
    return line;
}

struct RunFlags {
    double sim_time = 600.0;
    double warmup = 60.0;
    double sample_interval = 1.0;
    double max_backlog = 0.0;
    bool drain = false;
};

aitax_run_options options(const RunFlags& f, std::uint64_t seed) {
    aitax_run_options o;
    aitax_run_options_default(&o);
    o.seed = seed;
    o.sim_time = f.sim_time;
    o.warmup = f.warmup;
    o.sample_interval = f.sample_interval;
    o.max_backlog = f.max_backlog;
    o.drain = f.drain ? 1 : 0;
    return o;
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("--sim-time", f.sim_time, "Virtual seconds to simulate")->capture_default_str();
    cmd->add_option("--warmup", f.warmup, "Virtual seconds excluded from statistics")->capture_default_str();
    cmd->add_option("--sample-interval", f.sample_interval, "Utilization window in seconds")->capture_default_str();
    cmd->add_option("--max-backlog", f.max_backlog, "Stop once a queue holds this many seconds of work (0 = never)")
        ->capture_default_str();
    cmd->add_flag("--drain", f.drain, "After the horizon, run until every frame finishes");
}

// ---- simulate ---------------------------------------------------------------

struct SimulateFlags {
    std::string scenario;
    double accel = 1.0;
    std::uint64_t seed = 1;
    std::optional<unsigned> drives, brokers;
    std::optional<double> size_scale;
    std::string out;
    bool require_stable = false;
    bool no_frames = false;
    RunFlags run;
};

int cmd_simulate(const SimulateFlags& f) {
    Scenario s = load(f.scenario);
    set(s.get(), "acceleration", f.accel);
    if (f.drives) set(s.get(), "drives_per_broker", *f.drives);
    if (f.brokers) set(s.get(), "brokers", *f.brokers);
    if (f.size_scale) set(s.get(), "size_scale", *f.size_scale);
    const std::string dir = f.out.empty() ? default_out_dir() : f.out;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Failure{"--out: cannot create " + dir + ": " + ec.message()};
    const std::string frames = (std::filesystem::path(dir) / "frames.csv").string();
    const aitax_run_options o = options(f.run, f.seed);
    aitax_run* raw = nullptr;
    check(aitax_simulate(s.get(), &o, f.no_frames ? nullptr : frames.c_str(), &raw), "simulate");
    Run run(raw);
    check(aitax_run_write_artifacts(run.get(), dir.c_str()), "artifacts");
    aitax_run_summary sum;
    check(aitax_run_summary_get(run.get(), &sum), "summary");
    std::cout << verdict_line(sum) << "\n";
    if (f.require_stable && !sum.stable) return kExitUnstable;
    return kExitOk;
}

// ---- sweep ------------------------------------------------------------------

struct SweepFlags {
    std::string scenario;
    std::string accel_list;
    std::string drives_list, brokers_list, size_list;
    std::string seeds = "1";
    std::string out;
    unsigned jobs = 0;
    RunFlags run;
};

struct GridPoint {
    double accel;
    unsigned drives;
    unsigned brokers;
    double size;
    std::uint64_t seed;
    auto key() const { return std::make_tuple(accel, drives, brokers, size, seed); }
};

struct GridRow {
    GridPoint p;
    aitax_run_summary sum{};
    aitax_prediction pred{};
};

int cmd_sweep(const SweepFlags& f) {
    Scenario base = load(f.scenario);
    const auto accels = parse_list(f.accel_list, "--accel-list");
    std::vector<double> drives{get(base.get(), "drives_per_broker")};
    std::vector<double> brokers{get(base.get(), "brokers")};
    std::vector<double> sizes{get(base.get(), "size_scale")};
    if (!f.drives_list.empty()) drives = parse_list(f.drives_list, "--drives-list");
    if (!f.brokers_list.empty()) brokers = parse_list(f.brokers_list, "--brokers-list");
    if (!f.size_list.empty()) sizes = parse_list(f.size_list, "--size-list");
    const auto seeds = parse_list(f.seeds, "--seeds");

    std::vector<GridPoint> grid;
    for (double a : accels)
        for (double d : drives)
            for (double b : brokers)
                for (double z : sizes)
                    for (double sd : seeds)
                        grid.push_back({a, static_cast<unsigned>(d), static_cast<unsigned>(b), z,
                                        static_cast<std::uint64_t>(sd)});
    std::sort(grid.begin(), grid.end(), [](const GridPoint& x, const GridPoint& y) { return x.key() < y.key(); });

    // Validate every point before starting any run.
    std::vector<Scenario> specs;
    for (const auto& p : grid) {
        Scenario s = clone(base.get());
        set(s.get(), "acceleration", p.accel);
        set(s.get(), "drives_per_broker", p.drives);
        set(s.get(), "brokers", p.brokers);
        set(s.get(), "size_scale", p.size);
        specs.push_back(std::move(s));
    }

    std::vector<GridRow> rows(grid.size());
    std::vector<std::string> errors(grid.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            rows[i].p = grid[i];
            const aitax_run_options o = options(f.run, grid[i].seed);
            aitax_run* raw = nullptr;
            if (aitax_simulate(specs[i].get(), &o, nullptr, &raw) != AITAX_OK) {
                errors[i] = aitax_last_error();
                continue;
            }
            Run run(raw);
            aitax_run_summary_get(run.get(), &rows[i].sum);
            aitax_predict(specs[i].get(), grid[i].accel, AITAX_CALIBRATED, &rows[i].pred);
            std::lock_guard<std::mutex> lock(log_mu);
            std::cerr << "accel=" << shortest(grid[i].accel) << " drives=" << grid[i].drives
                      << " brokers=" << grid[i].brokers << " size=" << shortest(grid[i].size)
                      << " seed=" << grid[i].seed << " " << (rows[i].sum.stable ? "S" : "U") << "\n";
        }
    };
    unsigned jobs = f.jobs ? f.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(grid.size()));
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) throw Failure{"sweep point " + std::to_string(i) + ": " + errors[i]};

    std::string csv =
        "accel,drives,brokers,size_scale,seed,mean_latency,p99_latency,wait_fraction,throughput,verdict,"
        "binding_resource,analytic_verdict,analytic_rho\n";
    for (const auto& r : rows) {
        const double rho = std::max({r.pred.storage, r.pred.network, r.pred.proc, r.pred.send, r.pred.consumer});
        csv += fixed(r.p.accel, 3) + ',' + std::to_string(r.p.drives) + ',' + std::to_string(r.p.brokers) + ',' +
               fixed(r.p.size, 6) + ',' + std::to_string(r.p.seed) + ',' + fixed(r.sum.e2e_mean, 6) + ',' +
               fixed(r.sum.e2e_p99, 6) + ',' + fixed(r.sum.wait_fraction, 6) + ',' + fixed(r.sum.throughput, 3) +
               ',' + (r.sum.stable ? "S" : "U") + ',' + r.sum.binding_resource + ',' + (r.pred.stable ? "S" : "U") +
               ',' + fixed(rho, 6) + '\n';
    }
    const std::string dir = f.out.empty() ? default_out_dir() : f.out;
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / "sweep.csv";
    const auto tmp = std::filesystem::path(dir) / ".sweep.csv.tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << csv;
        if (!out) throw Failure{"cannot write " + tmp.string()};
    }
    std::filesystem::rename(tmp, path);
    std::cout << "wrote " << rows.size() << " rows to " << path.string() << "\n";
    return kExitOk;
}

// ---- analyze ----------------------------------------------------------------

int cmd_analyze(double fraction, const std::string& list, const std::string& out) {
    std::string csv = "accel,speedup\n";
    for (double a : parse_list(list, "--accel-list", true)) {
        double s = 0;
        check(aitax_amdahl(fraction, a, &s), "amdahl");
        csv += (std::isinf(a) ? std::string("inf") : shortest(a)) + "," + fixed(s, 4) + "\n";
    }
    std::cout << csv;
    if (!out.empty()) {
        std::ofstream f(out, std::ios::binary | std::ios::trunc);
        f << csv;
        if (!f) throw Failure{"--out: cannot write " + out};
    }
    return kExitOk;
}

// ---- plan -------------------------------------------------------------------

std::string axis_text(const aitax_axis& a, const char* unit) {
    if (!a.feasible) return std::string("infeasible (") + a.binding_resource + ")";
    return shortest(a.value) + unit;
}

int cmd_plan(const std::string& ref, double target, bool confirm, const RunFlags& run_flags, std::uint64_t seed) {
    Scenario s = load(ref);
    aitax_mitigation nominal, calibrated;
    check(aitax_plan(s.get(), target, AITAX_NOMINAL, &nominal), "plan");
    check(aitax_plan(s.get(), target, AITAX_CALIBRATED, &calibrated), "plan");
    const double base_drives = get(s.get(), "drives_per_broker");
    const double base_brokers = get(s.get(), "brokers");
    const double base_size = get(s.get(), "size_scale");

    std::printf("target acceleration %s on %s\n", shortest(target).c_str(), ref.c_str());
    aitax_prediction now;
    check(aitax_predict(s.get(), target, AITAX_CALIBRATED, &now), "predict");
    if (now.stable) std::printf("already stable at this target: no change needed\n");

    struct Axis {
        const char* name;
        const char* field;
        aitax_axis aitax_mitigation::*member;
        double base;
        const char* unit;
    };
    const Axis axes[] = {{"drives", "drives_per_broker", &aitax_mitigation::drives, base_drives, " per broker"},
                         {"brokers", "brokers", &aitax_mitigation::brokers, base_brokers, " brokers"},
                         {"size", "size_scale", &aitax_mitigation::size, base_size, "x message size"}};
    std::printf("%-8s %-26s %-26s %s\n", "axis", "pure-storage", "calibrated", "simulated");
    for (const auto& ax : axes) {
        const aitax_axis& n = nominal.*ax.member;
        const aitax_axis& c = calibrated.*ax.member;
        std::string sim = "-";
        if (confirm && c.feasible) {
            Scenario t = clone(s.get());
            set(t.get(), "acceleration", target);
            set(t.get(), ax.field, c.value);
            const aitax_run_options o = options(run_flags, seed);
            aitax_run* raw = nullptr;
            check(aitax_simulate(t.get(), &o, nullptr, &raw), "simulate");
            Run r(raw);
            aitax_run_summary sum;
            check(aitax_run_summary_get(r.get(), &sum), "summary");
            sim = sum.stable ? "stable" : std::string("unstable (") + sum.binding_resource + ")";
        }
        std::printf("%-8s %-26s %-26s %s\n", ax.name, axis_text(n, ax.unit).c_str(), axis_text(c, ax.unit).c_str(),
                    sim.c_str());
    }
    return kExitOk;
}

// ---- scenario ---------------------------------------------------------------

int cmd_scenario(const std::string& ref) {
    if (ref.empty()) {
        char* names = nullptr;
        check(aitax_builtin_names(&names), "builtins");
        std::cout << take(names);
        return kExitOk;
    }
    Scenario s = load(ref);
    char* json = nullptr;
    check(aitax_scenario_to_json(s.get(), &json), "scenario");
    std::cout << take(json) << "\n";
    return kExitOk;
}

// ---- tco --------------------------------------------------------------------

int cmd_tco(const std::string& catalog, const std::string& design, bool json, const std::string& out) {
    aitax_tco* raw = nullptr;
    check(aitax_tco_load(catalog.c_str(), &raw), "catalog");
    Tco t(raw);
    char* text = nullptr;
    check(aitax_tco_render(t.get(), design.c_str(), json ? 1 : 0, &text), "tco");
    const std::string body = take(text);
    std::cout << body;
    if (!out.empty()) {
        std::ofstream f(out, std::ios::binary | std::ios::trunc);
        f << body;
        if (!f) throw Failure{"--out: cannot write " + out};
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and capacity planner for brokered streaming-AI pipelines"};
    app.require_subcommand(1);
    app.set_version_flag("--version", aitax_version());

    SimulateFlags sim;
    auto* simulate = app.add_subcommand("simulate", "Run one simulation and write frames.csv, summary.json, utilization.csv");
    simulate->add_option("--scenario", sim.scenario, "Builtin name or scenario file")->required();
    simulate->add_option("--accel", sim.accel, "Acceleration factor")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    simulate->add_option("--drives", sim.drives, "Override drives per broker");
    simulate->add_option("--brokers", sim.brokers, "Override broker count");
    simulate->add_option("--size-scale", sim.size_scale, "Scale message sizes");
    simulate->add_option("--out", sim.out, "Output directory (default $AITAX_OUT_DIR or ./aitax-out)");
    simulate->add_flag("--require-stable", sim.require_stable, "Exit 2 when the run is unstable");
    simulate->add_flag("--no-frames", sim.no_frames, "Skip frames.csv");
    add_run_flags(simulate, sim.run);

    SweepFlags sw;
    auto* sweep = app.add_subcommand("sweep", "Run a grid of simulations and write sweep.csv");
    sweep->add_option("--scenario", sw.scenario, "Builtin name or scenario file")->required();
    sweep->add_option("--accel-list", sw.accel_list, "Comma-separated acceleration factors")->required();
    sweep->add_option("--drives-list", sw.drives_list, "Comma-separated drives per broker");
    sweep->add_option("--brokers-list", sw.brokers_list, "Comma-separated broker counts");
    sweep->add_option("--size-list", sw.size_list, "Comma-separated message size scales");
    sweep->add_option("--seeds", sw.seeds, "Comma-separated seeds")->capture_default_str();
    sweep->add_option("--jobs", sw.jobs, "Parallel runs (default: hardware threads)");
    sweep->add_option("--out", sw.out, "Output directory (default $AITAX_OUT_DIR or ./aitax-out)");
    add_run_flags(sweep, sw.run);

    double fraction = 0.0;
    std::string analyze_list, analyze_out;
    auto* analyze = app.add_subcommand("analyze", "Amdahl speedup table");
    analyze->add_option("--fraction", fraction, "AI fraction of runtime in [0, 1]")->required();
    analyze->add_option("--accel-list", analyze_list, "Comma-separated factors; 'inf' allowed")->required();
    analyze->add_option("--out", analyze_out, "Also write the table to this CSV file");

    std::string plan_scenario;
    double plan_target = 1.0;
    bool plan_no_confirm = false;
    std::uint64_t plan_seed = 1;
    RunFlags plan_run;
    plan_run.sim_time = 120.0;
    plan_run.warmup = 12.0;
    auto* plan = app.add_subcommand("plan", "Minimum drives, brokers or message size for a target acceleration");
    plan->add_option("--scenario", plan_scenario, "Builtin name or scenario file")->required();
    plan->add_option("--target-accel", plan_target, "Target acceleration factor")->required();
    plan->add_flag("--no-confirm", plan_no_confirm, "Skip the confirming simulation runs");
    plan->add_option("--seed", plan_seed, "Seed for confirming runs")->capture_default_str();
    add_run_flags(plan, plan_run);

    std::string catalog, design = "both", tco_out;
    bool tco_json = false;
    auto* tco = app.add_subcommand("tco", "Compare data-center designs by yearly cost of ownership");
    tco->add_option("--catalog", catalog, "Catalog file")->required();
    tco->add_option("--design", design, "homogeneous, purpose-built or both")
        ->check(CLI::IsMember({"homogeneous", "purpose-built", "both"}))
        ->capture_default_str();
    tco->add_flag("--json", tco_json, "Emit JSON instead of a text table");
    tco->add_option("--out", tco_out, "Also write the report to this file");

    std::string show_ref;
    auto* scenario = app.add_subcommand("scenario", "List builtin scenarios, or print one as JSON");
    scenario->add_option("ref", show_ref, "Builtin name or scenario file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitError;
    }

    try {
        if (*simulate) return cmd_simulate(sim);
        if (*sweep) return cmd_sweep(sw);
        if (*analyze) return cmd_analyze(fraction, analyze_list, analyze_out);
        if (*plan) return cmd_plan(plan_scenario, plan_target, !plan_no_confirm, plan_run, plan_seed);
        if (*scenario) return cmd_scenario(show_ref);
        if (*tco) return cmd_tco(catalog, design, tco_json, tco_out);
    } catch (const Failure& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
