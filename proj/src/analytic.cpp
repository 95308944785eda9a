#include "analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace aitax::analytic {

double amdahl_speedup(double f, double a) {
    if (!(f >= 0.0 && f <= 1.0)) throw std::domain_error("ai fraction must be in [0, 1]");
    if (!(a >= 1.0)) throw std::domain_error("acceleration must be >= 1");
    if (std::isinf(a)) return f == 1.0 ? INFINITY : 1.0 / (1.0 - f);
    return 1.0 / ((1.0 - f) + f / a);
}

DemandEstimate estimate_demand(const ScenarioSpec& s, double a, RateModel model) {
    DemandEstimate d;
    const double fanout = s.fanout_model.mean();
    const double item = s.message_size_model.mean_bytes * s.message_size_model.scale_factor;
    double per_producer = a / s.frame_interval;
    if (model == RateModel::closed_loop && s.pacing == Pacing::self_paced) {
        double compute = 0.0;
        for (const auto& st : s.producer_stages) compute += s.profile(st).mean;
        const double send = fanout * item / s.producer_send_capacity;
        per_producer = 1.0 / (compute / a + send);
    }
    d.frames_per_producer = per_producer;
    const double unique = s.producers * per_producer * fanout * item;  // bytes/s entering the cluster
    const double b = s.brokers;
    const double r = s.replication_factor;
    d.per_broker_write = unique * r / b;
    d.aggregate_write = d.per_broker_write * b;
    // in: producer ingress + replica ingress; out: replica egress + consumer reads.
    d.per_broker_network_in = 8.0 * (unique / b + (r - 1.0) * unique / b);
    d.per_broker_network_out = 8.0 * ((r - 1.0) * unique / b + unique / b);
    d.per_producer_send = per_producer * fanout * item;
    double frames_with_items = per_producer;
    if (s.fanout_model.kind == FanoutKind::categorical) {
        double p0 = 0.0;
        for (const auto& [count, p] : s.fanout_model.categorical)
            if (count == 0) p0 += p;
        frames_with_items *= 1.0 - p0;
    } else if (s.fanout_model.constant_value == 0) {
        frames_with_items = 0.0;
    }
    d.per_broker_requests = s.producers * frames_with_items * r / b;
    const auto& cp = s.profile(s.consumer_stage);
    const double per_message = cp.per_item_scaling ? fanout * cp.mean : cp.mean;
    const double messages = s.producers * (cp.per_item_scaling ? per_producer : frames_with_items);
    d.consumer_busy = messages * per_message / a;
    return d;
}

StabilityVerdict predict_stability(const ScenarioSpec& s, double a, RateModel model) {
    const DemandEstimate d = estimate_demand(s, a, model);
    StabilityVerdict v;
    double storage = d.per_broker_write / s.storage_capacity_per_broker();
    // The per-request overhead is a simulator calibration; the nominal model stays pure bandwidth.
    if (model == RateModel::closed_loop) storage += d.per_broker_requests * s.storage_request_overhead;
    v.utilizations["broker-storage"] = storage;
    v.utilizations["broker-network"] =
        std::max(d.per_broker_network_in, d.per_broker_network_out) / s.network_capacity;
    v.utilizations["broker-proc"] = d.per_broker_requests / s.broker_proc_capacity;
    v.utilizations["producer-send"] = d.per_producer_send / s.producer_send_capacity;
    v.utilizations["consumer-compute"] = d.consumer_busy / s.consumers;
    double worst = -1.0;
    for (const auto& [name, rho] : v.utilizations) {
        if (rho > worst) {
            worst = rho;
            v.binding_resource = name;
        }
    }
    v.stable = worst < 1.0;
    if (v.stable) v.binding_resource.clear();
    return v;
}

namespace {

AxisResult infeasible(const StabilityVerdict& v) {
    AxisResult r;
    r.feasible = false;
    r.binding_resource = v.binding_resource;
    return r;
}

}  // namespace

MitigationOptions min_mitigation(const ScenarioSpec& spec, double target_a, RateModel model) {
    if (!(target_a >= 1.0)) throw std::domain_error("target acceleration must be >= 1");
    MitigationOptions out;

    {
        ScenarioSpec s = spec;
        StabilityVerdict v;
        for (unsigned d = 1; d <= kMaxDrives; ++d) {
            s.drives_per_broker = d;
            v = predict_stability(s, target_a, model);
            if (v.stable) {
                out.drives = {true, static_cast<double>(d), ""};
                break;
            }
            if (v.binding_resource != "broker-storage") break;
        }
        if (!out.drives.feasible) out.drives = infeasible(v);
    }
    {
        ScenarioSpec s = spec;
        StabilityVerdict v;
        for (unsigned b = spec.replication_factor; b <= kMaxBrokers; ++b) {
            s.brokers = b;
            v = predict_stability(s, target_a, model);
            if (v.stable) {
                out.brokers = {true, static_cast<double>(b), ""};
                break;
            }
            if (v.binding_resource == "producer-send" || v.binding_resource == "consumer-compute") break;
        }
        if (!out.brokers.feasible) out.brokers = infeasible(v);
    }
    {
        ScenarioSpec s = spec;
        StabilityVerdict v;
        double scale = 1.0;
        for (int h = 0; h <= kMaxSizeHalvings; ++h, scale *= 0.5) {
            s.message_size_model.scale_factor = scale;
            v = predict_stability(s, target_a, model);
            if (v.stable) {
                out.size = {true, scale, ""};
                break;
            }
            if (v.binding_resource == "consumer-compute" || v.binding_resource == "broker-proc") break;
        }
        if (!out.size.feasible) out.size = infeasible(v);
    }
    return out;
}

MitigationPlan min_mitigation(const ScenarioSpec& spec, double target_a) {
    return {min_mitigation(spec, target_a, RateModel::nominal), min_mitigation(spec, target_a, RateModel::closed_loop)};
}

}  // namespace aitax::analytic
