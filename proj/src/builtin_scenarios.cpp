#include "scenario.hpp"

namespace aitax {

namespace {

ComputeProfile lognormal(double mean, double p99, bool per_item = false) {
    ComputeProfile p;
    p.family = DistributionFamily::lognormal;
    p.mean = mean;
    p.p99 = p99;
    p.per_item_scaling = per_item;
    return p;
}

// Face detection: median near 43 ms with a long tail of crowded frames.
// p99/mean is too large for a lognormal, hence quantile knots.
ComputeProfile face_detect() {
    ComputeProfile p;
    p.family = DistributionFamily::empirical;
    p.knots = {{0.0, 0.012}, {0.10, 0.026}, {0.25, 0.033}, {0.50, 0.043}, {0.75, 0.054}, {0.90, 0.070},
               {0.95, 0.088}, {0.98, 0.160}, {0.99, 1.840}, {0.995, 2.000}, {1.0, 2.112}};
    p.mean = knots_mean(p.knots);
    p.p99 = knots_quantile(p.knots, 0.99);
    return p;
}

ScenarioSpec face_recognition_native() {
    ScenarioSpec s;
    s.name = "face-recognition-native";
    s.producers = 840;
    s.consumers = 5040;
    s.partitions = 5040;
    s.brokers = 3;
    s.replication_factor = 3;
    s.drives_per_broker = 1;
    s.pacing = Pacing::self_paced;
    s.frame_interval = 0.1;
    s.producer_stages = {"ingest", "detect"};
    s.consumer_stage = "identify";
    s.stage_profiles["ingest"] = lognormal(0.0188, 0.027);
    s.stage_profiles["detect"] = face_detect();
    s.stage_profiles["identify"] = lognormal(0.1315, 0.380, true);
    s.fanout_model.kind = FanoutKind::categorical;
    s.fanout_model.categorical = {{0, 0.388}, {1, 0.594}, {2, 0.012}, {3, 0.003}, {4, 0.002}, {5, 0.001}};
    s.message_size_model = {37300.0, 1.0};
    s.producer_send_capacity = 11.75e6;
    s.batching = {0.110, 1048576.0, 1.0, 0.100};
    return s;
}

ScenarioSpec face_recognition_accel() {
    ScenarioSpec s = face_recognition_native();
    s.name = "face-recognition-accel";
    s.producers = 319;
    s.consumers = 558;
    s.partitions = 558;
    s.storage_request_overhead = 7.62e-6;
    s.batching = {0.058, 1048576.0, 65536.0, 0.100};
    s.fanout_model = FanoutModel{};
    s.fanout_model.kind = FanoutKind::constant;
    s.fanout_model.constant_value = 1;
    return s;
}

ScenarioSpec object_detection_accel() {
    ScenarioSpec s;
    s.name = "object-detection-accel";
    s.producers = 21;
    s.consumers = 2016;
    s.partitions = 2016;
    s.brokers = 3;
    s.replication_factor = 3;
    s.drives_per_broker = 1;
    s.pacing = Pacing::scheduled;
    s.frame_interval = 1.0 / 30.0;
    s.producer_stages = {"ingest"};
    s.consumer_stage = "detect";
    s.stage_profiles["ingest"] = lognormal(0.0045, 0.006);
    s.stage_profiles["detect"] = lognormal(0.687, 0.900);
    s.fanout_model.kind = FanoutKind::constant;
    s.fanout_model.constant_value = 1;
    s.message_size_model = {100000.0, 1.0};
    s.producer_send_capacity = 40.9e6;
    s.batching = {0.010, 1048576.0, 262144.0, 0.700};
    return s;
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"face-recognition-native", "face-recognition-accel", "object-detection-accel"};
}

ScenarioSpec builtin_scenario(const std::string& name) {
    if (name == "face-recognition-native") return face_recognition_native();
    if (name == "face-recognition-accel") return face_recognition_accel();
    if (name == "object-detection-accel") return object_detection_accel();
    throw ScenarioError(ScenarioError::Kind::unknown_builtin, {"unknown builtin scenario: " + name});
}

}  // namespace aitax
