#include "winp/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "winp/errors.hpp"
#include "winp/rng.hpp"

namespace winp {

using nlohmann::json;

const char* to_string(Mode mode) { return mode == Mode::RTFS ? "RTFS" : "PACS"; }

Mode mode_from_string(const std::string& name) {
    if (name == "RTFS") return Mode::RTFS;
    if (name == "PACS") return Mode::PACS;
    throw ConfigError("mode must be RTFS or PACS, got '" + name + "'");
}

WorkloadGenConfig ExperimentConfig::workload_config() const {
    WorkloadGenConfig w;
    w.token_sizes = token_sizes;
    w.feature_dim = feature_dim;
    w.bytes_per_element = bytes_per_element;
    w.compression = compression;
    w.overhead = overhead;
    w.core_count = cores;
    w.latency_scale = latency_scale;
    w.slot_ms = slot_ms;
    w.jitter_range = jitter_range;
    w.speed_jitter_range = speed_jitter_range;
    w.bw_jitter_range = bw_jitter_range;
    w.op_coefficients = op_coefficients;
    w.bw_base = bw_base;
    w.bw_slope = bw_slope;
    w.seed = seed;
    return w;
}

void ExperimentConfig::validate() const {
    workload_config().validate();
    if (subcarriers < 1) throw ConfigError("config: subcarriers must be >= 1");
    if (trace_slots < 1) throw ConfigError("config: trace_slots must be >= 1");
    if (!(rate_range[0] > 0.0 && rate_range[1] >= rate_range[0]))
        throw ConfigError("config: rate_range must satisfy 0 < lo <= hi");
    if (slot_ms <= 0.0) throw ConfigError("config: slot_ms must be > 0");
    if (b_max <= 0.0) throw ConfigError("config: b_max must be > 0");
    if (replications < 1) throw ConfigError("config: replications must be >= 1");
}

namespace {

const std::set<std::string> kKnownKeys = {
    "K",           "token_sizes",       "feature_dim",   "bytes_per_element",
    "overhead",    "compression",       "jitter_range",  "speed_jitter_range",
    "bw_jitter_range", "latency_scale", "op_coefficients", "bw_base",
    "bw_slope",    "cores",             "b_max",         "slot_ms",
    "subcarriers", "rate_range",        "trace_slots",   "rate_floor",
    "mode",        "seed",              "replications"};

const char* kKindNames[kOperatorKindCount] = {
    "Embed", "Enc1", "Enc2", "Enc3", "Proj", "Align", "Fusion", "Classifier", "Output"};

std::array<double, 2> read_pair(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("config: " + field + " must be a [lo, hi] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

int kind_index(const std::string& name) {
    for (int i = 0; i < kOperatorKindCount; ++i)
        if (name == kKindNames[i]) return i;
    throw ConfigError("config: unknown operator kind '" + name + "'");
}

} // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: document must be an object");

    for (const auto& [key, _] : doc.items())
        if (!kKnownKeys.count(key))
            throw ConfigError("config: unknown key '" + key + "'");

    ExperimentConfig cfg;
    try {
        if (doc.contains("token_sizes"))
            cfg.token_sizes = doc["token_sizes"].get<std::vector<int>>();
        if (doc.contains("K")) {
            const int k = doc["K"].get<int>();
            if (k != cfg.modality_count()) {
                if (doc.contains("token_sizes"))
                    throw ConfigError("config: token_sizes length " +
                                      std::to_string(cfg.modality_count()) +
                                      " != K=" + std::to_string(k));
                throw ConfigError("config: K=" + std::to_string(k) +
                                  " without token_sizes of matching length");
            }
        }
        if (doc.contains("feature_dim")) cfg.feature_dim = doc["feature_dim"].get<int>();
        if (doc.contains("bytes_per_element"))
            cfg.bytes_per_element = doc["bytes_per_element"].get<double>();
        if (doc.contains("overhead")) cfg.overhead = doc["overhead"].get<double>();
        if (doc.contains("compression"))
            cfg.compression = doc["compression"].get<std::vector<double>>();
        if (cfg.compression.size() != cfg.token_sizes.size())
            throw ConfigError("config: compression length " +
                              std::to_string(cfg.compression.size()) +
                              " != K=" + std::to_string(cfg.token_sizes.size()));
        if (doc.contains("jitter_range"))
            cfg.jitter_range = read_pair(doc["jitter_range"], "jitter_range");
        if (doc.contains("speed_jitter_range"))
            cfg.speed_jitter_range =
                read_pair(doc["speed_jitter_range"], "speed_jitter_range");
        if (doc.contains("bw_jitter_range"))
            cfg.bw_jitter_range = read_pair(doc["bw_jitter_range"], "bw_jitter_range");
        if (doc.contains("latency_scale"))
            cfg.latency_scale = doc["latency_scale"].get<double>();
        if (doc.contains("op_coefficients")) {
            for (const auto& [name, val] : doc["op_coefficients"].items()) {
                if (!val.is_array() || val.size() != 2)
                    throw ConfigError("config: op_coefficients." + name +
                                      " must be [linear, quadratic]");
                cfg.op_coefficients[kind_index(name)] = {val[0].get<double>(),
                                                         val[1].get<double>()};
            }
        }
        if (doc.contains("bw_base"))
            for (const auto& [name, val] : doc["bw_base"].items())
                cfg.bw_base[kind_index(name)] = val.get<double>();
        if (doc.contains("bw_slope")) cfg.bw_slope = doc["bw_slope"].get<double>();
        if (doc.contains("cores")) cfg.cores = doc["cores"].get<int>();
        if (doc.contains("b_max")) cfg.b_max = doc["b_max"].get<double>();
        if (doc.contains("slot_ms")) cfg.slot_ms = doc["slot_ms"].get<double>();
        if (doc.contains("subcarriers")) cfg.subcarriers = doc["subcarriers"].get<int>();
        if (doc.contains("rate_range"))
            cfg.rate_range = read_pair(doc["rate_range"], "rate_range");
        if (doc.contains("trace_slots")) cfg.trace_slots = doc["trace_slots"].get<int>();
        if (doc.contains("rate_floor")) cfg.rate_floor = doc["rate_floor"].get<double>();
        if (doc.contains("mode"))
            cfg.mode = mode_from_string(doc["mode"].get<std::string>());
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("replications"))
            cfg.replications = doc["replications"].get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json op = json::object();
    json bw = json::object();
    for (int i = 0; i < kOperatorKindCount; ++i) {
        op[kKindNames[i]] = {cfg.op_coefficients[i].linear,
                             cfg.op_coefficients[i].quadratic};
        bw[kKindNames[i]] = cfg.bw_base[i];
    }
    json doc = {
        {"token_sizes", cfg.token_sizes},
        {"feature_dim", cfg.feature_dim},
        {"bytes_per_element", cfg.bytes_per_element},
        {"overhead", cfg.overhead},
        {"compression", cfg.compression},
        {"jitter_range", cfg.jitter_range},
        {"speed_jitter_range", cfg.speed_jitter_range},
        {"bw_jitter_range", cfg.bw_jitter_range},
        {"latency_scale", cfg.latency_scale},
        {"op_coefficients", op},
        {"bw_base", bw},
        {"bw_slope", cfg.bw_slope},
        {"cores", cfg.cores},
        {"b_max", cfg.b_max},
        {"slot_ms", cfg.slot_ms},
        {"subcarriers", cfg.subcarriers},
        {"rate_range", cfg.rate_range},
        {"trace_slots", cfg.trace_slots},
        {"rate_floor", cfg.rate_floor},
        {"mode", to_string(cfg.mode)},
        {"seed", cfg.seed},
        {"replications", cfg.replications},
    };
    return doc.dump();
}

std::string config_hash(const ExperimentConfig& cfg) {
    ExperimentConfig keyed = cfg;
    keyed.seed = 0;
    const std::uint64_t h = fnv1a64(config_to_json(keyed));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace winp
