#include "drscreen/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace drscreen {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

const json& expect_object(const json& doc, const std::string& where) {
    if (!doc.is_object()) fail("'" + where + "' must be an object");
    return doc;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            fail("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
        }
    }
}

std::string expect_string(const json& obj, const std::string& key) {
    if (!obj.contains(key)) fail("missing key '" + key + "'");
    if (!obj[key].is_string()) fail("'" + key + "' must be a string");
    return obj[key].get<std::string>();
}

double expect_number(const json& value, const std::string& where) {
    if (!value.is_number()) fail("'" + where + "' must be a number");
    return value.get<double>();
}

std::uint64_t expect_uint(const json& value, const std::string& where) {
    const double v = expect_number(value, where);
    if (v < 0 || v != std::floor(v)) fail("'" + where + "' must be a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

// A vocabulary field is a single name, a list of names, or the given
// expand-all keyword.
template <typename T, typename Parse>
std::vector<T> parse_name_list(const json& value, const std::string& key, Parse parse,
                               std::span<const T> all, std::string_view all_keyword) {
    std::vector<std::string> names;
    if (value.is_string()) {
        names.push_back(value.get<std::string>());
    } else if (value.is_array()) {
        for (const auto& item : value) {
            if (!item.is_string()) fail("'" + key + "' entries must be strings");
            names.push_back(item.get<std::string>());
        }
    } else {
        fail("'" + key + "' must be a string or an array of strings");
    }
    std::vector<T> out;
    for (const std::string& name : names) {
        if (name == all_keyword) {
            out.insert(out.end(), all.begin(), all.end());
            continue;
        }
        const auto parsed = parse(name);
        if (!parsed) fail("'" + key + "': unknown value '" + name + "'");
        out.push_back(*parsed);
    }
    if (out.empty()) fail("'" + key + "' must not be empty");
    std::set<T> seen;
    for (const T v : out) {
        if (!seen.insert(v).second) fail("'" + key + "' has duplicate entries");
    }
    return out;
}

SynthParams parse_synth(const json& obj) {
    reject_unknown_keys(obj, {"n", "proportions", "separation", "seed"}, "data.synth");
    SynthParams params;
    if (!obj.contains("n")) fail("missing key 'data.synth.n'");
    params.n = static_cast<std::size_t>(expect_uint(obj["n"], "data.synth.n"));
    if (obj.contains("proportions")) {
        const auto& props = obj["proportions"];
        if (!props.is_array() || props.size() != kGradeCount) {
            fail("'data.synth.proportions' must be an array of 4 numbers");
        }
        for (std::size_t g = 0; g < kGradeCount; ++g) {
            params.proportions[g] = expect_number(props[g], "data.synth.proportions");
        }
    }
    if (obj.contains("separation")) {
        params.separation = expect_number(obj["separation"], "data.synth.separation");
    }
    if (obj.contains("seed")) {
        params.seed = expect_uint(obj["seed"], "data.synth.seed");
    }
    return params;
}

std::vector<LearnerSpec> parse_pool(const json& value) {
    if (!value.is_array() || value.empty()) {
        fail("'pool' must be a non-empty array of learner objects");
    }
    std::vector<LearnerSpec> pool;
    for (std::size_t i = 0; i < value.size(); ++i) {
        const json& entry = value[i];
        const std::string where = "pool[" + std::to_string(i) + "]";
        expect_object(entry, where);
        if (!entry.contains("kind")) fail("missing key '" + where + ".kind'");
        if (!entry["kind"].is_string()) fail("'" + where + ".kind' must be a string");
        std::map<std::string, double> params;
        for (const auto& [key, v] : entry.items()) {
            if (key == "kind") continue;
            params[key] = expect_number(v, where + "." + key);
        }
        try {
            pool.push_back(make_learner_spec(entry["kind"].get<std::string>(), params));
        } catch (const ConfigError& e) {
            fail(where + ": " + e.what());
        }
    }
    return pool;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
    expect_object(doc, "config");
    reject_unknown_keys(doc,
                        {"data", "scenario", "pool", "fusion", "search", "energy", "cv",
                         "energy_on", "product_epsilon", "search_mode", "out_dir"},
                        "");

    ExperimentConfig config;

    if (!doc.contains("data")) fail("missing key 'data'");
    const json& data = expect_object(doc["data"], "data");
    reject_unknown_keys(data, {"path", "synth"}, "data");
    if (data.contains("path") == data.contains("synth")) {
        fail("'data' needs exactly one of 'path' or 'synth'");
    }
    if (data.contains("path")) {
        if (!data["path"].is_string()) fail("'data.path' must be a string");
        config.data = std::filesystem::path(data["path"].get<std::string>());
    } else {
        config.data = parse_synth(expect_object(data["synth"], "data.synth"));
    }

    const std::string scenario = expect_string(doc, "scenario");
    const auto parsed_scenario = parse_scenario(scenario);
    if (!parsed_scenario) fail("'scenario': unknown value '" + scenario + "'");
    config.scenario = *parsed_scenario;

    if (!doc.contains("pool")) fail("missing key 'pool'");
    config.pool = parse_pool(doc["pool"]);

    if (!doc.contains("fusion")) fail("missing key 'fusion'");
    config.strategies = parse_name_list<Strategy>(
        doc["fusion"], "fusion", [](std::string_view n) { return parse_strategy(n); },
        std::span<const Strategy>(kAllStrategies), "all-strategies");

    if (!doc.contains("search")) fail("missing key 'search'");
    config.searches = parse_name_list<SearchMethod>(
        doc["search"], "search", [](std::string_view n) { return parse_search(n); },
        std::span<const SearchMethod>(kAllSearchMethods), "all-methods");

    if (!doc.contains("energy")) fail("missing key 'energy'");
    config.energies = parse_name_list<EnergyKind>(
        doc["energy"], "energy", [](std::string_view n) { return parse_energy(n); },
        std::span<const EnergyKind>(kAllEnergies), "all-energies");

    if (doc.contains("cv")) {
        const json& cv = expect_object(doc["cv"], "cv");
        reject_unknown_keys(cv, {"k", "seed"}, "cv");
        if (cv.contains("k")) {
            config.k = static_cast<std::size_t>(expect_uint(cv["k"], "cv.k"));
        }
        if (cv.contains("seed")) {
            config.seed = expect_uint(cv["seed"], "cv.seed");
        }
    }
    if (config.k < 2) fail("'cv.k' must be at least 2");

    if (doc.contains("energy_on")) {
        const std::string name = expect_string(doc, "energy_on");
        const auto parsed = parse_energy_on(name);
        if (!parsed) fail("'energy_on': unknown value '" + name + "'");
        config.energy_on = *parsed;
    }

    if (doc.contains("product_epsilon")) {
        const double eps = expect_number(doc["product_epsilon"], "product_epsilon");
        if (eps < 0.0 || eps >= 1.0) fail("'product_epsilon' must lie in [0, 1)");
        config.product_epsilon = eps;
    }

    if (doc.contains("search_mode")) {
        const std::string name = expect_string(doc, "search_mode");
        const auto parsed = parse_search_mode(name);
        if (!parsed) fail("'search_mode': unknown value '" + name + "'");
        config.search_mode = *parsed;
    }

    config.out_dir = expect_string(doc, "out_dir");
    if (config.out_dir.empty()) fail("'out_dir' must not be empty");
    return config;
}

void apply_override(json& doc, const std::string& key_equals_value) {
    const std::size_t eq = key_equals_value.find('=');
    if (eq == std::string::npos || eq == 0) {
        fail("override must look like key=value, got '" + key_equals_value + "'");
    }
    const std::string path = key_equals_value.substr(0, eq);
    const std::string raw = key_equals_value.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::exception&) {
        value = raw;  // unquoted strings
    }

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) fail("override path '" + path + "' has an empty segment");
        if (!node->is_object()) {
            fail("override path '" + path + "' walks through a non-object");
        }
        if (dot == std::string::npos) {
            (*node)[key] = value;
            break;
        }
        node = &(*node)[key];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

ExperimentConfig load_config_file(const std::filesystem::path& path,
                                  const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    for (const std::string& o : overrides) apply_override(doc, o);
    return parse_config(doc);
}

nlohmann::ordered_json encode_config(const ExperimentConfig& config) {
    nlohmann::ordered_json doc;
    nlohmann::ordered_json data;
    if (std::holds_alternative<SynthParams>(config.data)) {
        const SynthParams& p = std::get<SynthParams>(config.data);
        data["synth"] = {{"n", p.n},
                         {"proportions", p.proportions},
                         {"separation", p.separation},
                         {"seed", p.seed}};
    } else {
        data["path"] = std::get<std::filesystem::path>(config.data).string();
    }
    doc["data"] = std::move(data);
    doc["scenario"] = scenario_name(config.scenario);
    nlohmann::ordered_json pool = nlohmann::ordered_json::array();
    for (const LearnerSpec& spec : config.pool) {
        nlohmann::ordered_json entry;
        entry["kind"] = learner_name(spec.kind);
        for (const auto& [key, value] : spec.params) entry[key] = value;
        pool.push_back(std::move(entry));
    }
    doc["pool"] = std::move(pool);
    auto names = [](const auto& values, const auto& name_of) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto v : values) arr.push_back(name_of(v));
        return arr;
    };
    doc["fusion"] = names(config.strategies, [](Strategy s) { return strategy_name(s); });
    doc["search"] = names(config.searches, [](SearchMethod m) { return search_name(m); });
    doc["energy"] = names(config.energies, [](EnergyKind e) { return energy_name(e); });
    doc["cv"] = {{"k", config.k}, {"seed", config.seed}};
    doc["energy_on"] = energy_on_name(config.energy_on);
    doc["product_epsilon"] = config.product_epsilon;
    doc["search_mode"] = search_mode_name(config.search_mode);
    doc["out_dir"] = config.out_dir.string();
    return doc;
}

}  // namespace drscreen
