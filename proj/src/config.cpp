#include "isg/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace isg::cli {

using nlohmann::json;

std::string tool_version() { return "isgraph 1.0.0"; }

json default_config_json() {
    // Defaults follow the paper-style operating point: lambda_ell = 1,
    // lambda_e = 0.1 m^-2, b = 2, P/sigma^2 = 10, rho = 0.
    return json{
        {"lambda_ell", 1.0},
        {"lambda_e", 0.1},
        {"channel",
         {{"p_ell", 10.0},
          {"sigma2_ell", 1.0},
          {"sigma2_e", 1.0},
          {"rho", 0.0},
          {"gain", {{"model", "unbounded"}, {"b", 2.0}, {"allow_any_b", false}}},
          {"fading",
           {{"model", "deterministic"}, {"nakagami_m", 1.0}, {"sigma_db", 8.0}}}}},
        {"edge_rule",
         {{"kind", "baseline"},
          {"sectors", 1},
          {"neutralization_radius", 0.0},
          {"allow_low_b", false}}},
        {"window", {{"half_side", 12.0}, {"guard_margin", -1.0}}},
        {"trials", 100},
        {"seed", 1},
        {"workers", 1},
        {"histogram_thinning", 1.0},
        {"neighbor_index", 1},
        {"rho_grid", json::array()},
        {"lambda_grid", json::array()},
        {"window_ladder", json::array()},
        {"region_area", 1.0},
        {"voronoi", {{"samples", 4000}, {"test_points", 10000}, {"half_side", 6.0}}},
        {"ratio_grid", json::array({0.25, 0.5, 1.0, 2.0})},
        {"neighbor_indices", json::array({1, 2, 3})},
        {"sectors_grid", json::array({2, 4, 8})},
        {"neutralization_radii", json::array({0.25, 0.5, 1.0})},
        {"neutralization_lambda_e", json::array({0.5, 1.0})},
        {"b_grid", json::array({1.5, 2.0, 3.0, 4.0})},
        {"lambda_ell_grid", json::array({5.0, 20.0, 80.0})},
        {"rho_values", json::array({0.0})},
    };
}

namespace {

void check_known_keys(const json& value, const json& schema, const std::string& prefix) {
    if (!value.is_object()) return;
    if (!schema.is_object())
        throw ConfigError("config: '" + prefix + "' should not be an object");
    for (auto it = value.begin(); it != value.end(); ++it) {
        std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (!schema.contains(it.key())) throw ConfigError("config: unknown key '" + path + "'");
        check_known_keys(it.value(), schema.at(it.key()), path);
    }
}

void merge_into(json& base, const json& overlay) {
    for (auto it = overlay.begin(); it != overlay.end(); ++it) {
        if (it.value().is_object() && base.contains(it.key()) && base[it.key()].is_object())
            merge_into(base[it.key()], it.value());
        else
            base[it.key()] = it.value();
    }
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("config: '" + path + "' must be a number");
    return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError("config: '" + path + "' must be an integer");
    return j.get<std::int64_t>();
}

std::vector<double> num_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError("config: '" + path + "' must be an array");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError("config: '" + path + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<int> int_array(const json& j, const std::string& path) {
    std::vector<int> out;
    for (double v : num_array(j, path)) out.push_back(static_cast<int>(v));
    return out;
}

channel::GainModel::Kind gain_kind(const std::string& s) {
    if (s == "unbounded") return channel::GainModel::Kind::unbounded;
    if (s == "bounded") return channel::GainModel::Kind::bounded;
    throw ConfigError("config: unknown gain model '" + s + "'");
}

channel::FadingModel::Kind fading_kind(const std::string& s) {
    using K = channel::FadingModel::Kind;
    if (s == "deterministic") return K::deterministic_unity;
    if (s == "rayleigh") return K::rayleigh;
    if (s == "nakagami") return K::nakagami;
    if (s == "lognormal") return K::lognormal;
    throw ConfigError("config: unknown fading model '" + s + "'");
}

graph::EdgeRule::Kind rule_kind(const std::string& s) {
    using K = graph::EdgeRule::Kind;
    if (s == "baseline") return K::baseline;
    if (s == "fading") return K::fading;
    if (s == "threshold") return K::threshold;
    if (s == "sectorized") return K::sectorized;
    if (s == "neutralized") return K::neutralized;
    if (s == "colluding") return K::colluding;
    throw ConfigError("config: unknown edge rule '" + s + "'");
}

void apply_override(json& cfg, const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + kv + "'");
    std::string path = kv.substr(0, eq);
    std::string raw = kv.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::exception&) {
        value = raw;  // bare strings allowed
    }
    json* node = &cfg;
    std::size_t pos = 0;
    std::string walked;
    for (;;) {
        auto dot = path.find('.', pos);
        std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        walked = walked.empty() ? key : walked + "." + key;
        if (!node->is_object() || !node->contains(key))
            throw ConfigError("config: unknown key '" + walked + "' in --set");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

RunConfig resolve_config(const json& file_json, const std::vector<std::string>& overrides) {
    json cfg = default_config_json();
    if (!file_json.is_object()) throw ConfigError("config: top level must be an object");
    check_known_keys(file_json, cfg, "");
    merge_into(cfg, file_json);
    for (const auto& kv : overrides) apply_override(cfg, kv);

    RunConfig rc;
    rc.resolved = cfg;
    rc.digest = fnv1a_hex(cfg.dump());

    auto& e = rc.exp;
    e.densities.lambda_ell = num(cfg["lambda_ell"], "lambda_ell");
    e.densities.lambda_e = num(cfg["lambda_e"], "lambda_e");

    const json& ch = cfg["channel"];
    e.channel.p_ell = num(ch["p_ell"], "channel.p_ell");
    e.channel.sigma2_ell = num(ch["sigma2_ell"], "channel.sigma2_ell");
    e.channel.sigma2_e = num(ch["sigma2_e"], "channel.sigma2_e");
    e.channel.rho = num(ch["rho"], "channel.rho");
    const json& gn = ch["gain"];
    if (!gn["model"].is_string()) throw ConfigError("config: channel.gain.model must be a string");
    e.channel.gain.kind = gain_kind(gn["model"].get<std::string>());
    e.channel.gain.b = num(gn["b"], "channel.gain.b");
    e.channel.gain.allow_any_b = gn["allow_any_b"].get<bool>();
    const json& fd = ch["fading"];
    if (!fd["model"].is_string())
        throw ConfigError("config: channel.fading.model must be a string");
    e.channel.fading.kind = fading_kind(fd["model"].get<std::string>());
    e.channel.fading.nakagami_m = num(fd["nakagami_m"], "channel.fading.nakagami_m");
    e.channel.fading.sigma_db = num(fd["sigma_db"], "channel.fading.sigma_db");

    const json& er = cfg["edge_rule"];
    if (!er["kind"].is_string()) throw ConfigError("config: edge_rule.kind must be a string");
    e.rule.kind = rule_kind(er["kind"].get<std::string>());
    e.rule.sectors = static_cast<int>(integer(er["sectors"], "edge_rule.sectors"));
    e.rule.neutralization_radius =
        num(er["neutralization_radius"], "edge_rule.neutralization_radius");
    e.rule.allow_low_b = er["allow_low_b"].get<bool>();

    const json& wd = cfg["window"];
    e.window.half_side = num(wd["half_side"], "window.half_side");
    e.window.guard_margin = num(wd["guard_margin"], "window.guard_margin");

    e.trials = integer(cfg["trials"], "trials");
    std::int64_t seed = integer(cfg["seed"], "seed");
    e.master_seed = static_cast<std::uint64_t>(seed);
    e.workers = static_cast<int>(integer(cfg["workers"], "workers"));
    e.histogram_thinning = num(cfg["histogram_thinning"], "histogram_thinning");
    e.neighbor_index = static_cast<int>(integer(cfg["neighbor_index"], "neighbor_index"));
    e.rho_grid = num_array(cfg["rho_grid"], "rho_grid");
    e.lambda_grid = num_array(cfg["lambda_grid"], "lambda_grid");
    e.window_ladder = num_array(cfg["window_ladder"], "window_ladder");
    e.region_area = num(cfg["region_area"], "region_area");
    const json& vo = cfg["voronoi"];
    e.voronoi.samples = static_cast<std::size_t>(integer(vo["samples"], "voronoi.samples"));
    e.voronoi.test_points =
        static_cast<std::size_t>(integer(vo["test_points"], "voronoi.test_points"));
    e.voronoi.half_side = num(vo["half_side"], "voronoi.half_side");

    rc.ratio_grid = num_array(cfg["ratio_grid"], "ratio_grid");
    rc.neighbor_indices = int_array(cfg["neighbor_indices"], "neighbor_indices");
    rc.sectors_grid = int_array(cfg["sectors_grid"], "sectors_grid");
    rc.neutralization_radii = num_array(cfg["neutralization_radii"], "neutralization_radii");
    rc.neutralization_lambda_e =
        num_array(cfg["neutralization_lambda_e"], "neutralization_lambda_e");
    rc.b_grid = num_array(cfg["b_grid"], "b_grid");
    rc.lambda_ell_grid = num_array(cfg["lambda_ell_grid"], "lambda_ell_grid");
    rc.rho_values = num_array(cfg["rho_values"], "rho_values");

    try {
        e.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }
    return rc;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json file_json;
    try {
        file_json = json::parse(in);
    } catch (const json::exception& ex) {
        throw ConfigError("config: parse error in '" + path + "': " + ex.what());
    }
    return resolve_config(file_json, overrides);
}

}  // namespace isg::cli
