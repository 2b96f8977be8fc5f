#include "ghostfd/app/config.hpp"

#include "ghostfd/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace ghostfd::app {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "market.spot",        "market.rate",        "market.rate_breakpoints", "market.dividend",
        "market.dividend_breakpoints", "market.vol", "market.vol_breakpoints",
        "contract.barrier",   "contract.maturity",  "contract.rebate",
        "grid.kind",          "grid.steps",         "grid.smax",
        "scheme.kind",        "scheme.steps",       "scheme.divergence_bound", "scheme.alpha",
        "scheme.snapshots",
        "table1.smax",
        "error_curve.steps",  "error_curve.n_min",  "error_curve.n_max",       "error_curve.points",
        "error_curve.dense_lo", "error_curve.dense_hi", "error_curve.dense_points",
        "profile.snapshots",  "profile.window",
        "output.path",        "output.format",      "output.svg",
    };
    return keys;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
    return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError("'" + key + "': expected a non-negative integer, got '" + text + "'");
    return v;
}

bool to_bool(const std::string& key, std::string text) {
    text = trim(text);
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw ConfigError("'" + key + "': expected a boolean, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(to_double(key, item));
    return out;
}

std::vector<std::size_t> to_counts(const std::string& key, const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& item : split_list(text)) out.push_back(to_count(key, item));
    return out;
}

TermStructure to_term_structure(const KeyValues& kv, const std::string& name, double fallback) {
    const std::string key = "market." + name;
    const auto values_it = kv.find(key);
    const auto bp_it = kv.find(key + "_breakpoints");
    std::vector<double> values = values_it == kv.end() ? std::vector<double>{fallback} : to_doubles(key, values_it->second);
    std::vector<double> breakpoints = bp_it == kv.end() ? std::vector<double>{} : to_doubles(key + "_breakpoints", bp_it->second);
    try {
        return TermStructure(std::move(breakpoints), std::move(values));
    } catch (const ghostfd::Error& e) {
        throw ConfigError("'" + key + "': " + e.what());
    }
}

}  // namespace

KeyValues parse_ini(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    KeyValues out;
    for (const auto& [section, node] : tree) {
        if (node.empty()) {
            if (!node.data().empty())
                throw ConfigError("config parse error: key '" + section + "' outside of a [section]");
            continue;
        }
        for (const auto& [key, leaf] : node) {
            // Inline comments after a value are not part of INI; strip '#' suffixes.
            std::string value = leaf.get_value<std::string>();
            if (const auto hash = value.find('#'); hash != std::string::npos) value.erase(hash);
            out[section + "." + key] = trim(value);
        }
    }
    return out;
}

KeyValues load_ini_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ini(buf.str());
}

KeyValues env_overrides(const char* const* environ_block, const std::string& prefix) {
    KeyValues out;
    if (environ_block == nullptr) return out;
    for (const char* const* e = environ_block; *e != nullptr; ++e) {
        const std::string entry(*e);
        if (entry.rfind(prefix, 0) != 0) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string name = entry.substr(prefix.size(), eq - prefix.size());
        std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
        // Section names may themselves contain '_' (error_curve): match against the known keys.
        for (const auto& key : known_keys()) {
            std::string flat = key;
            std::replace(flat.begin(), flat.end(), '.', '_');
            if (flat == name) {
                out[key] = entry.substr(eq + 1);
                break;
            }
        }
    }
    return out;
}

RunConfig default_config() { return build_config({}); }

RunConfig build_config(const std::vector<KeyValues>& layers) {
    KeyValues kv;
    for (const auto& layer : layers)
        for (const auto& [k, v] : layer) kv[k] = v;
    for (const auto& [k, v] : kv)
        if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");

    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    RunConfig cfg;
    cfg.market.spot = 6317.80;
    cfg.market.rate = to_term_structure(kv, "rate", 0.0);
    cfg.market.dividend = to_term_structure(kv, "dividend", 0.0);
    cfg.market.vol = to_term_structure(kv, "vol", 0.20);
    if (auto v = get("market.spot")) cfg.market.spot = to_double("market.spot", *v);

    cfg.contract.barrier = 7581.36;
    cfg.contract.maturity = 1.0;
    cfg.contract.rebate = 1.0;
    if (auto v = get("contract.barrier")) cfg.contract.barrier = to_double("contract.barrier", *v);
    if (auto v = get("contract.maturity")) cfg.contract.maturity = to_double("contract.maturity", *v);
    if (auto v = get("contract.rebate")) cfg.contract.rebate = to_double("contract.rebate", *v);

    if (auto v = get("grid.kind")) {
        const std::string kind = trim(*v);
        if (kind == "uniform" || kind == "ghost" || kind == "uniform-ghost")
            cfg.grid.kind = GridKind::Uniform;
        else if (kind == "on_node" || kind == "on-node" || kind == "barrier-on-node" || kind == "stretched")
            cfg.grid.kind = GridKind::BarrierOnNode;
        else
            throw ConfigError("'grid.kind': expected uniform or on_node, got '" + kind + "'");
    }
    if (auto v = get("grid.steps")) cfg.grid.steps = to_count("grid.steps", *v);
    if (auto v = get("grid.smax")) cfg.grid.smax = to_double("grid.smax", *v);

    cfg.scheme.steps = 3600;
    if (auto v = get("scheme.kind")) {
        try {
            cfg.scheme.kind = parse_scheme(trim(*v));
        } catch (const ghostfd::Error& e) {
            throw ConfigError(std::string("'scheme.kind': ") + e.what());
        }
    }
    if (auto v = get("scheme.steps")) cfg.scheme.steps = to_count("scheme.steps", *v);
    if (auto v = get("scheme.divergence_bound")) cfg.scheme.divergence_bound = to_double("scheme.divergence_bound", *v);
    if (auto v = get("scheme.alpha")) cfg.scheme.alpha = to_double("scheme.alpha", *v);
    if (auto v = get("scheme.snapshots")) cfg.scheme.snapshot_steps = to_counts("scheme.snapshots", *v);

    if (auto v = get("table1.smax")) cfg.table1_smax = to_doubles("table1.smax", *v);

    auto& ec = cfg.error_curve;
    if (auto v = get("error_curve.steps")) ec.steps = to_counts("error_curve.steps", *v);
    if (auto v = get("error_curve.n_min")) ec.n_min = to_count("error_curve.n_min", *v);
    if (auto v = get("error_curve.n_max")) ec.n_max = to_count("error_curve.n_max", *v);
    if (auto v = get("error_curve.points")) ec.points = to_count("error_curve.points", *v);
    if (auto v = get("error_curve.dense_lo")) ec.dense_lo = to_count("error_curve.dense_lo", *v);
    if (auto v = get("error_curve.dense_hi")) ec.dense_hi = to_count("error_curve.dense_hi", *v);
    if (auto v = get("error_curve.dense_points")) ec.dense_points = to_count("error_curve.dense_points", *v);

    if (auto v = get("profile.snapshots")) cfg.profile.snapshots = to_counts("profile.snapshots", *v);
    if (auto v = get("profile.window")) cfg.profile.window = to_count("profile.window", *v);

    if (auto v = get("output.path")) cfg.output_path = trim(*v);
    if (auto v = get("output.format")) {
        const std::string f = trim(*v);
        if (f == "csv")
            cfg.output_format = OutputFormat::Csv;
        else if (f == "json")
            cfg.output_format = OutputFormat::Json;
        else
            throw ConfigError("'output.format': expected csv or json, got '" + f + "'");
    }
    if (auto v = get("output.svg")) cfg.emit_svg = to_bool("output.svg", *v);

    try {
        cfg.market.validate();
        cfg.contract.validate();
        cfg.scheme.validate();
    } catch (const ghostfd::Error& e) {
        throw ConfigError(e.what());
    }
    if (cfg.grid.steps < 3) throw ConfigError("'grid.steps' must be at least 3");
    if (ec.n_min < 1 || ec.n_max < ec.n_min) throw ConfigError("error_curve needs 1 <= n_min <= n_max");
    if (cfg.profile.snapshots.empty()) throw ConfigError("'profile.snapshots' must list at least one step");
    return cfg;
}

SpatialGrid make_grid(const RunConfig& cfg) {
    const double smax = cfg.grid.smax.value_or(default_smax(cfg.market, cfg.contract.maturity));
    if (cfg.grid.kind == GridKind::BarrierOnNode) return build_barrier_on_node(smax, cfg.grid.steps, cfg.contract.barrier);
    return build_uniform(smax, cfg.grid.steps, cfg.contract.barrier);
}

}  // namespace ghostfd::app
