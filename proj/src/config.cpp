#include "ccg/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ccg::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' has non-numeric value '" +
                          v + "'");
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    ExperimentConfig cfg;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " has an empty key or value");
        if (cfg.values_.count(key))
            throw ConfigError("config: duplicate key '" + key + "'");
        cfg.values_[key] = value;
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::empty() { return ExperimentConfig{}; }

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

bool ExperimentConfig::has(const std::string& key) const {
    return values_.count(key) > 0;
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string ExperimentConfig::require_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError("config: missing required key '" + key + "'");
    return it->second;
}

long ExperimentConfig::get_long(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const double v = parse_double(key, it->second);
    if (v != std::floor(v))
        throw ConfigError("config: key '" + key + "' must be an integer");
    return static_cast<long>(v);
}

double ExperimentConfig::get_double(const std::string& key,
                                    double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config: key '" + key + "' must be true/false");
}

std::uint64_t ExperimentConfig::require_seed() const {
    const auto it = values_.find("seed");
    if (it == values_.end())
        throw ConfigError(
            "config: 'seed' is required (no wall-clock default by design)");
    try {
        return static_cast<std::uint64_t>(std::stoull(it->second));
    } catch (...) {
        throw ConfigError("config: 'seed' must be a non-negative integer");
    }
}

std::vector<double> ExperimentConfig::get_grid(
    const std::string& key, const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        if (fallback.empty())
            throw ConfigError("config: missing required grid '" + key + "'");
        return fallback;
    }
    std::vector<double> grid;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) grid.push_back(parse_double(key, item));
    }
    if (grid.empty())
        throw ConfigError("config: grid '" + key + "' is empty");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw ConfigError("config: grid '" + key + "' must be sorted ascending");
    return grid;
}

std::vector<long> ExperimentConfig::get_dims(
    const std::string& key, const std::vector<long>& fallback) const {
    const auto grid = get_grid(
        key, std::vector<double>(fallback.begin(), fallback.end()));
    std::vector<long> dims;
    for (double v : grid) {
        if (v != std::floor(v) || v < 1)
            throw ConfigError("config: '" + key + "' must list positive integers");
        dims.push_back(static_cast<long>(v));
    }
    return dims;
}

dist::DistributionSpec ExperimentConfig::spec() const {
    const std::string family = get_string("family", "gaussian");
    const int n = static_cast<int>(get_long("n", 16));
    const bool iso = get_bool("isotropic", true);
    try {
        if (family == "gaussian") return dist::DistributionSpec::gaussian_spec(n);
        if (family == "product_exponential")
            return dist::DistributionSpec::product_exponential_spec(n, iso);
        if (family == "uniform_cube")
            return dist::DistributionSpec::cube_spec(n, iso);
        if (family == "uniform_simplex")
            return dist::DistributionSpec::simplex_spec(n, iso);
        if (family == "uniform_lp_ball")
            return dist::DistributionSpec::lp_ball_spec(n, get_double("p", 2.0),
                                                        iso);
        if (family == "sconcave_gc") {
            const std::string g = get_string("gauge", "l2");
            if (g != "l2" && g != "l1")
                throw ConfigError("config: gauge must be l2 or l1");
            return dist::DistributionSpec::sconcave_spec(
                n, get_double("r", 4.0),
                g == "l2" ? dist::Gauge::l2 : dist::Gauge::l1, iso);
        }
        if (family == "oracle_uniform") {
            const auto body = std::make_shared<vol::ConvexBody>(
                vol::parse_body(require_string("body")));
            return dist::DistributionSpec::oracle_uniform_spec(
                body, get_long("walk_budget", 0));
        }
    } catch (const dist::SpecError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    throw ConfigError("config: unknown family '" + family + "'");
}

void ExperimentConfig::check_allowed(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_) {
        if (!allowed.count(k) && !common_keys().count(k))
            throw ConfigError("config: unknown key '" + k + "'");
    }
}

const std::set<std::string>& common_keys() {
    static const std::set<std::string> keys = {
        "experiment", "seed", "out", "replicas", "workers",
        "family",     "n",    "p",   "r",        "gauge",
        "isotropic",  "body", "walk_budget",
    };
    return keys;
}

}  // namespace ccg::cli
