#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "catlab/cli.hpp"
#include "catlab/error.hpp"

namespace catlab::cli {

namespace {

const std::map<std::string, std::string>& base_defaults() {
    static const std::map<std::string, std::string> d = {
        {"grid.y_max", "100"},
        {"grid.n", "4096"},
        {"spectrum.tolerance", "1e-12"},
        {"modes.y_window", "20"},
        {"modes.spacing", "0.005"},
        {"evo.cfl", "0.25"},
        {"evo.t_max", "10"},
        {"evo.boundary", "outgoing"},
        {"evo.hyperbolicity_floor", "1e-6"},
        {"evo.regularity_margin", "0.05"},
        {"evo.snapshot_stride", "10"},
        {"evo.halt_on_contamination", "false"},
        {"evo.boundary_buffer", "5"},
        {"evo.suppress_unstable_mode", "false"},
        {"data.preset", "zero"},
        {"data.amplitude", "0"},
        {"data.width", "2"},
        {"data.project", "false"},
        {"data.file", ""},
        {"data.v_preset", "zero"},
        {"data.v_amplitude", "0"},
        {"data.v_width", "2"},
        {"data.v_project", "false"},
        {"data.v_file", ""},
        {"data.a", "0"},
        {"analysis.sigma", "0.5"},
        {"analysis.max_order", "2"},
        {"analysis.gamma", "true"},
        {"output.snapshots", "true"},
        {"output.snapshot_every", "1"},
        {"fate.h_cap_factor", "10"},
        {"fate.h_cap_offset", "0.01"},
        {"fate.rate_tolerance", "0.2"},
        {"shoot.a_lo", "-0.001"},
        {"shoot.a_hi", "0.001"},
        {"shoot.tol_a", "0"},
        {"shoot.max_bisections", "40"},
        {"shoot.rule", "full"},
        {"shoot.undecided", "extend"},
        {"shoot.max_extensions", "3"},
        {"shoot.lipschitz_deltas", ""},
        {"shoot.threads", "0"},
        {"cylinder.r0", "1"},
        {"cylinder.v0", "0"},
        {"cylinder.dt", "1e-4"},
        {"cylinder.t_max", "3"},
        {"cylinder.r_min", "1e-6"},
        {"cylinder.stride", "100"},
        {"verify.seed", "20240607"},
    };
    return d;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::defaults(const std::string& subcommand) {
    Config c;
    c.values_ = base_defaults();
    if (subcommand == "spectrum") {
        c.values_["grid.y_max"] = "40";
        c.values_["grid.n"] = "8000";
    } else if (subcommand == "shoot") {
        c.values_["evo.t_max"] = "60";
        c.values_["evo.snapshot_stride"] = "5";
        c.values_["data.preset"] = "gaussian";
        c.values_["data.amplitude"] = "0.01";
        c.values_["data.project"] = "true";
    } else if (subcommand == "linear") {
        c.values_["evo.suppress_unstable_mode"] = "true";
    }
    return c;
}

bool Config::known(const std::string& key) { return base_defaults().count(key) != 0; }

const std::vector<std::string>& Config::keys() {
    static const std::vector<std::string> k = [] {
        std::vector<std::string> out;
        for (const auto& [key, v] : base_defaults()) out.push_back(key);
        return out;
    }();
    return k;
}

void Config::set(const std::string& key, const std::string& value) {
    if (!known(key)) throw UsageError("unknown configuration key '" + key + "'");
    values_[key] = value;
}

void Config::merge_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream msg;
            msg << origin << ":" << lineno << ": expected key=value";
            throw UsageError(msg.str());
        }
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void Config::merge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    merge_text(ss.str(), path);
}

const std::string& Config::text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw UsageError("unknown configuration key '" + key + "'");
    return it->second;
}

double Config::number(const std::string& key) const {
    const std::string& v = text(key);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw UsageError("key " + key + " expects a number, got '" + v + "'");
    return out;
}

long Config::integer(const std::string& key) const {
    const std::string& v = text(key);
    long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw UsageError("key " + key + " expects an integer, got '" + v + "'");
    return out;
}

bool Config::flag(const std::string& key) const {
    std::string v = text(key);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw UsageError("key " + key + " expects true/false, got '" + v + "'");
}

std::vector<double> Config::numbers(const std::string& key) const {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text(key));
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size())
            throw UsageError("key " + key + " expects a comma-separated list of numbers");
        out.push_back(v);
    }
    return out;
}

}  // namespace catlab::cli
