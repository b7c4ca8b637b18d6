#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "catlab/cli.hpp"
#include "catlab/error.hpp"

#ifndef CATLAB_VERSION
#define CATLAB_VERSION "unknown"
#endif

namespace catlab::cli {

std::string code_version() { return CATLAB_VERSION; }

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["subcommand"] = m.subcommand;
    j["code_version"] = m.code_version;
    j["started"] = m.started;
    j["finished"] = m.finished;
    j["config"] = m.config;
    j["outputs"] = m.outputs;
    return j.dump(2) + "\n";
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read manifest " + path);
    nlohmann::json j;
    try {
        in >> j;
        RunManifest m;
        m.subcommand = j.at("subcommand").get<std::string>();
        m.config = j.at("config").get<std::map<std::string, std::string>>();
        m.code_version = j.value("code_version", "");
        m.started = j.value("started", "");
        m.finished = j.value("finished", "");
        m.outputs = j.value("outputs", std::vector<std::string>{});
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("malformed manifest " + path + ": " + e.what());
    }
}

}  // namespace catlab::cli
