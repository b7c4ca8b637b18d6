#pragma once

#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace catlab::cli {

// -- configuration -----------------------------------------------------------

/// Flat key=value settings. Every key must be known; values are kept as text
/// and converted on access.
class Config {
public:
    /// Defaults for `subcommand` (grid size differs between the spectral and
    /// the dynamical subcommands).
    static Config defaults(const std::string& subcommand);
    static bool known(const std::string& key);
    static const std::vector<std::string>& keys();

    /// Parses `key = value` lines; '#' starts a comment. Throws UsageError on
    /// unknown keys or malformed lines.
    void merge_file(const std::string& path);
    void merge_text(const std::string& text, const std::string& origin = "<text>");
    void set(const std::string& key, const std::string& value);

    const std::string& text(const std::string& key) const;
    double number(const std::string& key) const;
    long integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;

    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// -- output --------------------------------------------------------------------

/// Shortest decimal text that reads back to the same double.
std::string fmt(double v);

/// Directory from CATENOID_LAB_OUTDIR (default ./out), created on demand.
std::string output_dir();

/// CSV file with one header row and ',' separators.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);
    void row_text(const std::vector<std::string>& values);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
    std::ofstream out_;
    std::size_t columns_;
};

// -- manifests -----------------------------------------------------------------

struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> config;
    std::string code_version;
    std::string started;
    std::string finished;
    std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& m);
RunManifest read_manifest(const std::string& path);
std::string code_version();
std::string timestamp_now();

// -- verification suite -----------------------------------------------------------

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

/// Identity and oracle checks: null form, variational identity, zero-mode
/// annihilation, and the second-order right-hand-side oracle.
std::vector<CheckResult> verification_suite(unsigned seed = 20240607);

// -- entry point ------------------------------------------------------------------

/// Exit codes: 0 success (including guard-terminated runs), 2 usage,
/// 3 verification failure, 4 numerically inconclusive.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace catlab::cli
