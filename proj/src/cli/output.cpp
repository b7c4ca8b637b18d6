#include <charconv>
#include <cstdlib>
#include <filesystem>

#include "catlab/cli.hpp"
#include "catlab/error.hpp"

namespace catlab::cli {

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::string output_dir() {
    const char* env = std::getenv("CATENOID_LAB_OUTDIR");
    std::string dir = (env != nullptr && *env != '\0') ? env : "./out";
    std::filesystem::create_directories(dir);
    return dir;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path), columns_(header.size()) {
    if (!out_) throw Error("cannot write " + path);
    row_text(header);
}

void CsvWriter::row_text(const std::vector<std::string>& values) {
    if (values.size() != columns_) throw Error("csv row width mismatch in " + path_);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << values[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> text;
    text.reserve(values.size());
    for (double v : values) text.push_back(fmt(v));
    row_text(text);
}

}  // namespace catlab::cli
