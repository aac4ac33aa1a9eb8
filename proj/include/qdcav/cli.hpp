#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qdcav::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

enum class Format { csv, json };

using Cell = std::variant<double, std::int64_t, std::string>;

// Result of one scenario: the echoed parameter/result header plus a table.
// Column names carry their units (e.g. "lifetime_ps").
struct Output {
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// CSV: "# key = value" header lines, then the column row, then data.
// JSON: array of flat objects; the first has "_header": true and carries the
// header entries, the rest are rows keyed by column name.
std::string render(const Output& output, Format format, const std::optional<std::string>& timestamp);

// Writes to a sibling temporary file and renames it into place.
void write_atomically(const std::filesystem::path& path, std::string_view content);

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
    std::optional<Format> format;
    unsigned threads = 1;
    bool timestamp = true;
    std::filesystem::path base_dir = ".";  // resolves relative paths inside the config
};

// Parses and executes one scenario. Diagnostics go to `err`; when no output
// path is configured the rendered result goes to `out`.
int run_scenario(std::string_view config_text, const RunOptions& options, std::ostream& out, std::ostream& err);

// Command-line entry point (flags: --config, --seed, --out, --format,
// --threads, --no-timestamp).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct ReportOptions {
    std::uint64_t seed = 1;
    std::uint64_t mc_pulses = 200000;
    std::uint64_t hom_trials = 20000;
    unsigned threads = 1;
};

struct ReportRow {
    std::string claim;
    double computed = 0.0;
    std::string unit;
    std::string reference;  // reference figure being reproduced
    std::string context;
    std::string criterion;  // what "pass" means for this row
    bool pass = false;
};

std::vector<ReportRow> reproduction_report(const ReportOptions& options);

}  // namespace qdcav::cli
