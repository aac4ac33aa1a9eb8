#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qdcav::config {

// Configuration problem; `line` is 0 when no single line is to blame.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

struct Value {
    enum class Kind { number, boolean, string };
    Kind kind = Kind::string;
    double number = 0.0;
    std::string unit;  // "", "nm", "ns", "ps", "D"
    bool boolean = false;
    std::string text;  // original text (unquoted for strings)
    int line = 0;
};

struct Section {
    std::string name;  // "" for keys before any header
    int line = 0;
    std::vector<std::pair<std::string, Value>> entries;
};

// Line-based `key = value` with `[section]` headers and `#` comments.
// Values: numbers with optional nm|ns|ps|D suffix, true/false, bare words or
// "quoted strings". Duplicate keys and sections are rejected.
std::vector<Section> parse(std::string_view text);

// Typed, strict access to one section. Every key read is recorded together
// with its resolved canonical value; `finish()` rejects keys never read.
class ParamReader {
public:
    explicit ParamReader(const Section* section, std::string prefix = {});

    double length_nm(const std::string& key, std::optional<double> fallback);
    double time_ns(const std::string& key, std::optional<double> fallback);
    double rate_per_ns(const std::string& key, std::optional<double> fallback, std::string_view unit = "1/ns");
    double number(const std::string& key, std::optional<double> fallback);
    double dipole_cm(const std::string& key, std::optional<double> fallback);
    std::uint64_t count(const std::string& key, std::optional<std::uint64_t> fallback);
    bool flag(const std::string& key, std::optional<bool> fallback);
    std::string text(const std::string& key, std::optional<std::string> fallback);

    bool has(const std::string& key) const;
    void finish() const;

    void note(std::string key, std::string value) { resolved_.emplace_back(std::move(key), std::move(value)); }
    const std::vector<std::pair<std::string, std::string>>& resolved() const { return resolved_; }

private:
    const Value* find(const std::string& key);
    const Value& require_number(const std::string& key, const Value& v) const;
    double numeric(const std::string& key, std::optional<double> fallback, std::string_view unit,
                   const std::set<std::string>& accepted);
    ConfigError error(const Value& v, const std::string& message) const;

    const Section* section_;
    std::string prefix_;
    std::set<std::string> used_;
    std::vector<std::pair<std::string, std::string>> resolved_;
};

std::string format_number(double v);

}  // namespace qdcav::config
