#include "qdcav/config.hpp"

#include "qdcav/units.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace qdcav::config {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_key(std::string_view k)
{
    if (k.empty()) return false;
    for (char c : k) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    }
    return true;
}

std::optional<double> parse_double(std::string_view s)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

Value parse_value(std::string_view raw, int line)
{
    Value v;
    v.line = line;
    if (raw.empty()) throw ConfigError(line, "missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') throw ConfigError(line, "unterminated string");
        v.kind = Value::Kind::string;
        v.text = std::string(raw.substr(1, raw.size() - 2));
        return v;
    }
    v.text = std::string(raw);
    if (raw == "true" || raw == "false") {
        v.kind = Value::Kind::boolean;
        v.boolean = raw == "true";
        return v;
    }
    for (std::string_view unit : {"nm", "ns", "ps", "D"}) {
        if (raw.size() > unit.size() && raw.substr(raw.size() - unit.size()) == unit) {
            if (auto num = parse_double(trim(raw.substr(0, raw.size() - unit.size())))) {
                v.kind = Value::Kind::number;
                v.number = *num;
                v.unit = std::string(unit);
                return v;
            }
        }
    }
    if (auto num = parse_double(raw)) {
        v.kind = Value::Kind::number;
        v.number = *num;
        return v;
    }
    if (std::isdigit(static_cast<unsigned char>(raw.front())) || raw.front() == '-' || raw.front() == '+'
        || raw.front() == '.') {
        throw ConfigError(line, fmt::format("malformed number '{}'", raw));
    }
    if (raw.find_first_of(" \t") != std::string_view::npos) {
        throw ConfigError(line, fmt::format("unquoted value '{}' contains whitespace", raw));
    }
    v.kind = Value::Kind::string;
    return v;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, message) : message), line_(line)
{
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::vector<Section> parse(std::string_view text)
{
    std::vector<Section> sections(1);
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        // Strip comments outside quotes.
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
            const auto name = trim(line.substr(1, line.size() - 2));
            if (!valid_key(name)) throw ConfigError(line_no, "invalid section name");
            for (const auto& s : sections) {
                if (s.name == name) throw ConfigError(line_no, fmt::format("duplicate section [{}]", name));
            }
            sections.push_back({std::string(name), line_no, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (!valid_key(key)) throw ConfigError(line_no, fmt::format("invalid key '{}'", key));
        auto& current = sections.back();
        for (const auto& [k, v] : current.entries) {
            if (k == key) throw ConfigError(line_no, fmt::format("duplicate key '{}'", key));
        }
        current.entries.emplace_back(std::string(key), parse_value(trim(line.substr(eq + 1)), line_no));
    }
    return sections;
}

ParamReader::ParamReader(const Section* section, std::string prefix) : section_(section), prefix_(std::move(prefix))
{
}

const Value* ParamReader::find(const std::string& key)
{
    used_.insert(key);
    if (!section_) return nullptr;
    for (const auto& [k, v] : section_->entries) {
        if (k == key) return &v;
    }
    return nullptr;
}

bool ParamReader::has(const std::string& key) const
{
    if (!section_) return false;
    for (const auto& [k, v] : section_->entries) {
        if (k == key) return true;
    }
    return false;
}

ConfigError ParamReader::error(const Value& v, const std::string& message) const
{
    return ConfigError(v.line, message);
}

const Value& ParamReader::require_number(const std::string& key, const Value& v) const
{
    if (v.kind != Value::Kind::number) throw error(v, fmt::format("'{}' expects a number", key));
    return v;
}

double ParamReader::numeric(const std::string& key, std::optional<double> fallback, std::string_view unit,
                            const std::set<std::string>& accepted)
{
    const Value* v = find(key);
    double out = 0.0;
    if (!v) {
        if (!fallback) throw ConfigError(section_ ? section_->line : 0, fmt::format("missing required key '{}'", key));
        out = *fallback;
    } else {
        require_number(key, *v);
        if (!accepted.contains(v->unit)) {
            throw error(*v, fmt::format("'{}' does not accept unit suffix '{}'", key, v->unit));
        }
        out = v->number;
        if (v->unit == "ps") out = units::ps_to_ns(out);
        if (v->unit == "D") out = v->number * units::PhysicalConstants::debye;
    }
    note(unit.empty() ? prefix_ + key : fmt::format("{}{} ({})", prefix_, key, unit), format_number(out));
    return out;
}

double ParamReader::length_nm(const std::string& key, std::optional<double> fallback)
{
    return numeric(key, fallback, "nm", {"", "nm"});
}

double ParamReader::time_ns(const std::string& key, std::optional<double> fallback)
{
    return numeric(key, fallback, "ns", {"", "ns", "ps"});
}

double ParamReader::rate_per_ns(const std::string& key, std::optional<double> fallback, std::string_view unit)
{
    return numeric(key, fallback, unit, {""});
}

double ParamReader::number(const std::string& key, std::optional<double> fallback)
{
    return numeric(key, fallback, "", {""});
}

double ParamReader::dipole_cm(const std::string& key, std::optional<double> fallback)
{
    return numeric(key, fallback, "C m", {"", "D"});
}

std::uint64_t ParamReader::count(const std::string& key, std::optional<std::uint64_t> fallback)
{
    const Value* v = find(key);
    std::uint64_t out = 0;
    if (!v) {
        if (!fallback) throw ConfigError(section_ ? section_->line : 0, fmt::format("missing required key '{}'", key));
        out = *fallback;
    } else {
        require_number(key, *v);
        if (!v->unit.empty() || v->number < 0.0 || v->number != std::floor(v->number) || v->number > 1.8e19) {
            throw error(*v, fmt::format("'{}' expects a non-negative integer", key));
        }
        // Accept exponent notation (1e6) but keep exact integers when written plainly.
        std::uint64_t parsed = 0;
        const auto res = std::from_chars(v->text.data(), v->text.data() + v->text.size(), parsed);
        out = (res.ec == std::errc() && res.ptr == v->text.data() + v->text.size())
                  ? parsed
                  : static_cast<std::uint64_t>(v->number);
    }
    note(prefix_ + key, std::to_string(out));
    return out;
}

bool ParamReader::flag(const std::string& key, std::optional<bool> fallback)
{
    const Value* v = find(key);
    bool out = false;
    if (!v) {
        if (!fallback) throw ConfigError(section_ ? section_->line : 0, fmt::format("missing required key '{}'", key));
        out = *fallback;
    } else {
        if (v->kind != Value::Kind::boolean) throw error(*v, fmt::format("'{}' expects true or false", key));
        out = v->boolean;
    }
    note(prefix_ + key, out ? "true" : "false");
    return out;
}

std::string ParamReader::text(const std::string& key, std::optional<std::string> fallback)
{
    const Value* v = find(key);
    std::string out;
    if (!v) {
        if (!fallback) throw ConfigError(section_ ? section_->line : 0, fmt::format("missing required key '{}'", key));
        out = *fallback;
    } else {
        if (v->kind != Value::Kind::string) throw error(*v, fmt::format("'{}' expects a string", key));
        out = v->text;
    }
    note(prefix_ + key, out);
    return out;
}

void ParamReader::finish() const
{
    if (!section_) return;
    for (const auto& [k, v] : section_->entries) {
        if (!used_.contains(k)) {
            const std::string where = section_->name.empty() ? "top level" : "section [" + section_->name + "]";
            throw ConfigError(v.line, fmt::format("unknown key '{}' in {}", k, where));
        }
    }
}

}  // namespace qdcav::config
