#include "qdcav/cli.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <stdexcept>
#include <system_error>
#include <unistd.h>

namespace qdcav::cli {

namespace {

std::string csv_cell(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) return fmt::format("{:.17g}", *d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

nlohmann::ordered_json json_cell(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
    return std::get<std::string>(c);
}

}  // namespace

std::string render(const Output& output, Format format, const std::optional<std::string>& timestamp)
{
    if (format == Format::csv) {
        std::string s;
        if (timestamp) s += fmt::format("# generated = {}\n", *timestamp);
        for (const auto& [k, v] : output.header) s += fmt::format("# {} = {}\n", k, v);
        for (std::size_t i = 0; i < output.columns.size(); ++i) {
            s += (i ? "," : "") + output.columns[i];
        }
        s += '\n';
        for (const auto& row : output.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_cell(row[i]);
            s += '\n';
        }
        return s;
    }
    auto doc = nlohmann::ordered_json::array();
    nlohmann::ordered_json head;
    head["_header"] = true;
    if (timestamp) head["generated"] = *timestamp;
    for (const auto& [k, v] : output.header) head[k] = v;
    doc.push_back(std::move(head));
    for (const auto& row : output.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[output.columns[i]] = json_cell(row[i]);
        doc.push_back(std::move(obj));
    }
    return doc.dump(2) + "\n";
}

void write_atomically(const std::filesystem::path& path, std::string_view content)
{
    auto tmp = path;
    tmp += fmt::format(".tmp.{}", static_cast<long>(::getpid()));
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        os.flush();
        if (!os) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot move output into place: " + path.string());
    }
}

}  // namespace qdcav::cli
