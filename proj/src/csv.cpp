#include "isg/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace isg::cli {

std::string format_cell(const Cell& cell) {
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    if (const auto* u = std::get_if<std::size_t>(&cell)) return std::to_string(*u);
    double v = std::get<double>(cell);
    if (!std::isfinite(v))
        throw std::runtime_error("csv: refusing to write a non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

CsvTable::CsvTable(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<Cell>& cells) {
    if (cells.size() != columns_.size())
        throw std::runtime_error("csv: row width does not match header of " + name_);
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += format_cell(cells[i]);
    }
    rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& os) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) os << ',';
        os << columns_[i];
    }
    os << '\n';
    for (const auto& r : rows_) os << r << '\n';
}

std::string CsvTable::to_string() const {
    std::ostringstream ss;
    write(ss);
    return ss.str();
}

std::string write_csv_file(const std::string& dir, const CsvTable& table) {
    std::filesystem::create_directories(dir);
    std::string path = (std::filesystem::path(dir) / (table.name() + ".csv")).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    table.write(out);
    return path;
}

std::string write_manifest(const std::string& dir, const RunManifest& manifest) {
    std::filesystem::create_directories(dir);
    nlohmann::json j{
        {"config_digest", manifest.config_digest},
        {"master_seed", manifest.master_seed},
        {"tool_version", manifest.tool_version},
        {"duration_seconds", manifest.duration_seconds},
        {"outputs", manifest.outputs},
    };
    std::string path = (std::filesystem::path(dir) / "run_manifest.json").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("manifest: cannot open " + path);
    out << j.dump(2) << '\n';
    return path;
}

}  // namespace isg::cli
