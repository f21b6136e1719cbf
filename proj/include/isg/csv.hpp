#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace isg::cli {

/// CSV cell: text, integer, or real. Non-finite reals abort the run; a NaN in
/// an output table always indicates a bug upstream.
using Cell = std::variant<std::string, std::int64_t, std::size_t, double>;

std::string format_cell(const Cell& cell);

/// Header-first CSV with a fixed column set; every row is written through
/// format_cell so output bytes depend only on the values.
class CsvTable {
  public:
    CsvTable(std::string name, std::vector<std::string> columns);

    void add_row(const std::vector<Cell>& cells);
    void write(std::ostream& os) const;
    /// Full file contents (header + rows).
    std::string to_string() const;
    const std::string& name() const { return name_; }

  private:
    std::string name_;
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

/// Writes table to `<dir>/<table.name()>.csv`, creating the directory.
/// Returns the file path.
std::string write_csv_file(const std::string& dir, const CsvTable& table);

struct RunManifest {
    std::string config_digest;
    std::uint64_t master_seed = 0;
    std::string tool_version;
    double duration_seconds = 0.0;
    std::vector<std::string> outputs;
};

std::string write_manifest(const std::string& dir, const RunManifest& manifest);

}  // namespace isg::cli
