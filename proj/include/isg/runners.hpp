#pragma once

#include <string>
#include <vector>

#include "isg/config.hpp"
#include "isg/csv.hpp"

namespace isg::cli {

/// CSV tables produced by one subcommand run.
struct RunOutput {
    std::vector<CsvTable> tables;
};

RunOutput run_degrees(const RunConfig& rc);
RunOutput run_isolation(const RunConfig& rc);
RunOutput run_msr(const RunConfig& rc);
RunOutput run_enhance(const RunConfig& rc);
RunOutput run_collude(const RunConfig& rc);
RunOutput run_percolation(const RunConfig& rc);
RunOutput run_fullconn(const RunConfig& rc);

/// Dispatch by subcommand name; throws ConfigError for unknown names.
RunOutput run_subcommand(const std::string& name, const RunConfig& rc);

}  // namespace isg::cli
