#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "isg/montecarlo.hpp"

namespace isg::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parsed experiment file: the single-point ExperimentConfig plus the sweep
/// grids the subcommands iterate over.
struct RunConfig {
    mc::ExperimentConfig exp;

    // Sweeps.
    std::vector<double> ratio_grid;             // isolation: lambda_e / lambda_ell
    std::vector<int> neighbor_indices;          // msr
    std::vector<int> sectors_grid;              // enhance
    std::vector<double> neutralization_radii;   // enhance
    std::vector<double> neutralization_lambda_e;// enhance
    std::vector<double> b_grid;                 // collude
    std::vector<double> lambda_ell_grid;        // fullconn
    std::vector<double> rho_values;             // percolation threshold sweep

    nlohmann::json resolved;  // defaults + file + overrides, canonical form
    std::string digest;       // stable hash of `resolved`
};

/// The full default configuration (documents the schema).
nlohmann::json default_config_json();

/// Parse + validate. `overrides` are dotted key=value pairs from --set;
/// unknown keys anywhere are a ConfigError.
RunConfig resolve_config(const nlohmann::json& file_json,
                         const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// FNV-1a 64 as a fixed-width hex string; platform-independent for identical
/// canonical text.
std::string fnv1a_hex(const std::string& text);

std::string tool_version();

}  // namespace isg::cli
