#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "isg/config.hpp"
#include "isg/csv.hpp"
#include "isg/montecarlo.hpp"
#include "isg/quadrature.hpp"
#include "isg/runners.hpp"
#include "isg/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::int64_t seed = -1;
    std::int64_t trials = -1;
    int workers = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Experiment config (JSON)");
    cmd->add_option("--out", args.out_dir, "Output directory for CSV files and manifest");
    cmd->add_option("--set", args.overrides, "Override a config key, e.g. --set lambda_e=0.4");
    cmd->add_option("--seed", args.seed, "Master seed (overrides config)");
    cmd->add_option("--trials", args.trials, "Trial count (overrides config)");
    cmd->add_option("--workers", args.workers,
                    "Worker threads; affects speed only, never results");
}

isg::cli::RunConfig load(const CommonArgs& args) {
    std::vector<std::string> overrides = args.overrides;
    if (args.seed >= 0) overrides.push_back("seed=" + std::to_string(args.seed));
    if (args.trials >= 0) overrides.push_back("trials=" + std::to_string(args.trials));
    if (args.workers >= 0) overrides.push_back("workers=" + std::to_string(args.workers));
    if (args.config_path.empty()) return isg::cli::resolve_config(nlohmann::json::object(), overrides);
    return isg::cli::load_config(args.config_path, overrides);
}

int write_outputs(const isg::cli::RunConfig& rc, const isg::cli::RunOutput& output,
                  const CommonArgs& args, double seconds) {
    isg::cli::RunManifest manifest;
    manifest.config_digest = rc.digest;
    manifest.master_seed = rc.exp.master_seed;
    manifest.tool_version = isg::cli::tool_version();
    manifest.duration_seconds = seconds;
    for (const auto& table : output.tables)
        manifest.outputs.push_back(isg::cli::write_csv_file(args.out_dir, table));
    std::string mpath = isg::cli::write_manifest(args.out_dir, manifest);
    for (const auto& p : manifest.outputs) std::cout << "wrote " << p << "\n";
    std::cout << "wrote " << mpath << "\n";
    return kExitOk;
}

/// Writes one sampled iS-graph instance (trial 0 of the config) in the
/// line-oriented dump format.
void dump_instance(const isg::cli::RunConfig& rc, const std::string& path) {
    const auto& e = rc.exp;
    std::uint64_t seed = isg::rng::mix_seed(
        {e.master_seed, isg::rng::key(isg::rng::Stream::points), 0, 0, 0});
    auto engine = isg::rng::make_engine(seed);
    auto w = e.resolved_window();
    auto legit = isg::spatial::sample_poisson(e.densities.lambda_ell, w, engine);
    auto eves = isg::spatial::sample_poisson(e.densities.lambda_e, w, engine,
                                             isg::spatial::PointKind::eavesdropper);
    auto g = isg::graph::build(legit, eves, e.rule, e.channel,
                               isg::rng::mix_seed({seed, isg::rng::key(isg::rng::Stream::fading)}));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open dump file " + path);
    isg::graph::write_dump(out, g);
    std::cout << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"iS-graph simulation and analysis toolkit"};
    app.require_subcommand(1);

    const std::vector<std::string> names = {"degrees", "isolation", "msr",        "enhance",
                                            "collude", "percolation", "fullconn"};
    CommonArgs args;
    std::string dump_path;
    std::vector<CLI::App*> cmds;
    for (const auto& n : names) {
        auto* cmd = app.add_subcommand(n, "Run the '" + n + "' experiment sweep");
        add_common(cmd, args);
        if (n == "degrees")
            cmd->add_option("--dump-graph", dump_path,
                            "Also write one sampled graph instance to this path");
        cmds.push_back(cmd);
    }
    auto* validate = app.add_subcommand("validate", "Run the Monte Carlo vs analytic cross-check suite");
    add_common(validate, args);
    std::vector<int> criteria;
    validate->add_option("--criteria", criteria, "Subset of criteria numbers (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        auto rc = load(args);
        auto start = std::chrono::steady_clock::now();

        if (validate->parsed()) {
            isg::validation::Options opts;
            opts.master_seed = rc.exp.master_seed;
            opts.workers = rc.exp.workers;
            auto results = isg::validation::run(criteria, opts, &std::cout);
            isg::cli::CsvTable table("validation", {"config_digest", "criterion", "name", "pass",
                                                    "seconds", "details"});
            bool all_pass = true;
            for (const auto& r : results) {
                all_pass = all_pass && r.pass;
                table.add_row({rc.digest, static_cast<std::int64_t>(r.number), r.name,
                               std::string(r.pass ? "1" : "0"), r.seconds, r.details});
            }
            isg::cli::RunOutput output;
            output.tables.push_back(std::move(table));
            double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_outputs(rc, output, args, secs);
            return all_pass ? kExitOk : kExitValidationFailure;
        }

        for (std::size_t i = 0; i < names.size(); ++i) {
            if (!cmds[i]->parsed()) continue;
            auto output = isg::cli::run_subcommand(names[i], rc);
            if (names[i] == "degrees" && !dump_path.empty()) dump_instance(rc, dump_path);
            double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return write_outputs(rc, output, args, secs);
        }
        std::cerr << "no subcommand selected\n";
        return kExitConfigError;
    } catch (const isg::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const isg::quad::ToleranceNotMet& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntimeError;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
}
