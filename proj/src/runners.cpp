#include "isg/runners.hpp"

#include <cmath>

#include "isg/analytic.hpp"
#include "isg/montecarlo.hpp"

namespace isg::cli {

namespace {

/// Per-sweep-point seed: keeps grid points on independent streams while the
/// whole run stays a pure function of the master seed.
std::uint64_t point_seed(const RunConfig& rc, std::uint64_t tag, std::uint64_t idx) {
    return rng::mix_seed({rc.exp.master_seed, rng::key(rng::Stream::grid_index), tag, idx});
}

Cell num(double v) { return Cell{v}; }
Cell count(std::size_t v) { return Cell{v}; }

}  // namespace

RunOutput run_degrees(const RunConfig& rc) {
    auto res = mc::estimate_degrees(rc.exp);
    analytic::DensityPair d = rc.exp.densities;

    RunOutput out;
    CsvTable summary("degrees_summary",
                     {"config_digest", "rule", "lambda_ell", "lambda_e", "trials",
                      "interior_nodes", "mean_out", "se_out", "mean_in", "se_in",
                      "analytic_avg_degree"});
    summary.add_row({rc.digest, std::string(graph::to_string(rc.exp.rule.kind)),
                     num(d.lambda_ell), num(d.lambda_e), Cell{rc.exp.trials},
                     count(res.interior_nodes), num(res.mean_out.mean),
                     num(res.mean_out.std_error), num(res.mean_in.mean),
                     num(res.mean_in.std_error), num(analytic::avg_degree(d))});
    out.tables.push_back(std::move(summary));

    CsvTable pmf("degrees_pmf", {"config_digest", "degree", "count_out", "freq_out", "count_in",
                                 "freq_in", "pmf_geometric"});
    const auto& ho = res.histogram.out_degree;
    const auto& hi = res.histogram.in_degree;
    std::size_t width = std::max(ho.counts.size(), hi.counts.size());
    for (std::size_t k = 0; k < width; ++k) {
        std::size_t co = k < ho.counts.size() ? ho.counts[k] : 0;
        std::size_t ci = k < hi.counts.size() ? hi.counts[k] : 0;
        pmf.add_row({rc.digest, count(k), count(co),
                     num(static_cast<double>(co) / static_cast<double>(ho.total)), count(ci),
                     num(static_cast<double>(ci) / static_cast<double>(hi.total)),
                     num(analytic::out_degree_pmf(static_cast<std::int64_t>(k), d))});
    }
    out.tables.push_back(std::move(pmf));
    return out;
}

RunOutput run_isolation(const RunConfig& rc) {
    spatial::Window vw{rc.exp.voronoi.half_side, 0.0};
    auto areas = spatial::sample_voronoi_areas(
        rng::mix_seed({rc.exp.master_seed, rng::key(rng::Stream::voronoi)}),
        rc.exp.voronoi.samples, rc.exp.voronoi.test_points, vw, rc.exp.workers);

    CsvTable table("isolation",
                   {"config_digest", "lambda_ell", "lambda_e", "ratio_e_over_ell", "trials",
                    "interior_nodes", "p_out_mc", "p_out_se", "p_out_analytic", "p_in_mc",
                    "p_in_se", "p_in_voronoi", "p_in_voronoi_se"});
    for (std::size_t ri = 0; ri < rc.ratio_grid.size(); ++ri) {
        double ratio = rc.ratio_grid[ri];
        mc::ExperimentConfig cfg = rc.exp;
        cfg.densities.lambda_e = cfg.densities.lambda_ell * ratio;
        cfg.master_seed = point_seed(rc, 0x150ULL, ri);
        auto iso = mc::estimate_isolation(cfg);
        auto pin = analytic::p_in_isol(cfg.densities, areas);
        table.add_row({rc.digest, num(cfg.densities.lambda_ell), num(cfg.densities.lambda_e),
                       num(ratio), Cell{cfg.trials}, count(iso.interior_nodes),
                       num(iso.p_out_isol.mean), num(iso.p_out_isol.std_error),
                       num(analytic::p_out_isol(cfg.densities)), num(iso.p_in_isol.mean),
                       num(iso.p_in_isol.std_error), num(pin.mean), num(pin.std_error)});
    }
    RunOutput out;
    out.tables.push_back(std::move(table));
    return out;
}

RunOutput run_msr(const RunConfig& rc) {
    const auto& d = rc.exp.densities;
    const double b = rc.exp.channel.gain.b;
    const double snr = rc.exp.channel.snr();

    CsvTable existence("msr_existence", {"config_digest", "neighbor_index", "trials",
                                         "p_exist_mc", "p_exist_se", "p_exist_analytic"});
    CsvTable outage("msr_outage", {"config_digest", "neighbor_index", "rho", "outage_mc",
                                   "outage_se", "cdf_quadrature"});
    std::vector<double> grid = rc.exp.rho_grid;
    if (grid.empty())
        for (int k = 0; k <= 32; ++k) grid.push_back(0.25 * k);

    for (std::size_t ii = 0; ii < rc.neighbor_indices.size(); ++ii) {
        int i = rc.neighbor_indices[ii];
        mc::ExperimentConfig cfg = rc.exp;
        cfg.master_seed = point_seed(rc, 0x350ULL, ii);
        auto res = mc::estimate_msr_outage(cfg, i, grid);
        existence.add_row({rc.digest, Cell{static_cast<std::int64_t>(i)}, Cell{cfg.trials},
                           num(res.existence.mean), num(res.existence.std_error),
                           num(analytic::p_exist(i, d))});
        for (std::size_t g = 0; g < grid.size(); ++g) {
            outage.add_row({rc.digest, Cell{static_cast<std::int64_t>(i)}, num(grid[g]),
                            num(res.outage[g].mean), num(res.outage[g].std_error),
                            num(analytic::msr_cdf(grid[g], i, d, b, snr))});
        }
    }
    RunOutput out;
    out.tables.push_back(std::move(existence));
    out.tables.push_back(std::move(outage));
    return out;
}

RunOutput run_enhance(const RunConfig& rc) {
    CsvTable sect("enhance_sectorized", {"config_digest", "sectors", "trials", "interior_nodes",
                                         "mean_out", "se_out", "analytic_avg_degree"});
    for (std::size_t si = 0; si < rc.sectors_grid.size(); ++si) {
        int L = rc.sectors_grid[si];
        mc::ExperimentConfig cfg = rc.exp;
        cfg.rule.kind = graph::EdgeRule::Kind::sectorized;
        cfg.rule.sectors = L;
        cfg.master_seed = point_seed(rc, 0x5EC7ULL, si);
        auto res = mc::estimate_degrees(cfg);
        sect.add_row({rc.digest, Cell{static_cast<std::int64_t>(L)}, Cell{cfg.trials},
                      count(res.interior_nodes), num(res.mean_out.mean),
                      num(res.mean_out.std_error),
                      num(analytic::avg_degree_sectorized(cfg.densities, L))});
    }

    CsvTable neut("enhance_neutralized",
                  {"config_digest", "lambda_e", "radius", "trials", "interior_nodes", "mean_out",
                   "se_out", "lower_bound"});
    std::size_t point = 0;
    for (double lambda_e : rc.neutralization_lambda_e) {
        for (double radius : rc.neutralization_radii) {
            mc::ExperimentConfig cfg = rc.exp;
            cfg.densities.lambda_e = lambda_e;
            cfg.rule.kind = graph::EdgeRule::Kind::neutralized;
            cfg.rule.neutralization_radius = radius;
            if (cfg.window.guard_margin < 0.0)
                cfg.window.guard_margin = mc::neutralization_guard_margin(
                    cfg.densities.lambda_ell, lambda_e, radius);
            cfg.master_seed = point_seed(rc, 0xE0ULL, point++);
            auto res = mc::estimate_degrees(cfg);
            neut.add_row({rc.digest, num(lambda_e), num(radius), Cell{cfg.trials},
                          count(res.interior_nodes), num(res.mean_out.mean),
                          num(res.mean_out.std_error),
                          num(analytic::avg_degree_neutralized_lb(cfg.densities, radius))});
        }
    }
    RunOutput out;
    out.tables.push_back(std::move(sect));
    out.tables.push_back(std::move(neut));
    return out;
}

RunOutput run_collude(const RunConfig& rc) {
    CsvTable table("collude",
                   {"config_digest", "b", "trials", "interior_nodes", "mean_out", "se_out",
                    "analytic_avg_degree", "normalized_mc", "sinc_1_over_b"});
    for (std::size_t bi = 0; bi < rc.b_grid.size(); ++bi) {
        double b = rc.b_grid[bi];
        mc::ExperimentConfig cfg = rc.exp;
        cfg.rule.kind = graph::EdgeRule::Kind::colluding;
        cfg.channel.gain.b = b;
        if (cfg.window.guard_margin < 0.0)
            cfg.window.guard_margin = mc::colluding_guard_margin(b, cfg.densities.lambda_e);
        cfg.master_seed = point_seed(rc, 0xC0ULL, bi);
        auto res = mc::estimate_degrees(cfg);
        double ratio = cfg.densities.ratio();
        table.add_row({rc.digest, num(b), Cell{cfg.trials}, count(res.interior_nodes),
                       num(res.mean_out.mean), num(res.mean_out.std_error),
                       num(analytic::avg_degree_colluding(cfg.densities, b)),
                       num(res.mean_out.mean / ratio), num(analytic::sinc(1.0 / b))});
    }
    RunOutput out;
    out.tables.push_back(std::move(table));
    return out;
}

RunOutput run_percolation(const RunConfig& rc) {
    CsvTable table("percolation",
                   {"config_digest", "rho", "window_half", "lambda_ell", "trials", "p_out",
                    "se_out", "p_in", "se_in", "p_weak", "se_weak", "p_strong", "se_strong"});
    CsvTable crossings("percolation_crossings", {"config_digest", "rho", "window_half", "kind",
                                                 "level", "crossing", "ci_lo", "ci_hi"});
    using graph::ComponentKind;
    for (std::size_t pi = 0; pi < rc.rho_values.size(); ++pi) {
        mc::ExperimentConfig cfg = rc.exp;
        if (cfg.window_ladder.empty()) {
            double s = 1.0 / std::sqrt(cfg.densities.lambda_e);
            cfg.window_ladder = {10.0 * s, 20.0 * s, 40.0 * s};
        }
        if (cfg.lambda_grid.empty()) {
            for (double x : {1.5, 2.25, 2.75, 3.25, 3.75, 4.25, 4.75, 5.25, 5.75, 6.25, 6.75, 7.5})
                cfg.lambda_grid.push_back(x * cfg.densities.lambda_e);
        }
        cfg.channel.rho = rc.rho_values[pi];
        if (cfg.channel.rho > 0.0 && cfg.rule.kind == graph::EdgeRule::Kind::baseline)
            cfg.rule.kind = graph::EdgeRule::Kind::threshold;
        cfg.master_seed = point_seed(rc, 0x9E2ULL, pi);
        auto tbl = mc::estimate_percolation(cfg);
        for (std::size_t wi = 0; wi < tbl.window_ladder.size(); ++wi) {
            for (std::size_t li = 0; li < tbl.lambda_grid.size(); ++li) {
                const auto& cell = tbl.cell(wi, li);
                auto po = cell.p_infinity(ComponentKind::out);
                auto pin = cell.p_infinity(ComponentKind::in);
                auto pw = cell.p_infinity(ComponentKind::weak);
                auto ps = cell.p_infinity(ComponentKind::strong);
                table.add_row({rc.digest, num(cfg.channel.rho), num(cell.window_half),
                               num(cell.lambda_ell), count(cell.trials), num(po.mean),
                               num(po.std_error), num(pin.mean), num(pin.std_error),
                               num(pw.mean), num(pw.std_error), num(ps.mean),
                               num(ps.std_error)});
            }
            for (auto kind : {ComponentKind::out, ComponentKind::in, ComponentKind::weak,
                              ComponentKind::strong}) {
                auto cr = tbl.crossing(wi, kind, 0.5, cfg.master_seed);
                if (!std::isfinite(cr.crossing)) continue;  // curve never reaches the level
                crossings.add_row({rc.digest, num(cfg.channel.rho),
                                   num(tbl.window_ladder[wi]),
                                   std::string(graph::to_string(kind)), num(0.5),
                                   num(cr.crossing), num(cr.ci_lo), num(cr.ci_hi)});
            }
        }
    }
    RunOutput out;
    out.tables.push_back(std::move(table));
    out.tables.push_back(std::move(crossings));
    return out;
}

RunOutput run_fullconn(const RunConfig& rc) {
    CsvTable table("fullconn",
                   {"config_digest", "lambda_ell", "lambda_e", "region_area", "trials",
                    "p_out_con", "p_out_con_se", "p_in_con", "p_in_con_se",
                    "in_con_upper_bound"});
    for (std::size_t li = 0; li < rc.lambda_ell_grid.size(); ++li) {
        mc::ExperimentConfig cfg = rc.exp;
        cfg.densities.lambda_ell = rc.lambda_ell_grid[li];
        cfg.master_seed = point_seed(rc, 0xFCULL, li);
        auto res = mc::estimate_full_connectivity(cfg);
        table.add_row({rc.digest, num(cfg.densities.lambda_ell), num(cfg.densities.lambda_e),
                       num(cfg.region_area), Cell{cfg.trials}, num(res.p_out_con.mean),
                       num(res.p_out_con.std_error), num(res.p_in_con.mean),
                       num(res.p_in_con.std_error),
                       num(analytic::in_conn_upper_bound(cfg.densities.lambda_e,
                                                         cfg.region_area))});
    }
    RunOutput out;
    out.tables.push_back(std::move(table));
    return out;
}

RunOutput run_subcommand(const std::string& name, const RunConfig& rc) {
    if (name == "degrees") return run_degrees(rc);
    if (name == "isolation") return run_isolation(rc);
    if (name == "msr") return run_msr(rc);
    if (name == "enhance") return run_enhance(rc);
    if (name == "collude") return run_collude(rc);
    if (name == "percolation") return run_percolation(rc);
    if (name == "fullconn") return run_fullconn(rc);
    throw ConfigError("unknown subcommand '" + name + "'");
}

}  // namespace isg::cli
