#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "rpt/config.hpp"
#include "rpt/contour.hpp"
#include "rpt/exact.hpp"
#include "rpt/experiments.hpp"
#include "rpt/io.hpp"
#include "rpt/sampler.hpp"
#include "rpt/transfer.hpp"

namespace rpt {

namespace detail {

inline void run_enumerate(const RunConfig& cfg, nlohmann::json& summary,
                          std::vector<std::string>& csv) {
    const int L = cfg.L_list.front();
    const double eps = cfg.eps_list.front();
    const int r = cfg.r >= 0 ? cfg.r : std::max(0, (L - 3) / 2);
    ModelSetup m = build_model(cfg.d, L, cfg.mode, r, cfg.J, eps, cfg.annulus_w);
    ExactResult ex = enumerate_fk(m.lat, m.bonds, cfg.q, m.lat.has_ghost, cfg.enum_edges);
    nlohmann::json j;
    j["log_z"] = ex.log_z;
    j["theta"] = ex.theta;
    j["edge_marginal"] = ex.edge_marginal;
    j["origin_marginal"] = ex.origin_marginal;
    j["n_configs"] = ex.n_configs;
    summary["exact"] = j;
    CsvRow row;
    row.d = cfg.d;
    row.q = cfg.q;
    row.J = cfg.J;
    row.eps = eps;
    row.L = L;
    row.r = m.has_cutset ? m.cut.radius : -1;
    row.mode = to_string(cfg.mode);
    row.theta = ex.theta;
    row.tv = ex.theta * (1.0 - 1.0 / cfg.q);
    row.n_samples = 0;
    row.seed = cfg.seed;
    csv.push_back(row.line());
}

inline void run_sample(const RunConfig& cfg, nlohmann::json& summary,
                       std::vector<std::string>& csv) {
    const int L = cfg.L_list.front();
    const double eps = cfg.eps_list.front();
    const int r = cfg.r >= 0 ? cfg.r : std::max(0, (L - 3) / 2);
    ModelSetup m = build_model(cfg.d, L, cfg.mode, r, cfg.J, eps, cfg.annulus_w);
    std::vector<ChainResult> results(static_cast<std::size_t>(cfg.streams));
    parallel_for(cfg.streams, [&](int s) {
        results[s] = run_chain(m.lat, m.bonds, cfg.q, cfg.chain(s));
    });
    for (int s = 0; s < cfg.streams; ++s) {
        const MarginalEstimate& me = results[s].marginal;
        CsvRow row;
        row.d = cfg.d;
        row.q = cfg.q;
        row.J = cfg.J;
        row.eps = eps;
        row.L = L;
        row.r = m.has_cutset ? m.cut.radius : -1;
        row.mode = to_string(cfg.mode);
        row.theta = me.theta;
        row.theta_se = me.theta_se;
        row.tv = me.theta * (1.0 - 1.0 / cfg.q);
        row.tv_se = me.theta_se * (1.0 - 1.0 / cfg.q);
        row.n_samples = me.n_samples;
        row.seed = cfg.seed;
        csv.push_back(row.line());
        nlohmann::json j;
        j["stream"] = s;
        j["origin_marginal"] = me.prob;
        j["origin_marginal_se"] = me.se;
        j["theta"] = me.theta;
        j["theta_se"] = me.theta_se;
        j["ess"] = me.ess;
        j["n_samples"] = me.n_samples;
        if (cfg.collect_edges) {
            j["edge_mean"] = results[s].edge_mean;
            j["edge_se"] = results[s].edge_se;
        }
        summary["chains"].push_back(j);
    }
}

inline void run_scan(const RunConfig& cfg, BoundaryMode mode, nlohmann::json& summary,
                     std::vector<std::string>& csv) {
    for (double eps : cfg.eps_list) {
        RobustnessCurve curve = robustness_scan(cfg.d, cfg.q, cfg.J, eps, cfg.L_list, mode,
                                                cfg.chain(0), cfg.enum_edges, cfg.r,
                                                cfg.annulus_w);
        for (const auto& row : curve_rows(curve, cfg.seed)) csv.push_back(row.line());
        summary["curves"].push_back(curve_to_json(curve));
    }
}

inline void run_fkg_check(const RunConfig& cfg, nlohmann::json& summary,
                          std::vector<std::string>& csv) {
    const int L = cfg.L_list.front();
    const int r = cfg.r >= 0 ? cfg.r : std::max(0, (L - 3) / 2);
    std::vector<double> eps = cfg.eps_list;
    std::sort(eps.begin(), eps.end());
    bool pass = true;

    std::vector<double> thetas;
    for (double e : eps) {
        ModelSetup m = build_model(cfg.d, L, cfg.mode, r, cfg.J, e, cfg.annulus_w);
        double theta;
        if (m.lat.n_edges() <= cfg.enum_edges)
            theta = enumerate_fk(m.lat, m.bonds, cfg.q, m.lat.has_ghost, cfg.enum_edges).theta;
        else if (cfg.d == 2 && m.lat.has_ghost)
            theta = wired_theta_exact(m.lat, m.bonds, cfg.q).theta;
        else
            throw CapExceeded("fkg-check: lattice exceeds the enumeration cap and no exact "
                              "d=2 path applies");
        thetas.push_back(theta);
        CsvRow row;
        row.d = cfg.d;
        row.q = cfg.q;
        row.J = cfg.J;
        row.eps = e;
        row.L = L;
        row.r = r;
        row.mode = to_string(cfg.mode);
        row.theta = theta;
        row.tv = theta * (1.0 - 1.0 / cfg.q);
        row.seed = cfg.seed;
        csv.push_back(row.line());
    }
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        const bool ok = thetas[i + 1] >= thetas[i] - 1e-12;
        pass = pass && ok;
        summary["theta_monotone"].push_back(
            {{"eps_low", eps[i]}, {"eps_high", eps[i + 1]}, {"theta_low", thetas[i]},
             {"theta_high", thetas[i + 1]}, {"ok", ok}});
    }

    // event-wise domination on enumerable lattices
    ModelSetup probe = build_model(cfg.d, L, cfg.mode, r, cfg.J, eps.front(), cfg.annulus_w);
    if (probe.lat.n_edges() <= cfg.enum_edges) {
        std::vector<EventSpec> events;
        if (probe.lat.has_ghost) events.push_back({EventSpec::OriginToGhost, 0});
        for (int e = 0; e < probe.lat.n_edges(); ++e) events.push_back({EventSpec::EdgeOccupied, e});
        events.push_back({EventSpec::CountAtLeast, static_cast<int>(probe.lat.n_edges() / 2)});
        for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
            ModelSetup weak_m = build_model(cfg.d, L, cfg.mode, r, cfg.J, eps[i], cfg.annulus_w);
            ModelSetup strong_m = build_model(cfg.d, L, cfg.mode, r, cfg.J, eps[i + 1], cfg.annulus_w);
            DominationReport rep = check_event_domination(strong_m.lat, strong_m.bonds,
                                                          weak_m.bonds, cfg.q, events,
                                                          cfg.enum_edges);
            pass = pass && rep.pass;
            nlohmann::json jr;
            jr["eps_weak"] = eps[i];
            jr["eps_strong"] = eps[i + 1];
            jr["pass"] = rep.pass;
            for (const auto& row : rep.rows)
                jr["events"].push_back({{"event", row.event.label()},
                                        {"p_strong", row.p_strong},
                                        {"p_weak", row.p_weak},
                                        {"ok", row.ok}});
            summary["domination"].push_back(jr);
        }
    }
    summary["pass"] = pass;
    if (!pass) throw std::runtime_error("fkg-check: an event-wise FKG inequality failed");
}

inline void run_contours(const RunConfig& cfg, nlohmann::json& summary,
                         std::vector<std::string>& csv, std::string& csv_header) {
    if (cfg.d != 2) throw std::invalid_argument("contours: d=2 only");
    const int L = cfg.L_list.front();
    const double eps = cfg.eps_list.front();
    const int r = cfg.r >= 0 ? cfg.r : std::max(0, (L - 3) / 2);
    ModelSetup m = build_model(cfg.d, L, cfg.mode, r, cfg.J, eps, cfg.annulus_w);
    Sampler s(m.lat, m.bonds, cfg.q, cfg.seed, 0);
    s.init(cfg.init);
    ContourCensus census;
    for (long long i = 0; i < cfg.burnin; ++i) s.sw_sweep();
    const long long n_meas = (cfg.sweeps - cfg.burnin) / cfg.thinning;
    for (long long i = 0; i < n_meas; ++i) {
        for (long long t = 0; t < cfg.thinning; ++t) s.sw_sweep();
        census.add(s.spins(), m.lat, m.bonds);
    }
    csv_header = "schema_version,ell,p_hat,se";
    for (double C : cfg.c_list) csv_header += ",log_rhs_C" + fmt_num(C);
    for (const auto& row : census.histogram()) {
        std::string line = std::to_string(kSchemaVersion) + "," + std::to_string(row.ell) + "," +
                           fmt_num(row.p_hat) + "," + fmt_num(row.se);
        for (double C : cfg.c_list)
            line += "," + fmt_num(ContourCensus::log_peierls_rhs(row.ell, cfg.q, C));
        csv.push_back(line);
    }
    const SlopeFit fit = census.log_slope();
    summary["n_samples"] = census.n_samples();
    summary["log_slope"] = fit.slope;
    summary["log_slope_se"] = fit.slope_se;
    summary["slope_fit_ok"] = fit.ok;
}

inline void run_bkl_check(const RunConfig& cfg, nlohmann::json& summary,
                          std::vector<std::string>& csv, std::string& csv_header) {
    if (cfg.d != 2) throw std::invalid_argument("bkl-check: d=2 only");
    const int L = cfg.L_list.front();
    const double eps = cfg.eps_list.front();
    Lattice lat = build_lattice(2, L, false);
    Cutset cut;
    BondMap bonds;
    if (cfg.r >= 0) {
        cut = build_cutset(lat, cfg.r);
        bonds = make_bonds(lat, cfg.J, &cut, eps);
    } else {
        bonds = make_bonds(lat, cfg.J);
    }
    BklCheckReport rep = constrained_partition_check(lat, bonds, cfg.q, -1.0, cfg.bkl_edges);
    csv_header = "schema_version,pattern,compatible,ln_z,rhs,holds";
    for (const auto& row : rep.rows)
        csv.push_back(std::to_string(kSchemaVersion) + "," + std::to_string(row.pattern) + "," +
                      (row.compatible ? "1" : "0") + "," +
                      (row.compatible ? fmt_num(row.ln_z) : std::string("-inf")) + "," +
                      fmt_num(row.rhs) + "," + (row.holds ? "1" : "0"));
    summary["n_patterns"] = rep.n_patterns;
    summary["n_compatible"] = rep.n_compatible;
    summary["n_violations"] = rep.n_violations;
}

}  // namespace detail

// Runs the configured experiment and writes its artifacts. Returns 0 on
// completion; refusals (caps, geometry) surface as exceptions for the CLI to
// translate into a nonzero exit.
inline int dispatch(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(cfg.out_dir);

    nlohmann::json summary = summary_skeleton(cfg);
    std::vector<std::string> csv;
    std::string csv_header = kCsvHeader;

    if (cfg.command == "enumerate") detail::run_enumerate(cfg, summary, csv);
    else if (cfg.command == "sample") detail::run_sample(cfg, summary, csv);
    else if (cfg.command == "robustness") detail::run_scan(cfg, cfg.mode, summary, csv);
    else if (cfg.command == "diagonal") detail::run_scan(cfg, BoundaryMode::Diagonal, summary, csv);
    else if (cfg.command == "fkg-check") detail::run_fkg_check(cfg, summary, csv);
    else if (cfg.command == "contours") detail::run_contours(cfg, summary, csv, csv_header);
    else if (cfg.command == "bkl-check") detail::run_bkl_check(cfg, summary, csv, csv_header);
    else throw ConfigError("unknown command '" + cfg.command + "'");

    const auto t1 = std::chrono::steady_clock::now();
    summary["wall_time_s"] = std::chrono::duration<double>(t1 - t0).count();

    if (cfg.write_csv)
        write_csv(fs::path(cfg.out_dir) / (cfg.command + ".csv"), csv_header, csv);
    if (cfg.write_json)
        write_json(fs::path(cfg.out_dir) / (cfg.command + ".json"), summary);
    return 0;
}

}  // namespace rpt
