#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpt/config.hpp"
#include "rpt/experiments.hpp"
#include "rpt/sampler.hpp"

namespace rpt {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCsvHeader =
    "schema_version,d,q,J,epsilon,L,r,mode,theta,theta_se,tv,tv_se,n_samples,seed";

inline std::string fmt_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return std::string(buf);
}

struct CsvRow {
    int d = 0, q = 0;
    double J = 0.0, eps = 0.0;
    int L = 0, r = -1;
    std::string mode;
    double theta = 0.0, theta_se = 0.0, tv = 0.0, tv_se = 0.0;
    long long n_samples = 0;
    std::uint64_t seed = 0;

    std::string line() const {
        std::string s = std::to_string(kSchemaVersion);
        s += "," + std::to_string(d) + "," + std::to_string(q) + "," + fmt_num(J);
        s += "," + fmt_num(eps) + "," + std::to_string(L) + "," + std::to_string(r);
        s += "," + mode + "," + fmt_num(theta) + "," + fmt_num(theta_se);
        s += "," + fmt_num(tv) + "," + fmt_num(tv_se) + "," + std::to_string(n_samples);
        s += "," + std::to_string(seed);
        return s;
    }
};

inline std::vector<CsvRow> curve_rows(const RobustnessCurve& c, std::uint64_t seed) {
    std::vector<CsvRow> rows;
    for (const auto& p : c.points) {
        CsvRow r;
        r.d = c.d;
        r.q = c.q;
        r.J = c.J;
        r.eps = c.eps;
        r.L = p.L;
        r.r = c.r_override >= 0 ? c.r_override : std::max(0, (p.L - 3) / 2);
        r.mode = to_string(c.mode);
        r.theta = p.theta;
        r.theta_se = p.theta_se;
        r.tv = p.tv;
        r.tv_se = p.tv_se;
        r.n_samples = p.n_samples;
        r.seed = seed;
        rows.push_back(r);
    }
    return rows;
}

inline void write_csv(const std::filesystem::path& path, const std::string& header,
                      const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << header << "\n";
    for (const auto& l : lines) out << l << "\n";
}

// Every JSON artifact embeds the fully resolved config, schema version, and
// RNG algorithm name; the timestamp lives only here so CSV bodies stay
// byte-reproducible.
inline nlohmann::json summary_skeleton(const RunConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = cfg.command;
    j["config"]["model"] = {{"d", cfg.d},
                            {"q", cfg.q},
                            {"J", cfg.J},
                            {"eps_list", cfg.eps_list},
                            {"L_list", cfg.L_list},
                            {"r", cfg.r},
                            {"mode", to_string(cfg.mode)},
                            {"annulus_w", cfg.annulus_w}};
    j["config"]["chain"] = {{"sweeps", cfg.sweeps},
                            {"burnin", cfg.burnin},
                            {"thinning", cfg.thinning},
                            {"seed", cfg.seed},
                            {"streams", cfg.streams}};
    j["config"]["caps"] = {{"enum_edges", cfg.enum_edges},
                           {"spin_configs", cfg.spin_configs},
                           {"bkl_edges", cfg.bkl_edges}};
    j["config_text"] = emit_config(cfg);
    j["resolved_J"] = cfg.J;
    j["rng"] = kRngName;
    j["seed"] = cfg.seed;
    const auto now = std::chrono::system_clock::now();
    j["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    return j;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

inline nlohmann::json curve_to_json(const RobustnessCurve& c) {
    nlohmann::json j;
    j["d"] = c.d;
    j["q"] = c.q;
    j["J"] = c.J;
    j["eps"] = c.eps;
    j["mode"] = to_string(c.mode);
    j["slope"] = c.slope;
    j["slope_se"] = c.slope_se;
    j["verdict"] = c.verdict;
    for (const auto& p : c.points) {
        j["points"].push_back({{"L", p.L},
                               {"theta", p.theta},
                               {"theta_se", p.theta_se},
                               {"tv", p.tv},
                               {"tv_se", p.tv_se},
                               {"boundary_term_scale", p.boundary_scale},
                               {"n_samples", p.n_samples}});
    }
    return j;
}

}  // namespace rpt
