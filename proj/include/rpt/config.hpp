#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpt/bonds.hpp"
#include "rpt/sampler.hpp"

namespace rpt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command = "robustness";
    // [model]
    int d = 2;
    int q = 2;
    std::string J_spec = "selfdual";
    double J = 0.0;  // resolved numeric coupling, echoed in every output
    std::vector<double> eps_list{1.0};
    std::vector<int> L_list{9};
    int r = -1;  // -1: r = (L-3)/2
    BoundaryMode mode = BoundaryMode::WeaklyWiredGhost;
    int annulus_w = 0;
    // [chain]
    long long sweeps = 120000;
    long long burnin = 20000;
    long long thinning = 1;
    std::uint64_t seed = 1;
    int streams = 1;
    InitMode init = InitMode::Auto;
    Kernel kernel = Kernel::SwendsenWang;
    bool collect_edges = false;
    // [output]
    std::string out_dir = "out";
    bool write_csv = true;
    bool write_json = true;
    // [caps]
    int enum_edges = 24;
    long long spin_configs = 100000000;
    int bkl_edges = 16;
    // [contours]
    std::vector<double> c_list{1.0, 2.0, 3.0};

    ChainConfig chain(int stream = 0) const {
        ChainConfig c;
        c.sweeps = sweeps;
        c.burnin = burnin;
        c.thinning = thinning;
        c.seed = seed;
        c.stream = stream;
        c.init = init;
        c.kernel = kernel;
        c.collect_edge_marginals = collect_edges;
        return c;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

inline long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config key '" + key + "': '" + v + "' is not an integer");
    }
}

inline double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
    }
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config key '" + key + "': '" + v + "' is not a boolean");
}

}  // namespace detail

inline BoundaryMode parse_mode(const std::string& s) {
    if (s == "free") return BoundaryMode::Free;
    if (s == "wired-ghost") return BoundaryMode::WiredGhost;
    if (s == "weakly-wired-ghost") return BoundaryMode::WeaklyWiredGhost;
    if (s == "diagonal") return BoundaryMode::Diagonal;
    if (s == "weakly-wired-annulus") return BoundaryMode::WeaklyWiredAnnulus;
    throw ConfigError("unknown boundary mode '" + s + "'");
}

inline void apply_key(RunConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& value) {
    using namespace detail;
    const std::string qual = section.empty() ? key : section + "." + key;
    if (section.empty()) {
        if (key == "command") cfg.command = value;
        else throw ConfigError("unknown config key '" + qual + "'");
    } else if (section == "model") {
        if (key == "d") cfg.d = static_cast<int>(to_int(qual, value));
        else if (key == "q") cfg.q = static_cast<int>(to_int(qual, value));
        else if (key == "J") cfg.J_spec = value;
        else if (key == "eps") cfg.eps_list = {to_real(qual, value)};
        else if (key == "eps_list") {
            cfg.eps_list.clear();
            for (const auto& t : split_list(value)) cfg.eps_list.push_back(to_real(qual, t));
        } else if (key == "L") cfg.L_list = {static_cast<int>(to_int(qual, value))};
        else if (key == "L_list") {
            cfg.L_list.clear();
            for (const auto& t : split_list(value)) cfg.L_list.push_back(static_cast<int>(to_int(qual, t)));
        } else if (key == "r") cfg.r = static_cast<int>(to_int(qual, value));
        else if (key == "mode") cfg.mode = parse_mode(value);
        else if (key == "annulus_w") cfg.annulus_w = static_cast<int>(to_int(qual, value));
        else throw ConfigError("unknown config key '" + qual + "'");
    } else if (section == "chain") {
        if (key == "sweeps") cfg.sweeps = to_int(qual, value);
        else if (key == "burnin") cfg.burnin = to_int(qual, value);
        else if (key == "thinning") cfg.thinning = to_int(qual, value);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(qual, value));
        else if (key == "streams") cfg.streams = static_cast<int>(to_int(qual, value));
        else if (key == "init") {
            if (value == "auto") cfg.init = InitMode::Auto;
            else if (value == "random") cfg.init = InitMode::Random;
            else if (value == "ordered") cfg.init = InitMode::OrderedPlus;
            else throw ConfigError("config key 'chain.init': unknown value '" + value + "'");
        } else if (key == "kernel") {
            if (value == "sw") cfg.kernel = Kernel::SwendsenWang;
            else if (value == "heatbath") cfg.kernel = Kernel::HeatBath;
            else throw ConfigError("config key 'chain.kernel': unknown value '" + value + "'");
        } else if (key == "collect_edges") cfg.collect_edges = to_bool(qual, value);
        else throw ConfigError("unknown config key '" + qual + "'");
    } else if (section == "output") {
        if (key == "dir") cfg.out_dir = value;
        else if (key == "formats") {
            cfg.write_csv = cfg.write_json = false;
            for (const auto& t : split_list(value)) {
                if (t == "csv") cfg.write_csv = true;
                else if (t == "json") cfg.write_json = true;
                else throw ConfigError("config key 'output.formats': unknown format '" + t + "'");
            }
        } else throw ConfigError("unknown config key '" + qual + "'");
    } else if (section == "caps") {
        if (key == "enum_edges") cfg.enum_edges = static_cast<int>(to_int(qual, value));
        else if (key == "spin_configs") cfg.spin_configs = to_int(qual, value);
        else if (key == "bkl_edges") cfg.bkl_edges = static_cast<int>(to_int(qual, value));
        else throw ConfigError("unknown config key '" + qual + "'");
    } else if (section == "contours") {
        if (key == "c_list") {
            cfg.c_list.clear();
            for (const auto& t : split_list(value)) cfg.c_list.push_back(to_real(qual, t));
        } else throw ConfigError("unknown config key '" + qual + "'");
    } else {
        throw ConfigError("unknown config section '" + section + "'");
    }
}

inline void resolve_and_validate(RunConfig& cfg) {
    static const std::vector<std::string> commands = {
        "enumerate", "sample", "robustness", "diagonal", "fkg-check", "contours", "bkl-check"};
    bool known = false;
    for (const auto& c : commands) known = known || c == cfg.command;
    if (!known) throw ConfigError("unknown command '" + cfg.command + "'");
    if (cfg.d < 1) throw ConfigError("model.d must be >= 1");
    if (cfg.q < 1) throw ConfigError("model.q must be >= 1");
    if (cfg.J_spec == "selfdual") cfg.J = selfdual_coupling(static_cast<double>(cfg.q));
    else cfg.J = detail::to_real("model.J", cfg.J_spec);
    if (cfg.J < 0.0) throw ConfigError("model.J must be >= 0");
    if (cfg.eps_list.empty()) throw ConfigError("model.eps_list must not be empty");
    for (double e : cfg.eps_list)
        if (e < 0.0 || e > 1.0) throw ConfigError("model.eps must lie in [0,1]");
    if (cfg.L_list.empty()) throw ConfigError("model.L_list must not be empty");
    const bool cutset_mode = cfg.mode == BoundaryMode::WeaklyWiredGhost ||
                             cfg.mode == BoundaryMode::Diagonal ||
                             cfg.mode == BoundaryMode::WeaklyWiredAnnulus;
    for (int L : cfg.L_list) {
        if (L < 1) throw ConfigError("model.L must be >= 1");
        if (cutset_mode && L % 2 == 0)
            throw ConfigError("model.L must be odd for cutset experiments");
    }
    if (cfg.sweeps < 1 || cfg.burnin < 0 || cfg.burnin >= cfg.sweeps)
        throw ConfigError("chain.burnin must lie in [0, chain.sweeps)");
    if (cfg.thinning < 1) throw ConfigError("chain.thinning must be >= 1");
    if (cfg.streams < 1) throw ConfigError("chain.streams must be >= 1");
    if (cfg.enum_edges < 1 || cfg.enum_edges > 40) throw ConfigError("caps.enum_edges must lie in [1,40]");
}

// Applies flat-section key=value text onto cfg without final validation.
inline void parse_config_text(RunConfig& cfg, const std::string& text) {
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        apply_key(cfg, section, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
}

// Flat-section key=value text, '#' comments. Unknown keys are hard errors.
inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    parse_config_text(cfg, text);
    resolve_and_validate(cfg);
    return cfg;
}

inline std::string emit_config(const RunConfig& cfg) {
    std::ostringstream out;
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    out << "command = " << cfg.command << "\n\n[model]\n";
    out << "d = " << cfg.d << "\nq = " << cfg.q << "\nJ = " << num(cfg.J) << "\n";
    out << "eps_list = ";
    for (std::size_t i = 0; i < cfg.eps_list.size(); ++i)
        out << (i ? "," : "") << num(cfg.eps_list[i]);
    out << "\nL_list = ";
    for (std::size_t i = 0; i < cfg.L_list.size(); ++i) out << (i ? "," : "") << cfg.L_list[i];
    out << "\nr = " << cfg.r << "\nmode = " << to_string(cfg.mode)
        << "\nannulus_w = " << cfg.annulus_w << "\n";
    out << "\n[chain]\n";
    out << "sweeps = " << cfg.sweeps << "\nburnin = " << cfg.burnin
        << "\nthinning = " << cfg.thinning << "\nseed = " << cfg.seed
        << "\nstreams = " << cfg.streams << "\ninit = "
        << (cfg.init == InitMode::Auto ? "auto"
            : cfg.init == InitMode::Random ? "random" : "ordered")
        << "\nkernel = " << (cfg.kernel == Kernel::SwendsenWang ? "sw" : "heatbath")
        << "\ncollect_edges = " << (cfg.collect_edges ? "true" : "false") << "\n";
    out << "\n[output]\ndir = " << cfg.out_dir << "\nformats = ";
    if (cfg.write_csv) out << "csv";
    if (cfg.write_csv && cfg.write_json) out << ",";
    if (cfg.write_json) out << "json";
    out << "\n\n[caps]\nenum_edges = " << cfg.enum_edges
        << "\nspin_configs = " << cfg.spin_configs << "\nbkl_edges = " << cfg.bkl_edges << "\n";
    out << "\n[contours]\nc_list = ";
    for (std::size_t i = 0; i < cfg.c_list.size(); ++i) out << (i ? "," : "") << num(cfg.c_list[i]);
    out << "\n";
    return out.str();
}

}  // namespace rpt
