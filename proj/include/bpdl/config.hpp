#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpdl/core_space.hpp"
#include "bpdl/errors.hpp"
#include "bpdl/fke.hpp"
#include "bpdl/io.hpp"
#include "bpdl/limits.hpp"
#include "bpdl/meanfield.hpp"

namespace bpdl {

struct mf_config {
    measure nu0;
    double T = 1.0;
    solver_options opts;
};

struct particles_config {
    measure nu0;
    double n = 1.0;
    double T = 1.0;
    long long runs = 1;
    long long total = -1; // optional exact particle count; -1 = round n*nu0(T)
};

struct fke_config {
    measure nu0;
    double n = 1.0;
    int N_max = 1;
    double T = 1.0;
    std::string p0 = "tilted"; // or "stationary"
    fke_options opts;
    double scale_plus = 1.0; // flux rescaling probes for the balance report
    double scale_minus = 1.0;
    double space_cap = 2e6;
};

struct entropy_config {
    std::vector<double> f;
    measure nu_bar;
    std::vector<double> ns;
    double tail_tol = 1e-10;
};

struct chaos_config {
    measure nu0;
    std::vector<double> ns;
    chaos_options opts;
};

struct concentrate_config {
    measure nu0;
    std::vector<double> f;
    std::vector<double> ns;
    concentration_options opts;
};

struct superpose_config {
    ensemble_spec ensemble;
    double T = 1.0;
    solver_options opts;
};

struct app_config {
    trait_space space;
    kernel_pair kernels;
    std::optional<mf_config> mf;
    std::optional<particles_config> particles;
    std::optional<fke_config> fke;
    std::optional<entropy_config> entropy;
    std::optional<chaos_config> chaos;
    std::optional<concentrate_config> concentrate;
    std::optional<superpose_config> superpose;
    std::string raw; // exact bytes the config was parsed from, for hashing
};

namespace cfg {

using json = nlohmann::json;

inline void reject_unknown(const json& obj, const std::vector<std::string>& allowed,
                           const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const std::string& k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw validation_error("UnknownKey", "unknown key '" + it.key() + "' in " + where);
    }
}

inline const json& need(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw validation_error("MissingKey", "missing key '" + key + "' in " + where);
    return *it;
}

inline double num(const json& v, const std::string& where) {
    if (!v.is_number())
        throw validation_error("BadType", where + " must be a number");
    return v.get<double>();
}

inline long long integer(const json& v, const std::string& where) {
    if (!v.is_number_integer())
        throw validation_error("BadType", where + " must be an integer");
    return v.get<long long>();
}

inline std::string text(const json& v, const std::string& where) {
    if (!v.is_string())
        throw validation_error("BadType", where + " must be a string");
    return v.get<std::string>();
}

inline std::vector<double> num_array(const json& v, const std::string& where) {
    if (!v.is_array())
        throw validation_error("BadType", where + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(num(e, where + " entry"));
    return out;
}

inline double opt_num(const json& obj, const std::string& key, double fallback,
                      const std::string& where) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : num(*it, where + "." + key);
}

inline long long opt_int(const json& obj, const std::string& key, long long fallback,
                         const std::string& where) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : integer(*it, where + "." + key);
}

inline std::string opt_text(const json& obj, const std::string& key, const std::string& fallback,
                            const std::string& where) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : text(*it, where + "." + key);
}

inline solver_options parse_solver(const json& obj, const std::string& where) {
    reject_unknown(obj,
                   {"nu0", "T", "atoms", "samples", "method", "dt", "tol", "picard_max_iters",
                    "picard_tol"},
                   where);
    solver_options o;
    o.method = opt_text(obj, "method", o.method, where);
    o.dt = opt_num(obj, "dt", o.dt, where);
    o.tol = opt_num(obj, "tol", o.tol, where);
    o.picard_max_iters = static_cast<int>(opt_int(obj, "picard_max_iters", o.picard_max_iters, where));
    o.picard_tol = opt_num(obj, "picard_tol", o.picard_tol, where);
    return o;
}

inline app_config parse(const std::string& bytes) {
    json root;
    try {
        root = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw validation_error("BadConfig", std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw validation_error("BadConfig", "config root must be an object");
    reject_unknown(root, {"space", "mf", "particles", "fke", "limits"}, "config root");

    app_config app;
    app.raw = bytes;

    const json& sp = need(root, "space", "config root");
    reject_unknown(sp, {"K", "gamma", "c"}, "space");
    const int K = static_cast<int>(integer(need(sp, "K", "space"), "space.K"));
    app.space = make_trait_space(K, num_array(need(sp, "gamma", "space"), "space.gamma"));
    const json& cj = need(sp, "c", "space");
    if (!cj.is_array() || static_cast<int>(cj.size()) != K)
        throw validation_error("BadType", "space.c must be a K x K array of rows");
    std::vector<std::vector<double>> c;
    for (const auto& row : cj) c.push_back(num_array(row, "space.c row"));
    app.kernels = make_kernel_pair(c);
    validate_model(app.space, app.kernels);

    if (auto it = root.find("mf"); it != root.end()) {
        const json& o = *it;
        mf_config mc;
        mc.opts = parse_solver(o, "mf");
        mc.nu0 = num_array(need(o, "nu0", "mf"), "mf.nu0");
        mc.T = num(need(o, "T", "mf"), "mf.T");
        app.mf = std::move(mc);
    }

    if (auto it = root.find("particles"); it != root.end()) {
        const json& o = *it;
        reject_unknown(o, {"nu0", "n", "T", "runs", "total"}, "particles");
        particles_config pc;
        pc.nu0 = num_array(need(o, "nu0", "particles"), "particles.nu0");
        pc.n = num(need(o, "n", "particles"), "particles.n");
        pc.T = num(need(o, "T", "particles"), "particles.T");
        pc.runs = opt_int(o, "runs", pc.runs, "particles");
        pc.total = opt_int(o, "total", pc.total, "particles");
        if (pc.runs < 1) throw validation_error("BadConfig", "particles.runs must be >= 1");
        app.particles = std::move(pc);
    }

    if (auto it = root.find("fke"); it != root.end()) {
        const json& o = *it;
        reject_unknown(o,
                       {"nu0", "n", "N_max", "T", "p0", "dt", "leak_budget", "drift_tol",
                        "scale_plus", "scale_minus", "space_cap"},
                       "fke");
        fke_config fc;
        fc.nu0 = num_array(need(o, "nu0", "fke"), "fke.nu0");
        fc.n = num(need(o, "n", "fke"), "fke.n");
        fc.N_max = static_cast<int>(integer(need(o, "N_max", "fke"), "fke.N_max"));
        fc.T = num(need(o, "T", "fke"), "fke.T");
        fc.p0 = opt_text(o, "p0", fc.p0, "fke");
        if (fc.p0 != "tilted" && fc.p0 != "stationary")
            throw validation_error("BadConfig", "fke.p0 must be 'tilted' or 'stationary'");
        fc.opts.dt = opt_num(o, "dt", fc.opts.dt, "fke");
        fc.opts.leak_budget = opt_num(o, "leak_budget", fc.opts.leak_budget, "fke");
        fc.opts.drift_tol = opt_num(o, "drift_tol", fc.opts.drift_tol, "fke");
        fc.scale_plus = opt_num(o, "scale_plus", fc.scale_plus, "fke");
        fc.scale_minus = opt_num(o, "scale_minus", fc.scale_minus, "fke");
        fc.space_cap = opt_num(o, "space_cap", fc.space_cap, "fke");
        app.fke = std::move(fc);
    }

    if (auto it = root.find("limits"); it != root.end()) {
        const json& lim = *it;
        reject_unknown(lim, {"entropy", "chaos", "concentrate", "superpose"}, "limits");

        if (auto jt = lim.find("entropy"); jt != lim.end()) {
            const json& o = *jt;
            reject_unknown(o, {"f", "nu_bar", "ns", "tail_tol"}, "limits.entropy");
            entropy_config ec;
            ec.f = num_array(need(o, "f", "limits.entropy"), "limits.entropy.f");
            ec.nu_bar = num_array(need(o, "nu_bar", "limits.entropy"), "limits.entropy.nu_bar");
            ec.ns = num_array(need(o, "ns", "limits.entropy"), "limits.entropy.ns");
            ec.tail_tol = opt_num(o, "tail_tol", ec.tail_tol, "limits.entropy");
            app.entropy = std::move(ec);
        }

        if (auto jt = lim.find("chaos"); jt != lim.end()) {
            const json& o = *jt;
            reject_unknown(o, {"nu0", "ns", "t", "dt", "mf_dt", "leak_budget", "space_cap", "N_max"},
                           "limits.chaos");
            chaos_config cc;
            cc.nu0 = num_array(need(o, "nu0", "limits.chaos"), "limits.chaos.nu0");
            cc.ns = num_array(need(o, "ns", "limits.chaos"), "limits.chaos.ns");
            cc.opts.t = num(need(o, "t", "limits.chaos"), "limits.chaos.t");
            cc.opts.dt = opt_num(o, "dt", cc.opts.dt, "limits.chaos");
            cc.opts.mf_dt = opt_num(o, "mf_dt", cc.opts.mf_dt, "limits.chaos");
            cc.opts.leak_budget = opt_num(o, "leak_budget", cc.opts.leak_budget, "limits.chaos");
            cc.opts.space_cap = opt_num(o, "space_cap", cc.opts.space_cap, "limits.chaos");
            cc.opts.N_max_override =
                static_cast<int>(opt_int(o, "N_max", cc.opts.N_max_override, "limits.chaos"));
            app.chaos = std::move(cc);
        }

        if (auto jt = lim.find("concentrate"); jt != lim.end()) {
            const json& o = *jt;
            reject_unknown(
                o, {"nu0", "f", "ns", "t", "dt", "mf_dt", "leak_budget", "space_cap", "runs", "N_max"},
                "limits.concentrate");
            concentrate_config cc;
            cc.nu0 = num_array(need(o, "nu0", "limits.concentrate"), "limits.concentrate.nu0");
            cc.f = num_array(need(o, "f", "limits.concentrate"), "limits.concentrate.f");
            cc.ns = num_array(need(o, "ns", "limits.concentrate"), "limits.concentrate.ns");
            cc.opts.t = num(need(o, "t", "limits.concentrate"), "limits.concentrate.t");
            cc.opts.dt = opt_num(o, "dt", cc.opts.dt, "limits.concentrate");
            cc.opts.mf_dt = opt_num(o, "mf_dt", cc.opts.mf_dt, "limits.concentrate");
            cc.opts.leak_budget = opt_num(o, "leak_budget", cc.opts.leak_budget, "limits.concentrate");
            cc.opts.space_cap = opt_num(o, "space_cap", cc.opts.space_cap, "limits.concentrate");
            cc.opts.gillespie_runs = opt_int(o, "runs", cc.opts.gillespie_runs, "limits.concentrate");
            cc.opts.N_max_override =
                static_cast<int>(opt_int(o, "N_max", cc.opts.N_max_override, "limits.concentrate"));
            app.concentrate = std::move(cc);
        }

        if (auto jt = lim.find("superpose"); jt != lim.end()) {
            const json& o = *jt;
            superpose_config sc;
            sc.opts = parse_solver(o, "limits.superpose");
            sc.T = num(need(o, "T", "limits.superpose"), "limits.superpose.T");
            const json& atoms = need(o, "atoms", "limits.superpose");
            if (!atoms.is_array() || atoms.empty())
                throw validation_error("BadType", "limits.superpose.atoms must be a nonempty array");
            for (const auto& aj : atoms) {
                reject_unknown(aj, {"nu", "weight"}, "limits.superpose atom");
                ensemble_atom at;
                at.nu = num_array(need(aj, "nu", "superpose atom"), "atom.nu");
                at.weight = num(need(aj, "weight", "superpose atom"), "atom.weight");
                sc.ensemble.atoms.push_back(std::move(at));
            }
            sc.ensemble.samples = opt_int(o, "samples", sc.ensemble.samples, "limits.superpose");
            app.superpose = std::move(sc);
        }
    }

    return app;
}

inline app_config load(const std::string& path) {
    std::string bytes;
    try {
        bytes = read_text_file(path);
    } catch (const validation_error&) {
        throw validation_error("ConfigNotFound", "cannot read config file " + path);
    }
    return parse(bytes);
}

} // namespace cfg
} // namespace bpdl
