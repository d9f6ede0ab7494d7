// Command line front end: each subcommand reads a JSON config, runs one
// experiment, writes CSV outputs plus a manifest with content hashes, and
// prints a short summary (or a JSON object with --json).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpdl/bpdl.hpp"

namespace {

using nlohmann::json;

struct cli_ctx {
    std::string config_path;
    std::string out_dir = ".";
    bool json_out = false;
    std::uint64_t seed = 1;
    std::uint64_t stream = 1;
    std::string action;
};

std::string ext_cell(const bpdl::ext_real& x) {
    return x.finite() ? bpdl::fmt_double(x.value()) : "inf";
}

json ext_json(const bpdl::ext_real& x) {
    return x.finite() ? json(x.value()) : json("inf");
}

bpdl::app_config load_config(const cli_ctx& ctx) {
    if (ctx.config_path.empty())
        throw bpdl::validation_error("MissingConfig", "--config is required");
    return bpdl::cfg::load(ctx.config_path);
}

struct emitter {
    const cli_ctx& ctx;
    bpdl::run_manifest man;

    emitter(const cli_ctx& c, const bpdl::app_config& app, std::string command) : ctx(c) {
        man.command = std::move(command);
        man.config_hash = bpdl::fnv1a64_hex(app.raw);
        std::filesystem::create_directories(ctx.out_dir);
    }

    void put(const std::string& name, const std::string& text) {
        bpdl::write_text_file(ctx.out_dir + "/" + name, text);
        man.outputs.push_back({name, bpdl::fnv1a64_hex(text)});
    }

    void put(const std::string& name, const bpdl::table& t) { put(name, bpdl::to_csv(t)); }

    void with_rng() {
        man.has_rng = true;
        man.seed = ctx.seed;
        man.stream = ctx.stream;
    }

    void finish(const json& summary) {
        bpdl::write_manifest(ctx.out_dir, man);
        if (ctx.json_out) std::cout << summary.dump(2) << "\n";
    }
};

bpdl::table convergence_to_table(const bpdl::convergence_table& ct) {
    bpdl::table t;
    t.columns = {"n", "quantity", "value", "limit", "gap", "stderr"};
    for (const auto& r : ct.rows)
        t.add({bpdl::fmt_double(r.n), r.quantity, bpdl::fmt_double(r.value),
               bpdl::fmt_double(r.limit), bpdl::fmt_double(r.gap),
               bpdl::fmt_double(r.has_stderr ? r.stderr_value : 0.0)});
    return t;
}

template <typename Sec>
const Sec& need_section(const std::optional<Sec>& s, const char* name) {
    if (!s)
        throw bpdl::validation_error("MissingSection",
                                     std::string("config has no '") + name + "' section");
    return *s;
}

int run_validate(const cli_ctx& ctx) {
    const bpdl::app_config app = load_config(ctx);
    const double M = bpdl::bound_constant(app.space, app.kernels);
    json j{{"status", "ok"},
           {"K", app.space.K},
           {"gamma_total", app.space.gamma_total()},
           {"c_max", app.kernels.c_max()},
           {"bound_constant", M}};
    if (ctx.json_out)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << "model ok: K=" << app.space.K
                  << " gamma_total=" << bpdl::fmt_double(app.space.gamma_total())
                  << " c_max=" << bpdl::fmt_double(app.kernels.c_max())
                  << " bound_constant=" << bpdl::fmt_double(M) << "\n";
    return 0;
}

bpdl::table trajectory_table(const bpdl::mf_trajectory& traj, int K) {
    bpdl::table t;
    t.columns = {"t"};
    for (int i = 1; i <= K; ++i) t.columns.push_back("nu_" + std::to_string(i));
    for (int i = 1; i <= K; ++i) t.columns.push_back("lamp_" + std::to_string(i));
    for (int i = 1; i <= K; ++i) t.columns.push_back("lamm_" + std::to_string(i));
    for (std::size_t k = 0; k < traj.nodes(); ++k) {
        std::vector<std::string> row{bpdl::fmt_double(traj.t[k])};
        for (double x : traj.nu[k]) row.push_back(bpdl::fmt_double(x));
        for (double x : traj.lam_plus[k]) row.push_back(bpdl::fmt_double(x));
        for (double x : traj.lam_minus[k]) row.push_back(bpdl::fmt_double(x));
        t.add(std::move(row));
    }
    return t;
}

int run_mf_solve(const cli_ctx& ctx) {
    const bpdl::app_config app = load_config(ctx);
    const bpdl::mf_config& mc = need_section(app.mf, "mf");
    const bpdl::mf_trajectory traj =
        bpdl::solve_mf(app.space, app.kernels, mc.nu0, mc.T, mc.opts);
    const double ce = bpdl::continuity_residual(traj);

    emitter em(ctx, app, "mf solve");
    em.put("mf_trajectory.csv", trajectory_table(traj, app.space.K));
    json j{{"nodes", traj.nodes()},
           {"T", mc.T},
           {"method", mc.opts.method},
           {"continuity_residual", ce},
           {"nu_final", traj.nu.back()}};
    em.finish(j);
    if (!ctx.json_out) {
        std::cout << "mf solve: " << traj.nodes() << " nodes, continuity residual "
                  << bpdl::fmt_double(ce) << "\n";
        std::cout << "nu(T) =";
        for (double x : traj.nu.back()) std::cout << " " << bpdl::fmt_double(x);
        std::cout << "\n";
    }
    return 0;
}

int run_mf_edp(const cli_ctx& ctx) {
    const bpdl::app_config app = load_config(ctx);
    const bpdl::mf_config& mc = need_section(app.mf, "mf");
    const bpdl::mf_trajectory traj =
        bpdl::solve_mf(app.space, app.kernels, mc.nu0, mc.T, mc.opts);
    const bpdl::mf_edp_report rep = bpdl::edp_mf(app.space, app.kernels, traj);
    const double chain = bpdl::chain_rule_residual(app.space, app.kernels, traj);
    const bpdl::lagrangian_check_report lag =
        bpdl::lagrangian_decomposition_check(app.space, app.kernels, traj);

    emitter em(ctx, app, "mf edp");
    em.put("mf_trajectory.csv", trajectory_table(traj, app.space.K));
    bpdl::table t;
    t.columns = {"R_integral", "F_initial", "F_final",       "D_integral",
                 "I",          "chain_rule_residual", "sym_gap", "antisym_gap"};
    t.add({ext_cell(rep.R_integral), ext_cell(rep.F_initial), ext_cell(rep.F_final),
           ext_cell(rep.D_integral), ext_cell(rep.I), bpdl::fmt_double(chain),
           bpdl::fmt_double(lag.sym_gap), bpdl::fmt_double(lag.antisym_gap)});
    em.put("mf_edp.csv", t);
    json j{{"R_integral", ext_json(rep.R_integral)},
           {"F_initial", ext_json(rep.F_initial)},
           {"F_final", ext_json(rep.F_final)},
           {"D_integral", ext_json(rep.D_integral)},
           {"I", ext_json(rep.I)},
           {"chain_rule_residual", chain},
           {"sym_gap", lag.sym_gap},
           {"antisym_gap", lag.antisym_gap}};
    em.finish(j);
    if (!ctx.json_out)
        std::cout << "mf edp: I = " << ext_cell(rep.I)
                  << ", chain rule residual = " << bpdl::fmt_double(chain) << "\n";
    return 0;
}

int run_particles(const cli_ctx& ctx) {
    const bpdl::app_config app = load_config(ctx);
    const bpdl::particles_config& pc = need_section(app.particles, "particles");
    const std::vector<long long> counts0 =
        bpdl::initial_counts(app.space, pc.nu0, pc.n, pc.total);

    std::vector<bpdl::event_log> logs;
    logs.reserve(static_cast<std::size_t>(pc.runs));
    for (long long r = 0; r < pc.runs; ++r)
        logs.push_back(bpdl::simulate(app.space, app.kernels, counts0, pc.n, pc.T,
                                      bpdl::rng_spec{ctx.seed,
                                                     ctx.stream + static_cast<std::uint64_t>(r)}));

    emitter em(ctx, app, "particles simulate");
    em.with_rng();

    bpdl::table ev;
    ev.columns = {"time", "site", "kind"};
    for (const bpdl::sim_event& e : logs.front().events)
        ev.add({bpdl::fmt_double(e.t), std::to_string(e.site + 1), std::to_string(e.kind)});
    em.put("particles_events.csv", ev);

    const int K = app.space.K;
    bpdl::table runs;
    runs.columns = {"run"};
    for (int i = 1; i <= K; ++i) runs.columns.push_back("final_" + std::to_string(i));
    for (int i = 1; i <= K; ++i) runs.columns.push_back("wplus_" + std::to_string(i));
    for (int i = 1; i <= K; ++i) runs.columns.push_back("wminus_" + std::to_string(i));
    for (long long r = 0; r < pc.runs; ++r) {
        const bpdl::event_log& lg = logs[static_cast<std::size_t>(r)];
        std::vector<std::string> row{std::to_string(r)};
        for (long long c : lg.final_counts) row.push_back(std::to_string(c));
        for (double x : lg.w_plus()) row.push_back(bpdl::fmt_double(x));
        for (double x : lg.w_minus()) row.push_back(bpdl::fmt_double(x));
        runs.add(std::move(row));
    }
    em.put("particles_runs.csv", runs);

    const bpdl::measure ones(static_cast<std::size_t>(K), 1.0);
    const bpdl::ensemble_summary st = bpdl::ensemble_stats(logs, ones, pc.T);
    json j{{"runs", pc.runs},
           {"initial_counts", counts0},
           {"events_run0", logs.front().events.size()},
           {"mass_mean", st.mean},
           {"mass_variance", st.variance},
           {"mass_stderr", st.stderr_mean}};
    em.finish(j);
    if (!ctx.json_out)
        std::cout << "particles simulate: " << pc.runs << " run(s), run 0 recorded "
                  << logs.front().events.size() << " events, mean final mass "
                  << bpdl::fmt_double(st.mean) << "\n";
    return 0;
}

bpdl::table states_table(const bpdl::config_space& cs) {
    bpdl::table t;
    t.columns = {"state"};
    const int K = cs.K;
    for (int i = 1; i <= K; ++i) t.columns.push_back("n_" + std::to_string(i));
    t.columns.push_back("total");
    for (std::size_t s = 0; s < cs.size(); ++s) {
        std::vector<std::string> row{std::to_string(s)};
        for (int v : cs.states[s]) row.push_back(std::to_string(v));
        row.push_back(std::to_string(cs.total[s]));
        t.add(std::move(row));
    }
    return t;
}

struct fke_setup {
    bpdl::config_space cs;
    bpdl::fke_generator gen;
    bpdl::fke_dist P0;
    bpdl::fke_dist pi;
};

fke_setup make_fke(const bpdl::app_config& app, const bpdl::fke_config& fc) {
    fke_setup s{bpdl::enumerate_states(app.space.K, fc.N_max, fc.space_cap), {}, {}, {}};
    s.gen = bpdl::build_generator(s.cs, app.space, app.kernels, fc.n);
    s.pi = bpdl::stationary_pi(s.cs, app.space, fc.n);
    s.P0 = fc.p0 == "stationary" ? s.pi : bpdl::tilted_pi(s.cs, fc.nu0, fc.n);
    return s;
}

int run_fke_solve(const cli_ctx& ctx) {
    const bpdl::app_config app = load_config(ctx);
    const bpdl::fke_config& fc = need_section(app.fke, "fke");
    fke_setup s = make_fke(app, fc);
    const bpdl::fke_trajectory traj = bpdl::solve_fke(s.gen, s.P0, fc.T, fc.opts);

    emitter em(ctx, app, "fke solve");
    em.put("fke_states.csv", states_table(s.cs));
    bpdl::table t;
    t.columns = {"t", "leak"};
    for (std::size_t st = 0; st < s.cs.size(); ++st)
        t.columns.push_back("P_" + std::to_string(st));
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        std::vector<std::string> row{bpdl::fmt_double(traj.t[k]), bpdl::fmt_double(traj.leak[k])};
        for (double p : traj.P[k]) row.push_back(bpdl::fmt_double(p));
        t.add(std::move(row));
    }
    em.put("fke_trajectory.csv", t);
    json j{{"states", s.cs.size()},
           {"nodes", traj.t.size()},
           {"leak_total", traj.leak_total()},
           {"max_drift", traj.max_drift}};
    em.finish(j);
    if (!ctx.json_out)
        std::cout << "fke solve: " << s.cs.size() << " states, leak "
                  << bpdl::fmt_double(traj.leak_total()) << ", mass drift "
                  << bpdl::fmt_double(traj.max_drift) << "\n";
    return 0;
}

int run_fke_edp(const cli_ctx& ctx) {
    const bpdl::app_config app = load_config(ctx);
    const bpdl::fke_config& fc = need_section(app.fke, "fke");
    fke_setup s = make_fke(app, fc);
    const bpdl::fke_trajectory traj = bpdl::solve_fke(s.gen, s.P0, fc.T, fc.opts);
    const bpdl::fke_edp_report rep =
        bpdl::edp_fke(s.gen, s.pi, traj, fc.scale_plus, fc.scale_minus);

    emitter em(ctx, app, "fke edp");
    bpdl::table t;
    t.columns = {"R_integral", "F_initial", "F_final", "D_integral", "I", "leak",
                 "scale_plus", "scale_minus"};
    t.add({ext_cell(rep.R_integral), ext_cell(rep.F_initial), ext_cell(rep.F_final),
           ext_cell(rep.D_integral), ext_cell(rep.I), bpdl::fmt_double(rep.leak),
           bpdl::fmt_double(fc.scale_plus), bpdl::fmt_double(fc.scale_minus)});
    em.put("fke_edp.csv", t);

    bpdl::table nodes;
    nodes.columns = {"t", "free_energy", "fisher", "fisher_death"};
    for (std::size_t k = 0; k < traj.t.size(); ++k)
        nodes.add({bpdl::fmt_double(traj.t[k]),
                   ext_cell(bpdl::fke_free_energy(traj.P[k], s.pi, fc.n)),
                   bpdl::fmt_double(bpdl::fisher_information(s.gen, s.pi, traj.P[k])),
                   bpdl::fmt_double(bpdl::fisher_information_death_side(s.gen, s.pi, traj.P[k]))});
    em.put("fke_edp_nodes.csv", nodes);

    json j{{"R_integral", ext_json(rep.R_integral)},
           {"F_initial", ext_json(rep.F_initial)},
           {"F_final", ext_json(rep.F_final)},
           {"D_integral", ext_json(rep.D_integral)},
           {"I", ext_json(rep.I)},
           {"leak", rep.leak},
           {"scale_plus", fc.scale_plus},
           {"scale_minus", fc.scale_minus}};
    em.finish(j);
    if (!ctx.json_out)
        std::cout << "fke edp: I = " << ext_cell(rep.I) << ", leak = "
                  << bpdl::fmt_double(rep.leak) << "\n";
    return 0;
}

int run_fke_balance(const cli_ctx& ctx) {
    const bpdl::app_config app = load_config(ctx);
    const bpdl::fke_config& fc = need_section(app.fke, "fke");
    fke_setup s = make_fke(app, fc);
    const double db = bpdl::detailed_balance_residual(s.gen, s.pi);
    bpdl::fke_dist flow(s.cs.size(), 0.0);
    bpdl::apply_adjoint(s.gen, s.pi, flow);
    double stat = 0.0;
    for (double x : flow) stat = std::max(stat, std::abs(x));

    emitter em(ctx, app, "fke balance");
    bpdl::table t;
    t.columns = {"states", "detailed_balance_residual", "stationarity_residual"};
    t.add({std::to_string(s.cs.size()), bpdl::fmt_double(db), bpdl::fmt_double(stat)});
    em.put("fke_balance.csv", t);
    json j{{"states", s.cs.size()},
           {"detailed_balance_residual", db},
           {"stationarity_residual", stat}};
    em.finish(j);
    if (!ctx.json_out)
        std::cout << "fke balance: detailed balance residual " << bpdl::fmt_double(db)
                  << ", stationarity residual " << bpdl::fmt_double(stat) << "\n";
    return 0;
}

int run_limits_entropy(const cli_ctx& ctx) {
    const bpdl::app_config app = load_config(ctx);
    const bpdl::entropy_config& ec = need_section(app.entropy, "limits.entropy");
    const double G = bpdl::G_limit(app.space, ec.f);
    const bpdl::ext_real ent = bpdl::relative_entropy(ec.nu_bar, app.space.gamma);
    if (!ent.finite())
        throw bpdl::numeric_error("InfiniteFunctional", "Ent(nu_bar | gamma) = +inf");

    bpdl::convergence_table ct;
    json per_n = json::array();
    for (double n : ec.ns) {
        const double Gn = bpdl::G_n(app.space, ec.f, n);
        ct.rows.push_back({n, "G_n", Gn, G, Gn - G, 0.0, false});
        const bpdl::recovery_entropy_report rec =
            bpdl::recovery_entropy(app.space, ec.nu_bar, n, ec.tail_tol);
        ct.rows.push_back({n, "entropy_rate", rec.closed / n, ent.value(),
                           std::abs(rec.closed / n - ent.value()), 0.0, false});
        ct.rows.push_back({n, "recovery_gap", std::abs(rec.closed - rec.direct), 0.0,
                           std::abs(rec.closed - rec.direct), 0.0, false});
        per_n.push_back(json{{"n", n},
                             {"G_n", Gn},
                             {"recovery_closed", rec.closed},
                             {"recovery_direct", rec.direct},
                             {"N_max_used", rec.N_max_used}});
    }

    emitter em(ctx, app, "limits entropy");
    em.put("limits_entropy.csv", convergence_to_table(ct));
    json j{{"G_limit", G}, {"entropy_limit", ent.value()}, {"points", per_n}};
    em.finish(j);
    if (!ctx.json_out)
        std::cout << "limits entropy: " << ec.ns.size() << " system size(s), G = "
                  << bpdl::fmt_double(G) << "\n";
    return 0;
}

int run_limits_chaos(const cli_ctx& ctx) {
    const bpdl::app_config app = load_config(ctx);
    const bpdl::chaos_config& cc = need_section(app.chaos, "limits.chaos");
    const bpdl::chaos_result res =
        bpdl::chaos_entropy_curve(app.space, app.kernels, cc.nu0, cc.ns, cc.opts);

    bpdl::convergence_table ct = res.table;
    for (const bpdl::chaos_point& p : res.points)
        ct.rows.push_back({p.n, "chaos_entropy_t0", p.chaos_t0, 0.0, p.chaos_t0, 0.0, false});

    emitter em(ctx, app, "limits chaos");
    em.put("limits_chaos.csv", convergence_to_table(ct));
    json pts = json::array();
    for (const bpdl::chaos_point& p : res.points)
        pts.push_back(json{{"n", p.n},
                           {"N_max", p.N_max},
                           {"chaos_t0", p.chaos_t0},
                           {"chaos_t", p.chaos_t},
                           {"entropy_rate", p.entropy_rate},
                           {"entropy_limit", p.entropy_limit},
                           {"leak", p.leak}});
    json j{{"t", cc.opts.t}, {"nu_t", res.nu_t}, {"points", pts}};
    em.finish(j);
    if (!ctx.json_out)
        std::cout << "limits chaos: " << res.points.size() << " system size(s), last scaled entropy "
                  << bpdl::fmt_double(res.points.back().chaos_t) << "\n";
    return 0;
}

int run_limits_concentrate(const cli_ctx& ctx) {
    const bpdl::app_config app = load_config(ctx);
    bpdl::concentrate_config cc = need_section(app.concentrate, "limits.concentrate");
    cc.opts.rng = bpdl::rng_spec{ctx.seed, ctx.stream};
    const bpdl::concentration_result res =
        bpdl::concentration_experiment(app.space, app.kernels, cc.nu0, cc.f, cc.ns, cc.opts);

    emitter em(ctx, app, "limits concentrate");
    em.with_rng();
    em.put("limits_concentration.csv", convergence_to_table(res.table));
    json pts = json::array();
    for (const bpdl::concentration_point& p : res.points)
        pts.push_back(json{{"n", p.n},
                           {"method", p.method},
                           {"mean", p.mean},
                           {"variance", p.variance},
                           {"stderr_mean", p.stderr_mean}});
    json j{{"limit_mean", res.limit_mean}, {"points", pts}};
    em.finish(j);
    if (!ctx.json_out)
        std::cout << "limits concentrate: limit mean " << bpdl::fmt_double(res.limit_mean)
                  << ", largest n variance "
                  << bpdl::fmt_double(res.points.back().variance) << "\n";
    return 0;
}

int run_limits_superpose(const cli_ctx& ctx) {
    const bpdl::app_config app = load_config(ctx);
    const bpdl::superpose_config& sc = need_section(app.superpose, "limits.superpose");
    const bpdl::superposition_report rep =
        bpdl::superposition_mc(app.space, app.kernels, sc.ensemble, sc.T, sc.opts);

    emitter em(ctx, app, "limits superpose");
    bpdl::table t;
    t.columns = {"samples", "I_estimate", "I_stderr", "F_initial",
                 "F_final", "R_integral", "D_integral"};
    t.add({std::to_string(rep.samples), bpdl::fmt_double(rep.I_estimate),
           bpdl::fmt_double(rep.I_stderr), bpdl::fmt_double(rep.F_initial),
           bpdl::fmt_double(rep.F_final), bpdl::fmt_double(rep.R_integral),
           bpdl::fmt_double(rep.D_integral)});
    em.put("limits_superpose.csv", t);
    json j{{"samples", rep.samples},
           {"I_estimate", rep.I_estimate},
           {"I_stderr", rep.I_stderr},
           {"F_initial", rep.F_initial},
           {"F_final", rep.F_final},
           {"R_integral", rep.R_integral},
           {"D_integral", rep.D_integral}};
    em.finish(j);
    if (!ctx.json_out)
        std::cout << "limits superpose: I = " << bpdl::fmt_double(rep.I_estimate) << " (stderr "
                  << bpdl::fmt_double(rep.I_stderr) << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    cli_ctx ctx;
    CLI::App app{"measure-valued birth-death population dynamics toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", ctx.config_path, "path to a JSON model/experiment config");
    app.add_option("--out-dir", ctx.out_dir, "directory for CSV outputs and the run manifest");
    app.add_flag("--json", ctx.json_out, "print a JSON summary instead of prose");
    app.add_option("--seed", ctx.seed, "RNG seed for stochastic subcommands");
    app.add_option("--stream", ctx.stream, "base RNG stream; run r uses stream + r");

    auto leaf = [&ctx](CLI::App* parent, const char* name, const char* desc, const char* action) {
        CLI::App* s = parent->add_subcommand(name, desc);
        s->fallthrough();
        s->callback([&ctx, action] { ctx.action = action; });
        return s;
    };

    leaf(&app, "validate", "check a model config and print its summary", "validate");

    CLI::App* mf = app.add_subcommand("mf", "mean-field evolution");
    mf->require_subcommand(1);
    mf->fallthrough();
    leaf(mf, "solve", "integrate the mean-field equation", "mf solve");
    leaf(mf, "edp", "energy-dissipation balance along the solved curve", "mf edp");

    CLI::App* pa = app.add_subcommand("particles", "finite-n stochastic system");
    pa->require_subcommand(1);
    pa->fallthrough();
    leaf(pa, "simulate", "exact event-driven simulation", "particles simulate");

    CLI::App* fk = app.add_subcommand("fke", "forward equation on the configuration space");
    fk->require_subcommand(1);
    fk->fallthrough();
    leaf(fk, "solve", "integrate the forward equation", "fke solve");
    leaf(fk, "edp", "energy-dissipation balance for the forward equation", "fke edp");
    leaf(fk, "balance", "detailed balance and stationarity residuals", "fke balance");

    CLI::App* li = app.add_subcommand("limits", "large system size experiments");
    li->require_subcommand(1);
    li->fallthrough();
    leaf(li, "entropy", "generating functionals and entropy recovery", "limits entropy");
    leaf(li, "chaos", "scaled entropy against the moving product reference", "limits chaos");
    leaf(li, "concentrate", "concentration of observables around the mean-field value",
         "limits concentrate");
    leaf(li, "superpose", "lifted balance for mixtures of initial conditions", "limits superpose");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (ctx.action == "validate") return run_validate(ctx);
        if (ctx.action == "mf solve") return run_mf_solve(ctx);
        if (ctx.action == "mf edp") return run_mf_edp(ctx);
        if (ctx.action == "particles simulate") return run_particles(ctx);
        if (ctx.action == "fke solve") return run_fke_solve(ctx);
        if (ctx.action == "fke edp") return run_fke_edp(ctx);
        if (ctx.action == "fke balance") return run_fke_balance(ctx);
        if (ctx.action == "limits entropy") return run_limits_entropy(ctx);
        if (ctx.action == "limits chaos") return run_limits_chaos(ctx);
        if (ctx.action == "limits concentrate") return run_limits_concentrate(ctx);
        if (ctx.action == "limits superpose") return run_limits_superpose(ctx);
        std::cerr << "error: no action selected\n";
        return 1;
    } catch (const bpdl::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const bpdl::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
