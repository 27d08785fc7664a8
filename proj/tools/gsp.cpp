// gsp: command-line driver wiring text configs to the resonance tools, the
// filtered / limit solvers, the epsilon-convergence experiment, and report
// re-scoring.
//
// Exit codes:
//   0  success
//   1  internal failure (I/O, unexpected exception)
//   2  configuration or usage error (bad config, bad flags, violated
//      preconditions such as exact enumeration without exact carriers,
//      fewer than two epsilon values, or an F = 1 torus for convergence)
//   3  solver abort (CFL violation or non-finite state)
//   4  convergence experiment completed but the gap sequence is not
//      monotone (artifacts are still written)

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsp/config.hpp"
#include "gsp/diagnostics.hpp"

namespace fs = std::filesystem;

namespace gsp {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolverAbort = 3;
constexpr int kExitNonMonotone = 4;

/// GSP_OUT env > --out flag > config value.
fs::path resolve_out_dir(const std::string& flag_out, const RunConfig& cfg) {
    std::string dir = cfg.out_dir;
    if (!flag_out.empty()) dir = flag_out;
    if (const char* env = std::getenv("GSP_OUT"); env && *env) dir = env;
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

/// Enumeration honoring the exact/float/auto mode contract.
ResonantSet enumerate_for(const TorusSpec& spec, int N, std::string mode, double tol) {
    if (mode == "auto") mode = spec.has_rational_moduli() ? "exact" : "float";
    if (mode == "exact") {
        if (!spec.has_rational_moduli())
            throw std::invalid_argument(
                "exact enumeration requires rational exact carriers for a1_sq, a2_sq, "
                "a3_sq and F2 (use --mode float or add torus.*_sq keys)");
        return enumerate_resonances_exact(spec, N);
    }
    return enumerate_resonances_float(spec, N, tol);
}

int cmd_resonance_enumerate(const RunConfig& cfg, const std::string& mode_flag,
                            const std::string& out_flag) {
    cfg.torus.validate();
    const int N = cfg.res_N > 0 ? cfg.res_N : cfg.N;
    const std::string mode = mode_flag.empty() ? cfg.res_mode : mode_flag;
    const ResonantSet set = enumerate_for(cfg.torus, N, mode, cfg.res_tol);
    const fs::path dir = resolve_out_dir(out_flag, cfg);
    const fs::path file = dir / "resonances.txt";
    write_resonant_set_file(file.string(), set);
    std::cout << "wrote " << file.string() << "\n"
              << set.triples.size() << " resonant sign-triples up to N = " << N << " ("
              << (set.certification == ResonantSet::Certification::ExactRational
                      ? "exact-rational"
                      : "float-tolerance")
              << ")\n";
    return kExitOk;
}

int cmd_resonance_checkp(const RunConfig& cfg, const std::string& out_flag) {
    cfg.torus.validate();
    const int N_cert = cfg.res_N > 0 ? cfg.res_N : cfg.N;
    const ConditionPInputs in = condition_p_inputs(cfg.torus);
    const ConditionPReport rep = check_condition_P(in, N_cert);
    const fs::path dir = resolve_out_dir(out_flag, cfg);
    const fs::path file = dir / "condition_p.txt";
    {
        std::ofstream out(file);
        if (!out) throw IoError("cannot open for writing: " + file.string());
        out << "verdict = " << to_string(rep.verdict) << "\n"
            << "detail  = " << rep.detail << "\n"
            << "N_cert  = " << rep.N_cert << "\n"
            << "resonant_count = " << rep.resonant_count << "\n";
    }
    std::cout << to_string(rep.verdict) << "\n" << rep.detail << "\n";
    return kExitOk;
}

int cmd_resonance_gaps(const RunConfig& cfg, const std::string& out_flag) {
    cfg.torus.validate();
    const int N = cfg.res_N > 0 ? cfg.res_N : cfg.N;
    const GapHistogram h = resonance_gap_histogram(cfg.torus, N);
    const fs::path dir = resolve_out_dir(out_flag, cfg);
    write_csv_file((dir / "gaps.csv").string(), gap_histogram_csv(h));
    std::cout << "wrote " << (dir / "gaps.csv").string() << "\n"
              << gap_histogram_summary(h);
    return kExitOk;
}

void write_snapshot_step(const fs::path& dir, const TorusSpec& spec,
                         const SpectralField4& U, int step) {
    char name[40];
    std::snprintf(name, sizeof(name), "snapshot_%06d.gsp", step);
    write_snapshot((dir / name).string(), spec, U);
}

int cmd_simulate(const RunConfig& cfg, bool limit_kind, const std::string& out_flag) {
    cfg.torus.validate();
    const FreqLattice lat(cfg.N);
    const ModeBasis basis = build_mode_basis(cfg.torus, lat);
    TransformEngine engine(cfg.N, TransformEngine::dealias_grid(cfg.N));
    const SpectralField4 U0 = make_initial_data(basis, parse_init_kind(cfg.init_kind),
                                                cfg.seed, cfg.amplitude, cfg.init_s,
                                                cfg.init_h_decay);
    const fs::path dir = resolve_out_dir(out_flag, cfg);

    std::optional<LimitStencil> stencil;
    SolverState st = limit_kind ? make_limit_state(basis, U0) : make_filtered_state(basis, U0);
    if (limit_kind)
        stencil = build_limit_stencil(
            basis, enumerate_for(cfg.torus, cfg.N, cfg.res_mode, cfg.res_tol));

    const int nsteps = static_cast<int>(std::llround(cfg.solver.T_final / cfg.solver.dt));
    std::vector<SeriesRow> series;
    series.reserve(static_cast<std::size_t>(nsteps) + 1);
    series.push_back(make_series_row(basis, st, cfg.report_s));
    if (cfg.snapshot_every > 0) write_snapshot_step(dir, cfg.torus, st.U, 0);
    for (int k = 1; k <= nsteps; ++k) {
        if (limit_kind)
            step_limit(basis, *stencil, engine, st, cfg.solver);
        else
            step_filtered_pe(basis, engine, st, cfg.solver);
        series.push_back(make_series_row(basis, st, cfg.report_s));
        if (cfg.snapshot_every > 0 && (k % cfg.snapshot_every == 0 || k == nsteps))
            write_snapshot_step(dir, cfg.torus, st.U, k);
    }

    write_csv_file((dir / "series.csv").string(), series_csv(series));
    // Horizontal-average conservation is a limit-system invariant; finite-eps
    // runs legitimately exchange energy with the horizontal average, so that
    // flag is only armed for the limit solver.
    const double havg_tol = limit_kind ? 1e-8 : std::numeric_limits<double>::infinity();
    const double c = std::min(cfg.torus.nu_h, cfg.torus.nu_h_prime);
    const RunReport rep = score_run(series, c, dump_config(cfg), 1e-11, 1e-4, havg_tol);
    std::string text = report_summary(rep);
    if (!limit_kind)
        text += "note: horizontal-average conservation is asserted only for the limit "
                "system; the finite-eps flag above uses an infinite tolerance\n";
    {
        std::ofstream out(dir / "report.txt");
        if (!out) throw IoError("cannot open for writing: " + (dir / "report.txt").string());
        out << text;
    }
    std::cout << "wrote " << (dir / "series.csv").string() << " ("
              << series.size() << " rows) and report.txt\n"
              << text;
    return kExitOk;
}

int cmd_converge(const RunConfig& cfg, int jobs_flag, const std::string& out_flag) {
    cfg.torus.validate();
    if (cfg.eps_list.size() < 2)
        throw std::invalid_argument(
            "convergence experiment needs at least two epsilon values "
            "(converge.eps_list)");
    const FreqLattice lat(cfg.N);
    const ModeBasis basis = build_mode_basis(cfg.torus, lat);
    const LimitStencil stencil =
        build_limit_stencil(basis, enumerate_for(cfg.torus, cfg.N, cfg.res_mode, cfg.res_tol));
    const SpectralField4 V0 = make_initial_data(basis, parse_init_kind(cfg.init_kind),
                                                cfg.seed, cfg.amplitude, cfg.init_s,
                                                cfg.init_h_decay);
    const int jobs = jobs_flag > 0 ? jobs_flag : cfg.jobs;
    const std::vector<ConvergenceRow> rows = run_convergence_experiment(
        basis, stencil, V0, cfg.eps_list, cfg.sigma, cfg.solver,
        TransformEngine::dealias_grid(cfg.N), jobs);
    const ConvergenceTable table = emit_convergence_table(rows);

    const fs::path dir = resolve_out_dir(out_flag, cfg);
    write_csv_file((dir / "convergence.csv").string(), convergence_csv(table));
    const std::string summary = convergence_summary(table);
    {
        std::ofstream out(dir / "summary.txt");
        if (!out) throw IoError("cannot open for writing: " + (dir / "summary.txt").string());
        out << summary;
    }
    std::cout << "wrote " << (dir / "convergence.csv").string() << "\n" << summary;
    return table.monotone ? kExitOk : kExitNonMonotone;
}

int cmd_report(const std::string& series_path, const std::string& config_path, double c_flag,
               double havg_tol) {
    double c = c_flag;
    std::string echo;
    if (c < 0.0) {
        if (config_path.empty())
            throw ConfigError(
                "report: provide --config (viscosities) or --c for the dissipation "
                "constant in the energy inequality");
        const RunConfig cfg = parse_config_file(config_path);
        c = std::min(cfg.torus.nu_h, cfg.torus.nu_h_prime);
        echo = dump_config(cfg);
    }
    const std::vector<SeriesRow> series = series_from_csv(read_csv_file(series_path));
    const RunReport rep = score_run(series, c, std::move(echo), 1e-11, 1e-4, havg_tol);
    std::cout << report_summary(rep);
    return kExitOk;
}

}  // namespace
}  // namespace gsp

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral tools for the rotating stratified primitive equations "
                 "on anisotropic 3-tori"};
    app.require_subcommand(1);

    std::string config_path, out_flag, mode_flag, series_path, report_config;
    int jobs_flag = 0;
    double c_flag = -1.0, havg_tol = 1e-8;

    CLI::App* res = app.add_subcommand("resonance", "resonant-set tools");
    res->require_subcommand(1);
    CLI::App* renum = res->add_subcommand("enumerate", "enumerate the resonant set");
    renum->add_option("--config", config_path, "config file")->required();
    renum->add_option("--mode", mode_flag, "exact | float (default: config / auto)")
        ->check(CLI::IsMember({"exact", "float"}));
    renum->add_option("--out", out_flag, "output directory");
    CLI::App* rchk = res->add_subcommand("check-p", "decide condition (P)");
    rchk->add_option("--config", config_path, "config file")->required();
    rchk->add_option("--out", out_flag, "output directory");
    CLI::App* rgap = res->add_subcommand("gaps", "near-resonance gap histogram");
    rgap->add_option("--config", config_path, "config file")->required();
    rgap->add_option("--out", out_flag, "output directory");

    CLI::App* sim = app.add_subcommand("simulate", "run one solver");
    sim->require_subcommand(1);
    CLI::App* simpe = sim->add_subcommand("pe", "filtered primitive equations");
    simpe->add_option("--config", config_path, "config file")->required();
    simpe->add_option("--out", out_flag, "output directory");
    CLI::App* simlim = sim->add_subcommand("limit", "split limit system");
    simlim->add_option("--config", config_path, "config file")->required();
    simlim->add_option("--out", out_flag, "output directory");

    CLI::App* conv = app.add_subcommand("converge", "epsilon-convergence experiment");
    conv->add_option("--config", config_path, "config file")->required();
    conv->add_option("--jobs", jobs_flag, "parallel runs (default: config, 1)");
    conv->add_option("--out", out_flag, "output directory");

    CLI::App* rep = app.add_subcommand("report", "re-score a run from its series CSV");
    rep->add_option("--series", series_path, "series.csv from a simulate run")->required();
    rep->add_option("--config", report_config, "config file (for viscosities)");
    rep->add_option("--c", c_flag, "dissipation constant override");
    rep->add_option("--havg-tol", havg_tol,
                    "horizontal-average drift tolerance (default 1e-8; limit-system "
                    "invariant)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return gsp::kExitConfig;
    }

    try {
        if (rep->parsed())
            return gsp::cmd_report(series_path, report_config, c_flag, havg_tol);
        const gsp::RunConfig cfg = gsp::parse_config_file(config_path);
        if (renum->parsed()) return gsp::cmd_resonance_enumerate(cfg, mode_flag, out_flag);
        if (rchk->parsed()) return gsp::cmd_resonance_checkp(cfg, out_flag);
        if (rgap->parsed()) return gsp::cmd_resonance_gaps(cfg, out_flag);
        if (simpe->parsed()) return gsp::cmd_simulate(cfg, false, out_flag);
        if (simlim->parsed()) return gsp::cmd_simulate(cfg, true, out_flag);
        if (conv->parsed()) return gsp::cmd_converge(cfg, jobs_flag, out_flag);
        std::cerr << "gsp: no subcommand selected\n";
        return gsp::kExitConfig;
    } catch (const gsp::ConfigError& e) {
        std::cerr << "gsp: configuration error: " << e.what() << "\n";
        return gsp::kExitConfig;
    } catch (const gsp::SolverError& e) {
        std::cerr << "gsp: solver abort: " << e.what() << "\n";
        return gsp::kExitSolverAbort;
    } catch (const std::invalid_argument& e) {
        std::cerr << "gsp: invalid configuration: " << e.what() << "\n";
        return gsp::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "gsp: internal error: " << e.what() << "\n";
        return gsp::kExitInternal;
    }
}
