// SPDX-License-Identifier: MIT
#include "sqbsde/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sqbsde/counterexamples.hpp"
#include "sqbsde/csv.hpp"
#include "sqbsde/dual_mc.hpp"
#include "sqbsde/errors.hpp"
#include "sqbsde/path_checks.hpp"

namespace sqbsde {

namespace {

CheckOutcome check(std::string name, double stat, double thr, bool pass, bool hard = true,
                   std::string note = {}) {
    CheckOutcome c;
    c.name = std::move(name);
    c.statistic = stat;
    c.threshold = thr;
    c.pass = pass;
    c.hard = hard;
    c.note = std::move(note);
    return c;
}

bool is_cole_hopf_case(const Generator& gen, const ForwardModel& model) {
    return gen.kind() == GeneratorKind::Quadratic && !gen.truncation() && model.drift().is_zero();
}

std::vector<std::size_t> window_indices(const PdeSolution& sol, double x0, double window) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < sol.n_x(); ++i)
        if (std::abs(sol.x[i] - x0) <= window + 1e-12) idx.push_back(i);
    return idx;
}

struct Setup {
    Generator gen;
    TerminalCondition tc;
    ForwardModel model;
};

Setup setup(const RunConfig& cfg) {
    return Setup{make_generator(cfg.generator), make_terminal(cfg.terminal), make_model(cfg)};
}

void solve_step(RunResults& r, const RunConfig& cfg, const Setup& s) {
    auto sol = std::make_shared<PdeSolution>(solve(s.model, s.gen, s.tc, cfg.grid, cfg.t0));
    r.solution = sol;
    std::size_t capped = 0;
    for (char c : sol->cap_active) capped += c ? 1 : 0;
    std::ostringstream os;
    os << "u(" << format_double(cfg.t0) << ", " << format_double(cfg.x0)
       << ") = " << format_double(sol->value(cfg.t0, cfg.x0)) << "; dx = " << format_double(sol->dx)
       << ", reporting levels = " << sol->n_levels() << ", sub-steps = " << sol->substeps
       << ", levels with active gradient cap = " << capped;
    r.summary.push_back(os.str());
    for (const auto& w : sol->warnings) r.summary.push_back("warning: " + w);

    const double lo = s.tc.infimum(), hi = s.tc.supremum();
    // Linear extension at the edges is not range-preserving; check the reporting window.
    double worst = 0.0;
    const auto idx = window_indices(*sol, cfg.x0, cfg.grid.window);
    for (std::size_t l = 0; l < sol->n_levels(); ++l)
        for (std::size_t i : idx) worst = std::max({worst, lo - sol->u_at(l, i), sol->u_at(l, i) - hi});
    r.checks.push_back(check("maximum_principle_violation", worst, 1e-9, worst <= 1e-9));
    if (!sol->warnings.empty())
        r.checks.push_back(check("domain_width_self_check", 1.0, 0.0, false, false, sol->warnings.front()));
}

void oracle_gap(RunResults& r, const RunConfig& cfg, const Setup& s) {
    if (!is_cole_hopf_case(s.gen, s.model)) return;
    const auto& sol = *r.solution;
    const std::size_t l0 = 0;
    double gap = 0.0;
    for (std::size_t i : window_indices(sol, cfg.x0, cfg.grid.window))
        gap = std::max(gap, std::abs(sol.u_at(l0, i) -
                                     cole_hopf_reference(s.model, s.gen, s.tc, sol.t[l0], sol.x[i])));
    r.checks.push_back(check("cole_hopf_sup_gap", gap, 5e-3, gap <= 5e-3));
    r.summary.push_back("Cole-Hopf sup-gap over |x - x0| <= " + format_double(cfg.grid.window) +
                        ": " + format_double(gap));
}

void cmd_solve(RunResults& r, const RunConfig& cfg) {
    const Setup s = setup(cfg);
    solve_step(r, cfg, s);
    oracle_gap(r, cfg, s);
}

void cmd_checks(RunResults& r, const RunConfig& cfg) {
    const Setup s = setup(cfg);
    solve_step(r, cfg, s);
    oracle_gap(r, cfg, s);
    const PdeSolution& sol = *r.solution;
    const double sup = s.tc.sup_norm();

    const CompatReport compat = check_compat_417(s.model, 5);
    r.checks.push_back(check("lambda_covers_sup_b_x", compat.measured, compat.lambda, compat.pass));

    PathBundle bundle = simulate_paths(s.model, cfg.x0, cfg.t0, cfg.mc.n_paths, cfg.mc.n_steps, cfg.mc.seed);
    const ResidualReport res = bsde_residual(sol, s.model, s.gen, s.tc, bundle);
    r.checks.push_back(check("rms_terminal_residual", res.rms_terminal_residual, sup,
                             res.rms_terminal_residual <= sup, false));
    r.checks.push_back(check("max_step_residual", res.max_step_residual, sup,
                             res.max_step_residual <= sup, false));
    r.checks.push_back(check("excluded_path_fraction", res.excluded_fraction, 0.01,
                             res.excluded_fraction <= 0.01, false));
    const CheckResult bmo = bmo_energy_check(res, sup);
    r.checks.push_back(check("bmo_energy", bmo.statistic, bmo.threshold, bmo.pass));

    const EnvelopeReport zb = apriori_z_bound(sol, s.model, sup);
    r.checks.push_back(check("apriori_z_bound_worst_ratio", zb.worst_ratio, 1.0, zb.pass));
    const EnvelopeReport pb = penalty_bound_check(sol, Conjugate(s.gen), sup);
    if (pb.skipped)
        r.checks.push_back(check("penalty_bound_worst_ratio", 0.0, 1.0, false, false, pb.reason));
    else
        r.checks.push_back(check("penalty_bound_worst_ratio", pb.worst_ratio, 1.0, pb.pass));

    if (s.gen.kind() == GeneratorKind::Power) {
        try {
            const ExponentFit f = exponent_fit(sol, s.gen.exponent());
            r.checks.push_back(check("exponent_fit_slope_error", std::abs(f.slope - f.target), 0.15,
                                     f.pass, false));
            r.summary.push_back("exponent fit slope " + format_double(f.slope) + " +/- " +
                                format_double(f.stderr_) + " over " + std::to_string(f.points) +
                                " levels, target " + format_double(f.target));
        } catch (const NoFitError& e) {
            r.checks.push_back(check("exponent_fit_slope_error", 0.0, 0.15, false, false, e.what()));
        }
    }
    std::ostringstream os;
    os << "residuals: rms terminal " << format_double(res.rms_terminal_residual) << ", max step "
       << format_double(res.max_step_residual) << ", energy " << format_double(res.energy) << " +/- "
       << format_double(res.energy_se) << " over " << res.paths_used << " paths";
    r.summary.push_back(os.str());
    if (cfg.dump_paths) r.paths = std::move(bundle);
}

void cmd_dual(RunResults& r, const RunConfig& cfg) {
    const Setup s = setup(cfg);
    solve_step(r, cfg, s);
    const Conjugate conj(s.gen);
    const DualityReport d = duality_gap(s.model, conj, s.tc, r.solution, cfg.x0, cfg.t0, cfg.mc.n_paths,
                                        cfg.mc.n_steps, cfg.mc.seed, cfg.dual.constants,
                                        cfg.dual.scheme_tol);
    for (const auto& row : d.rows) {
        const double se = row.estimate.std_error;
        r.checks.push_back(check("dual_lower_bound_" + row.control, row.estimate.value,
                                 d.u0 - 3.0 * se - d.scheme_tol, row.lower_bound_ok));
        if (row.is_feedback) {
            // Attainment is only guaranteed in the quadratic case.
            const bool hard = is_cole_hopf_case(s.gen, s.model);
            r.checks.push_back(check("dual_feedback_attainment_gap", std::abs(row.estimate.value - d.u0),
                                     3.0 * se + d.scheme_tol, row.attainment_ok, hard));
        }
    }
    r.checks.push_back(check("dual_zero_control_strictly_above", d.rows.front().estimate.value,
                             d.u0 + 3.0 * d.rows.front().estimate.std_error, d.zero_strictly_above,
                             false));
    std::ostringstream csv;
    write_dual_csv(d, csv);
    r.tables.emplace_back("dual.csv", csv.str());
    r.summary.push_back("dual estimates against u(t0, x0) = " + format_double(d.u0) + " with " +
                        std::to_string(cfg.mc.n_paths) + " paths, " + std::to_string(cfg.mc.n_steps) +
                        " steps");
    if (cfg.dump_paths)
        r.paths = simulate_paths(s.model, cfg.x0, cfg.t0, std::min<std::size_t>(cfg.mc.n_paths, 1000),
                                 cfg.mc.n_steps, cfg.mc.seed);
}

void cmd_regularize(RunResults& r, const RunConfig& cfg) {
    const Setup s = setup(cfg);
    const auto& ms = cfg.regularize.m_list;
    std::vector<Side> sides;
    if (cfg.regularize.side != "upper") sides.push_back(Side::Lower);
    if (cfg.regularize.side != "lower") sides.push_back(Side::Upper);

    std::ostringstream csv;
    CsvWriter w(csv);
    w.header({"side", "m", "u0", "certified_gap", "measured_gap"});
    std::vector<std::vector<double>> u0(2);
    constexpr std::size_t dense = 2001;
    for (Side side : sides) {
        const char* name = side == Side::Lower ? "lower" : "upper";
        const auto family = solve_regularized_family(s.model, s.gen, s.tc, ms, side, cfg.grid, cfg.t0);
        const auto idx = window_indices(family.front(), cfg.x0, cfg.grid.window);
        double worst = 0.0;
        for (std::size_t k = 0; k + 1 < family.size(); ++k)
            for (std::size_t i : idx) {
                const double a = family[k].u_at(0, i), b = family[k + 1].u_at(0, i);
                worst = std::max(worst, side == Side::Lower ? a - b : b - a);
            }
        r.checks.push_back(check(std::string("ladder_monotone_violation_") + name, worst, 1e-9, worst <= 1e-9));

        for (std::size_t k = 0; k < ms.size(); ++k) {
            const double m = ms[k];
            const double u = family[k].value(cfg.t0, cfg.x0);
            u0[side == Side::Lower ? 0 : 1].push_back(u);
            double cert = NAN, measured = 0.0;
            const TerminalCondition reg = s.tc.regularized(m, side);
            for (std::size_t j = 0; j < dense; ++j) {
                const double x = cfg.grid.x_lo + (cfg.grid.x_hi - cfg.grid.x_lo) * static_cast<double>(j) /
                                                     static_cast<double>(dense - 1);
                measured = std::max(measured, std::abs(s.tc(x) - reg(x)));
            }
            try {
                cert = uniform_gap_bound(s.tc, m);
                const std::string n = std::string("certified_gap_") + name + "_m" + format_double(m);
                r.checks.push_back(check(n, measured, cert + 1e-6, measured <= cert + 1e-6));
            } catch (const NoModulusError&) {
            }
            w.cell(name).cell(m).cell(u).cell(cert).cell(measured).end_row();
        }
    }
    if (sides.size() == 2) {
        const bool continuous = s.tc.breakpoints().empty();
        double worst = 0.0, last = 0.0;
        for (std::size_t k = 0; k < ms.size(); ++k) {
            const double gap = u0[1][k] - u0[0][k];
            if (gap < -1e-9) worst = std::max(worst, -gap);
            if (k > 0) worst = std::max(worst, gap - (u0[1][k - 1] - u0[0][k - 1]));
            last = gap;
        }
        r.checks.push_back(check("squeeze_gap_growth", worst, 1e-9, worst <= 1e-9, continuous));
        r.summary.push_back("upper minus lower at (t0, x0) for m = " + format_double(ms.back()) + ": " +
                            format_double(last));
    }
    if (s.tc.breakpoints().empty() == false)
        r.summary.push_back("terminal data has jumps; the squeeze check is reported as soft");
    r.tables.emplace_back("regularize.csv", csv.str());
}

void cmd_oracle(RunResults& r, const RunConfig& cfg) {
    const Setup s = setup(cfg);
    if (!is_cole_hopf_case(s.gen, s.model))
        throw UnsupportedError("oracle needs a quadratic generator with zero drift");
    std::ostringstream csv;
    CsvWriter w(csv);
    w.header({"t", "x", "u_oracle"});
    constexpr std::size_t n = 201;
    const double lo = s.tc.infimum() - 1e-12, hi = s.tc.supremum() + 1e-12;
    bool inside = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = cfg.x0 - cfg.grid.window + 2.0 * cfg.grid.window * static_cast<double>(i) /
                                                        static_cast<double>(n - 1);
        const double u = cole_hopf_reference(s.model, s.gen, s.tc, cfg.t0, x);
        inside = inside && u >= lo && u <= hi;
        w.cell(cfg.t0).cell(x).cell(u).end_row();
    }
    r.checks.push_back(check("oracle_within_terminal_range", inside ? 0.0 : 1.0, 0.0, inside));
    r.tables.emplace_back("oracle.csv", csv.str());
    r.summary.push_back("oracle u(" + format_double(cfg.t0) + ", " + format_double(cfg.x0) + ") = " +
                        format_double(cole_hopf_reference(s.model, s.gen, s.tc, cfg.t0, cfg.x0)));
}

void add_report(RunResults& r, const CounterexampleReport& rep, std::vector<CheckOutcome>& rows) {
    for (const auto& c : rep.checks) {
        r.checks.push_back(c);
        rows.push_back(c);
    }
    for (const auto& s : rep.summary) r.summary.push_back(s);
}

void cmd_counterexample(RunResults& r, const RunConfig& cfg) {
    const auto& ce = cfg.counterexample;
    r.label = "counterexample " + ce.which;
    CounterexampleReport all;
    all.construction = ce.which;
    if (ce.which == "3.1") {
        add_report(r, thm31_series_report(build_thm31(ce.q, ce.K.value_or(10000), ce.T)), all.checks);
    } else if (ce.which == "3.3") {
        const Thm33Config c = build_thm33(ce.q, ce.n, ce.theta, ce.epsilon, ce.K.value_or(8), ce.T);
        add_report(r, simulate_thm33_excursion(c, ce.n_paths, ce.n_steps.value_or(900), cfg.mc.seed),
                   all.checks);
    } else {
        const Thm34Config c = build_thm34(ce.q, ce.K.value_or(6), ce.T);
        const std::size_t steps = ce.n_steps.value_or(1000);
        add_report(r, thm34_checks(c, ce.n_paths, steps, cfg.mc.seed, ce.sim_cap), all.checks);
        add_report(r, limit_not_solution_witness(c, cfg.mc.seed, ce.n_paths, steps, ce.sim_cap),
                   all.checks);
    }
    std::ostringstream csv;
    write_counterexample_csv(all, csv);
    r.tables.emplace_back("counterexample.csv", csv.str());
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + p.string() + "'");
}

}  // namespace

RunResults run(const RunConfig& cfg) {
    RunResults r;
    r.command = cfg.command;
    r.label = to_string(cfg.command);
    for (const auto& w : cfg.warnings) r.summary.push_back("warning: " + w);
    switch (cfg.command) {
        case Command::Solve: cmd_solve(r, cfg); break;
        case Command::Checks: cmd_checks(r, cfg); break;
        case Command::Dual: cmd_dual(r, cfg); break;
        case Command::Regularize: cmd_regularize(r, cfg); break;
        case Command::Oracle: cmd_oracle(r, cfg); break;
        case Command::Counterexample: cmd_counterexample(r, cfg); break;
    }
    return r;
}

void emit_report(const RunResults& r, const RunConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + out_dir + "': " + ec.message());

    std::ostringstream checks;
    write_checks_csv(r.checks, checks);
    write_file(dir / "checks.csv", checks.str());

    if (r.solution) {
        const auto& s = *r.solution;
        const std::size_t ls = std::max<std::size_t>(1, (s.n_levels() - 1) / 100);
        const std::size_t xs = std::max<std::size_t>(1, (s.n_x() - 1) / 400);
        std::ostringstream sol;
        write_solution_csv(s, sol, ls, xs);
        write_file(dir / "solution.csv", sol.str());
    }
    for (const auto& [name, text] : r.tables) write_file(dir / name, text);
    if (r.paths) {
        std::ostringstream p;
        write_paths_csv(*r.paths, p);
        write_file(dir / "paths.csv", p.str());
    }

    std::ostringstream sum;
    sum << "command: " << r.label << "\n";
    sum << "seed: " << cfg.mc.seed << "\n";
    if (cfg.command != Command::Counterexample)
        sum << "generator: " << make_generator(cfg.generator).describe()
            << "\nterminal: " << make_terminal(cfg.terminal).describe()
            << "\nmodel: drift " << make_model(cfg).drift().describe() << ", sigma "
            << format_double(cfg.model.sigma) << ", T " << format_double(cfg.T) << "\n";
    for (const auto& line : r.summary) sum << line << "\n";
    sum << "checks:\n";
    std::size_t failed = 0;
    for (const auto& c : r.checks) {
        sum << "  [" << pass_label(c) << "] " << c.name << ": " << format_double(c.statistic)
            << " vs " << format_double(c.threshold);
        if (!c.note.empty()) sum << " (" << c.note << ")";
        sum << "\n";
        if (c.hard && !c.pass) ++failed;
    }
    sum << "hard checks failed: " << failed << "\n";
    sum << "exit status: " << (failed == 0 ? 0 : 1) << "\n";
    write_file(dir / "summary.txt", sum.str());
}

int execute(const RunConfig& cfg, std::ostream& err) {
    for (const auto& w : cfg.warnings) err << "warning: " << w << "\n";
    RunResults r;
    try {
        r = run(cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        try {
            std::filesystem::create_directories(cfg.out_dir);
            write_file(std::filesystem::path(cfg.out_dir) / "summary.txt",
                       "command: " + to_string(cfg.command) + "\nerror: " + e.what() + "\nexit status: 2\n");
        } catch (const std::exception&) {
        }
        return 2;
    }
    try {
        emit_report(r, cfg, cfg.out_dir);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    for (const auto& c : r.checks)
        if (c.hard && !c.pass) err << "failed: " << c.name << " " << format_double(c.statistic)
                                   << " vs " << format_double(c.threshold) << "\n";
    return all_hard_pass(r.checks) ? 0 : 1;
}

}  // namespace sqbsde
