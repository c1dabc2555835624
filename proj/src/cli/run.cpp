#include "gbdsde/cli/run.hpp"
#include "gbdsde/certificates.hpp"
#include "gbdsde/errors.hpp"
#include "gbdsde/picard_solver.hpp"
#include "gbdsde/teugels_basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace gbdsde::cli {
namespace {

namespace fs = std::filesystem;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV file whose first lines are `#` metadata.
class CsvWriter {
public:
    CsvWriter(const fs::path& path, const ExperimentConfig& cfg, const std::string& command)
        : path_(path), out_(path, std::ios::binary)
    {
        if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
        out_ << "# gbdsde " << kVersion << " " << command << "\n";
        out_ << "# config_sha256 " << cfg.hash << "\n";
        out_ << "# seed " << cfg.seed << "\n";
        out_ << "# n_paths " << cfg.n_paths << "\n";
    }

    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

    ~CsvWriter() { out_.flush(); }

private:
    fs::path path_;
    std::ofstream out_;
};

struct Context {
    ExperimentConfig cfg;
    fs::path out_dir;
    std::string command;

    CsvWriter csv(const std::string& name) const { return {out_dir / name, cfg, command}; }
};

struct World {
    LevyModel model;
    TeugelsBasis basis;
    TimeGrid grid;
};

World make_world(const ExperimentConfig& cfg)
{
    LevyModel model = build_model(cfg);
    TeugelsBasis basis = build_basis(model, cfg.max_order, cfg.pivot_tol);
    return {model, basis, TimeGrid::uniform(model.horizon(), cfg.steps)};
}

PathBundle make_bundle(const ExperimentConfig& cfg, const World& w)
{
    return simulate(w.model, w.basis, w.grid, cfg.a_spec, cfg.n_paths, cfg.seed);
}

int cmd_basis(const Context& ctx, std::ostream& out)
{
    const World w = make_world(ctx.cfg);
    const GramReport gram = gram_check(w.basis);
    auto csv = ctx.csv("basis.csv");
    csv.comment("rank " + std::to_string(w.basis.rank));
    csv.comment("gram_max_residual " + num(gram.max_abs));
    std::vector<std::string> head{"i"};
    for (int k = 1; k <= w.basis.rank; ++k) head.push_back("c_" + std::to_string(k));
    csv.row(head);
    for (int i = 1; i <= w.basis.rank; ++i) {
        std::vector<std::string> row{std::to_string(i)};
        for (int k = 1; k <= w.basis.rank; ++k) row.push_back(num(k <= i ? w.basis.c(i, k) : 0.0));
        csv.row(row);
    }
    out << "rank " << w.basis.rank << "\n";
    out << "gram_max_residual " << num(gram.max_abs) << "\n";
    return kExitOk;
}

int cmd_simulate(const Context& ctx, std::ostream& out)
{
    const World w = make_world(ctx.cfg);
    const PathBundle b = make_bundle(ctx.cfg, w);
    auto csv = ctx.csv("paths.csv");
    csv.comment("a_process " + describe(ctx.cfg.a_spec));
    std::vector<std::string> head{"path", "k", "t", "B", "L", "A"};
    for (int i = 1; i <= b.rank; ++i) head.push_back("H" + std::to_string(i));
    csv.row(head);
    std::vector<Eigen::MatrixXd> h;
    for (int i = 1; i <= b.rank; ++i) h.push_back(b.martingale(i));
    const int shown = std::min(ctx.cfg.paths_to_write, b.n_paths);
    for (int p = 0; p < shown; ++p)
        for (int k = 0; k <= b.steps(); ++k) {
            std::vector<std::string> row{std::to_string(p), std::to_string(k), num(b.grid.t(k)),
                                         num(b.B(p, k)), num(b.L(p, k)), num(b.A(p, k))};
            for (const auto& hi : h) row.push_back(num(hi(p, k)));
            csv.row(row);
        }
    out << "paths " << b.n_paths << " steps " << b.steps() << " rank " << b.rank << " jumps "
        << b.jumps.size() << "\n";
    for (int i = 1; i <= b.rank; ++i) {
        const auto ms = mean_and_se(std::span<const double>(h[i - 1].col(b.steps()).data(),
                                                            static_cast<std::size_t>(b.n_paths)));
        out << "E[H" << i << "_T] " << num(ms.mean) << " +- " << num(ms.standard_error) << "\n";
    }
    return kExitOk;
}

void write_checks(const Context& ctx, const std::vector<CheckReport>& reports, std::ostream& out)
{
    auto csv = ctx.csv("check_margins.csv");
    csv.row({"check", "pass", "label", "value", "location"});
    std::ofstream txt(ctx.out_dir / "check_report.txt", std::ios::binary);
    txt << "# gbdsde " << kVersion << " check\n# config_sha256 " << ctx.cfg.hash << "\n# seed "
        << ctx.cfg.seed << "\n";
    for (const auto& r : reports) {
        const std::string verdict = r.pass ? "PASS" : "FAIL";
        out << verdict << " " << r.check << "\n";
        txt << verdict << " " << r.check << "\n";
        for (const auto& m : r.margins) {
            csv.row({r.check, r.pass ? "1" : "0", m.label, num(m.value), "\"" + m.location + "\""});
            txt << "  " << m.label << " = " << num(m.value)
                << (m.location.empty() ? "" : " at " + m.location) << "\n";
        }
        for (const auto& n : r.notes) {
            out << "  note: " << n << "\n";
            txt << "  note: " << n << "\n";
        }
    }
}

int cmd_check(const Context& ctx, std::ostream& out)
{
    const World w = make_world(ctx.cfg);
    const PathBundle b = make_bundle(ctx.cfg, w);
    const CoefficientSet cs = build_coefficients(ctx.cfg);
    write_checks(ctx, hypothesis_battery(ctx.cfg, cs, b), out);
    return kExitOk;
}

/// Certificate inputs with E|xi|^2 and the zero-point integrals estimated on the paths.
struct Estimated {
    CertificateInputs inputs;
    MeanSE xi_moment;
};

Estimated estimate_inputs(const CoefficientSet& cs, const PathBundle& b)
{
    const double lambda0[] = {0.0};
    const TerminalReport tr = check_terminal(cs, b, lambda0);
    Estimated e;
    e.inputs.C = cs.constants.C;
    e.inputs.alpha = cs.constants.alpha;
    e.inputs.beta = cs.constants.beta;
    e.inputs.horizon = b.grid.horizon();
    e.xi_moment = tr.lambdas.front().estimate;
    e.inputs.terminal_second_moment = e.xi_moment.mean;
    e.inputs.base = {tr.f_zero_integral.mean, tr.g_zero_integral.mean, tr.h_zero_integral.mean};
    return e;
}

MomentProvider make_provider(const ExperimentConfig& cfg, const CoefficientSet& cs,
                             const PathBundle& b, const MeanSE& xi_moment)
{
    MomentProvider mp;
    mp.source = cfg.moment_source;
    if (cfg.moment_source == MomentSource::bound) {
        const double bound = cfg.y_bound;
        mp.second_moment = [xi_moment, bound](int p, double) {
            return p == 1 ? xi_moment : MeanSE{bound, 0.0};
        };
        return mp;
    }
    auto sol = std::make_shared<SolutionEstimate>(solve(b, cs, cfg.solver));
    mp.second_moment = [sol, &b, xi_moment](int p, double t) {
        if (p == 1) return xi_moment;
        const int k = std::clamp(static_cast<int>(std::lround(t / b.grid.dt(0))), 0, b.steps());
        std::vector<double> sq(static_cast<std::size_t>(b.n_paths));
        for (int q = 0; q < b.n_paths; ++q) sq[q] = sol->Y(q, k) * sol->Y(q, k);
        return mean_and_se(sq);
    };
    return mp;
}

int cmd_schedule(const Context& ctx, std::ostream& out)
{
    const World w = make_world(ctx.cfg);
    const PathBundle b = make_bundle(ctx.cfg, w);
    const CoefficientSet cs = build_coefficients(ctx.cfg);
    const Estimated est = estimate_inputs(cs, b);
    const MomentProvider mp = make_provider(ctx.cfg, cs, b, est.xi_moment);
    const Schedule s = schedule(est.inputs, mp, cs.rho, ctx.cfg.p_max);

    auto csv = ctx.csv("schedule.csv");
    csv.comment("modulus " + cs.rho.describe());
    csv.comment("M " + num(s.M));
    csv.comment("A " + num(s.A));
    csv.comment(std::string("moment_source ") + (s.source == MomentSource::solver ? "solver" : "bound"));
    csv.comment(std::string("terminated ") + (s.terminated ? "true" : "false"));
    for (const auto& n : s.notes) csv.comment("note: " + n);
    csv.row({"p", "T_p", "T_prev", "second_moment", "second_moment_se", "mu0", "M_p"});
    for (const auto& iv : s.intervals)
        csv.row({std::to_string(iv.p), num(iv.t_start), num(iv.t_end), num(iv.terminal_moment.mean),
                 num(iv.terminal_moment.standard_error), num(iv.mu0), num(iv.Mp)});
    out << "M " << num(s.M) << "\nA " << num(s.A) << "\nintervals " << s.intervals.size()
        << "\nterminated " << (s.terminated ? "true" : "false") << "\n";
    for (const auto& n : s.notes) out << "note: " << n << "\n";
    return kExitOk;
}

int cmd_phi(const Context& ctx, std::ostream& out)
{
    const World w = make_world(ctx.cfg);
    const PathBundle b = make_bundle(ctx.cfg, w);
    const CoefficientSet cs = build_coefficients(ctx.cfg);
    const Estimated est = estimate_inputs(cs, b);
    const double M = constant_M(est.inputs.C, est.inputs.alpha, est.inputs.horizon);
    const MuMp mm = mu_and_Mp(est.inputs);
    if (!(mm.mu0 > 0.0)) throw ConfigError("phi needs mu_0 > 0");
    const double T = est.inputs.horizon;
    const double T1 = next_breakpoint(T, mm.Mp, mm.mu0, cs.rho, M);
    const auto grid = uniform_points(T1, T, ctx.cfg.phi_points);
    const PhiTable tab = phi_sequence(M, mm.Mp, cs.rho, grid, ctx.cfg.phi_n_max);

    auto csv = ctx.csv("phi.csv");
    csv.comment("modulus " + cs.rho.describe());
    csv.comment("M " + num(M) + " M_1 " + num(mm.Mp) + " T_1 " + num(T1));
    csv.comment(std::string("monotone ") + (tab.monotone ? "true" : "false"));
    std::vector<std::string> head{"t"};
    for (std::size_t n = 0; n < tab.phi.size(); ++n) head.push_back("phi_" + std::to_string(n));
    csv.row(head);
    for (std::size_t j = 0; j < tab.t.size(); ++j) {
        std::vector<std::string> row{num(tab.t[j])};
        for (const auto& ph : tab.phi) row.push_back(num(ph[j]));
        csv.row(row);
    }
    auto sup = ctx.csv("phi_sup.csv");
    sup.row({"n", "sup_phi"});
    for (std::size_t n = 0; n < tab.sup.size(); ++n) sup.row({std::to_string(n), num(tab.sup[n])});
    out << "M " << num(M) << "\nM_1 " << num(mm.Mp) << "\nT_1 " << num(T1) << "\nmonotone "
        << (tab.monotone ? "true" : "false") << "\nsup_phi_" << tab.sup.size() - 1 << " "
        << num(tab.sup.back()) << "\n";
    return kExitOk;
}

int cmd_solve(const Context& ctx, bool force, std::ostream& out, std::ostream& err)
{
    const World w = make_world(ctx.cfg);
    const PathBundle b = make_bundle(ctx.cfg, w);
    const CoefficientSet cs = build_coefficients(ctx.cfg);
    const auto reports = hypothesis_battery(ctx.cfg, cs, b);
    std::vector<std::string> failed;
    for (const auto& r : reports)
        if (!r.pass) failed.push_back(r.check);
    if (!failed.empty() && !force) {
        err << "solve refused: hypothesis checks failed:";
        for (const auto& f : failed) err << " " << f;
        err << " (run `check` for margins, or pass --force)\n";
        return kExitRefused;
    }
    const SolutionEstimate sol = solve(b, cs, ctx.cfg.solver);
    const int n = b.steps();

    std::string warnings;
    for (const auto& f : failed) warnings += (warnings.empty() ? "" : " ") + f;
    auto note = [&](CsvWriter& c) {
        c.comment("preset " + cs.name);
        if (!failed.empty()) c.comment("forced past failing checks: " + warnings);
    };

    {
        auto csv = ctx.csv("y0.csv");
        note(csv);
        csv.row({"path", "Y0"});
        for (int p = 0; p < b.n_paths; ++p) csv.row({std::to_string(p), num(sol.Y(p, 0))});
    }
    {
        auto csv = ctx.csv("residuals.csv");
        note(csv);
        csv.row({"iteration", "residual"});
        for (std::size_t i = 0; i < sol.residuals.size(); ++i)
            csv.row({std::to_string(i + 1), num(sol.residuals[i])});
    }
    {
        auto csv = ctx.csv("profile.csv");
        note(csv);
        csv.row({"k", "t", "mean_Y", "mean_abs_Y", "mean_norm_Z"});
        for (int k = 0; k <= n; ++k) {
            double zn = 0.0;
            if (k < n)
                for (int p = 0; p < b.n_paths; ++p) {
                    double s = 0.0;
                    for (const auto& z : sol.Z) s += z(p, k) * z(p, k);
                    zn += std::sqrt(s);
                }
            csv.row({std::to_string(k), num(b.grid.t(k)), num(sol.Y.col(k).mean()),
                     num(sol.Y.col(k).cwiseAbs().mean()), num(k < n ? zn / b.n_paths : 0.0)});
        }
    }
    const auto y0 = mean_and_se(std::span<const double>(sol.Y.col(0).data(),
                                                        static_cast<std::size_t>(b.n_paths)));
    {
        auto csv = ctx.csv("summary.csv");
        note(csv);
        csv.row({"key", "value"});
        csv.row({"converged", sol.converged ? "true" : "false"});
        csv.row({"n_iterations", std::to_string(sol.n_iterations)});
        csv.row({"final_residual", num(sol.residuals.empty() ? 0.0 : sol.residuals.back())});
        csv.row({"Y0_mean", num(y0.mean)});
        csv.row({"Y0_se", num(y0.standard_error)});
        csv.row({"Y0_min", num(sol.Y.col(0).minCoeff())});
        csv.row({"Y0_max", num(sol.Y.col(0).maxCoeff())});
    }
    out << "converged " << (sol.converged ? "true" : "false") << " after " << sol.n_iterations
        << " iterations\n";
    out << "Y0 mean " << num(y0.mean) << " se " << num(y0.standard_error) << "\n";
    if (!failed.empty()) out << "warning: forced past failing checks: " << warnings << "\n";
    return kExitOk;
}

int cmd_verify(const Context& ctx, std::ostream& out)
{
    const World w = make_world(ctx.cfg);
    const PathBundle b = make_bundle(ctx.cfg, w);
    const auto results = verify_battery(ctx.cfg, w.model, w.basis, b);
    auto csv = ctx.csv("verify.csv");
    csv.row({"check", "pass", "detail"});
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        out << (r.pass ? "PASS " : "FAIL ") << r.name << " " << r.detail << "\n";
        csv.row({r.name, r.pass ? "1" : "0", "\"" + r.detail + "\""});
    }
    return all ? kExitOk : kExitCheckFailed;
}

bool h_vanishes(const CoefficientSet& cs, const SamplerConfig& s)
{
    for (double t : {s.t_min, 0.5 * (s.t_min + s.t_max), s.t_max})
        for (int i = -20; i <= 20; ++i)
            if (cs.h(t, s.y_max * i / 20.0) != 0.0) return false;
    return true;
}

} // namespace

std::vector<CheckReport> hypothesis_battery(const ExperimentConfig& cfg, const CoefficientSet& cs,
                                            const PathBundle& bundle)
{
    const SamplerConfig sampler = effective_sampler(cfg);
    const double T = bundle.grid.horizon();
    std::vector<CheckReport> out;
    out.push_back(check_growth(cs, sampler));
    if (h_vanishes(cs, sampler)) {
        CheckReport r{"monotone_h", true, {}, {"h vanishes on the sample box: no dA term, "
                                               "monotonicity not applicable"}};
        out.push_back(r);
    } else {
        out.push_back(check_monotone_h(cs, sampler));
    }
    out.push_back(check_modulus(cs, sampler));
    out.push_back(check_modulus_shape(cs.rho, T));
    const double us[] = {1e-6, 1e-3, 1.0, 10.0, 100.0};
    out.push_back(check_rho_integrable(cs.rho, T, us));
    const double probes[] = {0.0, 0.5 * T, T};
    out.push_back(check_osgood(cs.rho, constant_M(cs.constants.C, cs.constants.alpha, T), probes, T));
    out.push_back(check_terminal(cs, bundle, cfg.lambda_grid).report);
    return out;
}

int run(const RunOptions& options, std::ostream& out, std::ostream& err)
{
    try {
        Context ctx;
        ctx.command = options.command;
        ctx.cfg = load_config(options.config_path);
        if (options.seed) ctx.cfg.seed = *options.seed;
        if (options.paths) {
            if (*options.paths < 1) throw ConfigError("--paths must be >= 1");
            ctx.cfg.n_paths = *options.paths;
        }
        std::string dir = options.out_dir.value_or(ctx.cfg.out_dir);
        if (dir.empty()) {
            const char* env = std::getenv(kOutDirEnv);
            dir = env && *env ? env : "out";
        }
        ctx.out_dir = dir;
        fs::create_directories(ctx.out_dir);

        const auto& c = options.command;
        if (c == "basis") return cmd_basis(ctx, out);
        if (c == "simulate") return cmd_simulate(ctx, out);
        if (c == "check") return cmd_check(ctx, out);
        if (c == "schedule") return cmd_schedule(ctx, out);
        if (c == "phi") return cmd_phi(ctx, out);
        if (c == "solve") return cmd_solve(ctx, options.force, out, err);
        if (c == "verify") return cmd_verify(ctx, out);
        throw ConfigError("unknown subcommand '" + c + "'");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

} // namespace gbdsde::cli
