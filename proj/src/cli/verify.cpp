#include "gbdsde/cli/run.hpp"
#include "gbdsde/picard_solver.hpp"
#include "gbdsde/presets.hpp"
#include "gbdsde/teugels_basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace gbdsde::cli {
namespace {

std::string fmt(const char* pattern, double a, double b)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

VerifyResult within_se(const std::string& name, const MeanSE& ms, double expected, double n_se)
{
    const double dev = std::abs(ms.mean - expected);
    const double allowed = n_se * ms.standard_error + 1e-12;
    return {name, dev <= allowed, fmt("deviation %.3g allowed %.3g", dev, allowed)};
}

/// Pathwise difference Y - exact over every grid point: worst |mean| against
/// 3 (SE + dt).
VerifyResult closed_form(const std::string& name, const SolutionEstimate& sol,
                         const Eigen::MatrixXd& exact, const PathBundle& b)
{
    double worst = 0.0, worst_allowed = 0.0;
    bool ok = true;
    std::vector<double> d(static_cast<std::size_t>(b.n_paths));
    for (int k = 0; k <= b.steps(); ++k) {
        for (int p = 0; p < b.n_paths; ++p) d[p] = sol.Y(p, k) - exact(p, k);
        const MeanSE ms = mean_and_se(d);
        const double allowed = 3.0 * (ms.standard_error + b.grid.dt(std::min(k, b.steps() - 1)));
        if (std::abs(ms.mean) > allowed) ok = false;
        if (std::abs(ms.mean) >= worst) {
            worst = std::abs(ms.mean);
            worst_allowed = allowed;
        }
    }
    return {name, ok, fmt("max |E(Y - exact)| %.3g allowed %.3g", worst, worst_allowed)};
}

} // namespace

std::vector<VerifyResult> verify_battery(const ExperimentConfig& cfg, const LevyModel& model,
                                         const TeugelsBasis& basis, const PathBundle& b)
{
    (void)model;
    std::vector<VerifyResult> out;
    const int n = b.steps();
    const double T = b.grid.horizon();

    const GramReport gram = gram_check(basis);
    out.push_back({"orthonormality", gram.max_abs < 1e-10, fmt("max residual %.3g rank %.0f", gram.max_abs, basis.rank)});

    for (int i = 1; i <= b.rank; ++i) {
        const Eigen::VectorXd h = b.martingale_terminal(i);
        const MeanSE ms = mean_and_se(std::span<const double>(h.data(), static_cast<std::size_t>(h.size())));
        out.push_back(within_se("martingale_mean_H" + std::to_string(i), ms, 0.0, 4.0));
        for (int j = i; j <= b.rank; ++j)
            out.push_back(within_se("bracket_" + std::to_string(i) + std::to_string(j),
                                    bracket_stats(b, i, j), i == j ? T : 0.0, 4.0));
    }

    const double dt = T / n;
    auto ito = [&](const std::string& name, const ItoIntegrands& in) {
        const ItoResidual r = ito_identity_residual(b, in);
        const double allowed = std::max(3.0 * r.standard_error, 5.0 * dt);
        out.push_back({name, r.residual < allowed, fmt("residual %.3g allowed %.3g", r.residual, allowed)});
    };
    ito("ito_zero", {});
    {
        ItoIntegrands in;
        in.gamma = [](double) { return 1.0; };
        ito("ito_backward_brownian", in);
    }
    if (b.rank >= 1) {
        ItoIntegrands in;
        in.zeta = {[](double) { return 1.0; }};
        ito("ito_martingale", in);
    }

    SolverConfig sc = cfg.solver;
    sc.chaos_m = std::min(std::max(sc.chaos_m, 1), b.rank);
    const double c = 1.0;
    {
        const double a = 1.0;
        const auto sol = solve(b, make_preset("linear-f", {{"a", a}, {"c", c}}), sc);
        Eigen::MatrixXd exact(b.n_paths, n + 1);
        for (int k = 0; k <= n; ++k) exact.col(k).setConstant(c + a * (T - b.grid.t(k)));
        out.push_back(closed_form("solver_constant_f", sol, exact, b));
    }
    if (const auto* lin = std::get_if<LinearA>(&b.a_spec)) {
        const double beta = -1.0;
        const auto sol = solve(b, make_preset("linear-h", {{"beta", beta}, {"c", c}}), sc);
        Eigen::MatrixXd exact(b.n_paths, n + 1);
        for (int k = 0; k <= n; ++k)
            exact.col(k).setConstant(c * std::exp(beta * lin->slope * (T - b.grid.t(k))));
        out.push_back(closed_form("solver_linear_h", sol, exact, b));
    } else {
        out.push_back({"solver_linear_h", true, "skipped: closed form needs a linear A"});
    }
    {
        const double gamma = 0.5;
        const auto sol = solve(b, make_preset("constant-g", {{"gamma", gamma}, {"c", c}}), sc);
        Eigen::MatrixXd exact(b.n_paths, n + 1);
        for (int k = 0; k <= n; ++k) exact.col(k) = c + gamma * (b.B.col(n) - b.B.col(k)).array();
        out.push_back(closed_form("solver_constant_g", sol, exact, b));
    }
    if (b.rank >= 1) {
        const auto sol = solve(b, make_preset("martingale-terminal"), sc);
        const Eigen::MatrixXd h = b.martingale(1);
        double worst_mse = 0.0, zmin = 1e300, zmax = -1e300;
        for (int k = 0; k <= n; ++k)
            worst_mse = std::max(worst_mse, (sol.Y.col(k) - h.col(k)).squaredNorm() / b.n_paths);
        for (int k = 0; k < n; ++k) {
            const double zm = sol.Z[0].col(k).mean();
            zmin = std::min(zmin, zm);
            zmax = std::max(zmax, zm);
        }
        const bool ok = worst_mse < 10.0 * sc.regression_tol && zmin >= 0.9 && zmax <= 1.1;
        out.push_back({"solver_martingale_terminal", ok,
                       fmt("max E|Y - H|^2 %.3g, mean Z in [%.4g", worst_mse, zmin) +
                           fmt(", %.4g] budget %.3g", zmax, 10.0 * sc.regression_tol)});
    }
    return out;
}

} // namespace gbdsde::cli
