#include "gbdsde/picard_solver.hpp"
#include "gbdsde/errors.hpp"
#include "gbdsde/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gbdsde {

void SolverConfig::validate(int rank) const
{
    if (n_picard_max < 1) throw ConfigError("solver.n_picard_max must be >= 1");
    if (!(picard_tol > 0.0)) throw ConfigError("solver.picard_tol must be > 0");
    if (!(implicit_tol > 0.0)) throw ConfigError("solver.implicit_tol must be > 0");
    if (!(ridge > 0.0)) throw ConfigError("solver.ridge must be > 0");
    if (!(regression_tol > 0.0)) throw ConfigError("solver.regression_tol must be > 0");
    if (features.degree < 0) throw ConfigError("solver.degree must be >= 0");
    if (chaos_m < 0) throw ConfigError("solver.chaos_m must be >= 0");
    if (chaos_m > rank)
        throw ConfigError("solver.chaos_m = " + std::to_string(chaos_m) +
                          " exceeds the basis rank " + std::to_string(rank));
    if (rank >= 1 && chaos_m < 1) throw ConfigError("solver.chaos_m must be >= 1 when rank >= 1");
    if (!std::isfinite(initial_guess)) throw ConfigError("solver.initial_guess must be finite");
}

double implicit_h_step(double rhs, const BoundaryFn& h, double t, double dA, double tol)
{
    if (dA < 0.0) throw NumericalError("implicit step needs dA >= 0");
    if (dA == 0.0) return rhs;
    auto F = [&](double y) {
        const double hv = h(t, y);
        if (!std::isfinite(hv)) throw EvaluationError("h is not finite at y=" + std::to_string(y));
        return y - hv * dA - rhs;
    };

    double lo = rhs, hi = rhs + h(t, rhs) * dA;
    if (lo > hi) std::swap(lo, hi);
    double flo = F(lo), fhi = F(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    double width = std::max(hi - lo, 1.0 + std::abs(rhs));
    for (int expand = 0; flo > 0.0 || fhi < 0.0; ++expand) {
        if (expand == 60)
            throw NumericalError("implicit step: no bracket around the root at t=" +
                                 std::to_string(t) + " (h not decreasing?)");
        if (flo > 0.0) {
            lo -= width;
            flo = F(lo);
        }
        if (fhi < 0.0) {
            hi += width;
            fhi = F(hi);
        }
        width *= 2.0;
    }

    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fy = F(y);
        if (std::abs(fy) < tol) return y;
        if (fy < 0.0)
            lo = y;
        else
            hi = y;
        const double step = 1e-7 * (1.0 + std::abs(y));
        const double slope = (F(y + step) - fy) / step;
        double next = slope > 0.0 ? y - fy / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == y || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(y)))
            return next;
        y = next;
    }
    return y;
}

Eigen::MatrixXd step_features(const PathBundle& bundle, int k, const FeatureSet& features)
{
    const int n = bundle.steps();
    std::vector<Eigen::VectorXd> vars;
    if (features.levy) vars.emplace_back(bundle.L.col(k));
    if (features.increasing) vars.emplace_back(bundle.A.col(k));
    if (features.brownian_step) vars.emplace_back(bundle.B.col(k + 1) - bundle.B.col(k));
    if (features.backward_brownian) vars.emplace_back(bundle.B.col(n) - bundle.B.col(k + 1));
    if (vars.empty()) return Eigen::MatrixXd(bundle.n_paths, 0);
    return polynomial_features(vars, features.degree);
}

SweepResult backward_sweep(const Eigen::MatrixXd& prev_Y, const Eigen::VectorXd& terminal,
                           const PathBundle& bundle, const CoefficientSet& cs,
                           const SolverConfig& cfg, ProjectorCache* cache)
{
    const int n = bundle.steps();
    const int np = bundle.n_paths;
    const int m = cfg.chaos_m;
    if (prev_Y.rows() != np || prev_Y.cols() != n + 1)
        throw ConfigError("previous iterate does not match the path bundle");
    if (terminal.size() != np) throw ConfigError("terminal values do not match the path bundle");

    SweepResult out;
    out.Y.resize(np, n + 1);
    out.Y.col(n) = terminal;
    for (int i = 0; i < m; ++i) out.Z.emplace_back(Eigen::MatrixXd::Zero(np, n));

    ProjectorCache local;
    ProjectorCache& pc = cache ? *cache : local;
    if (pc.steps.size() != static_cast<std::size_t>(n)) {
        pc.steps.clear();
        pc.steps.resize(static_cast<std::size_t>(n));
    }

    std::vector<double> z(static_cast<std::size_t>(m));
    Eigen::VectorXd target(np);
    for (int k = n - 1; k >= 0; --k) {
        auto& slot = pc.steps[static_cast<std::size_t>(k)];
        if (!slot) {
            try {
                slot.emplace(step_features(bundle, k, cfg.features), cfg.ridge);
            } catch (const NumericalError& e) {
                throw NumericalError("regression failed at time step " + std::to_string(k) + ": " +
                                     e.what());
            }
        }
        const Projector& proj = *slot;
        const double dt = bundle.grid.dt(k);
        const double t_next = bundle.grid.t(k + 1);
        const auto y_next = out.Y.col(k + 1);

        for (int i = 0; i < m; ++i) {
            target = y_next.cwiseProduct(bundle.dH[static_cast<std::size_t>(i)].col(k));
            out.Z[static_cast<std::size_t>(i)].col(k) = proj.project(target) / dt;
        }
        for (int p = 0; p < np; ++p) {
            for (int i = 0; i < m; ++i) z[static_cast<std::size_t>(i)] = out.Z[static_cast<std::size_t>(i)](p, k);
            const double yprev = prev_Y(p, k + 1);
            const double fv = cs.f(t_next, yprev, z);
            const double gv = cs.g(t_next, yprev, z);
            if (!std::isfinite(fv) || !std::isfinite(gv))
                throw EvaluationError("f or g not finite at time step " + std::to_string(k) +
                                      ", path " + std::to_string(p));
            target(p) = y_next(p) + fv * dt + gv * bundle.dB(p, k);
        }
        const Eigen::VectorXd r = proj.project(target);
        const double t = bundle.grid.t(k);
        for (int p = 0; p < np; ++p)
            out.Y(p, k) = implicit_h_step(r(p), cs.h, t, bundle.dA(p, k), cfg.implicit_tol);
    }
    return out;
}

double e_norm(const Eigen::MatrixXd& Y, const std::vector<Eigen::MatrixXd>& Z,
              const PathBundle& bundle)
{
    const int n = bundle.steps();
    const int np = bundle.n_paths;
    if (Y.rows() != np || Y.cols() != n + 1) throw ConfigError("Y does not match the path bundle");
    for (const auto& zi : Z)
        if (zi.rows() != np || zi.cols() != n) throw ConfigError("Z does not match the path bundle");
    double total = 0.0;
    for (int p = 0; p < np; ++p) {
        double s = Y.row(p).cwiseAbs2().maxCoeff();
        for (int k = 0; k < n; ++k) {
            s += Y(p, k) * Y(p, k) * bundle.dA(p, k);
            double z2 = 0.0;
            for (const auto& zi : Z) z2 += zi(p, k) * zi(p, k);
            s += z2 * bundle.grid.dt(k);
        }
        total += s;
    }
    return total / np;
}

SolutionEstimate solve(const PathBundle& bundle, const CoefficientSet& cs, const SolverConfig& cfg)
{
    cs.validate();
    cfg.validate(bundle.rank);
    const int n = bundle.steps();
    const int np = bundle.n_paths;

    const Eigen::VectorXd terminal = evaluate_terminal(cs, bundle);
    SolutionEstimate est;
    est.Y = Eigen::MatrixXd::Constant(np, n + 1, cfg.initial_guess);
    for (int i = 0; i < cfg.chaos_m; ++i) est.Z.emplace_back(Eigen::MatrixXd::Zero(np, n));

    ProjectorCache cache;
    std::vector<double> sq(static_cast<std::size_t>(np));
    for (int it = 1; it <= cfg.n_picard_max; ++it) {
        SweepResult next = backward_sweep(est.Y, terminal, bundle, cs, cfg, &cache);

        std::vector<Eigen::MatrixXd> dz;
        for (int i = 0; i < cfg.chaos_m; ++i)
            dz.emplace_back(next.Z[static_cast<std::size_t>(i)] - est.Z[static_cast<std::size_t>(i)]);
        const Eigen::MatrixXd dy = next.Y - est.Y;
        est.residuals.push_back(e_norm(dy, dz, bundle));

        IterateGap gap;
        for (int k = 0; k <= n; ++k) {
            for (int p = 0; p < np; ++p) sq[static_cast<std::size_t>(p)] = dy(p, k) * dy(p, k);
            const MeanSE ms = mean_and_se(sq);
            gap.mean.push_back(ms.mean);
            gap.standard_error.push_back(ms.standard_error);
        }
        est.gaps.push_back(std::move(gap));

        est.Y = std::move(next.Y);
        est.Z = std::move(next.Z);
        est.n_iterations = it;
        if (est.residuals.back() < cfg.picard_tol) {
            est.converged = true;
            break;
        }
    }
    return est;
}

} // namespace gbdsde
