#pragma once

#include "gbdsde/coefficients.hpp"
#include "gbdsde/path_engine.hpp"
#include "gbdsde/regression.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace gbdsde {

/// Conditioning variables at t_k, expanded into polynomials of total degree `degree`.
/// Under F_{t_k} = F^L_{t_k} v F^B_{t_k,T} the Brownian increments after t_k are
/// known, so dB_k and B_T - B_{t_{k+1}} are legitimate regressors.
struct FeatureSet {
    bool levy = true;               // L_{t_k}
    bool increasing = true;         // A_{t_k}
    bool brownian_step = true;      // dB_k
    bool backward_brownian = true;  // B_T - B_{t_{k+1}}
    int degree = 2;
};

struct SolverConfig {
    int n_picard_max = 50;
    double picard_tol = 1e-3;     // on the squared E-norm distance of consecutive iterates
    FeatureSet features;
    int chaos_m = 1;              // Z^(i) for i <= m, zero beyond
    double implicit_tol = 1e-12;
    double ridge = 1e-8;
    /// Accuracy budget of one regression conditional expectation, as a mean
    /// squared error. Reported; tests compare against multiples of it.
    double regression_tol = 1e-3;
    double initial_guess = 0.0;   // Y^0

    /// Throws ConfigError on out-of-range fields. `rank` is the basis rank.
    void validate(int rank) const;
};

/// Per-grid-point mean and standard error of |Y^n - Y^{n-1}|^2 over paths.
struct IterateGap {
    std::vector<double> mean;
    std::vector<double> standard_error;
};

struct SolutionEstimate {
    Eigen::MatrixXd Y;              // n_paths x (N+1)
    std::vector<Eigen::MatrixXd> Z; // Z[i-1]: n_paths x N, values at t_0..t_{N-1}
    std::vector<double> residuals;  // E-norm distance of iterate n to iterate n-1
    std::vector<IterateGap> gaps;   // gaps[n-1] compares iterate n with n-1
    bool converged = false;
    int n_iterations = 0;
};

struct SweepResult {
    Eigen::MatrixXd Y;
    std::vector<Eigen::MatrixXd> Z;
};

/// Regression designs per time step, reused across Picard iterations (the
/// features depend only on the paths).
struct ProjectorCache {
    std::vector<std::optional<Projector>> steps;
};

/// Root of y = rhs + h(t, y) dA by safeguarded Newton on a monotone bracket.
/// dA = 0 returns rhs exactly. Throws NumericalError when no bracket is found,
/// which means h is not decreasing as the monotonicity hypothesis requires.
double implicit_h_step(double rhs, const BoundaryFn& h, double t, double dA, double tol);

/// Polynomial regression design at step k (intercept not included).
Eigen::MatrixXd step_features(const PathBundle& bundle, int k, const FeatureSet& features);

/// One backward sweep with `prev_Y` frozen in the y-slots of f and g. `terminal`
/// holds xi per path; Y_N = terminal exactly.
SweepResult backward_sweep(const Eigen::MatrixXd& prev_Y, const Eigen::VectorXd& terminal,
                           const PathBundle& bundle, const CoefficientSet& cs,
                           const SolverConfig& cfg, ProjectorCache* cache = nullptr);

/// Mean over paths of max_k Y_k^2 + sum_k Y_k^2 dA_k + sum_k |Z_k|^2 dt_k.
double e_norm(const Eigen::MatrixXd& Y, const std::vector<Eigen::MatrixXd>& Z,
              const PathBundle& bundle);

/// Picard iteration Y^n = backward_sweep(Y^{n-1}) from Y^0 = cfg.initial_guess, until
/// the E-norm distance of consecutive iterates drops below cfg.picard_tol or
/// cfg.n_picard_max sweeps have run.
SolutionEstimate solve(const PathBundle& bundle, const CoefficientSet& cs, const SolverConfig& cfg);

} // namespace gbdsde
