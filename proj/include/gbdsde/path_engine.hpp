#pragma once

#include "gbdsde/increasing_process.hpp"
#include "gbdsde/levy_model.hpp"
#include "gbdsde/stats.hpp"
#include "gbdsde/teugels_basis.hpp"
#include "gbdsde/time_grid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gbdsde {

struct JumpEvent {
    double time;
    double size;
};

/// Simulated forward paths. Matrices are (n_paths x points) so that one
/// column holds every path at a single grid index.
///
/// B, L, A: values at t_0..t_N.
/// power_jumps[j-2]: sum of (jump size)^j over step k, for j = 2..rank.
/// dH[i-1]: Teugels martingale increment over step k, for i = 1..rank.
struct PathBundle {
    TimeGrid grid;
    int n_paths = 0;
    std::uint64_t seed = 0;
    int rank = 0;
    IncreasingProcessSpec a_spec;

    Eigen::MatrixXd B{};
    Eigen::MatrixXd L{};
    Eigen::MatrixXd A{};
    std::vector<Eigen::MatrixXd> power_jumps{};
    std::vector<Eigen::MatrixXd> dH{};

    std::vector<std::size_t> jump_offsets{}; // size n_paths + 1
    std::vector<JumpEvent> jumps{};          // sorted by time within each path

    [[nodiscard]] int steps() const noexcept { return grid.steps(); }
    [[nodiscard]] std::span<const JumpEvent> jumps_of(int path) const;
    [[nodiscard]] double dB(int path, int k) const { return B(path, k + 1) - B(path, k); }
    [[nodiscard]] double dA(int path, int k) const { return A(path, k + 1) - A(path, k); }
    [[nodiscard]] double dL(int path, int k) const { return L(path, k + 1) - L(path, k); }

    /// H^(i) on the grid (n_paths x (N+1)), H^(i)_0 = 0.
    [[nodiscard]] Eigen::MatrixXd martingale(int i) const;
    /// H^(i)_T per path.
    [[nodiscard]] Eigen::VectorXd martingale_terminal(int i) const;
};

/// Exact simulation of B, L (drift + Brownian part + compound Poisson per atom),
/// the power-jump increments, dH and A. Each path draws from its own pair of
/// engines seeded from (seed, path index, stream), so the result does not
/// depend on the order in which paths are generated.
PathBundle simulate(const LevyModel& model, const TeugelsBasis& basis, const TimeGrid& grid,
                    const IncreasingProcessSpec& a_spec, int n_paths, std::uint64_t seed);

/// Recomputes dH from the jump log, L and the basis coefficients.
std::vector<Eigen::MatrixXd> reconstruct_dH(const PathBundle& bundle, const LevyModel& model,
                                            const TeugelsBasis& basis);

/// Realised covariation sum_k dH^(i)_k dH^(j)_k at T, over paths. Expectation delta_ij T.
MeanSE bracket_stats(const PathBundle& bundle, int i, int j);

/// Per-step sample mean and standard error of dH^(i)_k.
std::vector<MeanSE> increment_stats(const PathBundle& bundle, int i);

/// sum over jumps in [0, T] of size^power, over paths. Expectation T * E[L_1^{(power)}].
MeanSE jump_moment_stats(const PathBundle& bundle, int power);

/// Deterministic test integrands for the Ito-identity check (functions of time).
/// Absent functions are treated as zero; zeta may be shorter than the rank.
struct ItoIntegrands {
    std::function<double(double)> beta;
    std::function<double(double)> eta;
    std::function<double(double)> gamma;
    std::vector<std::function<double(double)>> zeta;
    double terminal_constant = 1.0;
};

struct ItoResidual {
    double residual = 0.0;       // |E LHS - E RHS|
    double standard_error = 0.0; // of the per-path difference
    double lhs = 0.0;            // E|alpha_0|^2
    double rhs = 0.0;
};

/// Builds alpha_t = c + int_0^t zeta dH + int_t^T (beta ds + eta dA + gamma dB<-)
/// on the grid, which solves the backward equation with alpha_T = c + int_0^T zeta dH
/// and is measurable w.r.t. F^L_t v F^B_{t,T}. Compares
/// E|alpha_0|^2 with E|alpha_T|^2 + 2E int alpha beta ds + 2E int alpha eta dA
///   + E int gamma^2 ds - E int |zeta|^2 ds,
/// using step-averaged alpha in the ds and dA sums.
ItoResidual ito_identity_residual(const PathBundle& bundle, const ItoIntegrands& integrands);

} // namespace gbdsde
