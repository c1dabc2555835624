#pragma once

#include "gbdsde/levy_model.hpp"

#include <Eigen/Dense>

namespace gbdsde {

/// Orthonormal polynomials q_1..q_r in L^2(mu).
///
/// Row i-1 of `coeffs` holds q_i by ascending power, so
/// q_i(x) = coeffs(i-1,0) + coeffs(i-1,1) x + ... + coeffs(i-1,i-1) x^{i-1};
/// in the usual notation coeffs(i-1,k-1) = c_{i,k}. The matrix is lower
/// triangular with a strictly positive diagonal.
struct TeugelsBasis {
    int rank = 0;
    Eigen::MatrixXd coeffs;
    MomentSequence mu_moments;

    /// c_{i,k}, 1 <= k <= i <= rank.
    [[nodiscard]] double c(int i, int k) const { return coeffs(i - 1, k - 1); }
};

inline constexpr double kDefaultPivotTol = 1e-12;

/// Cholesky factorisation of the Hankel moment matrix G[a][b] = m_{a+b},
/// a,b < max_order, stopping at the first step whose residual squared norm
/// d_i satisfies d_i <= pivot_tol * G[i][i] (relative to the squared norm of
/// the monomial being orthogonalised). A mu of total mass <= pivot_tol gives
/// a rank-0 basis.
TeugelsBasis orthonormalize(const MomentSequence& mu_moments, int max_order,
                            double pivot_tol = kDefaultPivotTol);

/// Moments of mu up to the order orthonormalize needs, then orthonormalize.
TeugelsBasis build_basis(const LevyModel& model, int max_order,
                         double pivot_tol = kDefaultPivotTol);

/// Horner evaluation of q_i(x). Throws IndexError unless 1 <= i <= rank.
double eval_q(const TeugelsBasis& basis, int i, double x);

struct GramReport {
    Eigen::MatrixXd residuals; // int q_i q_j dmu - delta_ij
    double max_abs = 0.0;
};

/// Residual of the orthonormality relations, computed from the moments.
GramReport gram_check(const TeugelsBasis& basis);

} // namespace gbdsde
