#pragma once

#include <Eigen/Dense>

#include <vector>

namespace gbdsde {

/// Least-squares projection onto the span of a fixed design. The design gets an
/// intercept column; input columns with (numerically) zero variance are dropped
/// since the intercept already spans them. The normal matrix is factorised once,
/// so repeated projections onto the same design are cheap.
class Projector {
public:
    /// Throws NumericalError when the design stays singular after the ridge
    /// fallback, or when no rows are given.
    Projector(const Eigen::MatrixXd& features, double ridge);

    /// Fitted values X (X'X)^{-1} X' y.
    [[nodiscard]] Eigen::VectorXd project(const Eigen::VectorXd& targets) const;

    [[nodiscard]] int columns() const noexcept { return static_cast<int>(design_.cols()); }
    [[nodiscard]] bool ridged() const noexcept { return ridged_; }

private:
    Eigen::MatrixXd design_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    bool ridged_ = false;
};

/// Smallest ratio of Cholesky pivots (squared) tolerated before ridging.
inline constexpr double kRegressionRcond = 1e-12;

/// Fitted conditional expectation of `targets` given the rows of `features`.
Eigen::VectorXd regress_conditional(const Eigen::MatrixXd& features,
                                    const Eigen::VectorXd& targets, double ridge);

/// All monomials of total degree 1..degree in the standardised columns of
/// `variables` (each column one conditioning variable, each row one path).
/// Zero-variance variables are skipped.
Eigen::MatrixXd polynomial_features(const std::vector<Eigen::VectorXd>& variables, int degree);

} // namespace gbdsde
