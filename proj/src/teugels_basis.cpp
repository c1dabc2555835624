#include "gbdsde/teugels_basis.hpp"
#include "gbdsde/errors.hpp"

#include <cmath>
#include <string>

namespace gbdsde {

TeugelsBasis orthonormalize(const MomentSequence& mu_moments, int max_order, double pivot_tol)
{
    if (max_order < 1) throw ConfigError("orthonormalize requires max_order >= 1");
    if (!(pivot_tol > 0.0)) throw ConfigError("pivot_tol must be > 0");
    const auto needed = static_cast<std::size_t>(2 * max_order - 1);
    if (mu_moments.size() < needed)
        throw ConfigError("orthonormalize needs mu moments 0.." + std::to_string(needed - 1));

    TeugelsBasis basis;
    basis.mu_moments = mu_moments;
    const auto& m = mu_moments.values;
    if (!(m[0] > pivot_tol)) {
        basis.coeffs.resize(0, 0);
        return basis;
    }

    const int n = max_order;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    int rank = 0;
    for (int i = 0; i < n; ++i) {
        const double gii = m[2 * i];
        double d = gii;
        for (int k = 0; k < i; ++k) d -= L(i, k) * L(i, k);
        if (!(gii > 0.0) || !(d > pivot_tol * gii)) break;
        L(i, i) = std::sqrt(d);
        for (int j = i + 1; j < n; ++j) {
            double s = m[i + j];
            for (int k = 0; k < i; ++k) s -= L(j, k) * L(i, k);
            L(j, i) = s / L(i, i);
        }
        rank = i + 1;
    }

    basis.rank = rank;
    const Eigen::MatrixXd Lr = L.topLeftCorner(rank, rank);
    basis.coeffs = Lr.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(rank, rank));
    basis.coeffs.triangularView<Eigen::StrictlyUpper>().setZero();
    return basis;
}

TeugelsBasis build_basis(const LevyModel& model, int max_order, double pivot_tol)
{
    if (max_order < 1) throw ConfigError("build_basis requires max_order >= 1");
    return orthonormalize(moments_mu(model, 2 * max_order - 2), max_order, pivot_tol);
}

double eval_q(const TeugelsBasis& basis, int i, double x)
{
    if (i < 1 || i > basis.rank)
        throw IndexError("q_" + std::to_string(i) + " requested from a basis of rank " +
                         std::to_string(basis.rank));
    double v = 0.0;
    for (int k = i - 1; k >= 0; --k) v = v * x + basis.coeffs(i - 1, k);
    return v;
}

GramReport gram_check(const TeugelsBasis& basis)
{
    const int r = basis.rank;
    GramReport rep;
    rep.residuals = Eigen::MatrixXd::Zero(r, r);
    const auto& m = basis.mu_moments.values;
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            double s = 0.0;
            for (int a = 0; a <= i; ++a)
                for (int b = 0; b <= j; ++b)
                    s += basis.coeffs(i, a) * basis.coeffs(j, b) * m[a + b];
            rep.residuals(i, j) = s - (i == j ? 1.0 : 0.0);
        }
    }
    rep.max_abs = r > 0 ? rep.residuals.cwiseAbs().maxCoeff() : 0.0;
    return rep;
}

} // namespace gbdsde
