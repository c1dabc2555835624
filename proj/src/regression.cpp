#include "gbdsde/regression.hpp"
#include "gbdsde/errors.hpp"

#include <cmath>
#include <functional>

namespace gbdsde {
namespace {

bool is_constant(const Eigen::VectorXd& col)
{
    if (col.size() == 0) return true;
    const double mean = col.mean();
    const double var = (col.array() - mean).square().mean();
    return std::sqrt(var) <= 1e-12 * (1.0 + std::abs(mean));
}

double pivot_ratio(const Eigen::LLT<Eigen::MatrixXd>& llt)
{
    const Eigen::VectorXd d = llt.matrixLLT().diagonal();
    const double hi = d.cwiseAbs().maxCoeff();
    const double lo = d.cwiseAbs().minCoeff();
    return hi > 0.0 ? (lo / hi) * (lo / hi) : 0.0;
}

} // namespace

Projector::Projector(const Eigen::MatrixXd& features, double ridge)
{
    const Eigen::Index n = features.rows();
    if (n == 0) throw NumericalError("regression design has no rows");
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < features.cols(); ++j)
        if (!is_constant(features.col(j))) keep.push_back(j);
    design_.resize(n, static_cast<Eigen::Index>(keep.size()) + 1);
    design_.col(0).setOnes();
    for (std::size_t j = 0; j < keep.size(); ++j)
        design_.col(static_cast<Eigen::Index>(j) + 1) = features.col(keep[j]);

    Eigen::MatrixXd gram = design_.transpose() * design_ / static_cast<double>(n);
    llt_.compute(gram);
    if (llt_.info() == Eigen::Success && pivot_ratio(llt_) > kRegressionRcond) return;

    ridged_ = true;
    const double shift = ridge * std::max(gram.trace() / static_cast<double>(gram.rows()), 1.0);
    gram.diagonal().array() += shift;
    llt_.compute(gram);
    if (llt_.info() != Eigen::Success || !(pivot_ratio(llt_) > kRegressionRcond * kRegressionRcond))
        throw NumericalError("regression design is singular even with ridge " +
                             std::to_string(ridge));
}

Eigen::VectorXd Projector::project(const Eigen::VectorXd& targets) const
{
    if (targets.size() != design_.rows())
        throw NumericalError("regression targets do not match the design rows");
    const Eigen::VectorXd rhs = design_.transpose() * targets / static_cast<double>(design_.rows());
    return design_ * llt_.solve(rhs);
}

Eigen::VectorXd regress_conditional(const Eigen::MatrixXd& features,
                                    const Eigen::VectorXd& targets, double ridge)
{
    return Projector(features, ridge).project(targets);
}

Eigen::MatrixXd polynomial_features(const std::vector<Eigen::VectorXd>& variables, int degree)
{
    if (degree < 0) throw ConfigError("regression degree must be >= 0");
    std::vector<Eigen::VectorXd> z;
    Eigen::Index rows = variables.empty() ? 0 : variables.front().size();
    for (const auto& v : variables) {
        if (v.size() != rows) throw ConfigError("feature variables differ in length");
        if (is_constant(v)) continue;
        const double mean = v.mean();
        const double sd = std::sqrt((v.array() - mean).square().mean());
        z.emplace_back((v.array() - mean) / sd);
    }

    std::vector<Eigen::VectorXd> cols;
    // Monomials as nondecreasing index tuples, built degree by degree.
    std::function<void(int, int, Eigen::VectorXd)> extend = [&](int start, int left,
                                                                Eigen::VectorXd acc) {
        for (int v = start; v < static_cast<int>(z.size()); ++v) {
            Eigen::VectorXd next = acc.cwiseProduct(z[v]);
            cols.push_back(next);
            if (left > 1) extend(v, left - 1, std::move(next));
        }
    };
    if (degree > 0 && !z.empty()) extend(0, degree, Eigen::VectorXd::Ones(rows));

    Eigen::MatrixXd out(rows, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = cols[j];
    return out;
}

} // namespace gbdsde
