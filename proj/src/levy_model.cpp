#include "gbdsde/levy_model.hpp"
#include "gbdsde/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace gbdsde {
namespace {

// Golub-Welsch for a symmetric tridiagonal Jacobi matrix with zero diagonal.
// Returns nodes and probability weights (summing to 1).
std::pair<Eigen::VectorXd, Eigen::VectorXd> golub_welsch(const Eigen::VectorXd& offdiag)
{
    const auto n = offdiag.size() + 1;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        J(k, k + 1) = offdiag(k);
        J(k + 1, k) = offdiag(k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Eigen::VectorXd weights = es.eigenvectors().row(0).array().square();
    return {es.eigenvalues(), weights};
}

} // namespace

LevyModel::LevyModel(double drift, double sigma, std::vector<Atom> atoms, double horizon)
    : drift_(drift), sigma_(sigma), atoms_(std::move(atoms)), horizon_(horizon)
{
    if (!std::isfinite(drift_)) throw ConfigError("drift must be finite");
    if (!(sigma_ >= 0.0) || !std::isfinite(sigma_)) throw ConfigError("sigma must be >= 0");
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw ConfigError("horizon must be > 0");
    for (const auto& a : atoms_) {
        if (!std::isfinite(a.position) || a.position == 0.0)
            throw ConfigError("atom positions must be finite and nonzero");
        if (!(a.intensity > 0.0) || !std::isfinite(a.intensity))
            throw ConfigError("atom intensities must be finite and > 0");
    }
}

LevyModel LevyModel::from_family(double drift, double sigma, const JumpFamily& family,
                                 double horizon)
{
    if (!(family.total_intensity > 0.0))
        throw ConfigError("jump family total intensity must be > 0");
    if (family.nodes < 1) throw ConfigError("jump family needs at least one node");

    const auto n = family.nodes;
    Eigen::VectorXd off(n - 1);
    std::vector<Atom> atoms;
    if (family.name == "normal") {
        if (!(family.param2 > 0.0)) throw ConfigError("normal jump family needs stddev > 0");
        for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
        auto [x, w] = golub_welsch(off);
        for (Eigen::Index i = 0; i < x.size(); ++i)
            atoms.push_back({family.param1 + family.param2 * x(i), family.total_intensity * w(i)});
    } else if (family.name == "uniform") {
        if (!(family.param2 > family.param1))
            throw ConfigError("uniform jump family needs upper > lower");
        for (int k = 1; k < n; ++k)
            off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
        auto [x, w] = golub_welsch(off);
        const double half = 0.5 * (family.param2 - family.param1);
        for (Eigen::Index i = 0; i < x.size(); ++i)
            atoms.push_back({family.param1 + half * (x(i) + 1.0), family.total_intensity * w(i)});
    } else {
        throw ConfigError("unsupported jump family '" + family.name + "'");
    }
    std::erase_if(atoms, [](const Atom& a) { return a.position == 0.0 || !(a.intensity > 0.0); });
    return LevyModel(drift, sigma, std::move(atoms), horizon);
}

double LevyModel::total_intensity() const noexcept
{
    double s = 0.0;
    for (const auto& a : atoms_) s += a.intensity;
    return s;
}

std::size_t LevyModel::mu_support_size() const
{
    std::set<double> pts;
    for (const auto& a : atoms_) pts.insert(a.position);
    if (sigma_ > 0.0) pts.insert(0.0);
    return pts.size();
}

MomentSequence moments_nu(const LevyModel& model, int k_max)
{
    if (k_max < 1) throw ConfigError("moments_nu requires k_max >= 1");
    MomentSequence m{std::vector<double>(static_cast<std::size_t>(k_max) + 1, 0.0), MeasureTag::nu};
    for (const auto& a : model.atoms()) {
        double p = 1.0;
        for (int k = 0; k <= k_max; ++k) {
            m.values[k] += a.intensity * p;
            p *= a.position;
        }
    }
    return m;
}

MomentSequence moments_mu(const LevyModel& model, int k_max)
{
    if (k_max < 0) throw ConfigError("moments_mu requires k_max >= 0");
    const auto nu = moments_nu(model, k_max + 2);
    MomentSequence m{std::vector<double>(static_cast<std::size_t>(k_max) + 1), MeasureTag::mu};
    for (int k = 0; k <= k_max; ++k) m.values[k] = nu.values[k + 2];
    m.values[0] += model.sigma() * model.sigma();
    return m;
}

double mean_power_jump(const LevyModel& model, int i)
{
    if (i < 1) throw ConfigError("mean_power_jump requires i >= 1");
    double s = 0.0;
    for (const auto& a : model.atoms()) s += a.intensity * std::pow(a.position, i);
    return i == 1 ? model.drift() + s : s;
}

} // namespace gbdsde
