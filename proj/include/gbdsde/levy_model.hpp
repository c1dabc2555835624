#pragma once

#include <string>
#include <vector>

namespace gbdsde {

/// One jump size with its intensity: nu contains intensity * delta_{position}.
struct Atom {
    double position;
    double intensity;
};

enum class MeasureTag { nu, mu };

/// Moments indexed k = 0..k_max of either the Levy measure nu or of
/// mu(dx) = x^2 nu(dx) + sigma^2 delta_0(dx).
struct MomentSequence {
    std::vector<double> values;
    MeasureTag measure = MeasureTag::nu;

    [[nodiscard]] double operator[](std::size_t k) const { return values.at(k); }
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// Parametric finite-activity jump law, discretised into atoms at construction.
///
/// Supported names:
///   "normal"  - jump sizes N(mean, stddev^2), Gauss-Hermite nodes
///   "uniform" - jump sizes U(lower, upper), Gauss-Legendre nodes
/// Nodes landing exactly on 0 are dropped (a zero jump is no jump).
struct JumpFamily {
    std::string name;
    double total_intensity = 0.0;
    double param1 = 0.0; // mean | lower
    double param2 = 0.0; // stddev | upper
    int nodes = 8;
};

/// Finite-activity Levy process L_t = b t + sigma W_t + sum of jumps,
/// with jump measure given by a finite atom list.
class LevyModel {
public:
    LevyModel(double drift, double sigma, std::vector<Atom> atoms, double horizon);

    static LevyModel from_family(double drift, double sigma, const JumpFamily& family,
                                 double horizon);

    [[nodiscard]] double drift() const noexcept { return drift_; }
    [[nodiscard]] double sigma() const noexcept { return sigma_; }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    [[nodiscard]] double total_intensity() const noexcept;

    /// Number of distinct support points of mu (atoms, plus 0 when sigma > 0).
    [[nodiscard]] std::size_t mu_support_size() const;

private:
    double drift_;
    double sigma_;
    std::vector<Atom> atoms_;
    double horizon_;
};

/// value[k] = sum_j lambda_j x_j^k, k = 0..k_max. Requires k_max >= 1.
MomentSequence moments_nu(const LevyModel& model, int k_max);

/// value[k] = nu-moment of order k+2, plus sigma^2 at k = 0. Requires k_max >= 0.
MomentSequence moments_mu(const LevyModel& model, int k_max);

/// E[L_1^{(i)}]: drift plus first jump moment for i = 1, the i-th jump moment for i >= 2.
double mean_power_jump(const LevyModel& model, int i);

} // namespace gbdsde
