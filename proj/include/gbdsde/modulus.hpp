#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace gbdsde {

/// Concave nondecreasing modulus rho(t, u) with rho(t, 0) = 0, replacing a
/// Lipschitz constant in the y-regularity of f and g.
///
/// Built-in kinds (all time-homogeneous):
///   linear - rho = K u
///   log    - rho = K u (1 + ln(1/u)) for u < 1, capped at K for u >= 1.
///            Osgood but not Lipschitz at 0; the cap sits where the slope
///            reaches 0, which keeps the function concave.
///   sqrt   - rho = K sqrt(u). Not Osgood; used as a negative example.
///   table  - piecewise linear through (u_i, rho_i), starting at (0, 0),
///            continued past the last node with the last slope.
///   custom - any callable, for experiments and tests.
class Modulus {
public:
    enum class Kind { linear, log, sqrt, table, custom };

    static Modulus linear(double scale);
    static Modulus log(double scale);
    static Modulus sqrt(double scale);
    static Modulus table(std::vector<std::pair<double, double>> nodes);
    static Modulus custom(std::function<double(double, double)> fn, std::string name);

    double operator()(double t, double u) const;

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double scale() const noexcept { return scale_; }
    [[nodiscard]] std::string describe() const;

private:
    Modulus(Kind kind, double scale) : kind_(kind), scale_(scale) {}

    Kind kind_;
    double scale_ = 1.0;
    std::vector<std::pair<double, double>> nodes_;
    std::function<double(double, double)> fn_;
    std::string name_;
};

Modulus::Kind parse_modulus_kind(const std::string& name);

} // namespace gbdsde
