#pragma once

#include "gbdsde/modulus.hpp"
#include "gbdsde/path_engine.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>

namespace gbdsde {

using ZView = std::span<const double>;

/// f(t, y, z) and g(t, y, z); z is the truncated chaos vector (Z^(1), ..., Z^(m)).
using DriverFn = std::function<double(double t, double y, ZView z)>;
/// h(t, y), integrated against dA.
using BoundaryFn = std::function<double(double t, double y)>;

/// F_T-measurable data available to the terminal condition (the L side only).
struct TerminalData {
    double levy_terminal = 0.0;             // L_T
    double increasing_terminal = 0.0;       // A_T
    std::span<const double> martingales;    // H^(1)_T .. H^(r)_T
    std::span<const JumpEvent> jumps;
};
using TerminalFn = std::function<double(const TerminalData&)>;

struct HypothesisConstants {
    double C = 1.0;     // z-regularity of f
    double alpha = 0.5; // z-regularity of g, in (0, 1)
    double beta = -1.0; // monotonicity of h, < 0
    double K = 1.0;     // growth / Lipschitz constant of h
};

/// Coefficients of the generalized backward doubly stochastic equation, with the
/// constants and modulus the hypothesis checks and certificates refer to.
/// The bounding functions default to the constant 1.
struct CoefficientSet {
    std::string name;
    DriverFn f;
    DriverFn g;
    BoundaryFn h;
    TerminalFn xi;
    Modulus rho = Modulus::linear(1.0);
    HypothesisConstants constants;
    std::function<double(double)> f_bound;
    std::function<double(double)> g_bound;
    std::function<double(double)> h_bound;

    /// Throws ConfigError on missing evaluators or constants out of range.
    void validate() const;

    [[nodiscard]] double f_bound_at(double t) const { return f_bound ? f_bound(t) : 1.0; }
    [[nodiscard]] double g_bound_at(double t) const { return g_bound ? g_bound(t) : 1.0; }
    [[nodiscard]] double h_bound_at(double t) const { return h_bound ? h_bound(t) : 1.0; }
};

/// xi evaluated on every path of the bundle.
Eigen::VectorXd evaluate_terminal(const CoefficientSet& cs, const PathBundle& bundle);

} // namespace gbdsde
