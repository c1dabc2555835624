#pragma once

#include "gbdsde/coefficients.hpp"
#include "gbdsde/modulus.hpp"
#include "gbdsde/path_engine.hpp"
#include "gbdsde/stats.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gbdsde {

/// Sampling box for the coefficient checks. The hypotheses quantify over
/// unbounded domains, so a check only reports margins over this box.
struct SamplerConfig {
    double t_min = 0.0;
    double t_max = 1.0;
    double y_max = 10.0;
    double z_max = 10.0;
    int z_dim = 1;
    int n_samples = 10'000;
    std::uint64_t seed = 20240601;
};

inline constexpr double kCheckTolerance = 1e-9;

struct Margin {
    std::string label;
    double value = 0.0;
    std::string location;
};

struct CheckReport {
    std::string check;
    bool pass = false;
    std::vector<Margin> margins;
    std::vector<std::string> notes;
};

/// Growth bounds |f| <= f_t + K(|y| + |z|), same for g, |h| <= h_t + K|y|.
/// Margin = lhs - rhs; pass iff every margin <= tolerance.
CheckReport check_growth(const CoefficientSet& cs, const SamplerConfig& sampler);

/// max over pairs of (<dy, dh> - beta |dy|^2) / |dy|^2; pass iff <= tolerance.
CheckReport check_monotone_h(const CoefficientSet& cs, const SamplerConfig& sampler);

/// |df|^2 - rho(t,|dy|^2) - C|dz|^2, |dg|^2 - rho(t,|dy|^2) - alpha|dz|^2 and
/// |dh| - K|dy| over random pairs, near-diagonal pairs and pairs straddling y = 0.
CheckReport check_modulus(const CoefficientSet& cs, const SamplerConfig& sampler);

/// rho(t, 0) = 0, nondecreasing and concave in u (second differences) on [0, u_max].
CheckReport check_modulus_shape(const Modulus& rho, double horizon, double u_max = 100.0,
                                int n_points = 400);

/// int_0^T rho(t, u) dt by adaptive quadrature at each u; pass iff all finite.
CheckReport check_rho_integrable(const Modulus& rho, double horizon,
                                 std::span<const double> u_values);

inline constexpr double kDivergenceRatioThreshold = 0.5;
inline constexpr double kSlopeRatioThreshold = 0.5;

/// Numerical evidence that u' = -M rho(t, u), u(T) = 0 only has the zero solution.
///  (a) divergence: I(eps) = int_eps^1 du / rho(t*, u) for eps = 1e-2..1e-10. The
///      per-decade increments of I must not decay geometrically (a convergent tail
///      decays like a geometric series; Osgood moduli decay at most harmonically).
///  (b) backward ODE from u(T) = delta, delta = 1e-6..1e-12, integrated in log u.
///      The log-log slope d ln u(0) / d ln delta must stay bounded away from 0,
///      i.e. u(0) keeps shrinking with delta instead of settling at a positive limit.
///      When every slope is below working precision the probe is inconclusive.
/// Pass iff (a) holds at every probe time and (b) holds or is inconclusive.
CheckReport check_osgood(const Modulus& rho, double M, std::span<const double> t_probe,
                         double horizon);

struct LambdaEstimate {
    double lambda = 0.0;
    MeanSE estimate;                   // E[exp(lambda A_T) |xi|^2]
    std::vector<double> subsample_means; // prefixes of n/8, n/4, n/2, n paths
    bool growing = false;
};

struct TerminalReport {
    std::vector<LambdaEstimate> lambdas;
    MeanSE f_zero_integral; // E int |f(s,0,0)|^2 ds
    MeanSE g_zero_integral; // E int |g(s,0,0)|^2 ds
    MeanSE h_zero_integral; // E int |h(s,0)|^2 dA_s
    CheckReport report;
};

/// Monte Carlo audit of the exponential integrability of xi and the
/// positivity / finiteness of the zero-point integrals.
TerminalReport check_terminal(const CoefficientSet& cs, const PathBundle& bundle,
                              std::span<const double> lambda_grid);

} // namespace gbdsde
