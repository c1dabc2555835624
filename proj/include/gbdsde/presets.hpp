#pragma once

#include "gbdsde/coefficients.hpp"

#include <map>
#include <string>
#include <vector>

namespace gbdsde {

using PresetParams = std::map<std::string, double>;

/// Named coefficient sets. Each fills in constants, modulus and bounding
/// functions that hold for its coefficients. Parameters (defaults in brackets):
///
///   trivial              f = g = h = 0, xi = c                       c [1]
///   linear-f             f = a + ky y, g = h = 0, xi = c             a [1], ky [0], c [1]
///   linear-h             h = beta y, f = g = 0, xi = c               beta [-1], c [1]
///   constant-g           g = gamma, f = h = 0, xi = c                gamma [0.5], c [1]
///   martingale-terminal  f = g = h = 0, xi = H^(i)_T                 index [1]
///   non-lipschitz        f = f0 + a w(|y|) + cz z1, g = g0 + b w(|y|), h = beta y,
///                        xi = xi_scale L_T, w(d) = d sqrt(1 - 2 ln d) capped at 1,
///                        log modulus                                  f0 [0.1], a [0.5],
///                                                                     cz [0.2], g0 [0.1], b [0.3],
///                                                                     beta [-1], xi_scale [1]
///   negative-example     f = a sqrt|y|, h = beta y, xi = c, sqrt modulus
///                                                                     a [1], beta [-1], c [1]
///   affine               f = f0 + fy y + fz z1, g = g0 + gy y + gz z1, h = h0 + hy y,
///                        xi = xi0 + xiL L_T + xiA A_T + xiH1 H^(1)_T  (all [0])
///
/// Unknown names or parameters throw ConfigError.
CoefficientSet make_preset(const std::string& name, const PresetParams& params = {});

std::vector<std::string> preset_names();

/// d sqrt(1 - 2 ln d) on (0, 1], 0 at 0 and 1 beyond; w(d)^2 = log modulus(d^2).
double log_modulus_root(double d);

} // namespace gbdsde
