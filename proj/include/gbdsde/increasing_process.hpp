#pragma once

#include "gbdsde/time_grid.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gbdsde {

/// A_t = slope * t.
struct LinearA {
    double slope = 1.0;
};

/// A_t = t^exponent, exponent >= 1.
struct PowerA {
    double exponent = 1.0;
};

/// A_t = max_{s <= t} |B_s| - |B_0|, evaluated on the grid.
struct RunningMaxA {};

using IncreasingProcessSpec = std::variant<LinearA, PowerA, RunningMaxA>;

/// Throws ConfigError for specs that are not nondecreasing with A_0 = 0.
void validate(const IncreasingProcessSpec& spec);

[[nodiscard]] bool is_deterministic(const IncreasingProcessSpec& spec);

[[nodiscard]] std::string describe(const IncreasingProcessSpec& spec);

/// Values of A on the grid for one path with Brownian values `brownian` (size N+1).
void evaluate_increasing_process(const IncreasingProcessSpec& spec, const TimeGrid& grid,
                                 std::span<const double> brownian, std::span<double> out);

} // namespace gbdsde
