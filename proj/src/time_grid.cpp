#include "gbdsde/time_grid.hpp"
#include "gbdsde/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gbdsde {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times))
{
    if (times_.size() < 2) throw ConfigError("time grid needs at least one step");
    if (times_.front() != 0.0) throw ConfigError("time grid must start at 0");
    for (std::size_t k = 1; k < times_.size(); ++k)
        if (!(times_[k] > times_[k - 1]) || !std::isfinite(times_[k]))
            throw ConfigError("time grid must be strictly increasing");
}

TimeGrid TimeGrid::uniform(double horizon, int steps)
{
    if (steps < 1) throw ConfigError("grid steps must be >= 1");
    if (!(horizon > 0.0)) throw ConfigError("grid horizon must be > 0");
    std::vector<double> ts(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) ts[k] = horizon * k / steps;
    ts.back() = horizon;
    return TimeGrid(std::move(ts));
}

int TimeGrid::step_of(double s) const
{
    const auto it = std::lower_bound(times_.begin() + 1, times_.end(), s);
    const auto idx = static_cast<int>(it - times_.begin()) - 1;
    return std::clamp(idx, 0, steps() - 1);
}

} // namespace gbdsde
