#pragma once

#include <span>
#include <vector>

namespace gbdsde {

/// Strictly increasing times 0 = t_0 < ... < t_N = T.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times);

    static TimeGrid uniform(double horizon, int steps);

    [[nodiscard]] int steps() const noexcept { return static_cast<int>(times_.size()) - 1; }
    [[nodiscard]] double horizon() const noexcept { return times_.back(); }
    [[nodiscard]] double t(int k) const { return times_.at(static_cast<std::size_t>(k)); }
    [[nodiscard]] double dt(int k) const { return t(k + 1) - t(k); }
    [[nodiscard]] std::span<const double> times() const noexcept { return times_; }

    /// Index k of the step (t_k, t_{k+1}] containing s; s = 0 maps to step 0.
    [[nodiscard]] int step_of(double s) const;

private:
    std::vector<double> times_;
};

} // namespace gbdsde
