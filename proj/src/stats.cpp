#include "gbdsde/stats.hpp"

#include <cmath>

namespace gbdsde {

MeanSE mean_and_se(std::span<const double> xs)
{
    const auto n = xs.size();
    if (n == 0) return {};
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

} // namespace gbdsde
