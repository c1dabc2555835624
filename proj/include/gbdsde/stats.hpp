#pragma once

#include <span>

namespace gbdsde {

struct MeanSE {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Sample mean and standard error of the mean (n-1 variance). Empty input gives {0, 0}.
MeanSE mean_and_se(std::span<const double> xs);

} // namespace gbdsde
