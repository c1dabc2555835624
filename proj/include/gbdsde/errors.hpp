#pragma once

#include <stdexcept>
#include <string>

namespace gbdsde {

/// Invalid or unsupported configuration (model parameters, specs, config keys).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Index outside the valid range of a basis or sequence.
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A user-supplied evaluator returned NaN or infinity.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical procedure failed (singular regression, bracket expansion, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gbdsde
