#include "gbdsde/coefficients.hpp"
#include "gbdsde/errors.hpp"

#include <cmath>
#include <vector>

namespace gbdsde {

void CoefficientSet::validate() const
{
    if (!f || !g || !h || !xi) throw ConfigError("coefficient set '" + name + "' is missing an evaluator");
    if (!(constants.alpha > 0.0 && constants.alpha < 1.0))
        throw ConfigError("alpha must lie strictly inside (0, 1)");
    if (!(constants.beta < 0.0)) throw ConfigError("beta must be strictly negative");
    if (!(constants.C > 0.0)) throw ConfigError("C must be > 0");
    if (!(constants.K > 0.0)) throw ConfigError("K must be > 0");
}

Eigen::VectorXd evaluate_terminal(const CoefficientSet& cs, const PathBundle& bundle)
{
    const int n = bundle.steps();
    Eigen::VectorXd out(bundle.n_paths);
    Eigen::MatrixXd h_terminal(bundle.n_paths, bundle.rank);
    for (int i = 1; i <= bundle.rank; ++i) h_terminal.col(i - 1) = bundle.martingale_terminal(i);
    std::vector<double> row(static_cast<std::size_t>(bundle.rank));
    for (int p = 0; p < bundle.n_paths; ++p) {
        for (int i = 0; i < bundle.rank; ++i) row[i] = h_terminal(p, i);
        TerminalData data{bundle.L(p, n), bundle.A(p, n), row, bundle.jumps_of(p)};
        const double v = cs.xi(data);
        if (!std::isfinite(v))
            throw EvaluationError("terminal condition is not finite on path " + std::to_string(p));
        out(p) = v;
    }
    return out;
}

} // namespace gbdsde
