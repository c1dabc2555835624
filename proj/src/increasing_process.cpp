#include "gbdsde/increasing_process.hpp"
#include "gbdsde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gbdsde {
namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
} // namespace

void validate(const IncreasingProcessSpec& spec)
{
    std::visit(overloaded{
                   [](const LinearA& a) {
                       if (!(a.slope >= 0.0) || !std::isfinite(a.slope))
                           throw ConfigError("linear increasing process needs slope >= 0");
                   },
                   [](const PowerA& p) {
                       if (!(p.exponent >= 1.0) || !std::isfinite(p.exponent))
                           throw ConfigError("power increasing process needs exponent >= 1");
                   },
                   [](const RunningMaxA&) {},
               },
               spec);
}

bool is_deterministic(const IncreasingProcessSpec& spec)
{
    return !std::holds_alternative<RunningMaxA>(spec);
}

std::string describe(const IncreasingProcessSpec& spec)
{
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const LinearA& a) { os << "linear(a=" << a.slope << ")"; },
                   [&](const PowerA& p) { os << "power(gamma=" << p.exponent << ")"; },
                   [&](const RunningMaxA&) { os << "running_max"; },
               },
               spec);
    return os.str();
}

void evaluate_increasing_process(const IncreasingProcessSpec& spec, const TimeGrid& grid,
                                 std::span<const double> brownian, std::span<double> out)
{
    const int n = grid.steps();
    std::visit(overloaded{
                   [&](const LinearA& a) {
                       for (int k = 0; k <= n; ++k) out[k] = a.slope * grid.t(k);
                   },
                   [&](const PowerA& p) {
                       for (int k = 0; k <= n; ++k) out[k] = std::pow(grid.t(k), p.exponent);
                   },
                   [&](const RunningMaxA&) {
                       const double b0 = std::abs(brownian[0]);
                       double running = b0;
                       for (int k = 0; k <= n; ++k) {
                           running = std::max(running, std::abs(brownian[k]));
                           out[k] = running - b0;
                       }
                   },
               },
               spec);
}

} // namespace gbdsde
