#include "gbdsde/certificates.hpp"
#include "gbdsde/errors.hpp"
#include "gbdsde/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gbdsde {
namespace {

void check_constants(double C, double alpha, double horizon)
{
    if (!(C > 0.0)) throw ConfigError("C must be > 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ConfigError("T must be >= 0");
}

double growth_factor(const CertificateInputs& in)
{
    return std::exp((2.0 * in.C + in.alpha) * in.horizon / (1.0 - in.alpha));
}

double weighted_base(const CertificateInputs& in)
{
    const double a = in.alpha, C = in.C;
    return 2.0 * (1.0 - a) / (2.0 * C + a) * in.base.f_zero + (1.0 + 2.0 * C) / (1.0 - a) * in.base.g_zero +
           in.base.h_zero / std::abs(in.beta);
}

} // namespace

void CertificateInputs::validate() const
{
    check_constants(C, alpha, horizon);
    if (!(beta < 0.0)) throw ConfigError("beta must be < 0");
    if (!(terminal_second_moment >= 0.0)) throw ConfigError("E|xi|^2 must be >= 0");
    if (!(base.f_zero >= 0.0) || !(base.g_zero >= 0.0) || !(base.h_zero >= 0.0))
        throw ConfigError("zero-point integrals must be >= 0");
}

double constant_M(double C, double alpha, double horizon)
{
    check_constants(C, alpha, horizon);
    const double first = (3.0 * (1.0 - alpha) / (2.0 * C + alpha) + 1.0) *
                         std::exp((2.0 * C + alpha) * horizon / (1.0 - alpha));
    const double second = ((1.0 - alpha) / C + 1.0) * std::exp(C * horizon / (1.0 - alpha));
    return std::max(first, second);
}

MuMp mu_and_Mp(const CertificateInputs& in)
{
    in.validate();
    const double mu0 = growth_factor(in) * (in.terminal_second_moment + weighted_base(in));
    return {mu0, 2.0 * mu0};
}

double constant_A(const CertificateInputs& in)
{
    in.validate();
    return 2.0 * growth_factor(in) * weighted_base(in);
}

double next_breakpoint(double T_prev, double Mp, double mu0, const Modulus& rho, double M)
{
    if (!(T_prev > 0.0)) throw ConfigError("next_breakpoint needs T_prev > 0");
    if (!(M > 0.0) || !(Mp > 0.0) || !(mu0 > 0.0))
        throw ConfigError("next_breakpoint needs M, M_p and mu_0 > 0");
    const double target = mu0 / M;
    auto mass = [&](double lo) {
        if (lo >= T_prev) return 0.0;
        return adaptive_simpson([&](double s) { return rho(s, Mp); }, lo, T_prev, 1e-12);
    };
    if (mass(0.0) <= target) return 0.0;
    return bisect([&](double lo) { return mass(lo) - target; }, 0.0, T_prev, 0.0);
}

Schedule schedule(const CertificateInputs& in, const MomentProvider& provider, const Modulus& rho,
                  int p_max)
{
    if (p_max < 1) throw ConfigError("p_max must be >= 1");
    if (!provider.second_moment) throw ConfigError("schedule needs a second-moment provider");
    in.validate();
    Schedule out;
    out.M = constant_M(in.C, in.alpha, in.horizon);
    out.A = constant_A(in);
    out.source = provider.source;
    out.breakpoints.push_back(in.horizon);
    out.notes.push_back("the bound E|Y_t^n|^2 <= M_1 is stated for t in [T_1, T] while the "
                        "underlying estimate is derived on [0, T]; breakpoints use the "
                        "interval form");
    if (in.horizon == 0.0) {
        out.terminated = true;
        return out;
    }

    double t_prev = in.horizon;
    for (int p = 1; p <= p_max; ++p) {
        CertificateInputs stage = in;
        const MeanSE moment = provider.second_moment(p, t_prev);
        stage.terminal_second_moment = moment.mean;
        const MuMp mm = mu_and_Mp(stage);
        if (!(mm.mu0 > 0.0))
            throw ConfigError("mu_0 = 0 on interval " + std::to_string(p) +
                              ": E|xi|^2 and the zero-point integrals all vanish");
        const double t_next = next_breakpoint(t_prev, mm.Mp, mm.mu0, rho, out.M);
        out.intervals.push_back({p, t_next, t_prev, moment, mm.mu0, mm.Mp});
        out.breakpoints.push_back(t_next);
        if (t_next == 0.0) {
            out.terminated = true;
            break;
        }
        t_prev = t_next;
    }
    if (!out.terminated)
        out.notes.push_back("p_max = " + std::to_string(p_max) + " reached before T_p = 0");
    return out;
}

std::vector<double> uniform_points(double t0, double t1, int points)
{
    if (points < 2) throw ConfigError("need at least 2 grid points");
    if (!(t1 > t0)) throw ConfigError("grid needs t1 > t0");
    std::vector<double> t(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) t[j] = t0 + (t1 - t0) * j / (points - 1);
    t.back() = t1;
    return t;
}

PhiTable phi_sequence(double M, double M1, const Modulus& rho, std::span<const double> t_grid,
                      int n_max)
{
    if (!(M > 0.0)) throw ConfigError("phi_sequence needs M > 0");
    if (!(M1 >= 0.0)) throw ConfigError("phi_sequence needs M_1 >= 0");
    if (n_max < 0) throw ConfigError("phi_sequence needs n_max >= 0");
    const std::size_t np = t_grid.size();
    if (np < 2) throw ConfigError("phi_sequence needs at least 2 grid points");
    for (std::size_t j = 1; j < np; ++j)
        if (!(t_grid[j] > t_grid[j - 1])) throw ConfigError("phi grid must be strictly increasing");

    PhiTable out;
    out.t.assign(t_grid.begin(), t_grid.end());
    const auto& t = out.t;

    // Integrals over [t_j, T] from per-interval pieces, accumulated from the right.
    auto from_right = [&](const std::vector<double>& pieces) {
        std::vector<double> acc(np, 0.0);
        for (std::size_t j = np - 1; j-- > 0;) acc[j] = acc[j + 1] + pieces[j];
        for (auto& v : acc) v *= M;
        return acc;
    };

    std::vector<double> pieces(np - 1);
    for (std::size_t j = 0; j + 1 < np; ++j)
        pieces[j] = adaptive_simpson([&](double s) { return rho(s, M1); }, t[j], t[j + 1], 1e-14);
    out.phi.push_back(from_right(pieces));

    // Cubic (or lower, near short grids) Lagrange value at the midpoint of [t_j, t_{j+1}].
    auto midpoint_value = [&](const std::vector<double>& v, std::size_t j) {
        const double x = 0.5 * (t[j] + t[j + 1]);
        std::size_t lo = j > 0 ? j - 1 : 0;
        std::size_t hi = std::min(lo + 3, np - 1);
        if (hi - lo < 3) lo = hi >= 3 ? hi - 3 : 0;
        double sum = 0.0;
        for (std::size_t a = lo; a <= hi; ++a) {
            double w = 1.0;
            for (std::size_t b = lo; b <= hi; ++b)
                if (b != a) w *= (x - t[b]) / (t[a] - t[b]);
            sum += w * v[a];
        }
        return sum;
    };

    for (int n = 1; n <= n_max; ++n) {
        const auto& prev = out.phi.back();
        for (std::size_t j = 0; j + 1 < np; ++j) {
            const double h = t[j + 1] - t[j];
            const double mid = 0.5 * (t[j] + t[j + 1]);
            pieces[j] = h / 6.0 *
                        (rho(t[j], prev[j]) + 4.0 * rho(mid, midpoint_value(prev, j)) +
                         rho(t[j + 1], prev[j + 1]));
        }
        out.phi.push_back(from_right(pieces));
    }

    for (std::size_t n = 0; n < out.phi.size(); ++n) {
        const auto& row = out.phi[n];
        out.sup.push_back(*std::max_element(row.begin(), row.end()));
        for (double v : row)
            if (!(v >= 0.0)) out.nonnegative = false;
        if (n > 0) {
            const auto& prev = out.phi[n - 1];
            for (std::size_t j = 0; j < np; ++j)
                if (row[j] > prev[j] * (1.0 + 1e-9) + 1e-14) out.monotone = false;
        }
    }
    if (!out.monotone) out.notes.push_back("phi_n increases in n somewhere on the grid");
    return out;
}

} // namespace gbdsde
