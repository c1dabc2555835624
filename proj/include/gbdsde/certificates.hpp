#pragma once

#include "gbdsde/modulus.hpp"
#include "gbdsde/stats.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gbdsde {

/// E int_0^T |f(s,0,0)|^2 ds, E int_0^T |g(s,0,0)|^2 ds, E int_0^T |h(s,0)|^2 dA_s.
struct BaseIntegrals {
    double f_zero = 0.0;
    double g_zero = 0.0;
    double h_zero = 0.0;
};

struct CertificateInputs {
    double C = 1.0;
    double alpha = 0.5;
    double beta = -1.0;
    double horizon = 1.0;
    double terminal_second_moment = 0.0; // E|xi|^2, or E|Y_{T_{p-1}}|^2 on later intervals
    BaseIntegrals base;

    /// Throws ConfigError on out-of-range constants or negative integrals.
    void validate() const;
};

/// max{(3(1-a)/(2C+a) + 1) e^{(2C+a)T/(1-a)}, ((1-a)/C + 1) e^{CT/(1-a)}}.
double constant_M(double C, double alpha, double horizon);

struct MuMp {
    double mu0 = 0.0;
    double Mp = 0.0; // 2 mu0
};

/// mu_0 = e^{(2C+a)T/(1-a)} (E|xi|^2 + 2(1-a)/(2C+a) F + (1+2C)/(1-a) G + H/|beta|).
MuMp mu_and_Mp(const CertificateInputs& in);

/// 2 e^{(2C+a)T/(1-a)} (2(1-a)/(2C+a) F + (1+2C)/(1-a) G + H/|beta|); reported only.
double constant_A(const CertificateInputs& in);

/// T_p with int_{T_p}^{T_prev} rho(s, M_p) ds = mu0 / M, or 0 when the whole
/// of [0, T_prev] carries less than mu0 / M.
double next_breakpoint(double T_prev, double Mp, double mu0, const Modulus& rho, double M);

enum class MomentSource { solver, bound };

/// Supplies E|Y_{T_{p-1}}|^2 (with a standard error, 0 for bounds) for interval p >= 1.
struct MomentProvider {
    MomentSource source = MomentSource::bound;
    std::function<MeanSE(int p, double t)> second_moment;
};

struct ScheduleInterval {
    int p = 0;
    double t_start = 0.0; // T_p
    double t_end = 0.0;   // T_{p-1}
    MeanSE terminal_moment;
    double mu0 = 0.0;
    double Mp = 0.0;
};

struct Schedule {
    std::vector<double> breakpoints; // T_0 = T > T_1 > ...
    std::vector<ScheduleInterval> intervals;
    bool terminated = false;
    double M = 0.0;
    double A = 0.0;
    MomentSource source = MomentSource::bound;
    std::vector<std::string> notes;
};

/// Iterates next_breakpoint from T_0 = in.horizon, asking the provider for
/// E|Y_{T_{p-1}}|^2 on each interval. Stops when T_p = 0 or after p_max intervals.
Schedule schedule(const CertificateInputs& in, const MomentProvider& provider, const Modulus& rho,
                  int p_max);

struct PhiTable {
    std::vector<double> t;
    std::vector<std::vector<double>> phi; // phi[n][j] = phi_n(t_j)
    std::vector<double> sup;              // sup_j phi_n(t_j)
    bool monotone = true;                 // phi_{n+1} <= phi_n at every grid point
    bool nonnegative = true;
    std::vector<std::string> notes;
};

/// phi_0(t) = M int_t^T rho(s, M1) ds, phi_{n+1}(t) = M int_t^T rho(s, phi_n(s)) ds on
/// an increasing grid whose last point is T. Interval integrals use Simpson's rule with
/// phi_n at midpoints from cubic interpolation; phi_0 uses adaptive quadrature.
PhiTable phi_sequence(double M, double M1, const Modulus& rho, std::span<const double> t_grid,
                      int n_max);

/// Increasing grid of `points` nodes on [t0, t1].
std::vector<double> uniform_points(double t0, double t1, int points);

} // namespace gbdsde
