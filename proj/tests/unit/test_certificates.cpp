#include "gbdsde/certificates.hpp"
#include "gbdsde/errors.hpp"

#include "oracles/high_precision.hpp"

#include <doctest.h>

#include <cmath>

using namespace gbdsde;

namespace {

MomentProvider constant_moment(double value)
{
    return {MomentSource::bound, [value](int, double) { return MeanSE{value, 0.0}; }};
}

const Modulus kZero = Modulus::custom([](double, double) { return 0.0; }, "zero");

} // namespace

TEST_CASE("constant M against 50-digit evaluation")
{
    const double m = constant_M(1.0, 0.5, 1.0);
    CHECK(std::abs(m - 1.6 * std::exp(5.0)) / m < 1e-12);
    for (double C : {0.05, 0.3, 1.0, 4.0})
        for (double a : {0.1, 0.5, 0.9})
            for (double T : {0.0, 0.25, 1.0, 3.0}) {
                const double exact = static_cast<double>(oracle::constant_M(C, a, T));
                CHECK(std::abs(constant_M(C, a, T) - exact) <= 1e-13 * exact);
            }
    // T = 0: both exponentials are 1.
    CHECK(constant_M(1.0, 0.5, 0.0) == doctest::Approx(std::max(3.0 * 0.5 / 2.5 + 1.0, 1.5)).epsilon(1e-15));
    double prev = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double v = constant_M(0.7, 0.3, 0.1 * i);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(constant_M(0.0, 0.5, 1.0), ConfigError);
    CHECK_THROWS_AS(constant_M(1.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(constant_M(1.0, 0.5, -1.0), ConfigError);
}

TEST_CASE("mu_0 and M_p")
{
    CertificateInputs in;
    in.terminal_second_moment = 1.0;
    const MuMp mm = mu_and_Mp(in);
    CHECK(mm.mu0 == doctest::Approx(std::exp(5.0)).epsilon(1e-14));
    CHECK(mm.Mp == doctest::Approx(2.0 * std::exp(5.0)).epsilon(1e-14));

    in.terminal_second_moment = 3.5;
    CHECK(mu_and_Mp(in).mu0 == doctest::Approx(3.5 * std::exp(5.0)).epsilon(1e-14));

    in.terminal_second_moment = 0.0;
    in.base = {0.4, 0.0, 0.0};
    CHECK(mu_and_Mp(in).mu0 == doctest::Approx(std::exp(5.0) * 2.0 * 0.5 / 2.5 * 0.4).epsilon(1e-14));
    in.base = {0.0, 0.4, 0.0};
    CHECK(mu_and_Mp(in).mu0 == doctest::Approx(std::exp(5.0) * 3.0 / 0.5 * 0.4).epsilon(1e-14));
    in.base = {0.0, 0.0, 0.4};
    in.beta = -2.0;
    CHECK(mu_and_Mp(in).mu0 == doctest::Approx(std::exp(5.0) * 0.2).epsilon(1e-14));
    in.beta = -1e12;
    CHECK(mu_and_Mp(in).mu0 < 1e-9);

    in.base = {0.4, 0.4, 0.4};
    in.beta = -1.0;
    CHECK(constant_A(in) == doctest::Approx(2.0 * mu_and_Mp(in).mu0).epsilon(1e-14));

    in.beta = 0.5;
    CHECK_THROWS_AS(mu_and_Mp(in), ConfigError);
}

TEST_CASE("breakpoints for the linear modulus")
{
    for (double K : {0.5, 1.0, 3.0})
        for (double M : {2.0, 12.0, 300.0}) {
            const double mu0 = 0.37;
            const double tp = next_breakpoint(1.0, 2.0 * mu0, mu0, Modulus::linear(K), M);
            const double exact = std::max(0.0, 1.0 - 1.0 / (2.0 * M * K));
            CHECK(std::abs(tp - exact) <= 1e-9 * std::max(exact, 1e-300));
        }
    CHECK(next_breakpoint(1.0, 1.0, 0.5, kZero, 10.0) == 0.0);
    // mu0 / M above the whole integral
    CHECK(next_breakpoint(1.0, 1.0, 0.5, Modulus::linear(1.0), 0.1) == 0.0);
    CHECK_THROWS_AS(next_breakpoint(0.0, 1.0, 0.5, Modulus::linear(1.0), 1.0), ConfigError);
    CHECK_THROWS_AS(next_breakpoint(1.0, 1.0, 0.0, Modulus::linear(1.0), 1.0), ConfigError);
}

TEST_CASE("schedule")
{
    CertificateInputs in;
    in.C = 0.05;
    in.terminal_second_moment = 0.2;
    const double K = 1.0;
    const auto s = schedule(in, constant_moment(0.2), Modulus::linear(K), 1000);
    REQUIRE(s.terminated);
    const double M = constant_M(in.C, in.alpha, in.horizon);
    CHECK(s.M == M);
    const auto expected = static_cast<long>(std::ceil(2.0 * M * K * in.horizon));
    CHECK(std::labs(static_cast<long>(s.intervals.size()) - expected) <= 1);
    CHECK(s.breakpoints.front() == 1.0);
    CHECK(s.breakpoints.back() == 0.0);
    for (std::size_t p = 1; p < s.breakpoints.size(); ++p) CHECK(s.breakpoints[p] < s.breakpoints[p - 1]);
    for (std::size_t p = 1; p + 1 < s.breakpoints.size(); ++p)
        CHECK(s.breakpoints[p - 1] - s.breakpoints[p] == doctest::Approx(1.0 / (2.0 * M * K)).epsilon(1e-9));

    // the moment provider is consulted per interval
    int calls = 0;
    MomentProvider counting{MomentSource::solver, [&calls](int p, double) {
                                ++calls;
                                return MeanSE{0.1 * p, 0.01};
                            }};
    const auto s2 = schedule(in, counting, Modulus::linear(K), 1000);
    CHECK(calls == static_cast<int>(s2.intervals.size()));
    CHECK(s2.source == MomentSource::solver);
    CHECK(s2.intervals[1].terminal_moment.mean == doctest::Approx(0.2));

    const auto capped = schedule(in, constant_moment(0.2), Modulus::linear(K), 3);
    CHECK_FALSE(capped.terminated);
    CHECK(capped.intervals.size() == 3);

    CertificateInputs zero_t = in;
    zero_t.horizon = 0.0;
    const auto empty = schedule(zero_t, constant_moment(0.2), Modulus::linear(K), 10);
    CHECK(empty.terminated);
    CHECK(empty.intervals.empty());

    // termination only needs positivity of the modulus
    CHECK(schedule(in, constant_moment(0.2), Modulus::sqrt(1.0), 1000).terminated);

    CertificateInputs nothing = in;
    nothing.terminal_second_moment = 0.0;
    CHECK_THROWS_AS(schedule(nothing, constant_moment(0.0), Modulus::linear(K), 10), ConfigError);
}

TEST_CASE("phi sequence: linear modulus closed form")
{
    const double M = 2.0, K = 1.5, M1 = 0.8, T = 1.0;
    const auto grid = uniform_points(0.7, T, 1001);
    const auto tab = phi_sequence(M, M1, Modulus::linear(K), grid, 12);
    REQUIRE(tab.phi.size() == 13);
    for (int n = 0; n <= 10; ++n) {
        const double scale = static_cast<double>(oracle::linear_phi(M, K, M1, T, grid.front(), n));
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double exact = static_cast<double>(oracle::linear_phi(M, K, M1, T, grid[j], n));
            CHECK(std::abs(tab.phi[n][j] - exact) <= 1e-8 * scale);
        }
    }
    // phi_{n+1} / phi_n = MK(T - t)/(n + 2) <= 1 on this grid
    CHECK(tab.monotone);
    CHECK(tab.nonnegative);
    for (const auto& row : tab.phi) CHECK(row.back() == 0.0);
}

TEST_CASE("phi sequence: zero modulus and the log modulus with small M_1")
{
    const auto grid = uniform_points(0.0, 1.0, 101);
    const auto zero = phi_sequence(3.0, 1.0, kZero, grid, 5);
    for (const auto& row : zero.phi)
        for (double v : row) CHECK(v == 0.0);

    // on [T_1, T] with M_1 = 2 mu_0, as the certificate uses it
    const double mu0 = 0.005, M = 1.5;
    const double t1 = next_breakpoint(1.0, 2.0 * mu0, mu0, Modulus::log(1.0), M);
    REQUIRE(t1 > 0.0);
    const auto tab = phi_sequence(M, 2.0 * mu0, Modulus::log(1.0), uniform_points(t1, 1.0, 201), 30);
    CHECK(tab.monotone);
    CHECK(tab.nonnegative);
    CHECK(tab.sup.back() < 1e-8);
    for (std::size_t n = 1; n < tab.sup.size(); ++n) CHECK(tab.sup[n] <= tab.sup[n - 1] * (1 + 1e-9));

    CHECK_THROWS_AS(phi_sequence(1.0, 1.0, kZero, std::vector<double>{0.0, 0.5, 0.5, 1.0}, 2), ConfigError);
    CHECK_THROWS_AS(phi_sequence(0.0, 1.0, kZero, grid, 2), ConfigError);
}
