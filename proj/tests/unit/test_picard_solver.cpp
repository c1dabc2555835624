#include "gbdsde/errors.hpp"
#include "gbdsde/picard_solver.hpp"
#include "gbdsde/presets.hpp"

#include <doctest.h>

#include <cmath>

using namespace gbdsde;

namespace {

const LevyModel kTwoAtom(0.0, 0.0, {{-1.0, 0.5}, {1.0, 0.5}}, 1.0);

PathBundle bundle(int steps, int paths, std::uint64_t seed, IncreasingProcessSpec a = LinearA{1.0},
                  const LevyModel& m = kTwoAtom)
{
    return simulate(m, build_basis(m, 4), TimeGrid::uniform(m.horizon(), steps), a, paths, seed);
}

} // namespace

TEST_CASE("implicit h step")
{
    const BoundaryFn minus_y = [](double, double y) { return -y; };
    CHECK(implicit_h_step(2.0, minus_y, 0.0, 1.0, 1e-14) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(implicit_h_step(3.7, [](double, double y) { return std::exp(y); }, 0.0, 0.0, 1e-12) == 3.7);
    for (double beta : {-0.3, -2.0, -50.0})
        for (double d : {1e-3, 0.1, 2.0}) {
            const double y = implicit_h_step(1.5, [beta](double, double v) { return beta * v; }, 0.0, d, 1e-14);
            CHECK(y == doctest::Approx(1.5 / (1.0 - beta * d)).epsilon(1e-12));
        }
    const BoundaryFn nonlinear = [](double, double y) { return -y - y * y * y + 0.5; };
    const double y = implicit_h_step(0.2, nonlinear, 0.0, 0.7, 1e-13);
    CHECK(std::abs(y - 0.2 - nonlinear(0.0, y) * 0.7) < 1e-12);
    CHECK_THROWS_AS(implicit_h_step(1.0, [](double, double v) { return 2.0 * v; }, 0.0, 1.0, 1e-12),
                    NumericalError);
    CHECK_THROWS_AS(implicit_h_step(1.0, minus_y, 0.0, -0.1, 1e-12), NumericalError);
}

TEST_CASE("E-norm")
{
    const auto b = bundle(10, 20, 1);
    const Eigen::MatrixXd zero_y = Eigen::MatrixXd::Zero(20, 11);
    std::vector<Eigen::MatrixXd> zero_z{Eigen::MatrixXd::Zero(20, 10)};
    CHECK(e_norm(zero_y, zero_z, b) == 0.0);
    CHECK(e_norm(Eigen::MatrixXd::Ones(20, 11), zero_z, b) == doctest::Approx(2.0).epsilon(1e-14));
    std::vector<Eigen::MatrixXd> unit_z{Eigen::MatrixXd::Ones(20, 10)};
    CHECK(e_norm(zero_y, unit_z, b) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(e_norm(Eigen::MatrixXd::Zero(3, 3), zero_z, b), ConfigError);
}

TEST_CASE("zero coefficients with constant terminal value")
{
    const auto b = bundle(20, 2'000, 2);
    SolverConfig cfg;
    const auto sol = solve(b, make_preset("trivial", {{"c", 1.75}}), cfg);
    CHECK((sol.Y.array() - 1.75).abs().maxCoeff() < 1e-12);
    // Z is regression noise around 0: its step means sit within a few SE of 0
    for (int k = 0; k < 20; ++k) CHECK(std::abs(sol.Z[0].col(k).mean()) < 4.0 * 1.75 / std::sqrt(2'000 * 0.05));
    CHECK(sol.converged);
    // The first sweep already lands on the solution; the second confirms it.
    CHECK(sol.n_iterations == 2);
    CHECK(sol.residuals.back() < 1e-20);
}

TEST_CASE("constant driver")
{
    const auto b = bundle(25, 2'000, 3);
    const auto sol = solve(b, make_preset("linear-f", {{"a", 0.8}, {"c", -0.5}}), SolverConfig{});
    for (int k = 0; k <= 25; ++k)
        CHECK((sol.Y.col(k).array() - (-0.5 + 0.8 * (1.0 - b.grid.t(k)))).abs().maxCoeff() < 1e-10);
}

TEST_CASE("linear h with A_t = t")
{
    const double beta = -1.3, c = 2.0;
    double previous = 1e300;
    for (int steps : {10, 20, 40}) {
        const auto b = bundle(steps, 1'000, 4);
        const auto sol = solve(b, make_preset("linear-h", {{"beta", beta}, {"c", c}}), SolverConfig{});
        const double dt = 1.0 / steps;
        double worst = 0.0;
        for (int k = 0; k <= steps; ++k) {
            const double discrete = c / std::pow(1.0 - beta * dt, steps - k);
            CHECK((sol.Y.col(k).array() - discrete).abs().maxCoeff() < 1e-10);
            worst = std::max(worst, std::abs(discrete - c * std::exp(beta * (1.0 - b.grid.t(k)))));
        }
        CHECK(worst < 0.5 * dt);
        CHECK(worst < previous);
        previous = worst;
    }
}

TEST_CASE("constant backward-Brownian coefficient")
{
    const double gamma = 0.7, c = 1.0;
    const auto b = bundle(20, 2'000, 5);
    const auto sol = solve(b, make_preset("constant-g", {{"gamma", gamma}, {"c", c}}), SolverConfig{});
    for (int k = 0; k <= 20; ++k) {
        const Eigen::VectorXd exact = c + gamma * (b.B.col(20) - b.B.col(k)).array();
        CHECK((sol.Y.col(k) - exact).cwiseAbs().maxCoeff() < 1e-9);
    }
    for (int k = 0; k < 20; ++k) CHECK(std::abs(sol.Z[0].col(k).mean()) < 4.0 * 1.5 / std::sqrt(2'000 * 0.05));
}

TEST_CASE("martingale terminal value")
{
    const auto b = bundle(10, 40'000, 6);
    SolverConfig cfg;
    cfg.chaos_m = 2;
    const auto sol = solve(b, make_preset("martingale-terminal"), cfg);
    const Eigen::MatrixXd h = b.martingale(1);
    for (int k = 0; k <= 10; ++k) CHECK((sol.Y.col(k) - h.col(k)).squaredNorm() / b.n_paths < 1e-3);
    for (int k = 0; k < 10; ++k) {
        CHECK(std::abs(sol.Z[0].col(k).mean() - 1.0) < 0.1);
        CHECK(std::abs(sol.Z[1].col(k).mean()) < 0.1);
    }
}

TEST_CASE("one step with intercept-only features averages the terminal value")
{
    const auto b = bundle(1, 5'000, 7);
    SolverConfig cfg;
    cfg.features = {false, false, false, false, 2};
    const auto sol = solve(b, make_preset("affine", {{"xi0", 0.5}, {"xiL", 1.0}}), cfg);
    const Eigen::VectorXd xi = b.L.col(1).array() + 0.5;
    CHECK((sol.Y.col(0).array() - xi.mean()).abs().maxCoeff() < 1e-12);
}

TEST_CASE("terminal pin and non-convergence reporting")
{
    const auto b = bundle(10, 1'000, 8);
    SolverConfig cfg;
    cfg.n_picard_max = 1;
    const auto cs = make_preset("non-lipschitz");
    const auto sol = solve(b, cs, cfg);
    CHECK_FALSE(sol.converged);
    CHECK(sol.n_iterations == 1);
    CHECK(sol.Y.col(10) == evaluate_terminal(cs, b));
}

TEST_CASE("Lipschitz driver: Picard residuals decrease geometrically")
{
    const auto b = bundle(20, 2'000, 9);
    SolverConfig cfg;
    cfg.picard_tol = 1e-24;
    cfg.n_picard_max = 12;
    const auto cs = make_preset("affine", {{"f0", 0.2}, {"fy", 0.8}, {"fz", 0.3}, {"gy", 0.3}, {"hy", -1.0}, {"xiL", 1.0}});
    const auto sol = solve(b, cs, cfg);
    REQUIRE(sol.residuals.size() >= 6);
    for (std::size_t n = 2; n < sol.residuals.size(); ++n) {
        if (sol.residuals[n - 1] < 1e-26) break;
        CHECK(sol.residuals[n] < 0.7 * sol.residuals[n - 1]);
    }
}

TEST_CASE("different initial guesses reach the same solution")
{
    const auto b = bundle(20, 2'000, 10);
    const auto cs = make_preset("non-lipschitz");
    SolverConfig a, c;
    c.initial_guess = 10.0;
    const auto sa = solve(b, cs, a), sc = solve(b, cs, c);
    CHECK(sa.converged);
    CHECK(sc.converged);
    std::vector<Eigen::MatrixXd> dz{sa.Z[0] - sc.Z[0]};
    CHECK(e_norm(sa.Y - sc.Y, dz, b) < 5.0 * a.picard_tol);
}

TEST_CASE("solver configuration is validated")
{
    const auto b = bundle(5, 100, 11);
    SolverConfig cfg;
    cfg.chaos_m = 3;
    CHECK_THROWS_AS(solve(b, make_preset("trivial"), cfg), ConfigError);
    cfg = {};
    cfg.picard_tol = 0.0;
    CHECK_THROWS_AS(solve(b, make_preset("trivial"), cfg), ConfigError);
    cfg = {};
    cfg.chaos_m = 0;
    CHECK_THROWS_AS(solve(b, make_preset("trivial"), cfg), ConfigError);
}
