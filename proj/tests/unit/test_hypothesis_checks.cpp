#include "gbdsde/certificates.hpp"
#include "gbdsde/errors.hpp"
#include "gbdsde/hypothesis_checks.hpp"
#include "gbdsde/presets.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace gbdsde;

namespace {

CoefficientSet zero_set()
{
    CoefficientSet cs;
    cs.name = "test";
    cs.f = [](double, double, ZView) { return 0.0; };
    cs.g = [](double, double, ZView) { return 0.0; };
    cs.h = [](double, double) { return 0.0; };
    cs.xi = [](const TerminalData&) { return 1.0; };
    return cs;
}

double margin(const CheckReport& r, const std::string& label)
{
    for (const auto& m : r.margins)
        if (m.label == label) return m.value;
    FAIL("no margin " << label);
    return 0.0;
}

double z1(ZView z) { return z.empty() ? 0.0 : z[0]; }

const std::vector<double> kProbe{0.0, 0.5, 1.0};

} // namespace

TEST_CASE("growth bounds")
{
    auto cs = zero_set();
    cs.f = [](double, double y, ZView) { return std::sin(y); };
    CHECK(check_growth(cs, {}).pass);

    cs.f = [](double, double y, ZView) { return y * y; };
    const auto r = check_growth(cs, {});
    CHECK_FALSE(r.pass);
    CHECK(margin(r, "f_growth") == doctest::Approx(89.0).epsilon(1e-12));
    CHECK(r.margins[0].location.find("y=-10") != std::string::npos);

    auto h = zero_set();
    h.h = [](double, double y) { return -0.8 * y; };
    CHECK(check_growth(h, {}).pass);

    auto bad = zero_set();
    bad.g = [](double, double y, ZView) { return std::log(y); };
    CHECK_THROWS_AS(check_growth(bad, {}), EvaluationError);
}

TEST_CASE("monotonicity of h")
{
    auto cs = zero_set();
    cs.h = [](double, double y) { return -2.0 * y; };
    cs.constants.beta = -2.0;
    const auto eq = check_monotone_h(cs, {});
    CHECK(eq.pass);
    CHECK(std::abs(margin(eq, "h_monotonicity")) < 1e-9);

    cs.h = [](double, double y) { return -2.0 * y + std::sin(y); };
    cs.constants.beta = -0.5;
    CHECK(check_monotone_h(cs, {}).pass);

    cs.h = [](double, double y) { return y; };
    cs.constants.beta = -1.0;
    CHECK_FALSE(check_monotone_h(cs, {}).pass);
}

TEST_CASE("modulus inequalities")
{
    auto cs = zero_set();
    const double k = 1.5;
    cs.f = [k](double, double y, ZView) { return k * std::sin(y) + 0.3; };
    cs.rho = Modulus::linear(2.0 * k * k);
    cs.constants.C = 0.01;
    CHECK(check_modulus(cs, {}).pass);

    // g = sqrt(alpha) z1 + arctan y: |dg|^2 = alpha dz^2 + dy^2 + cross term, which
    // exceeds 2 dy^2 + alpha dz^2 when dz and dy are both large and aligned.
    auto g = zero_set();
    const double alpha = 0.5;
    g.constants.alpha = alpha;
    g.rho = Modulus::linear(2.0);
    g.g = [alpha](double, double y, ZView z) { return std::sqrt(alpha) * z1(z) + std::atan(y); };
    CHECK_FALSE(check_modulus(g, {}).pass);
    // Halving the z-weight leaves room for the cross term: (a + b)^2 <= 2a^2 + 2b^2.
    g.g = [alpha](double, double y, ZView z) { return std::sqrt(alpha / 2.0) * z1(z) + std::atan(y); };
    CHECK(check_modulus(g, {}).pass);

    auto jump = zero_set();
    jump.f = [](double, double y, ZView) { return y > 0.0 ? 1.0 : 0.0; };
    jump.rho = Modulus::linear(100.0);
    CHECK_FALSE(check_modulus(jump, {}).pass);
}

TEST_CASE("passing with a linear modulus survives a pointwise larger modulus")
{
    auto cs = zero_set();
    cs.f = [](double, double y, ZView) { return 0.7 * std::tanh(y); };
    cs.rho = Modulus::linear(0.5);
    REQUIRE(check_modulus(cs, {}).pass);
    cs.rho = Modulus::linear(3.0);
    CHECK(check_modulus(cs, {}).pass);
    cs.rho = Modulus::custom([](double, double u) { return 0.5 * u + 0.1 * std::sqrt(u); }, "bigger");
    CHECK(check_modulus(cs, {}).pass);
}

TEST_CASE("checks are deterministic given the sampler seed")
{
    auto cs = make_preset("non-lipschitz");
    const auto a = check_modulus(cs, {});
    const auto b = check_modulus(cs, {});
    REQUIRE(a.margins.size() == b.margins.size());
    for (std::size_t i = 0; i < a.margins.size(); ++i) CHECK(a.margins[i].value == b.margins[i].value);
}

TEST_CASE("Osgood probe")
{
    for (double M : {0.5, 12.0, 237.0})
        for (double K : {0.1, 1.0, 10.0}) {
            CAPTURE(M);
            CAPTURE(K);
            CHECK(check_osgood(Modulus::linear(K), M, kProbe, 1.0).pass);
        }
    CHECK(check_osgood(Modulus::log(1.0), 12.0, kProbe, 1.0).pass);
    CHECK(check_osgood(Modulus::log(0.5), 237.0, kProbe, 1.0).pass);
    CHECK_FALSE(check_osgood(Modulus::sqrt(1.0), 12.0, kProbe, 1.0).pass);
    CHECK_FALSE(check_osgood(Modulus::sqrt(1.0), 1.0, kProbe, 1.0).pass);
    CHECK(check_osgood(Modulus::linear(0.0), 5.0, kProbe, 1.0).pass);
    CHECK_FALSE(check_osgood(Modulus::custom([](double, double u) { return std::pow(u, 0.8); }, "u^0.8"),
                             2.0, kProbe, 1.0)
                    .pass);
    CHECK_THROWS_AS(check_osgood(Modulus::linear(1.0), 0.0, kProbe, 1.0), ConfigError);
}

TEST_CASE("modulus shape and integrability")
{
    CHECK(check_modulus_shape(Modulus::log(2.0), 1.0).pass);
    CHECK(check_modulus_shape(Modulus::linear(2.0), 1.0).pass);
    CHECK(check_modulus_shape(Modulus::sqrt(2.0), 1.0).pass);
    CHECK_FALSE(check_modulus_shape(Modulus::custom([](double, double u) { return u * u; }, "u^2"), 1.0).pass);
    CHECK_FALSE(check_modulus_shape(Modulus::custom([](double, double u) { return 1.0 + u; }, "shifted"), 1.0).pass);

    const double us[] = {1e-6, 1.0, 100.0};
    CHECK(check_rho_integrable(Modulus::log(1.0), 1.0, us).pass);
    const auto blowup = Modulus::custom([](double t, double u) { return u / (1.0 - t); }, "1/(1-t)");
    CHECK_FALSE(check_rho_integrable(blowup, 1.0, us).pass);
}

TEST_CASE("terminal integrability")
{
    const LevyModel m(0.0, 0.0, {{-1.0, 0.5}, {1.0, 0.5}}, 1.0);
    const auto basis = build_basis(m, 4);
    const auto grid = TimeGrid::uniform(1.0, 20);
    const auto bundle = simulate(m, basis, grid, LinearA{1.0}, 20'000, 61);

    auto cs = make_preset("trivial", {{"c", 2.0}});
    const double lambdas[] = {0.0, 0.5, 1.0};
    const auto r = check_terminal(cs, bundle, lambdas);
    for (const auto& le : r.lambdas)
        CHECK(le.estimate.mean == doctest::Approx(std::exp(le.lambda) * 4.0).epsilon(1e-12));
    CHECK(r.lambdas[0].estimate.mean == doctest::Approx(4.0));
    // E|xi|^2 > 0 is enough for strict positivity
    CHECK(r.report.pass);
    CHECK_FALSE(check_terminal(make_preset("trivial", {{"c", 0.0}}), bundle, lambdas).report.pass);

    auto lt = make_preset("non-lipschitz");
    const auto rl = check_terminal(lt, bundle, lambdas);
    CHECK(rl.report.pass);
    for (const auto& le : rl.lambdas) {
        CHECK_FALSE(le.growing);
        CHECK(std::isfinite(le.estimate.mean));
    }
    const Eigen::VectorXd xi = evaluate_terminal(lt, bundle);
    CHECK(rl.lambdas[0].estimate.mean == doctest::Approx(xi.squaredNorm() / xi.size()).epsilon(1e-12));
    // f(s,0,0) = f0 = 0.1 and g(s,0,0) = 0.1 on [0, 1]; h(s,0) = 0.
    CHECK(rl.f_zero_integral.mean == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(rl.g_zero_integral.mean == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(rl.h_zero_integral.mean == 0.0);
}

TEST_CASE("built-in presets satisfy their own hypotheses")
{
    const SamplerConfig sampler{};
    for (const auto& name : {"linear-f", "linear-h", "non-lipschitz", "affine"}) {
        PresetParams params;
        if (std::string(name) == "linear-f") params = {{"ky", 0.5}};
        if (std::string(name) == "affine") params = {{"fy", 0.5}, {"fz", 0.2}, {"gy", 0.3}, {"hy", -1.0}, {"f0", 0.1}};
        const auto cs = make_preset(name, params);
        CAPTURE(name);
        CHECK(check_growth(cs, sampler).pass);
        CHECK(check_modulus(cs, sampler).pass);
        CHECK(check_modulus_shape(cs.rho, 1.0).pass);
        const double M = constant_M(cs.constants.C, cs.constants.alpha, 1.0);
        CHECK(check_osgood(cs.rho, M, kProbe, 1.0).pass);
    }
    for (const auto& name : {"linear-h", "non-lipschitz", "negative-example"})
        CHECK(check_monotone_h(make_preset(name), sampler).pass);

    const auto neg = make_preset("negative-example");
    CHECK(check_growth(neg, sampler).pass);
    CHECK(check_modulus(neg, sampler).pass);
    CHECK_FALSE(check_osgood(neg.rho, constant_M(1.0, 0.5, 1.0), kProbe, 1.0).pass);
    CHECK_THROWS_AS(make_preset("nonesuch"), ConfigError);
    CHECK_THROWS_AS(make_preset("trivial", {{"q", 1.0}}), ConfigError);
}

TEST_CASE("log modulus root")
{
    CHECK(log_modulus_root(0.0) == 0.0);
    CHECK(log_modulus_root(1.0) == 1.0);
    CHECK(log_modulus_root(5.0) == 1.0);
    const auto rho = Modulus::log(1.0);
    for (double d : {1e-8, 1e-3, 0.2, 0.9})
        CHECK(log_modulus_root(d) * log_modulus_root(d) == doctest::Approx(rho(0.0, d * d)).epsilon(1e-12));
}
