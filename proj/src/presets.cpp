#include "gbdsde/presets.hpp"
#include "gbdsde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gbdsde {
namespace {

class Params {
public:
    Params(std::string preset, const PresetParams& given, std::set<std::string> known)
        : preset_(std::move(preset)), given_(given)
    {
        for (const auto& [key, value] : given) {
            if (!known.count(key))
                throw ConfigError("preset '" + preset_ + "' has no parameter '" + key + "'");
            if (!std::isfinite(value))
                throw ConfigError("preset parameter '" + key + "' is not finite");
        }
    }

    double get(const std::string& key, double fallback) const
    {
        auto it = given_.find(key);
        return it == given_.end() ? fallback : it->second;
    }

private:
    std::string preset_;
    const PresetParams& given_;
};

double z1(ZView z) { return z.empty() ? 0.0 : z[0]; }

DriverFn zero_driver()
{
    return [](double, double, ZView) { return 0.0; };
}

BoundaryFn zero_boundary()
{
    return [](double, double) { return 0.0; };
}

TerminalFn constant_terminal(double c)
{
    return [c](const TerminalData&) { return c; };
}

std::function<double(double)> constant_bound(double v)
{
    const double b = std::max(1.0, v);
    return [b](double) { return b; };
}

CoefficientSet base(const std::string& name)
{
    CoefficientSet cs;
    cs.name = name;
    cs.f = zero_driver();
    cs.g = zero_driver();
    cs.h = zero_boundary();
    cs.xi = constant_terminal(1.0);
    cs.rho = Modulus::linear(0.0);
    return cs;
}

} // namespace

double log_modulus_root(double d)
{
    if (d <= 0.0) return 0.0;
    if (d >= 1.0) return 1.0;
    return d * std::sqrt(1.0 - 2.0 * std::log(d));
}

std::vector<std::string> preset_names()
{
    return {"trivial",    "linear-f",       "linear-h",         "constant-g", "martingale-terminal",
            "non-lipschitz", "negative-example", "affine"};
}

CoefficientSet make_preset(const std::string& name, const PresetParams& params)
{
    if (name == "trivial") {
        Params p(name, params, {"c"});
        CoefficientSet cs = base(name);
        cs.xi = constant_terminal(p.get("c", 1.0));
        return cs;
    }
    if (name == "linear-f") {
        Params p(name, params, {"a", "ky", "c"});
        const double a = p.get("a", 1.0), ky = p.get("ky", 0.0);
        CoefficientSet cs = base(name);
        cs.f = [a, ky](double, double y, ZView) { return a + ky * y; };
        cs.xi = constant_terminal(p.get("c", 1.0));
        cs.rho = Modulus::linear(ky * ky);
        cs.constants.K = std::max(1.0, std::abs(ky));
        cs.f_bound = constant_bound(std::abs(a));
        return cs;
    }
    if (name == "linear-h") {
        Params p(name, params, {"beta", "c"});
        const double beta = p.get("beta", -1.0);
        CoefficientSet cs = base(name);
        cs.h = [beta](double, double y) { return beta * y; };
        cs.xi = constant_terminal(p.get("c", 1.0));
        cs.constants.beta = beta;
        cs.constants.K = std::max(1.0, std::abs(beta));
        return cs;
    }
    if (name == "constant-g") {
        Params p(name, params, {"gamma", "c"});
        const double gamma = p.get("gamma", 0.5);
        CoefficientSet cs = base(name);
        cs.g = [gamma](double, double, ZView) { return gamma; };
        cs.xi = constant_terminal(p.get("c", 1.0));
        cs.g_bound = constant_bound(std::abs(gamma));
        return cs;
    }
    if (name == "martingale-terminal") {
        Params p(name, params, {"index"});
        const double idx = p.get("index", 1.0);
        if (idx < 1.0 || idx != std::floor(idx))
            throw ConfigError("martingale-terminal index must be a positive integer");
        const auto i = static_cast<std::size_t>(idx);
        CoefficientSet cs = base(name);
        cs.xi = [i](const TerminalData& d) {
            if (d.martingales.size() < i)
                throw ConfigError("martingale-terminal index " + std::to_string(i) +
                                  " exceeds the basis rank");
            return d.martingales[i - 1];
        };
        return cs;
    }
    if (name == "non-lipschitz") {
        Params p(name, params, {"f0", "a", "cz", "g0", "b", "beta", "xi_scale"});
        const double f0 = p.get("f0", 0.1), a = p.get("a", 0.5), cz = p.get("cz", 0.2);
        const double g0 = p.get("g0", 0.1), b = p.get("b", 0.3), beta = p.get("beta", -1.0);
        const double xs = p.get("xi_scale", 1.0);
        CoefficientSet cs = base(name);
        cs.f = [f0, a, cz](double, double y, ZView z) {
            return f0 + a * log_modulus_root(std::abs(y)) + cz * z1(z);
        };
        cs.g = [g0, b](double, double y, ZView) { return g0 + b * log_modulus_root(std::abs(y)); };
        cs.h = [beta](double, double y) { return beta * y; };
        cs.xi = [xs](const TerminalData& d) { return xs * d.levy_terminal; };
        // |w(|y1|) - w(|y2|)|^2 <= w(|dy|)^2 = log modulus(|dy|^2) with unit scale.
        cs.rho = Modulus::log(std::max(2.0 * a * a, b * b));
        cs.constants.C = cz != 0.0 ? 2.0 * cz * cz : 1.0;
        cs.constants.alpha = 0.5;
        cs.constants.beta = beta;
        cs.constants.K = std::max({1.0, std::abs(beta), std::abs(cz)});
        cs.f_bound = constant_bound(std::abs(f0) + std::abs(a));
        cs.g_bound = constant_bound(std::abs(g0) + std::abs(b));
        return cs;
    }
    if (name == "negative-example") {
        Params p(name, params, {"a", "beta", "c"});
        const double a = p.get("a", 1.0), beta = p.get("beta", -1.0);
        CoefficientSet cs = base(name);
        cs.f = [a](double, double y, ZView) { return a * std::sqrt(std::abs(y)); };
        cs.h = [beta](double, double y) { return beta * y; };
        cs.xi = constant_terminal(p.get("c", 1.0));
        cs.rho = Modulus::sqrt(a * a);
        cs.constants.beta = beta;
        cs.constants.K = std::max({1.0, std::abs(beta), std::abs(a)});
        cs.f_bound = constant_bound(std::abs(a));
        return cs;
    }
    if (name == "affine") {
        Params p(name, params,
                 {"f0", "fy", "fz", "g0", "gy", "gz", "h0", "hy", "xi0", "xiL", "xiA", "xiH1"});
        const double f0 = p.get("f0", 0.0), fy = p.get("fy", 0.0), fz = p.get("fz", 0.0);
        const double g0 = p.get("g0", 0.0), gy = p.get("gy", 0.0), gz = p.get("gz", 0.0);
        const double h0 = p.get("h0", 0.0), hy = p.get("hy", 0.0);
        const double xi0 = p.get("xi0", 0.0), xiL = p.get("xiL", 0.0), xiA = p.get("xiA", 0.0),
                     xiH1 = p.get("xiH1", 0.0);
        CoefficientSet cs = base(name);
        cs.f = [f0, fy, fz](double, double y, ZView z) { return f0 + fy * y + fz * z1(z); };
        cs.g = [g0, gy, gz](double, double y, ZView z) { return g0 + gy * y + gz * z1(z); };
        cs.h = [h0, hy](double, double y) { return h0 + hy * y; };
        cs.xi = [xi0, xiL, xiA, xiH1](const TerminalData& d) {
            double v = xi0 + xiL * d.levy_terminal + xiA * d.increasing_terminal;
            if (xiH1 != 0.0) {
                if (d.martingales.empty()) throw ConfigError("affine xiH1 needs a basis of rank >= 1");
                v += xiH1 * d.martingales[0];
            }
            return v;
        };
        cs.rho = Modulus::linear(2.0 * std::max(fy * fy, gy * gy));
        cs.constants.C = fz != 0.0 ? 2.0 * fz * fz : 1.0;
        cs.constants.alpha = gz != 0.0 ? 2.0 * gz * gz : 0.5;
        if (hy < 0.0) cs.constants.beta = hy;
        cs.constants.K = std::max({1.0, std::abs(fy), std::abs(fz), std::abs(gy), std::abs(gz),
                                   std::abs(hy)});
        cs.f_bound = constant_bound(std::abs(f0));
        cs.g_bound = constant_bound(std::abs(g0));
        cs.h_bound = constant_bound(std::abs(h0));
        return cs;
    }
    throw ConfigError("unknown coefficient preset '" + name + "'");
}

} // namespace gbdsde
