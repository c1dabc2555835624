#include "gbdsde/modulus.hpp"
#include "gbdsde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gbdsde {

Modulus Modulus::linear(double scale)
{
    if (!(scale >= 0.0) || !std::isfinite(scale)) throw ConfigError("linear modulus needs K >= 0");
    return {Kind::linear, scale};
}

Modulus Modulus::log(double scale)
{
    if (!(scale >= 0.0) || !std::isfinite(scale)) throw ConfigError("log modulus needs K >= 0");
    return {Kind::log, scale};
}

Modulus Modulus::sqrt(double scale)
{
    if (!(scale >= 0.0) || !std::isfinite(scale)) throw ConfigError("sqrt modulus needs K >= 0");
    return {Kind::sqrt, scale};
}

Modulus Modulus::table(std::vector<std::pair<double, double>> nodes)
{
    if (nodes.empty() || nodes.front().first != 0.0 || nodes.front().second != 0.0)
        nodes.insert(nodes.begin(), {0.0, 0.0});
    if (nodes.size() < 2) throw ConfigError("modulus table needs at least one node besides (0, 0)");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i].first > nodes[i - 1].first))
            throw ConfigError("modulus table u-values must be strictly increasing");
        if (!(nodes[i].second >= nodes[i - 1].second))
            throw ConfigError("modulus table values must be nondecreasing");
    }
    Modulus m{Kind::table, 1.0};
    m.nodes_ = std::move(nodes);
    return m;
}

Modulus Modulus::custom(std::function<double(double, double)> fn, std::string name)
{
    if (!fn) throw ConfigError("custom modulus needs a callable");
    Modulus m{Kind::custom, 1.0};
    m.fn_ = std::move(fn);
    m.name_ = std::move(name);
    return m;
}

double Modulus::operator()(double t, double u) const
{
    if (u <= 0.0) return kind_ == Kind::custom ? fn_(t, 0.0) : 0.0;
    switch (kind_) {
    case Kind::linear:
        return scale_ * u;
    case Kind::log:
        return u < 1.0 ? scale_ * u * (1.0 - std::log(u)) : scale_;
    case Kind::sqrt:
        return scale_ * std::sqrt(u);
    case Kind::table: {
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u,
                                   [](double v, const auto& node) { return v < node.first; });
        if (it == nodes_.end()) it = std::prev(nodes_.end());
        const auto& hi = *it;
        const auto& lo = *std::prev(it);
        const double slope = (hi.second - lo.second) / (hi.first - lo.first);
        return lo.second + slope * (u - lo.first);
    }
    case Kind::custom:
        return fn_(t, u);
    }
    return 0.0;
}

std::string Modulus::describe() const
{
    std::ostringstream os;
    switch (kind_) {
    case Kind::linear: os << "linear(K=" << scale_ << ")"; break;
    case Kind::log: os << "log(K=" << scale_ << ")"; break;
    case Kind::sqrt: os << "sqrt(K=" << scale_ << ")"; break;
    case Kind::table: os << "table(" << nodes_.size() << " nodes)"; break;
    case Kind::custom: os << "custom(" << name_ << ")"; break;
    }
    return os.str();
}

Modulus::Kind parse_modulus_kind(const std::string& name)
{
    if (name == "linear") return Modulus::Kind::linear;
    if (name == "log") return Modulus::Kind::log;
    if (name == "sqrt") return Modulus::Kind::sqrt;
    if (name == "table") return Modulus::Kind::table;
    throw ConfigError("unknown modulus kind '" + name + "'");
}

} // namespace gbdsde
