#include "gbdsde/cli/config.hpp"
#include "gbdsde/errors.hpp"
#include "gbdsde/presets.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace gbdsde::cli {
namespace {

/// A YAML mapping that remembers which keys were read, so leftovers can be
/// reported as unknown.
class Section {
public:
    Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path))
    {
        if (node_ && !node_.IsNull() && !node_.IsMap())
            throw ConfigError("key '" + path_ + "' must be a mapping");
    }

    [[nodiscard]] bool has(const std::string& key)
    {
        seen_.insert(key);
        return node_ && node_.IsMap() && node_[key] && !node_[key].IsNull();
    }

    template <class T>
    std::optional<T> opt(const std::string& key)
    {
        if (!has(key)) return std::nullopt;
        try {
            return node_[key].as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError("key '" + name(key) + "' has the wrong type");
        }
    }

    template <class T>
    T get(const std::string& key, T fallback)
    {
        return opt<T>(key).value_or(fallback);
    }

    YAML::Node raw(const std::string& key)
    {
        seen_.insert(key);
        return node_ && node_.IsMap() ? node_[key] : YAML::Node();
    }

    Section child(const std::string& key) { return {raw(key), name(key)}; }

    [[nodiscard]] std::string name(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    void finish() const
    {
        if (!node_ || !node_.IsMap()) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!seen_.count(key)) throw ConfigError("unknown key '" + name(key) + "'");
        }
    }

private:
    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

double require_positive(double v, const std::string& key)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("key '" + key + "' must be > 0");
    return v;
}

int require_at_least(int v, int lo, const std::string& key)
{
    if (v < lo) throw ConfigError("key '" + key + "' must be >= " + std::to_string(lo));
    return v;
}

std::vector<std::pair<double, double>> pairs(const YAML::Node& node, const std::string& key)
{
    if (!node.IsSequence()) throw ConfigError("key '" + key + "' must be a list of [x, y] pairs");
    std::vector<std::pair<double, double>> out;
    try {
        for (const auto& item : node) {
            if (!item.IsSequence() || item.size() != 2)
                throw ConfigError("key '" + key + "' entries must be [x, y] pairs");
            out.emplace_back(item[0].as<double>(), item[1].as<double>());
        }
    } catch (const YAML::Exception&) {
        throw ConfigError("key '" + key + "' entries must be numeric pairs");
    }
    return out;
}

void parse_model(Section s, ExperimentConfig& cfg)
{
    auto& m = cfg.model;
    m.drift = s.get<double>("drift", 0.0);
    m.sigma = s.get<double>("sigma", 0.0);
    m.horizon = require_positive(s.get<double>("horizon", 1.0), s.name("horizon"));
    if (s.has("atoms"))
        for (auto [x, lambda] : pairs(s.raw("atoms"), s.name("atoms"))) {
            if (!std::isfinite(x) || x == 0.0 || !(lambda > 0.0) || !std::isfinite(lambda))
                throw ConfigError("key '" + s.name("atoms") +
                                  "' entries need a nonzero position and a positive intensity");
            m.atoms.push_back({x, lambda});
        }
    if (s.has("family")) {
        if (!m.atoms.empty()) throw ConfigError("key 'model.family' conflicts with 'model.atoms'");
        Section f = s.child("family");
        JumpFamily fam;
        fam.name = f.get<std::string>("name", "");
        fam.total_intensity = f.get<double>("intensity", 0.0);
        fam.param1 = f.get<double>("param1", 0.0);
        fam.param2 = f.get<double>("param2", 0.0);
        fam.nodes = f.get<int>("nodes", 8);
        f.finish();
        m.family = fam;
    }
    s.finish();
}

void parse_a_process(Section s, ExperimentConfig& cfg)
{
    const auto kind = s.get<std::string>("kind", "linear");
    if (kind == "linear") {
        cfg.a_spec = LinearA{s.get<double>("slope", 1.0)};
    } else if (kind == "power") {
        cfg.a_spec = PowerA{s.get<double>("exponent", 1.0)};
    } else if (kind == "running_max") {
        cfg.a_spec = RunningMaxA{};
    } else {
        throw ConfigError("key 'a_process.kind' must be linear, power or running_max");
    }
    s.finish();
    validate(cfg.a_spec);
}

void parse_coefficients(Section s, ExperimentConfig& cfg)
{
    cfg.preset = s.get<std::string>("preset", "trivial");
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), cfg.preset) == names.end())
        throw ConfigError("key 'coefficients.preset': unknown preset '" + cfg.preset + "'");
    if (s.has("params")) {
        Section p = s.child("params");
        const YAML::Node node = s.raw("params");
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            cfg.params[key] = p.get<double>(key, 0.0);
        }
        p.finish();
    }
    if (s.has("constants")) {
        Section c = s.child("constants");
        cfg.C = c.opt<double>("C");
        cfg.alpha = c.opt<double>("alpha");
        cfg.beta = c.opt<double>("beta");
        cfg.K = c.opt<double>("K");
        c.finish();
    }
    if (s.has("modulus")) {
        Section m = s.child("modulus");
        ModulusOverride mo;
        mo.kind = m.get<std::string>("kind", "linear");
        mo.scale = m.get<double>("scale", 1.0);
        if (m.has("table")) mo.table = pairs(m.raw("table"), m.name("table"));
        if (mo.kind == "table" && mo.table.empty())
            throw ConfigError("key 'coefficients.modulus.table' is required for kind table");
        if (mo.kind != "table") parse_modulus_kind(mo.kind);
        m.finish();
        cfg.modulus = mo;
    }
    if (s.has("sampler")) {
        Section b = s.child("sampler");
        auto& sm = cfg.sampler;
        sm.t_min = b.get<double>("t_min", sm.t_min);
        if (b.has("t_max")) {
            sm.t_max = b.get<double>("t_max", sm.t_max);
            cfg.sampler_t_max_set = true;
        }
        sm.y_max = require_positive(b.get<double>("y_max", sm.y_max), b.name("y_max"));
        sm.z_max = b.get<double>("z_max", sm.z_max);
        if (b.has("z_dim")) {
            sm.z_dim = require_at_least(b.get<int>("z_dim", sm.z_dim), 0, b.name("z_dim"));
            cfg.sampler_z_dim_set = true;
        }
        sm.n_samples = require_at_least(b.get<int>("n_samples", sm.n_samples), 1, b.name("n_samples"));
        sm.seed = b.get<std::uint64_t>("seed", sm.seed);
        b.finish();
    }
    s.finish();
}

void parse_solver(Section s, ExperimentConfig& cfg)
{
    auto& sc = cfg.solver;
    sc.n_picard_max = require_at_least(s.get<int>("n_picard_max", sc.n_picard_max), 1, s.name("n_picard_max"));
    sc.picard_tol = require_positive(s.get<double>("picard_tol", sc.picard_tol), s.name("picard_tol"));
    sc.features.degree = require_at_least(s.get<int>("degree", sc.features.degree), 0, s.name("degree"));
    sc.chaos_m = require_at_least(s.get<int>("chaos_m", sc.chaos_m), 0, s.name("chaos_m"));
    sc.implicit_tol = require_positive(s.get<double>("implicit_tol", sc.implicit_tol), s.name("implicit_tol"));
    sc.ridge = require_positive(s.get<double>("ridge", sc.ridge), s.name("ridge"));
    sc.regression_tol =
        require_positive(s.get<double>("regression_tol", sc.regression_tol), s.name("regression_tol"));
    sc.initial_guess = s.get<double>("initial_guess", sc.initial_guess);
    if (s.has("features")) {
        Section f = s.child("features");
        sc.features.levy = f.get<bool>("levy", sc.features.levy);
        sc.features.increasing = f.get<bool>("increasing", sc.features.increasing);
        sc.features.brownian_step = f.get<bool>("brownian_step", sc.features.brownian_step);
        sc.features.backward_brownian = f.get<bool>("backward_brownian", sc.features.backward_brownian);
        f.finish();
    }
    s.finish();
}

void parse_certificates(Section s, ExperimentConfig& cfg)
{
    const auto mode = s.get<std::string>("mode", "bound");
    if (mode == "bound")
        cfg.moment_source = MomentSource::bound;
    else if (mode == "solver")
        cfg.moment_source = MomentSource::solver;
    else
        throw ConfigError("key 'certificates.mode' must be bound or solver");
    cfg.y_bound = s.get<double>("y_bound", cfg.y_bound);
    if (!(cfg.y_bound >= 0.0)) throw ConfigError("key 'certificates.y_bound' must be >= 0");
    cfg.p_max = require_at_least(s.get<int>("p_max", cfg.p_max), 1, s.name("p_max"));
    if (s.has("lambda_grid")) cfg.lambda_grid = s.get<std::vector<double>>("lambda_grid", {});
    s.finish();
}

} // namespace

std::string sha256_hex(const std::string& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

ExperimentConfig parse_config(const std::string& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config is not valid YAML: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.text = text;
    cfg.hash = sha256_hex(text);
    Section top(root, "");

    if (top.has("model")) parse_model(top.child("model"), cfg);
    if (top.has("basis")) {
        Section b = top.child("basis");
        cfg.max_order = require_at_least(b.get<int>("max_order", cfg.max_order), 1, "basis.max_order");
        cfg.pivot_tol = require_positive(b.get<double>("pivot_tol", cfg.pivot_tol), "basis.pivot_tol");
        b.finish();
    }
    if (top.has("grid")) {
        Section g = top.child("grid");
        cfg.steps = require_at_least(g.get<int>("steps", cfg.steps), 1, "grid.steps");
        g.finish();
    }
    if (top.has("paths")) {
        Section p = top.child("paths");
        cfg.n_paths = require_at_least(p.get<int>("n_paths", cfg.n_paths), 1, "paths.n_paths");
        cfg.seed = p.get<std::uint64_t>("seed", cfg.seed);
        p.finish();
    }
    if (top.has("a_process")) parse_a_process(top.child("a_process"), cfg);
    if (top.has("coefficients")) parse_coefficients(top.child("coefficients"), cfg);
    if (top.has("solver")) parse_solver(top.child("solver"), cfg);
    if (top.has("certificates")) parse_certificates(top.child("certificates"), cfg);
    if (top.has("phi")) {
        Section p = top.child("phi");
        cfg.phi_n_max = require_at_least(p.get<int>("n_max", cfg.phi_n_max), 0, "phi.n_max");
        cfg.phi_points = require_at_least(p.get<int>("points", cfg.phi_points), 2, "phi.points");
        p.finish();
    }
    if (top.has("outputs")) {
        Section o = top.child("outputs");
        cfg.out_dir = o.get<std::string>("directory", cfg.out_dir);
        cfg.paths_to_write = require_at_least(o.get<int>("paths_to_write", cfg.paths_to_write), 0,
                                              "outputs.paths_to_write");
        o.finish();
    }
    top.finish();
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

LevyModel build_model(const ExperimentConfig& cfg)
{
    const auto& m = cfg.model;
    if (m.family) return LevyModel::from_family(m.drift, m.sigma, *m.family, m.horizon);
    return LevyModel(m.drift, m.sigma, m.atoms, m.horizon);
}

CoefficientSet build_coefficients(const ExperimentConfig& cfg)
{
    CoefficientSet cs = make_preset(cfg.preset, cfg.params);
    if (cfg.C) cs.constants.C = *cfg.C;
    if (cfg.alpha) cs.constants.alpha = *cfg.alpha;
    if (cfg.beta) cs.constants.beta = *cfg.beta;
    if (cfg.K) cs.constants.K = *cfg.K;
    if (cfg.modulus) {
        const auto& mo = *cfg.modulus;
        if (mo.kind == "table") {
            cs.rho = Modulus::table(mo.table);
        } else {
            switch (parse_modulus_kind(mo.kind)) {
            case Modulus::Kind::linear: cs.rho = Modulus::linear(mo.scale); break;
            case Modulus::Kind::log: cs.rho = Modulus::log(mo.scale); break;
            case Modulus::Kind::sqrt: cs.rho = Modulus::sqrt(mo.scale); break;
            default: throw ConfigError("key 'coefficients.modulus.kind' is not a built-in modulus");
            }
        }
    }
    cs.validate();
    return cs;
}

SamplerConfig effective_sampler(const ExperimentConfig& cfg)
{
    SamplerConfig s = cfg.sampler;
    if (!cfg.sampler_t_max_set) s.t_max = cfg.model.horizon;
    if (!cfg.sampler_z_dim_set) s.z_dim = cfg.solver.chaos_m;
    return s;
}

} // namespace gbdsde::cli
