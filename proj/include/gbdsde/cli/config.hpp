#pragma once

#include "gbdsde/certificates.hpp"
#include "gbdsde/coefficients.hpp"
#include "gbdsde/hypothesis_checks.hpp"
#include "gbdsde/increasing_process.hpp"
#include "gbdsde/levy_model.hpp"
#include "gbdsde/picard_solver.hpp"
#include "gbdsde/presets.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gbdsde::cli {

inline constexpr const char* kVersion = "0.1.0";

struct ModelSection {
    double drift = 0.0;
    double sigma = 0.0;
    std::vector<Atom> atoms;
    std::optional<JumpFamily> family;
    double horizon = 1.0;
};

struct ModulusOverride {
    std::string kind; // linear | log | sqrt | table
    double scale = 1.0;
    std::vector<std::pair<double, double>> table;
};

/// Parsed experiment file. Every section is optional; defaults are listed in
/// the README and in configs/.
struct ExperimentConfig {
    ModelSection model;
    int max_order = 4;
    double pivot_tol = kDefaultPivotTol;
    int steps = 50;
    int n_paths = 10'000;
    std::uint64_t seed = 1;
    IncreasingProcessSpec a_spec = LinearA{1.0};

    std::string preset = "trivial";
    PresetParams params;
    std::optional<double> C, alpha, beta, K;
    std::optional<ModulusOverride> modulus;
    SamplerConfig sampler;
    bool sampler_z_dim_set = false;
    bool sampler_t_max_set = false;

    SolverConfig solver;

    MomentSource moment_source = MomentSource::bound;
    double y_bound = 1.0;
    int p_max = 1000;
    std::vector<double> lambda_grid{0.0, 0.5, 1.0};

    int phi_n_max = 30;
    int phi_points = 201;

    std::string out_dir; // empty: fall back to $GBDSDE_OUT, then "out"
    int paths_to_write = 10;

    std::string text;   // raw config text
    std::string hash;   // SHA-256 of `text`, hex
};

/// Throws ConfigError naming the offending key on malformed input.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

std::string sha256_hex(const std::string& data);

LevyModel build_model(const ExperimentConfig& cfg);
/// Preset with the constants / modulus overrides of the config applied.
CoefficientSet build_coefficients(const ExperimentConfig& cfg);
/// Sampler box with t_max = T and z_dim = chaos_m unless set explicitly.
SamplerConfig effective_sampler(const ExperimentConfig& cfg);

} // namespace gbdsde::cli
