#pragma once

#include "gbdsde/cli/config.hpp"
#include "gbdsde/hypothesis_checks.hpp"
#include "gbdsde/path_engine.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gbdsde::cli {

struct RunOptions {
    std::string command; // basis | simulate | check | schedule | phi | solve | verify
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> paths;
    bool force = false; // solve even when a hypothesis check fails
};

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1; // verify found a failing property
inline constexpr int kExitError = 2;       // config or module error
inline constexpr int kExitRefused = 3;     // solve refused: hypotheses fail, no --force

/// Environment variable giving the output directory when neither --out nor
/// outputs.directory is set.
inline constexpr const char* kOutDirEnv = "GBDSDE_OUT";

int run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Growth, monotonicity, modulus, modulus shape, integrability, Osgood and terminal
/// checks for the configured coefficients. An h that vanishes on the whole sample
/// box is reported as passing the monotonicity check: the dA term is then absent.
std::vector<CheckReport> hypothesis_battery(const ExperimentConfig& cfg, const CoefficientSet& cs,
                                            const PathBundle& bundle);

struct VerifyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Property battery on the configured model: orthonormality, martingale means,
/// brackets, Ito identities, closed-form solver cases and the martingale terminal case.
std::vector<VerifyResult> verify_battery(const ExperimentConfig& cfg, const LevyModel& model,
                                         const TeugelsBasis& basis, const PathBundle& bundle);

} // namespace gbdsde::cli
