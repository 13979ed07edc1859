#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bolza/grid_function.hpp"
#include "bolza/tolerances.hpp"

namespace bolza::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

enum ExitCode : int { kOk = 0, kUsage = 1, kVerificationFailed = 2, kNotOptimal = 3 };

struct RunConfig {
    /// solve, dualize, check-duality, characteristics, qualify, sweep, oracle
    std::string command;
    std::filesystem::path problem;
    int tau = 0;
    std::vector<double> xi;
    std::vector<double> eta;
    std::optional<GridAxis> grid;
    std::uint64_t seed = kDefaultSeed;
    Tolerances tol;
    /// Empty: $BOLZA_OUTPUT_DIR, else the working directory.
    std::filesystem::path outDir;
    int jobs = 1;
    /// oracle only: auto, dp or riccati.
    std::string method = "auto";
};

/// Runs one command, writing artifacts under the output directory and a
/// short report to `out`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

std::filesystem::path resolveOutputDir(const RunConfig& config);

}  // namespace bolza::cli
