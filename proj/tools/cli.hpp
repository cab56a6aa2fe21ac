#pragma once

#include "qkinetic/spectral.hpp"

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qk::cli {

struct Tolerances {
    double slope = 0.2;     // probe: |fitted - expected|
    double relative = 0.02; // oracle-compare (fourier)
    double reduction = 0.01; // delta-check mollifier ladder against the polar reduction
    double sigmas = 3.0;    // converge, oracle-compare (picard)
    double delta = 1e-3;    // delta-check at the largest T
};

/// Everything a run depends on. Empty datum / potential / point lists pick
/// per-command defaults at `dim`; the resolved values are written back
/// before the run so the emitted config reproduces it.
struct RunConfig {
    int dim = 2;
    std::vector<GaussianBump> potential;
    std::vector<DatumComponent> datum;
    bool homogeneous = false;
    std::uint64_t seed = 1;
    std::size_t budget = 200000;

    // series / Picard
    double t = 0.1;
    int n_max = 3;
    double c_hat = 0.0; // 0: calibrate
    bool allow_beyond_radius = false;
    int picard_iterations = 4;
    std::vector<double> x, v, w;

    // cross-section
    int grid = 32;

    // probe / converge
    std::string term = "I1";
    std::string signs = "auto"; // auto | summed | branch
    double ladder_first = 0.0;  // 0: command default
    int ladder_points = 4;
    int order = 1;

    // oracle-compare
    std::string oracle = "fourier"; // fourier | picard
    double eps = 0.1;

    Tolerances tol;
    std::string output;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

/// Bad configuration or flag values; maps to exit status 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names{"cross-section", "solve", "probe", "converge",
                                                "bound-check", "delta-check", "oracle-compare"};
    return names;
}

struct RunResult {
    int status = 0;          // 0 all tolerances met, 1 some failed, 2 config error
    nlohmann::json document; // {command, config, results, seed, versions, wall_time}
    std::vector<std::string> csv_header;
    std::vector<std::vector<double>> csv_rows;
    std::vector<std::string> failures;
};

/// Runs one command on a resolved config; throws ConfigError on bad input.
RunResult run(const std::string& command, RunConfig cfg);

/// Full command line entry point.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace qk::cli
