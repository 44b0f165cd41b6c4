#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "thermofit/core_model.hpp"
#include "thermofit/error.hpp"
#include "thermofit/fit_pipeline.hpp"
#include "thermofit/lm_solver.hpp"
#include "thermofit/sg_filter.hpp"

namespace thermofit::cli {

enum class Command { Simulate, Smooth, Fit, Discretize, Pipeline };
enum class ReportFormat { Text, Json };

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitDegenerate = 4;
inline constexpr int kExitNumerical = 5;
inline constexpr int kExitIo = 6;

int exit_code(ErrorCategory category);

struct RunConfig {
    Command command = Command::Pipeline;
    std::filesystem::path input;
    std::filesystem::path output;

    // smoothing
    SGConfig smoothing{};
    bool raw = false;  ///< fit the unsmoothed series

    LMConfig solver{};
    std::optional<double> a0, b0, c0;
    std::optional<double> fit_sigma;  ///< uniform measurement sigma for `fit` weights

    // synthetic data
    FitParams truth{30.0, 25.0, 0.01};
    double rate = 100.0;
    std::optional<double> duration;  ///< defaults to 3/c
    double noise_sigma = 0.5;
    std::uint64_t seed = 42;

    // discretization
    double gain = 1.0;
    double tau = 10.0;
    double dead_time = 0.0;
    DiscretizationMethod method = DiscretizationMethod::Tustin;
    double sample_time = 1.0;

    ReportFormat format = ReportFormat::Text;

    /// Throws InvalidArgument when a flag the command needs is missing.
    void validate() const;
};

/// Applies THERMOFIT_SEED (when set) over cfg.seed.
void apply_environment(RunConfig& cfg);

/// Stable machine-readable report. The keys a, b, c, K, tau, t_ambient, r_squared,
/// iterations, converged and lambda_final are always present.
nlohmann::json report_to_json(const FitReport& report);
std::string report_to_text(const FitReport& report);

/// Executes one command. Errors are printed to err and mapped to an exit status.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace thermofit::cli
