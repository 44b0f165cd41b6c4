#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermofit/core_model.hpp"
#include "thermofit/lm_solver.hpp"
#include "thermofit/sg_filter.hpp"
#include "thermofit/time_series.hpp"

namespace thermofit {

/// (df/da, df/db, df/dc) of f(t) = (a - b)*exp(-c*t) + b.
std::array<double, 3> step_response_jacobian(double t, const FitParams& p);

/// The step response as a three-parameter solver model, p = (a, b, c).
class StepResponseModel final : public ResidualModel {
public:
    std::size_t num_params() const override { return 3; }
    double predict(double t, std::span<const double> p) const override;
    void jacobian_row(double t, std::span<const double> p, std::span<double> row) const override;
};

/**
 * Data-driven starting point for the fit.
 *
 * a0 is the mean of the first 1% of samples (at least 5), b0 the mean of the last
 * 5% (at least 5), and c0 = 1/t63 where t63 is the time since the first sample at
 * which y first reaches 63.21% of the way from a0 to b0 (t_end/3 if it never does).
 * Throws DegenerateData for flat data.
 */
FitParams initial_guess(const TimeSeries& ts);

/// 1 - SS_res/SS_tot. Throws DegenerateData for constant y.
double r_squared(std::span<const double> y, std::span<const double> yhat);

/// Per-parameter overrides of initial_guess; unset entries keep the heuristic value.
struct InitialOverride {
    std::optional<double> a, b, c;

    bool complete() const { return a && b && c; }
};

struct FitOptions {
    std::optional<SGConfig> smoothing = SGConfig{};
    LMConfig solver{};
    Weights weights{};
    InitialOverride initial{};
};

struct FitReport {
    FitParams fit{};
    std::optional<ProcessParams> process;  ///< empty when the fitted c <= 0
    double r_squared = 0.0;                ///< against the fitted target (smoothed if smoothing)
    double r_squared_raw = 0.0;            ///< against the unsmoothed measurements
    FitParams start{};
    FitResult result;
    std::optional<SGConfig> smoothing;
    std::vector<double> target;  ///< series the model was fitted to
    std::vector<double> fitted;  ///< model evaluated on the sample times
    std::vector<std::string> warnings;
};

/**
 * Smooth (optionally), guess, fit and summarize one temperature record.
 *
 * Warns when the window exceeds half the series, when the fitted rate is not
 * positive, when the solver hit max_iter, or when R^2 is negative.
 */
FitReport fit_series(const TimeSeries& ts, const FitOptions& options = {});

}  // namespace thermofit
