#include "thermofit/fit_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "thermofit/error.hpp"

namespace thermofit {

namespace {

constexpr double kRiseFraction = 0.6321;

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

FitParams as_fit_params(std::span<const double> p) { return {p[0], p[1], p[2]}; }

}  // namespace

std::array<double, 3> step_response_jacobian(double t, const FitParams& p) {
    const double decay = std::exp(-p.c * t);
    return {decay, 1.0 - decay, -t * (p.a - p.b) * decay};
}

double StepResponseModel::predict(double t, std::span<const double> p) const {
    return (p[0] - p[1]) * std::exp(-p[2] * t) + p[1];
}

void StepResponseModel::jacobian_row(double t, std::span<const double> p,
                                     std::span<double> row) const {
    const auto d = step_response_jacobian(t, as_fit_params(p));
    std::copy(d.begin(), d.end(), row.begin());
}

FitParams initial_guess(const TimeSeries& ts) {
    const std::size_t n = ts.size();
    if (n < 10) throw InvalidArgument("initial guess needs at least 10 samples");

    const auto y = ts.y();
    const auto t = ts.t();
    const std::size_t head = std::min(n, std::max<std::size_t>(5, (n + 99) / 100));
    const std::size_t tail = std::min(n, std::max<std::size_t>(5, (n + 19) / 20));

    const double a0 = mean_of(y.first(head));
    const double b0 = mean_of(y.last(tail));
    if (std::abs(b0 - a0) <= 1e-9) {
        throw DegenerateData("series is flat (start and end levels agree); nothing to fit");
    }

    const double target = a0 + kRiseFraction * (b0 - a0);
    const bool rising = b0 > a0;
    double c0 = 3.0 / (t.back() - t.front());
    for (std::size_t i = 0; i < n; ++i) {
        const bool crossed = rising ? y[i] >= target : y[i] <= target;
        if (crossed && t[i] > t.front()) {
            c0 = 1.0 / (t[i] - t.front());
            break;
        }
    }
    return {a0, b0, c0};
}

double r_squared(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) throw InvalidArgument("R^2 needs equal-length inputs");
    if (y.size() < 2) throw InvalidArgument("R^2 needs at least 2 points");
    const double mean = mean_of(y);
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (ss_tot == 0.0) throw DegenerateData("R^2 is undefined for constant data");
    return 1.0 - ss_res / ss_tot;
}

FitReport fit_series(const TimeSeries& ts, const FitOptions& options) {
    FitReport report;
    report.smoothing = options.smoothing;

    if (options.smoothing) {
        const SGConfig& sg = *options.smoothing;
        sg.validate();
        const auto window = static_cast<std::size_t>(sg.window);
        if (window > ts.size()) throw SeriesTooShort(ts.size(), window);
        if (window > ts.size() / 2) {
            report.warnings.push_back("smoothing window " + std::to_string(window) +
                                      " exceeds half of the " + std::to_string(ts.size()) +
                                      " samples");
        }
        report.target = sg_smooth(ts.y(), sg);
    } else {
        report.target.assign(ts.y().begin(), ts.y().end());
    }

    const TimeSeries target = ts.with_values(report.target);
    const InitialOverride& init = options.initial;
    if (init.complete()) {
        report.start = {*init.a, *init.b, *init.c};
    } else {
        report.start = initial_guess(target);
        report.start.a = init.a.value_or(report.start.a);
        report.start.b = init.b.value_or(report.start.b);
        report.start.c = init.c.value_or(report.start.c);
    }

    const StepResponseModel model;
    const std::array<double, 3> p0{report.start.a, report.start.b, report.start.c};
    report.result = lm_fit(model, {ts.t(), report.target}, options.weights, p0, options.solver);
    report.fit = as_fit_params(report.result.params);

    if (report.fit.c > 0.0) {
        report.process = fit_to_process(report.fit);
    } else {
        report.warnings.push_back("fitted rate c = " + std::to_string(report.fit.c) +
                                  " is not positive; no time constant reported");
    }
    if (report.result.converged == Convergence::MaxIter) {
        report.warnings.push_back("solver stopped at the iteration limit without converging");
    }

    report.fitted.resize(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        report.fitted[i] = model.predict(ts.t()[i], report.result.params);
    }
    report.r_squared = r_squared(report.target, report.fitted);
    report.r_squared_raw = r_squared(ts.y(), report.fitted);
    if (report.r_squared < 0.0) {
        report.warnings.push_back("R^2 is negative: the fit is worse than the mean");
    }
    return report;
}

}  // namespace thermofit
