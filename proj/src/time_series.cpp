#include "thermofit/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermofit/error.hpp"

namespace thermofit {

namespace {

constexpr double kSpacingTolerance = 1e-6;

}  // namespace

double median_spacing(std::span<const double> t) {
    if (t.size() < 2) throw InvalidArgument("need at least two samples to measure spacing");
    std::vector<double> dt(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i) dt[i - 1] = t[i] - t[i - 1];
    const auto mid = dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2);
    std::nth_element(dt.begin(), mid, dt.end());
    if (dt.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(dt.begin(), mid);
    return 0.5 * (lower + upper);
}

TimeSeries::TimeSeries(std::vector<double> t, std::vector<double> y, double rate)
    : t_(std::move(t)), y_(std::move(y)), rate_(rate) {
    if (t_.size() != y_.size()) {
        throw InvalidArgument("time and temperature columns differ in length");
    }
    if (t_.size() < 2) throw InvalidArgument("a time series needs at least 2 samples");
    if (!(rate_ > 0.0) || !std::isfinite(rate_)) {
        throw InvalidArgument("sampling rate must be positive");
    }
    const double spacing = 1.0 / rate_;
    for (std::size_t i = 1; i < t_.size(); ++i) {
        const double dt = t_[i] - t_[i - 1];
        if (!(dt > 0.0)) {
            throw InvalidArgument("sample times must be strictly increasing (index " +
                                  std::to_string(i) + ")");
        }
        if (std::abs(dt - spacing) > kSpacingTolerance * spacing) {
            throw InvalidArgument("non-uniform sample spacing at index " + std::to_string(i));
        }
    }
    for (double v : y_) {
        if (!std::isfinite(v)) throw InvalidArgument("temperatures must be finite");
    }
}

TimeSeries TimeSeries::from_samples(std::vector<double> t, std::vector<double> y) {
    if (t.size() < 2) throw InvalidArgument("a time series needs at least 2 samples");
    const double spacing = median_spacing(t);
    if (!(spacing > 0.0)) throw InvalidArgument("sample times must be strictly increasing");
    return TimeSeries(std::move(t), std::move(y), 1.0 / spacing);
}

TimeSeries TimeSeries::with_values(std::vector<double> y) const {
    return TimeSeries(t_, std::move(y), rate_);
}

}  // namespace thermofit
