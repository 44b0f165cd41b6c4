#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace thermofit {

/// Uniformly sampled temperature record: times in seconds, temperatures in degC.
class TimeSeries {
public:
    /// Throws InvalidArgument unless t and y have equal length >= 2, t is strictly
    /// increasing and every spacing is within 1e-6 relative of 1/rate.
    TimeSeries(std::vector<double> t, std::vector<double> y, double rate);

    /// Same checks, with the rate inferred from the median spacing.
    static TimeSeries from_samples(std::vector<double> t, std::vector<double> y);

    std::size_t size() const { return t_.size(); }
    std::span<const double> t() const { return t_; }
    std::span<const double> y() const { return y_; }
    double rate() const { return rate_; }
    double duration() const { return t_.back() - t_.front(); }

    /// Copy with y replaced (e.g. by a smoothed version); times and rate are kept.
    TimeSeries with_values(std::vector<double> y) const;

private:
    std::vector<double> t_;
    std::vector<double> y_;
    double rate_;
};

/// Median of consecutive differences of t (t.size() >= 2).
double median_spacing(std::span<const double> t);

}  // namespace thermofit
