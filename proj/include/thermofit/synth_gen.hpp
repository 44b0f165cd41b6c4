#pragma once

#include <cstdint>
#include <vector>

#include "thermofit/core_model.hpp"
#include "thermofit/time_series.hpp"

namespace thermofit {

/// Recipe for a synthetic step-response measurement.
struct SynthSpec {
    FitParams truth{30.0, 25.0, 0.01};
    double rate = 100.0;        ///< [Hz]
    double duration = 300.0;    ///< [s]
    double noise_sigma = 0.5;   ///< [degC]
    std::uint64_t seed = 42;

    void validate() const;
    /// floor(duration*rate) + 1
    std::size_t sample_count() const;
};

struct SynthComponents {
    std::vector<double> t;
    std::vector<double> clean;
    std::vector<double> noise;
};

/**
 * Standard normal deviate number `index` of the stream identified by `seed`.
 *
 * Counter based: the value depends only on (seed, index), never on call order or
 * thread layout.
 */
double standard_normal(std::uint64_t seed, std::uint64_t index);

std::vector<double> gaussian_noise(std::uint64_t seed, std::size_t count, double sigma);

/// Grid, noise-free curve and noise drawn separately; generate() returns clean + noise.
SynthComponents generate_components(const SynthSpec& spec);

TimeSeries generate(const SynthSpec& spec);

}  // namespace thermofit
