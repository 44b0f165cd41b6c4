#include "thermofit/synth_gen.hpp"

#include <cmath>
#include <numbers>

#include "thermofit/error.hpp"

namespace thermofit {

namespace {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Uniform on (0, 1]: 53 random bits, never zero so log() stays finite.
double unit_open_closed(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

void SynthSpec::validate() const {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidArgument("rate must be positive");
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw InvalidArgument("duration must be positive");
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw InvalidArgument("noise sigma must be non-negative");
    }
    if (!std::isfinite(truth.a) || !std::isfinite(truth.b) || !std::isfinite(truth.c)) {
        throw InvalidArgument("generating parameters must be finite");
    }
}

std::size_t SynthSpec::sample_count() const {
    // The relative nudge keeps products like 0.3*10 from flooring to 2.
    return static_cast<std::size_t>(std::floor(duration * rate * (1.0 + 1e-12))) + 1;
}

double standard_normal(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t key = mix64(seed + kGolden);
    const std::uint64_t counter = 2 * index;
    const double u1 = unit_open_closed(mix64(key ^ (counter * kGolden)));
    const double u2 = unit_open_closed(mix64(key ^ ((counter + 1) * kGolden)));
    // Box-Muller, cosine branch only.
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> gaussian_noise(std::uint64_t seed, std::size_t count, double sigma) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = sigma * standard_normal(seed, i);
    return out;
}

SynthComponents generate_components(const SynthSpec& spec) {
    spec.validate();
    const std::size_t n = spec.sample_count();
    SynthComponents out;
    out.t.resize(n);
    out.clean.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.t[i] = static_cast<double>(i) / spec.rate;
        out.clean[i] = step_response(spec.truth, out.t[i]);
    }
    out.noise = spec.noise_sigma > 0.0 ? gaussian_noise(spec.seed, n, spec.noise_sigma)
                                       : std::vector<double>(n, 0.0);
    return out;
}

TimeSeries generate(const SynthSpec& spec) {
    SynthComponents parts = generate_components(spec);
    std::vector<double> y(parts.clean.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = parts.clean[i] + parts.noise[i];
    return TimeSeries(std::move(parts.t), std::move(y), spec.rate);
}

}  // namespace thermofit
