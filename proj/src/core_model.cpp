#include "thermofit/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "thermofit/error.hpp"

namespace thermofit {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidArgument(std::string(name) + " must be positive and finite, got " +
                              std::to_string(value));
    }
}

}  // namespace

void PhysicalParams::validate() const {
    require_positive(lamp_constant, "lamp constant k");
    require_positive(area, "area A");
    require_positive(heat_transfer_coeff, "heat transfer coefficient U");
    require_positive(air_density, "air density rho");
    require_positive(specific_heat, "specific heat cp");
    if (!std::isfinite(t_ambient)) throw InvalidArgument("ambient temperature must be finite");
}

void ProcessParams::validate() const {
    require_positive(tau, "time constant tau");
    if (!(dead_time >= 0.0)) throw InvalidArgument("dead time must be non-negative");
    if (!std::isfinite(gain) || !std::isfinite(t_ambient)) {
        throw InvalidArgument("gain and ambient temperature must be finite");
    }
}

std::string_view to_string(DiscretizationMethod method) {
    switch (method) {
        case DiscretizationMethod::Tustin: return "tustin";
        case DiscretizationMethod::Forward: return "forward";
        case DiscretizationMethod::Backward: return "backward";
    }
    return "unknown";
}

DiscretizationMethod parse_method(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "tustin" || lower == "bilinear") return DiscretizationMethod::Tustin;
    if (lower == "forward") return DiscretizationMethod::Forward;
    if (lower == "backward") return DiscretizationMethod::Backward;
    throw InvalidArgument("unknown discretization method '" + std::string(name) +
                          "' (expected tustin, forward or backward)");
}

double DiscreteModel::pole() const {
    if (den.size() != 2) throw InvalidArgument("pole() needs a first-order model");
    return -den[1];
}

double DiscreteModel::dc_gain() const {
    const double n = std::accumulate(num.begin(), num.end(), 0.0);
    const double d = std::accumulate(den.begin(), den.end(), 0.0);
    return n / d;
}

HeatRates heat_rates(const PhysicalParams& p, double temp, double volts) {
    return {p.lamp_constant * volts, p.area * p.heat_transfer_coeff * (temp - p.t_ambient)};
}

double ode_rhs(const PhysicalParams& p, double temp, double volts) {
    const auto [q_gen, q_loss] = heat_rates(p, temp, volts);
    return (q_gen - q_loss) / (p.air_density * p.specific_heat);
}

ProcessParams derive_process_params(const PhysicalParams& p, double dead_time) {
    p.validate();
    const double conductance = p.area * p.heat_transfer_coeff;
    ProcessParams out{p.lamp_constant / conductance, p.air_density * p.specific_heat / conductance,
                      p.t_ambient, dead_time};
    out.validate();
    return out;
}

FitParams process_to_fit(const ProcessParams& p) {
    require_positive(p.tau, "time constant tau");
    return {p.t_ambient / p.tau, p.gain, 1.0 / p.tau};
}

ProcessParams fit_to_process(const FitParams& f) {
    if (!(f.c > 0.0)) {
        throw InvalidArgument("rate c must be positive to map to a time constant, got " +
                              std::to_string(f.c));
    }
    return {f.b, 1.0 / f.c, f.a / f.c, 0.0};
}

double step_response(const FitParams& f, double t) {
    if (t < 0.0) throw InvalidArgument("step response is defined for t >= 0");
    return (f.a - f.b) * std::exp(-f.c * t) + f.b;
}

DiscreteModel discretize(const ProcessParams& p, DiscretizationMethod method, double sample_time) {
    p.validate();
    require_positive(sample_time, "sample time");

    const double K = p.gain;
    const double tau = p.tau;
    const double Ts = sample_time;

    DiscreteModel m;
    m.sample_time = Ts;
    m.delay_samples = static_cast<int>(std::lround(p.dead_time / Ts));

    switch (method) {
        case DiscretizationMethod::Forward: {
            // s -> (z - 1)/Ts
            if (Ts >= 2.0 * tau) {
                throw UnstableDiscretization(
                    "forward discretization needs Ts < 2*tau (Ts = " + std::to_string(Ts) +
                    ", tau = " + std::to_string(tau) + ")");
            }
            m.num = {0.0, K * Ts / tau};
            m.den = {1.0, -(1.0 - Ts / tau)};
            break;
        }
        case DiscretizationMethod::Backward: {
            // s -> (z - 1)/(Ts*z)
            m.num = {K * Ts / (tau + Ts), 0.0};
            m.den = {1.0, -tau / (tau + Ts)};
            break;
        }
        case DiscretizationMethod::Tustin: {
            // s -> (2/Ts)*(z - 1)/(z + 1)
            const double g = K * Ts / (2.0 * tau + Ts);
            m.num = {g, g};
            m.den = {1.0, -(2.0 * tau - Ts) / (2.0 * tau + Ts)};
            break;
        }
    }
    return m;
}

std::vector<double> simulate_discrete(const DiscreteModel& m, std::span<const double> input,
                                      double initial_temp) {
    if (input.empty()) throw InvalidArgument("simulate_discrete needs a non-empty input");
    if (m.den.empty() || m.den[0] != 1.0) throw InvalidArgument("den must be monic");
    if (!(m.sample_time > 0.0)) throw InvalidArgument("sample time must be positive");
    if (m.delay_samples < 0) throw InvalidArgument("delay must be non-negative");

    const auto n_out = static_cast<std::ptrdiff_t>(input.size());
    const std::ptrdiff_t delay = m.delay_samples;

    auto delayed_input = [&](std::ptrdiff_t k) {
        const std::ptrdiff_t src = k - delay;
        return src >= 0 ? input[static_cast<std::size_t>(src)] : 0.0;
    };

    std::vector<double> y(input.size());
    y[0] = initial_temp;
    for (std::ptrdiff_t n = 1; n < n_out; ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < m.num.size(); ++k) {
            acc += m.num[k] * delayed_input(n - static_cast<std::ptrdiff_t>(k));
        }
        for (std::size_t k = 1; k < m.den.size(); ++k) {
            const std::ptrdiff_t idx = n - static_cast<std::ptrdiff_t>(k);
            acc -= m.den[k] * (idx >= 0 ? y[static_cast<std::size_t>(idx)] : initial_temp);
        }
        y[static_cast<std::size_t>(n)] = acc;
    }
    return y;
}

std::vector<double> simulate_continuous(const PhysicalParams& p, std::span<const double> input,
                                        double initial_temp, double sample_time) {
    p.validate();
    require_positive(sample_time, "sample time");
    if (input.empty()) return {};

    const double h = sample_time;
    std::vector<double> y(input.size());
    y[0] = initial_temp;
    for (std::size_t n = 0; n + 1 < input.size(); ++n) {
        const double v = input[n];
        const double T = y[n];
        const double k1 = ode_rhs(p, T, v);
        const double k2 = ode_rhs(p, T + 0.5 * h * k1, v);
        const double k3 = ode_rhs(p, T + 0.5 * h * k2, v);
        const double k4 = ode_rhs(p, T + h * k3, v);
        y[n + 1] = T + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

}  // namespace thermofit
