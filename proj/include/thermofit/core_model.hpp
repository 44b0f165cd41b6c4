#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thermofit {

/**
 * Physical constants of the heated box.
 *
 * The box obeys the energy balance
 *
 *   k*V(t) = A*U*(T - Ta) + rho*cp*dT/dt
 *
 * with lamp input V in volts and temperatures in degrees Celsius.
 */
struct PhysicalParams {
    double lamp_constant;        ///< k [W/V]
    double area;                 ///< A [m^2]
    double heat_transfer_coeff;  ///< U [W/(m^2 K)]
    double air_density;          ///< rho [kg/m^3]
    double specific_heat;        ///< cp [J/(kg K)]
    double t_ambient;            ///< Ta [degC]

    /// Throws InvalidArgument unless every constant except t_ambient is positive.
    void validate() const;
};

/// Lumped first-order model K*exp(-td*s)/(tau*s + 1) around ambient Ta.
struct ProcessParams {
    double gain;        ///< K [degC/V]
    double tau;         ///< [s]
    double t_ambient;   ///< [degC]
    double dead_time;   ///< td [s]

    void validate() const;
};

/// Coefficients of the fitted step response f(t) = (a - b)*exp(-c*t) + b.
struct FitParams {
    double a;  ///< value at t = 0; maps to Ta/tau
    double b;  ///< asymptote; maps to K
    double c;  ///< rate; maps to 1/tau [1/s]
};

struct HeatRates {
    double q_gen;   ///< [W]
    double q_loss;  ///< [W], negative when the box is below ambient
};

enum class DiscretizationMethod { Tustin, Forward, Backward };

std::string_view to_string(DiscretizationMethod method);
/// Accepts "tustin", "forward" or "backward" (case-insensitive).
DiscretizationMethod parse_method(std::string_view name);

/**
 * Discrete transfer function
 *
 *   y[n] = sum_k num[k]*u[n - delay - k] - sum_{k>=1} den[k]*y[n - k]
 *
 * with den[0] == 1.
 */
struct DiscreteModel {
    std::vector<double> num;
    std::vector<double> den;
    double sample_time = 0.0;
    int delay_samples = 0;

    /// First-order models only: the root of den.
    double pole() const;
    /// sum(num) / sum(den), the steady-state output for unit input.
    double dc_gain() const;
};

HeatRates heat_rates(const PhysicalParams& p, double temp, double volts);

/// dT/dt [degC/s] from the energy balance.
double ode_rhs(const PhysicalParams& p, double temp, double volts);

ProcessParams derive_process_params(const PhysicalParams& p, double dead_time = 0.0);

/// Dead time has no counterpart in FitParams and is dropped.
FitParams process_to_fit(const ProcessParams& p);
/// Throws InvalidArgument when c <= 0. The result carries dead_time = 0.
ProcessParams fit_to_process(const FitParams& f);

/// (a - b)*exp(-c*t) + b. Throws InvalidArgument for t < 0.
double step_response(const FitParams& f, double t);

DiscreteModel discretize(const ProcessParams& p, DiscretizationMethod method, double sample_time);

/**
 * Runs the difference equation of m.
 *
 * y[0] is initial_temp; output values before n = 0 are taken as initial_temp and
 * delayed input before n = 0 as zero. Output length equals input length.
 */
std::vector<double> simulate_discrete(const DiscreteModel& m, std::span<const double> input,
                                      double initial_temp);

/**
 * Integrates the energy balance with classical RK4, one step per sample.
 *
 * input[n] is held constant over [n*Ts, (n+1)*Ts); y[0] is initial_temp.
 */
std::vector<double> simulate_continuous(const PhysicalParams& p, std::span<const double> input,
                                        double initial_temp, double sample_time);

}  // namespace thermofit
