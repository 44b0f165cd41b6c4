#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "thermofit/core_model.hpp"
#include "thermofit/error.hpp"

using namespace thermofit;

namespace {

// k=2, A=0.1, U=4, rho=1.2, cp=1005, Ta=25
PhysicalParams box() { return {2.0, 0.1, 4.0, 1.2, 1005.0, 25.0}; }

}  // namespace

TEST(HeatRates, EquilibriumAtAmbient) {
    const auto r = heat_rates(box(), 25.0, 0.0);
    EXPECT_DOUBLE_EQ(r.q_gen, 0.0);
    EXPECT_DOUBLE_EQ(r.q_loss, 0.0);
}

TEST(HeatRates, DirectSubstitution) {
    const auto r = heat_rates(box(), 30.0, 3.0);
    EXPECT_DOUBLE_EQ(r.q_gen, 6.0);
    EXPECT_NEAR(r.q_loss, 2.0, 1e-12);
}

TEST(HeatRates, LossIsNegativeBelowAmbient) {
    const auto r = heat_rates(box(), 20.0, 0.0);
    EXPECT_DOUBLE_EQ(r.q_gen, 0.0);
    EXPECT_NEAR(r.q_loss, -2.0, 1e-12);
}

TEST(OdeRhs, RestState) { EXPECT_DOUBLE_EQ(ode_rhs(box(), 25.0, 0.0), 0.0); }

TEST(OdeRhs, Substitution) { EXPECT_NEAR(ode_rhs(box(), 25.0, 3.0), 6.0 / 1206.0, 1e-15); }

TEST(OdeRhs, ZeroAtSteadyState) {
    const auto proc = derive_process_params(box());
    const double volts = 1.7;
    EXPECT_NEAR(ode_rhs(box(), proc.t_ambient + proc.gain * volts, volts), 0.0, 1e-15);
}

TEST(DeriveProcessParams, Substitution) {
    const auto p = derive_process_params(box(), 0.0);
    EXPECT_DOUBLE_EQ(p.gain, 5.0);
    EXPECT_NEAR(p.tau, 3015.0, 1e-9);
    EXPECT_DOUBLE_EQ(p.t_ambient, 25.0);
    EXPECT_DOUBLE_EQ(p.dead_time, 0.0);
}

TEST(DeriveProcessParams, IdentityCase) {
    const auto p = derive_process_params({1, 1, 1, 1, 1, 0}, 0.0);
    EXPECT_DOUBLE_EQ(p.gain, 1.0);
    EXPECT_DOUBLE_EQ(p.tau, 1.0);
    EXPECT_DOUBLE_EQ(p.t_ambient, 0.0);
}

TEST(DeriveProcessParams, DoublingAreaAndCoefficientQuartersGainAndTau) {
    const auto p = derive_process_params({2.0, 0.2, 8.0, 1.2, 1005.0, 25.0}, 0.0);
    EXPECT_NEAR(p.gain, 1.25, 1e-12);
    EXPECT_NEAR(p.tau, 753.75, 1e-9);
}

TEST(DeriveProcessParams, RejectsNonPositiveConstants) {
    auto bad = box();
    bad.area = 0.0;
    EXPECT_THROW(derive_process_params(bad), InvalidArgument);
    bad = box();
    bad.specific_heat = -1.0;
    EXPECT_THROW(derive_process_params(bad), InvalidArgument);
}

TEST(ProcessToFit, Substitution) {
    const auto f = process_to_fit({25.0, 100.0, 25.0, 0.0});
    EXPECT_DOUBLE_EQ(f.a, 0.25);
    EXPECT_DOUBLE_EQ(f.b, 25.0);
    EXPECT_DOUBLE_EQ(f.c, 0.01);

    const auto g = process_to_fit({1.0, 1.0, 0.0, 0.0});
    EXPECT_DOUBLE_EQ(g.a, 0.0);
    EXPECT_DOUBLE_EQ(g.b, 1.0);
    EXPECT_DOUBLE_EQ(g.c, 1.0);
}

TEST(ProcessToFit, DropsDeadTime) {
    const auto p = fit_to_process(process_to_fit({2.0, 50.0, 20.0, 7.5}));
    EXPECT_DOUBLE_EQ(p.dead_time, 0.0);
}

TEST(FitToProcess, InverseSubstitution) {
    const auto p = fit_to_process({0.25, 25.0, 0.01});
    EXPECT_DOUBLE_EQ(p.gain, 25.0);
    EXPECT_NEAR(p.tau, 100.0, 1e-12);
    EXPECT_NEAR(p.t_ambient, 25.0, 1e-12);
    EXPECT_DOUBLE_EQ(p.dead_time, 0.0);

    const auto q = fit_to_process({0.0, 1.0, 1.0});
    EXPECT_DOUBLE_EQ(q.gain, 1.0);
    EXPECT_DOUBLE_EQ(q.tau, 1.0);
    EXPECT_DOUBLE_EQ(q.t_ambient, 0.0);
}

TEST(FitToProcess, TableOnePointOneToolbox) {
    const auto p = fit_to_process({34.43, 43.65, 0.0415});
    EXPECT_DOUBLE_EQ(p.gain, 43.65);
    EXPECT_NEAR(p.tau, 24.096, 1e-3);
    EXPECT_NEAR(p.t_ambient, 829.6, 0.05);
}

TEST(FitToProcess, RejectsNonPositiveRate) {
    EXPECT_THROW(fit_to_process({1.0, 2.0, 0.0}), InvalidArgument);
    EXPECT_THROW(fit_to_process({1.0, 2.0, -0.1}), InvalidArgument);
}

TEST(FitProcessMaps, RoundTripProperty) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-100.0, 100.0);
    std::uniform_real_distribution<double> rate(1e-4, 2.0);
    for (int i = 0; i < 200; ++i) {
        const FitParams f{coef(rng), coef(rng), rate(rng)};
        const FitParams back = process_to_fit(fit_to_process(f));
        EXPECT_NEAR(back.a, f.a, 1e-12 * std::max(1.0, std::abs(f.a)));
        EXPECT_DOUBLE_EQ(back.b, f.b);
        EXPECT_NEAR(back.c, f.c, 1e-15 * f.c * 4);
    }
}

TEST(StepResponse, Values) {
    const FitParams f{30.0, 25.0, 0.01};
    EXPECT_DOUBLE_EQ(step_response(f, 0.0), 30.0);
    EXPECT_NEAR(step_response(f, 1e6), 25.0, 1e-12);
    EXPECT_NEAR(step_response(f, 100.0), 5.0 * std::exp(-1.0) + 25.0, 1e-12);
    EXPECT_NEAR(step_response(f, 100.0), 26.83940, 1e-5);
}

TEST(StepResponse, RejectsNegativeTime) {
    EXPECT_THROW(step_response({1, 2, 0.1}, -1e-9), InvalidArgument);
}

TEST(StepResponse, MonotoneAndBoundedProperty) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coef(0.0, 100.0);
    std::uniform_real_distribution<double> rate(1e-4, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const FitParams f{coef(rng), coef(rng), rate(rng)};
        const double lo = std::min(f.a, f.b);
        const double hi = std::max(f.a, f.b);
        double prev = step_response(f, 0.0);
        for (int k = 1; k <= 200; ++k) {
            const double t = 0.05 * k / f.c;
            const double y = step_response(f, t);
            EXPECT_GE(y, lo - 1e-12);
            EXPECT_LE(y, hi + 1e-12);
            if (f.a < f.b) EXPECT_GE(y, prev);
            if (f.a > f.b) EXPECT_LE(y, prev);
            prev = y;
        }
    }
}

TEST(Discretize, ForwardCoefficients) {
    const auto m = discretize({1.0, 10.0, 0.0, 0.0}, DiscretizationMethod::Forward, 1.0);
    EXPECT_NEAR(m.pole(), 0.9, 1e-15);
    EXPECT_DOUBLE_EQ(m.num[0], 0.0);
    EXPECT_NEAR(m.num[1], 0.1, 1e-15);
    EXPECT_EQ(m.delay_samples, 0);
    EXPECT_DOUBLE_EQ(m.den[0], 1.0);
}

TEST(Discretize, BackwardCoefficients) {
    const auto m = discretize({1.0, 10.0, 0.0, 0.0}, DiscretizationMethod::Backward, 1.0);
    EXPECT_NEAR(m.pole(), 10.0 / 11.0, 1e-15);
    EXPECT_NEAR(m.num[0], 1.0 / 11.0, 1e-15);
    EXPECT_DOUBLE_EQ(m.num[1], 0.0);
}

TEST(Discretize, TustinCoefficients) {
    const auto m = discretize({1.0, 10.0, 0.0, 0.0}, DiscretizationMethod::Tustin, 1.0);
    EXPECT_NEAR(m.pole(), 19.0 / 21.0, 1e-15);
    EXPECT_NEAR(m.num[0], 1.0 / 21.0, 1e-15);
    EXPECT_NEAR(m.num[1], 1.0 / 21.0, 1e-15);
}

TEST(Discretize, DeadTimeRoundsToSamples) {
    const auto m = discretize({1.0, 10.0, 0.0, 2.6}, DiscretizationMethod::Tustin, 0.5);
    EXPECT_EQ(m.delay_samples, 5);
}

TEST(Discretize, Errors) {
    const ProcessParams p{1.0, 10.0, 0.0, 0.0};
    EXPECT_THROW(discretize(p, DiscretizationMethod::Tustin, 0.0), InvalidArgument);
    EXPECT_THROW(discretize(p, DiscretizationMethod::Backward, -1.0), InvalidArgument);
    EXPECT_THROW(discretize(p, DiscretizationMethod::Forward, 20.0), UnstableDiscretization);
    EXPECT_THROW(discretize(p, DiscretizationMethod::Forward, 25.0), UnstableDiscretization);
    EXPECT_NO_THROW(discretize(p, DiscretizationMethod::Forward, 19.9));
    // Backward and Tustin stay stable for any Ts.
    EXPECT_NO_THROW(discretize(p, DiscretizationMethod::Backward, 100.0));
    EXPECT_NO_THROW(discretize(p, DiscretizationMethod::Tustin, 100.0));
}

TEST(Discretize, ParseMethod) {
    EXPECT_EQ(parse_method("Tustin"), DiscretizationMethod::Tustin);
    EXPECT_EQ(parse_method("FORWARD"), DiscretizationMethod::Forward);
    EXPECT_EQ(parse_method("backward"), DiscretizationMethod::Backward);
    EXPECT_THROW(parse_method("zoh"), InvalidArgument);
}

TEST(Discretize, DcGainEqualsStaticGainProperty) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> gain(-50.0, 50.0);
    std::uniform_real_distribution<double> tau(0.1, 5000.0);
    std::uniform_real_distribution<double> frac(0.001, 1.9);
    for (int i = 0; i < 300; ++i) {
        const ProcessParams p{gain(rng), tau(rng), 0.0, 0.0};
        const double Ts = frac(rng) * p.tau;
        for (auto method : {DiscretizationMethod::Tustin, DiscretizationMethod::Forward,
                            DiscretizationMethod::Backward}) {
            const auto m = discretize(p, method, Ts);
            const double dc = (m.num[0] + m.num[1]) / (1.0 - m.pole());
            EXPECT_NEAR(dc, p.gain, 1e-12 * std::max(1.0, std::abs(p.gain)));
            EXPECT_NEAR(m.dc_gain(), p.gain, 1e-12 * std::max(1.0, std::abs(p.gain)));
        }
    }
}

TEST(SimulateDiscrete, ForwardUnitStepHandIterated) {
    const auto m = discretize({1.0, 10.0, 0.0, 0.0}, DiscretizationMethod::Forward, 1.0);
    const std::vector<double> u(6, 1.0);
    const auto y = simulate_discrete(m, u, 0.0);
    ASSERT_EQ(y.size(), u.size());
    // y[n] = 0.9*y[n-1] + 0.1*u[n-1]
    EXPECT_DOUBLE_EQ(y[0], 0.0);
    EXPECT_NEAR(y[1], 0.1, 1e-15);
    EXPECT_NEAR(y[2], 0.19, 1e-15);
    EXPECT_NEAR(y[3], 0.271, 1e-15);
}

TEST(SimulateDiscrete, ZeroInputDecaysGeometrically) {
    for (auto method : {DiscretizationMethod::Tustin, DiscretizationMethod::Forward,
                        DiscretizationMethod::Backward}) {
        const auto m = discretize({2.0, 8.0, 0.0, 0.0}, method, 0.5);
        const std::vector<double> u(40, 0.0);
        const auto y = simulate_discrete(m, u, 5.0);
        for (std::size_t n = 0; n < y.size(); ++n) {
            EXPECT_NEAR(y[n], 5.0 * std::pow(m.pole(), static_cast<double>(n)), 1e-12);
        }
    }
}

TEST(SimulateDiscrete, DelayIsPureShiftProperty) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> u(60);
    for (auto& v : u) v = noise(rng);

    for (auto method : {DiscretizationMethod::Tustin, DiscretizationMethod::Forward,
                        DiscretizationMethod::Backward}) {
        auto delayed = discretize({1.5, 7.0, 0.0, 5.0}, method, 1.0);
        ASSERT_EQ(delayed.delay_samples, 5);
        auto plain = delayed;
        plain.delay_samples = 0;

        std::vector<double> shifted(u.size(), 0.0);
        for (std::size_t i = 5; i < u.size(); ++i) shifted[i] = u[i - 5];

        const auto a = simulate_discrete(delayed, u, 0.0);
        const auto b = simulate_discrete(plain, shifted, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(a[i], b[i]);
    }
}

TEST(SimulateDiscrete, RejectsEmptyInput) {
    const auto m = discretize({1.0, 10.0, 0.0, 0.0}, DiscretizationMethod::Tustin, 1.0);
    EXPECT_THROW(simulate_discrete(m, std::vector<double>{}, 0.0), InvalidArgument);
}

TEST(SimulateDiscrete, ConvergesToContinuousAsSampleTimeShrinks) {
    const double K = 1.0, tau = 10.0, horizon = 5.0 * tau;
    auto max_error = [&](DiscretizationMethod method, double Ts) {
        const auto m = discretize({K, tau, 0.0, 0.0}, method, Ts);
        const auto n = static_cast<std::size_t>(std::lround(horizon / Ts)) + 1;
        const auto y = simulate_discrete(m, std::vector<double>(n, 1.0), 0.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double exact = oracle::first_order_step(K, tau, 0.0, 0.0, 1.0, i * Ts);
            worst = std::max(worst, std::abs(y[i] - exact));
        }
        return worst;
    };
    for (auto method : {DiscretizationMethod::Forward, DiscretizationMethod::Backward}) {
        const double ratio = max_error(method, 0.5) / max_error(method, 0.25);
        EXPECT_NEAR(ratio, 2.0, 0.2) << to_string(method);
    }
    const double ratio = max_error(DiscretizationMethod::Tustin, 0.5) /
                         max_error(DiscretizationMethod::Tustin, 0.25);
    EXPECT_NEAR(ratio, 4.0, 0.4);
}

TEST(SimulateContinuous, EquilibriumStaysPut) {
    const auto y = simulate_continuous(box(), std::vector<double>(100, 0.0), 25.0, 10.0);
    for (double v : y) EXPECT_DOUBLE_EQ(v, 25.0);
}

TEST(SimulateContinuous, MatchesClosedFormAtHundredStepsPerTau) {
    const auto p = box();
    const auto proc = derive_process_params(p);
    const double Ts = proc.tau / 100.0;
    const double volts = 3.0;
    const std::size_t n = 1001;
    const auto y = simulate_continuous(p, std::vector<double>(n, volts), p.t_ambient, Ts);
    for (std::size_t i = 0; i < n; ++i) {
        const double exact =
            oracle::first_order_step(proc.gain, proc.tau, p.t_ambient, p.t_ambient, volts, i * Ts);
        EXPECT_LT(oracle::rel_err(y[i], exact), 1e-8) << "sample " << i;
    }
    // Ten time constants in: within e^-10 of Ta + K*V.
    EXPECT_NEAR(y.back(), p.t_ambient + proc.gain * volts, 1.0e-4 * proc.gain * volts);
}

TEST(SimulateContinuous, AgreesWithStepResponseThroughParameterMaps) {
    // With Ta = 0 the step response (a - b)e^{-ct} + b with a = Ta/tau is the
    // unit-step solution of the energy balance started from rest.
    PhysicalParams p = box();
    p.t_ambient = 0.0;
    const auto f = process_to_fit(derive_process_params(p));
    const double Ts = 1.0 / f.c / 100.0;
    const std::size_t n = 800;
    const auto y = simulate_continuous(p, std::vector<double>(n, 1.0), 0.0, Ts);
    for (std::size_t i = 1; i < n; ++i) {
        EXPECT_LT(oracle::rel_err(y[i], step_response(f, i * Ts)), 1e-6);
    }
}
