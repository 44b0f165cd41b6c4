// thermofit: simulate, smooth, fit and discretize first-order thermal step responses.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "thermofit/cli.hpp"

using thermofit::cli::Command;
using thermofit::cli::ReportFormat;
using thermofit::cli::RunConfig;

namespace {

void add_format(CLI::App* sub, std::string& format) {
    sub->add_option("--format", format, "Report format: text | json")
        ->transform(CLI::IsMember({"text", "json"}, CLI::ignore_case))
        ->capture_default_str();
}

void add_smoothing(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--order", cfg.smoothing.order, "Savitzky-Golay polynomial order")
        ->capture_default_str();
    sub->add_option("--window", cfg.smoothing.window, "Savitzky-Golay window (odd)")
        ->capture_default_str();
}

void add_solver(CLI::App* sub, RunConfig& cfg) {
    sub->add_flag("--raw", cfg.raw, "Fit the unsmoothed series");
    sub->add_option("--lambda0", cfg.solver.lambda0, "Initial LM damping")->capture_default_str();
    sub->add_option("--max-iter", cfg.solver.max_iter, "Iteration cap")->capture_default_str();
    sub->add_option("--tol-grad", cfg.solver.tol_grad, "Gradient max-norm tolerance")
        ->capture_default_str();
    sub->add_option("--a0", cfg.a0, "Initial guess for a");
    sub->add_option("--b0", cfg.b0, "Initial guess for b");
    sub->add_option("--c0", cfg.c0, "Initial guess for c");
}

void add_synth(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--a", cfg.truth.a, "Generating a (value at t = 0) [degC]")
        ->capture_default_str();
    sub->add_option("--b", cfg.truth.b, "Generating b (asymptote) [degC]")->capture_default_str();
    sub->add_option("--c", cfg.truth.c, "Generating c (rate) [1/s]")->capture_default_str();
    sub->add_option("--rate", cfg.rate, "Sampling rate [Hz]")->capture_default_str();
    sub->add_option("--duration", cfg.duration, "Record length [s] (default 3/c)");
    sub->add_option("--sigma", cfg.noise_sigma, "Gaussian noise sigma [degC]")
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Noise seed (THERMOFIT_SEED overrides)")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grey-box identification of first-order thermal step responses"};
    std::string format = "text";
    app.require_subcommand(1);

    RunConfig cfg;

    auto* simulate = app.add_subcommand("simulate", "Write a synthetic noisy step response CSV");
    simulate->add_option("--output", cfg.output, "Output CSV")->required();
    add_synth(simulate, cfg);

    auto* smooth = app.add_subcommand("smooth", "Savitzky-Golay smooth a CSV series");
    smooth->add_option("--input", cfg.input, "Input CSV")->required();
    smooth->add_option("--output", cfg.output, "Output CSV")->required();
    add_smoothing(smooth, cfg);

    auto* fit = app.add_subcommand("fit", "Fit the step response model to a CSV series");
    fit->add_option("--input", cfg.input, "Input CSV")->required();
    fit->add_option("--output", cfg.output, "Overlay CSV (time_s,raw_c,smoothed_c,fitted_c)");
    fit->add_option("--sigma", cfg.fit_sigma, "Measurement sigma for weighting [degC]");
    add_smoothing(fit, cfg);
    add_solver(fit, cfg);
    add_format(fit, format);

    auto* disc = app.add_subcommand("discretize", "Print a discrete first-order model");
    disc->add_option("--gain,-K", cfg.gain, "Static gain K")->capture_default_str();
    disc->add_option("--tau", cfg.tau, "Time constant [s]")->capture_default_str();
    disc->add_option("--dead-time", cfg.dead_time, "Dead time [s]")->capture_default_str();
    std::string method = "tustin";
    disc->add_option("--method", method, "tustin | forward | backward")
        ->check(CLI::IsMember({"tustin", "forward", "backward"}, CLI::ignore_case))
        ->capture_default_str();
    disc->add_option("--ts", cfg.sample_time, "Sample time [s]")->capture_default_str();
    add_format(disc, format);

    auto* pipeline = app.add_subcommand("pipeline", "simulate -> smooth -> fit round trip");
    pipeline->add_option("--output", cfg.output, "Output directory")->required();
    add_synth(pipeline, cfg);
    add_smoothing(pipeline, cfg);
    add_solver(pipeline, cfg);
    add_format(pipeline, format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? thermofit::cli::kExitOk : thermofit::cli::kExitUsage;
    }

    cfg.format = format == "json" ? ReportFormat::Json : ReportFormat::Text;
    if (*simulate) cfg.command = Command::Simulate;
    else if (*smooth) cfg.command = Command::Smooth;
    else if (*fit) cfg.command = Command::Fit;
    else if (*disc) cfg.command = Command::Discretize;
    else cfg.command = Command::Pipeline;

    try {
        if (*disc) cfg.method = thermofit::parse_method(method);
        thermofit::cli::apply_environment(cfg);
    } catch (const thermofit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return thermofit::cli::exit_code(e.category());
    }
    return thermofit::cli::run(cfg, std::cout, std::cerr);
}
