#include "thermofit/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "thermofit/csv_io.hpp"
#include "thermofit/synth_gen.hpp"

namespace thermofit::cli {

namespace {

std::string num(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, end};
}

FitOptions fit_options(const RunConfig& cfg, std::size_t samples, bool use_sigma) {
    FitOptions options;
    options.smoothing = cfg.raw ? std::nullopt : std::optional<SGConfig>(cfg.smoothing);
    options.solver = cfg.solver;
    options.initial = {cfg.a0, cfg.b0, cfg.c0};
    if (use_sigma && cfg.fit_sigma) {
        options.weights = Weights::uniform_sigma(*cfg.fit_sigma, samples);
    }
    return options;
}

void print_report(const RunConfig& cfg, const FitReport& report, std::ostream& out) {
    if (cfg.format == ReportFormat::Json) {
        out << report_to_json(report).dump(2) << '\n';
    } else {
        out << report_to_text(report);
    }
}

OverlaySeries overlay_of(const TimeSeries& ts, const FitReport& report) {
    return {{ts.t().begin(), ts.t().end()},
            {ts.y().begin(), ts.y().end()},
            report.target,
            report.fitted};
}

SynthSpec synth_spec(const RunConfig& cfg) {
    SynthSpec spec;
    spec.truth = cfg.truth;
    spec.rate = cfg.rate;
    if (cfg.duration) {
        spec.duration = *cfg.duration;
    } else {
        if (!(cfg.truth.c > 0.0)) {
            throw InvalidArgument("--duration is required when the generating rate c is not positive");
        }
        spec.duration = 3.0 / cfg.truth.c;
    }
    spec.noise_sigma = cfg.noise_sigma;
    spec.seed = cfg.seed;
    return spec;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const TimeSeries ts = generate(synth_spec(cfg));
    write_csv(cfg.output, ts);
    out << "wrote " << ts.size() << " samples to " << cfg.output.string() << '\n';
    return kExitOk;
}

int cmd_smooth(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const TimeSeries ts = parse_csv(cfg.input);
    if (static_cast<std::size_t>(cfg.smoothing.window) > ts.size() / 2) {
        err << "warning: smoothing window " << cfg.smoothing.window << " exceeds half of the "
            << ts.size() << " samples\n";
    }
    const TimeSeries smoothed = ts.with_values(sg_smooth(ts.y(), cfg.smoothing));
    write_csv(cfg.output, smoothed);
    out << "wrote " << smoothed.size() << " smoothed samples to " << cfg.output.string() << '\n';
    return kExitOk;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
    const TimeSeries ts = parse_csv(cfg.input);
    const FitReport report = fit_series(ts, fit_options(cfg, ts.size(), true));
    if (!cfg.output.empty()) write_overlay_csv(cfg.output, overlay_of(ts, report));
    print_report(cfg, report, out);
    return kExitOk;
}

int cmd_discretize(const RunConfig& cfg, std::ostream& out) {
    const ProcessParams process{cfg.gain, cfg.tau, 0.0, cfg.dead_time};
    const DiscreteModel m = discretize(process, cfg.method, cfg.sample_time);

    double input_gain = 0.0;
    for (double v : m.num) input_gain += v;

    if (cfg.format == ReportFormat::Json) {
        nlohmann::json j;
        j["method"] = std::string(to_string(cfg.method));
        j["sample_time"] = m.sample_time;
        j["delay_samples"] = m.delay_samples;
        j["num"] = m.num;
        j["den"] = m.den;
        j["pole"] = m.pole();
        j["input_gain"] = input_gain;
        j["dc_gain"] = m.dc_gain();
        out << j.dump(2) << '\n';
        return kExitOk;
    }

    auto join = [](const std::vector<double>& v) {
        std::string s;
        for (double x : v) s += (s.empty() ? "" : " ") + num(x);
        return s;
    };
    out << "method: " << to_string(cfg.method) << '\n'
        << "sample_time: " << num(m.sample_time) << '\n'
        << "delay_samples: " << m.delay_samples << '\n'
        << "num: " << join(m.num) << '\n'
        << "den: " << join(m.den) << '\n'
        << "pole: " << num(m.pole()) << '\n'
        << "input_gain: " << num(input_gain) << '\n'
        << "dc_gain: " << num(m.dc_gain()) << '\n';
    return kExitOk;
}

// simulate -> file -> parse -> smooth/fit -> overlay + report files.
int cmd_pipeline(const RunConfig& cfg, std::ostream& out) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output, ec);
    if (ec) throw FileError("cannot create directory '" + cfg.output.string() + "': " + ec.message());

    const auto series_path = cfg.output / "series.csv";
    write_csv(series_path, generate(synth_spec(cfg)));

    const TimeSeries ts = parse_csv(series_path);
    const FitReport report = fit_series(ts, fit_options(cfg, ts.size(), false));
    if (report.smoothing) write_csv(cfg.output / "smoothed.csv", ts.with_values(report.target));
    write_overlay_csv(cfg.output / "overlay.csv", overlay_of(ts, report));

    {
        std::ofstream json_out(cfg.output / "report.json", std::ios::binary | std::ios::trunc);
        if (!json_out) throw FileError("cannot write report.json in '" + cfg.output.string() + "'");
        json_out << report_to_json(report).dump(2) << '\n';
    }

    print_report(cfg, report, out);
    return kExitOk;
}

}  // namespace

int exit_code(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::InvalidArgument: return kExitUsage;
        case ErrorCategory::Input: return kExitInput;
        case ErrorCategory::DegenerateData: return kExitDegenerate;
        case ErrorCategory::Numerical: return kExitNumerical;
        case ErrorCategory::Io: return kExitIo;
    }
    return kExitInternal;
}

void RunConfig::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw InvalidArgument(what);
    };
    switch (command) {
        case Command::Simulate:
            need(!output.empty(), "simulate requires --output");
            break;
        case Command::Smooth:
            need(!input.empty(), "smooth requires --input");
            need(!output.empty(), "smooth requires --output");
            smoothing.validate();
            break;
        case Command::Fit:
            need(!input.empty(), "fit requires --input");
            if (!raw) smoothing.validate();
            solver.validate();
            if (fit_sigma) need(*fit_sigma > 0.0, "--sigma must be positive");
            break;
        case Command::Discretize:
            need(tau > 0.0, "--tau must be positive");
            need(sample_time > 0.0, "--ts must be positive");
            need(dead_time >= 0.0, "--dead-time must be non-negative");
            break;
        case Command::Pipeline:
            need(!output.empty(), "pipeline requires --output (a directory)");
            if (!raw) smoothing.validate();
            solver.validate();
            break;
    }
}

void apply_environment(RunConfig& cfg) {
    const char* env = std::getenv("THERMOFIT_SEED");
    if (env == nullptr || *env == '\0') return;
    const std::string_view text(env);
    std::uint64_t seed = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc() || end != text.data() + text.size()) {
        throw InvalidArgument("THERMOFIT_SEED must be an unsigned integer, got '" +
                              std::string(text) + "'");
    }
    cfg.seed = seed;
}

nlohmann::json report_to_json(const FitReport& report) {
    nlohmann::json j;
    j["a"] = report.fit.a;
    j["b"] = report.fit.b;
    j["c"] = report.fit.c;
    j["K"] = report.fit.b;
    if (report.process) {
        j["tau"] = report.process->tau;
        j["t_ambient"] = report.process->t_ambient;
    } else {
        j["tau"] = nullptr;
        j["t_ambient"] = nullptr;
    }
    j["r_squared"] = report.r_squared;
    j["r_squared_raw"] = report.r_squared_raw;
    j["iterations"] = report.result.iterations;
    j["accepted_iterations"] = report.result.accepted_iterations;
    j["converged"] = std::string(to_string(report.result.converged));
    j["lambda_final"] = report.result.lambda_final;
    j["cost"] = report.result.cost;
    j["samples"] = report.fitted.size();
    j["start"] = {{"a", report.start.a}, {"b", report.start.b}, {"c", report.start.c}};
    if (report.smoothing) {
        j["smoothing"] = {{"order", report.smoothing->order}, {"window", report.smoothing->window}};
    } else {
        j["smoothing"] = nullptr;
    }
    j["warnings"] = report.warnings;
    return j;
}

std::string report_to_text(const FitReport& report) {
    std::ostringstream s;
    auto opt = [](const std::optional<ProcessParams>& p, double ProcessParams::*field) {
        return p ? num((*p).*field) : std::string("null");
    };
    s << "a: " << num(report.fit.a) << '\n'
      << "b: " << num(report.fit.b) << '\n'
      << "c: " << num(report.fit.c) << '\n'
      << "K: " << num(report.fit.b) << '\n'
      << "tau: " << opt(report.process, &ProcessParams::tau) << '\n'
      << "t_ambient: " << opt(report.process, &ProcessParams::t_ambient) << '\n'
      << "r_squared: " << num(report.r_squared) << '\n'
      << "r_squared_raw: " << num(report.r_squared_raw) << '\n'
      << "iterations: " << report.result.iterations << '\n'
      << "accepted_iterations: " << report.result.accepted_iterations << '\n'
      << "converged: " << to_string(report.result.converged) << '\n'
      << "lambda_final: " << num(report.result.lambda_final) << '\n'
      << "cost: " << num(report.result.cost) << '\n'
      << "samples: " << report.fitted.size() << '\n'
      << "start: " << num(report.start.a) << ' ' << num(report.start.b) << ' '
      << num(report.start.c) << '\n';
    if (report.smoothing) {
        s << "smoothing: order " << report.smoothing->order << " window "
          << report.smoothing->window << '\n';
    } else {
        s << "smoothing: null\n";
    }
    for (const auto& w : report.warnings) s << "warning: " << w << '\n';
    return s.str();
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
        switch (cfg.command) {
            case Command::Simulate: return cmd_simulate(cfg, out);
            case Command::Smooth: return cmd_smooth(cfg, out, err);
            case Command::Fit: return cmd_fit(cfg, out);
            case Command::Discretize: return cmd_discretize(cfg, out);
            case Command::Pipeline: return cmd_pipeline(cfg, out);
        }
    } catch (const CsvError& e) {
        err << "error: " << (cfg.input.empty() ? std::string() : cfg.input.string() + ": ")
            << e.what() << '\n';
        return exit_code(e.category());
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.category());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}

}  // namespace thermofit::cli
