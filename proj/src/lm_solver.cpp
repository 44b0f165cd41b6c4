#include "thermofit/lm_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "thermofit/error.hpp"

namespace thermofit {

namespace {

void check_problem(const ResidualModel& model, DataView data, const Weights& w,
                   std::span<const double> p) {
    if (data.t.size() != data.y.size()) {
        throw InvalidArgument("t and y must have the same length");
    }
    if (p.size() != model.num_params()) {
        throw InvalidArgument("parameter vector has " + std::to_string(p.size()) +
                              " entries, model expects " + std::to_string(model.num_params()));
    }
    if (data.size() < model.num_params()) {
        throw InvalidArgument("need at least as many data points as parameters");
    }
    w.check_size(data.size());
}

double weighted_cost(const ResidualModel& model, DataView data, const Weights& w,
                     std::span<const double> p) {
    double cost = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = data.y[i] - model.predict(data.t[i], p);
        cost += w[i] * r * r;
    }
    return cost;
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

double max_abs(const Eigen::VectorXd& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

Weights Weights::from_inverse_variance(std::vector<double> w) {
    for (double v : w) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidArgument("weights must be positive and finite");
        }
    }
    return Weights(std::move(w));
}

Weights Weights::from_sigma(std::span<const double> sigma) {
    std::vector<double> w(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (!(sigma[i] > 0.0)) throw InvalidArgument("sigma must be positive");
        w[i] = 1.0 / (sigma[i] * sigma[i]);
    }
    return from_inverse_variance(std::move(w));
}

Weights Weights::uniform_sigma(double sigma, std::size_t count) {
    const std::vector<double> s(count, sigma);
    return from_sigma(s);
}

void Weights::check_size(std::size_t m) const {
    if (!w_.empty() && w_.size() != m) {
        throw InvalidArgument("got " + std::to_string(w_.size()) + " weights for " +
                              std::to_string(m) + " data points");
    }
}

void LMConfig::validate() const {
    // lambda0 == 0 runs undamped Gauss-Newton until the first rejected step.
    if (!(lambda0 >= 0.0) || !std::isfinite(lambda0)) {
        throw InvalidArgument("lambda0 must be non-negative");
    }
    if (!(lambda_up > 1.0) || !(lambda_down > 1.0)) {
        throw InvalidArgument("lambda_up and lambda_down must exceed 1");
    }
    if (max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
    if (!(tol_grad > 0.0) || !(tol_step > 0.0) || !(tol_cost > 0.0)) {
        throw InvalidArgument("tolerances must be positive");
    }
}

std::string_view to_string(Convergence c) {
    switch (c) {
        case Convergence::Gradient: return "grad";
        case Convergence::Step: return "step";
        case Convergence::Cost: return "cost";
        case Convergence::MaxIter: return "max_iter";
    }
    return "unknown";
}

NormalSystem assemble_normal_system(const ResidualModel& model, DataView data, const Weights& w,
                                    std::span<const double> p) {
    const auto n = static_cast<Eigen::Index>(model.num_params());
    NormalSystem sys{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n), 0.0};
    std::vector<double> row(model.num_params());

    for (std::size_t i = 0; i < data.size(); ++i) {
        const double t = data.t[i];
        const double r = data.y[i] - model.predict(t, p);
        model.jacobian_row(t, p, row);
        const double wi = w[i];
        sys.cost += wi * r * r;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double wj = wi * row[static_cast<std::size_t>(j)];
            sys.jtwr(j) += wj * r;
            for (Eigen::Index k = 0; k <= j; ++k) {
                sys.jtwj(j, k) += wj * row[static_cast<std::size_t>(k)];
            }
        }
    }
    sys.jtwj.triangularView<Eigen::StrictlyUpper>() = sys.jtwj.transpose();
    return sys;
}

Eigen::VectorXd solve_damped(const NormalSystem& sys, double lambda) {
    if (!(lambda >= 0.0)) throw InvalidArgument("damping must be non-negative");
    const Eigen::VectorXd diag = sys.jtwj.diagonal();
    if (lambda > 0.0 && (diag.array() == 0.0).any()) {
        throw SingularSystem("J^T W J has a zero diagonal entry; a parameter has no influence on "
                             "the model");
    }

    Eigen::MatrixXd damped = sys.jtwj;
    damped.diagonal() += lambda * diag;

    Eigen::LLT<Eigen::MatrixXd> llt(damped);
    if (llt.info() != Eigen::Success) {
        throw SingularSystem("damped normal equations are not positive definite");
    }
    Eigen::VectorXd h = llt.solve(sys.jtwr);
    if (!h.allFinite()) throw SingularSystem("damped normal equations produced a non-finite step");
    return h;
}

std::vector<double> lm_step(const ResidualModel& model, DataView data, const Weights& w,
                            std::span<const double> p, double lambda) {
    check_problem(model, data, w, p);
    const Eigen::VectorXd h = solve_damped(assemble_normal_system(model, data, w, p), lambda);
    return {h.data(), h.data() + h.size()};
}

FitResult lm_fit(const ResidualModel& model, DataView data, const Weights& w,
                 std::span<const double> p0, const LMConfig& cfg) {
    cfg.validate();
    check_problem(model, data, w, p0);
    if (!std::all_of(p0.begin(), p0.end(), [](double v) { return std::isfinite(v); })) {
        throw InvalidArgument("initial parameters must be finite");
    }

    const auto n = static_cast<Eigen::Index>(p0.size());
    Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(p0.data(), n);
    Eigen::VectorXd candidate(n);

    FitResult result;
    NormalSystem sys = assemble_normal_system(model, data, w, as_span(p));
    result.cost_history.push_back(sys.cost);
    double lambda = cfg.lambda0;

    if (max_abs(sys.jtwr) < cfg.tol_grad) {
        result.converged = Convergence::Gradient;
    } else {
        result.converged = Convergence::MaxIter;
        while (result.iterations < cfg.max_iter) {
            const Eigen::VectorXd h = solve_damped(sys, lambda);
            ++result.iterations;
            candidate = p + h;
            const bool small_step = h.norm() <= cfg.tol_step * (p.norm() + cfg.tol_step);
            const double new_cost =
                weighted_cost(model, data, w, as_span(candidate));

            if (std::isfinite(new_cost) && new_cost < sys.cost) {
                const double relative_decrease = (sys.cost - new_cost) / sys.cost;
                p = candidate;
                sys = assemble_normal_system(model, data, w, as_span(p));
                result.cost_history.push_back(sys.cost);
                ++result.accepted_iterations;
                lambda /= cfg.lambda_down;

                if (max_abs(sys.jtwr) < cfg.tol_grad) {
                    result.converged = Convergence::Gradient;
                    break;
                }
                if (relative_decrease <= cfg.tol_cost) {
                    result.converged = Convergence::Cost;
                    break;
                }
            } else {
                lambda = lambda > 0.0
                             ? std::min(lambda * cfg.lambda_up, std::numeric_limits<double>::max())
                             : LMConfig{}.lambda0;
                if (small_step) {
                    result.converged = Convergence::Step;
                    break;
                }
            }
        }
    }

    result.params.assign(p.data(), p.data() + p.size());
    result.cost = sys.cost;
    result.lambda_final = lambda;
    result.normal_matrix = sys.jtwj;
    result.residuals.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        result.residuals[i] = data.y[i] - model.predict(data.t[i], result.params);
    }
    return result;
}

JacobianReport validate_jacobian(const ResidualModel& model, std::span<const double> t_samples,
                                 std::span<const double> p) {
    const std::size_t n = model.num_params();
    if (p.size() != n) throw InvalidArgument("parameter vector does not match the model");
    if (t_samples.empty()) throw InvalidArgument("validate_jacobian needs sample times");

    JacobianReport report;
    std::vector<double> analytic(n);
    std::vector<double> shifted(p.begin(), p.end());

    for (std::size_t i = 0; i < t_samples.size(); ++i) {
        const double t = t_samples[i];
        model.jacobian_row(t, p, analytic);
        for (std::size_t j = 0; j < n; ++j) {
            const double h = std::max(1e-6, 1e-6 * std::abs(p[j]));
            shifted[j] = p[j] + h;
            const double up = model.predict(t, shifted);
            shifted[j] = p[j] - h;
            const double down = model.predict(t, shifted);
            shifted[j] = p[j];

            const double fd = (up - down) / (2.0 * h);
            const double deviation = std::abs(analytic[j] - fd) / std::max(std::abs(fd), 1.0);
            if (deviation > report.max_deviation || std::isnan(deviation)) {
                report.max_deviation = deviation;
                report.sample_index = i;
                report.param_index = j;
            }
        }
    }
    return report;
}

}  // namespace thermofit
