#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace thermofit {

/// Model yhat(t; p) fitted by the solver, with its analytic sensitivities.
class ResidualModel {
public:
    virtual ~ResidualModel() = default;

    virtual std::size_t num_params() const = 0;
    virtual double predict(double t, std::span<const double> p) const = 0;
    /// Writes d(yhat)/d(p_j) into row (length num_params()).
    virtual void jacobian_row(double t, std::span<const double> p, std::span<double> row) const = 0;
};

/// ResidualModel assembled from callables; handy for ad-hoc models and bindings.
class FunctionModel final : public ResidualModel {
public:
    using Predict = std::function<double(double, std::span<const double>)>;
    using Jacobian = std::function<void(double, std::span<const double>, std::span<double>)>;

    FunctionModel(std::size_t num_params, Predict predict, Jacobian jacobian)
        : n_(num_params), predict_(std::move(predict)), jacobian_(std::move(jacobian)) {}

    std::size_t num_params() const override { return n_; }
    double predict(double t, std::span<const double> p) const override { return predict_(t, p); }
    void jacobian_row(double t, std::span<const double> p, std::span<double> row) const override {
        jacobian_(t, p, row);
    }

private:
    std::size_t n_;
    Predict predict_;
    Jacobian jacobian_;
};

/// Observations (t_i, y_i); both spans must have the same length.
struct DataView {
    std::span<const double> t;
    std::span<const double> y;

    std::size_t size() const { return t.size(); }
};

/// Diagonal weights w_i = 1/sigma_i^2. A default-constructed instance means unit weights.
class Weights {
public:
    Weights() = default;

    static Weights unit() { return {}; }
    /// Throws InvalidArgument on any non-positive or non-finite entry.
    static Weights from_inverse_variance(std::vector<double> w);
    static Weights from_sigma(std::span<const double> sigma);
    static Weights uniform_sigma(double sigma, std::size_t count);

    bool is_unit() const { return w_.empty(); }
    double operator[](std::size_t i) const { return w_.empty() ? 1.0 : w_[i]; }
    const std::vector<double>& values() const { return w_; }
    /// Throws InvalidArgument when explicit weights do not cover m points.
    void check_size(std::size_t m) const;

private:
    explicit Weights(std::vector<double> w) : w_(std::move(w)) {}
    std::vector<double> w_;
};

struct LMConfig {
    double lambda0 = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 10.0;
    int max_iter = 200;
    double tol_grad = 1e-8;   ///< max-norm of J^T W r
    double tol_step = 1e-10;  ///< relative step length
    double tol_cost = 1e-12;  ///< relative cost decrease

    void validate() const;
};

enum class Convergence { Gradient, Step, Cost, MaxIter };

std::string_view to_string(Convergence c);

struct FitResult {
    std::vector<double> params;
    double cost = 0.0;             ///< sum w_i r_i^2 at params
    int iterations = 0;            ///< candidate steps evaluated (accepted + rejected)
    int accepted_iterations = 0;
    Convergence converged = Convergence::MaxIter;
    std::vector<double> residuals;  ///< y_i - yhat(t_i; params)
    double lambda_final = 0.0;
    std::vector<double> cost_history;  ///< cost of every accepted state, starting at p0
    Eigen::MatrixXd normal_matrix;     ///< J^T W J at params
};

/// J^T W J, J^T W r and the weighted cost, all at one parameter vector.
struct NormalSystem {
    Eigen::MatrixXd jtwj;
    Eigen::VectorXd jtwr;
    double cost = 0.0;
};

NormalSystem assemble_normal_system(const ResidualModel& model, DataView data, const Weights& w,
                                    std::span<const double> p);

/**
 * Solves [A + lambda*diag(A)] h = g with a Cholesky factorization.
 *
 * Throws SingularSystem when the damped matrix is not positive definite, when a
 * diagonal entry of A vanishes with lambda > 0, or when h is not finite.
 */
Eigen::VectorXd solve_damped(const NormalSystem& sys, double lambda);

/// One Marquardt step from p. Requires data.size() >= num_params and lambda >= 0.
std::vector<double> lm_step(const ResidualModel& model, DataView data, const Weights& w,
                            std::span<const double> p, double lambda);

/**
 * Weighted Levenberg-Marquardt with multiplicative damping.
 *
 * A candidate step is accepted iff it strictly lowers the cost; lambda is then
 * divided by lambda_down. A rejected step multiplies lambda by lambda_up and is
 * re-solved from the same normal system. Non-convergence is reported through
 * FitResult::converged rather than thrown.
 */
FitResult lm_fit(const ResidualModel& model, DataView data, const Weights& w,
                 std::span<const double> p0, const LMConfig& cfg = {});

struct JacobianReport {
    double max_deviation = 0.0;  ///< |analytic - fd| / max(|fd|, 1)
    std::size_t sample_index = 0;
    std::size_t param_index = 0;

    bool within(double rel_tol) const { return max_deviation < rel_tol; }
};

/// Compares jacobian_row with central differences using h_j = max(1e-6, 1e-6*|p_j|).
JacobianReport validate_jacobian(const ResidualModel& model, std::span<const double> t_samples,
                                 std::span<const double> p);

}  // namespace thermofit
