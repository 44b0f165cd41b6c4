#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace thermofit {

/// Savitzky-Golay smoothing settings: polynomial degree and odd frame length.
struct SGConfig {
    int order = 3;
    int window = 901;

    int half_width() const { return window / 2; }
    /// Throws InvalidArgument unless window is odd, >= 3 and order is in [0, window).
    void validate() const;
};

/**
 * Projection onto polynomials of degree <= order over the abscissas -m..m.
 *
 * Returns B = V*(V^T V)^-1*V^T (window x window), computed from a QR factorization
 * of V so no normal-equation matrix is ever inverted. Throws SingularSystem when V
 * is numerically rank deficient.
 */
Eigen::MatrixXd sg_projection(const SGConfig& cfg);

/**
 * Precomputed smoother for one configuration.
 *
 * Interior samples use the central row of the projection as a convolution kernel.
 * The first and last m samples take the matching projection rows against the
 * first and last full window, so output length equals input length.
 */
class SavitzkyGolayFilter {
public:
    explicit SavitzkyGolayFilter(const SGConfig& cfg);

    const SGConfig& config() const { return cfg_; }
    const Eigen::MatrixXd& projection() const { return projection_; }
    Eigen::VectorXd central_coefficients() const;

    /// Throws SeriesTooShort when data has fewer samples than the window.
    std::vector<double> apply(std::span<const double> data) const;

private:
    SGConfig cfg_;
    Eigen::MatrixXd projection_;
};

std::vector<double> sg_smooth(std::span<const double> data, const SGConfig& cfg);

}  // namespace thermofit
