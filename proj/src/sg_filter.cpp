#include "thermofit/sg_filter.hpp"

#include <string>

#include "thermofit/error.hpp"

namespace thermofit {

void SGConfig::validate() const {
    if (window < 3 || window % 2 == 0) {
        throw InvalidArgument("smoothing window must be odd and >= 3, got " +
                              std::to_string(window));
    }
    if (order < 0 || order >= window) {
        throw InvalidArgument("smoothing order must lie in [0, window), got " +
                              std::to_string(order));
    }
}

Eigen::MatrixXd sg_projection(const SGConfig& cfg) {
    cfg.validate();
    const int m = cfg.half_width();
    const int rows = cfg.window;
    const int cols = cfg.order + 1;

    // Abscissas scaled to [-1, 1]; the column space, and so the projection, is unchanged.
    Eigen::MatrixXd V(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const double x = static_cast<double>(i - m) / static_cast<double>(m);
        double power = 1.0;
        for (int j = 0; j < cols; ++j) {
            V(i, j) = power;
            power *= x;
        }
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    qr.setThreshold(1e-12);
    if (qr.rank() < cols) {
        throw SingularSystem("Savitzky-Golay design matrix is rank deficient (order " +
                             std::to_string(cfg.order) + " too high for window " +
                             std::to_string(cfg.window) + ")");
    }

    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
    return Q * Q.transpose();
}

SavitzkyGolayFilter::SavitzkyGolayFilter(const SGConfig& cfg)
    : cfg_(cfg), projection_(sg_projection(cfg)) {}

Eigen::VectorXd SavitzkyGolayFilter::central_coefficients() const {
    return projection_.row(cfg_.half_width()).transpose();
}

std::vector<double> SavitzkyGolayFilter::apply(std::span<const double> data) const {
    const auto window = static_cast<std::size_t>(cfg_.window);
    const auto m = static_cast<std::size_t>(cfg_.half_width());
    const std::size_t n = data.size();
    if (n < window) throw SeriesTooShort(n, window);

    const Eigen::Map<const Eigen::VectorXd> x(data.data(), static_cast<Eigen::Index>(n));
    const auto w = static_cast<Eigen::Index>(window);
    std::vector<double> out(n);

    const Eigen::VectorXd head = projection_.topRows(static_cast<Eigen::Index>(m)) * x.head(w);
    const Eigen::VectorXd tail =
        projection_.bottomRows(static_cast<Eigen::Index>(m)) * x.tail(w);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = head(static_cast<Eigen::Index>(i));
        out[n - m + i] = tail(static_cast<Eigen::Index>(i));
    }

    const Eigen::VectorXd kernel = central_coefficients();
    for (std::size_t i = m; i + m < n; ++i) {
        out[i] = kernel.dot(x.segment(static_cast<Eigen::Index>(i - m), w));
    }
    return out;
}

std::vector<double> sg_smooth(std::span<const double> data, const SGConfig& cfg) {
    return SavitzkyGolayFilter(cfg).apply(data);
}

}  // namespace thermofit
