#include "hermite.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctp::hermite {

namespace {

// Derivative at t[i] of the Lagrange polynomial through knots [lo, lo+m).
double local_poly_derivative(const std::vector<double>& t, const std::vector<double>& y,
                             std::size_t lo, std::size_t m, std::size_t i) {
    double sum = 0.0;
    for (std::size_t j = lo; j < lo + m; ++j) {
        // d/dx of the j-th Lagrange basis at t[i].
        double term = 0.0;
        for (std::size_t k = lo; k < lo + m; ++k) {
            if (k == j) continue;
            double prod = 1.0;
            for (std::size_t l = lo; l < lo + m; ++l) {
                if (l == j || l == k) continue;
                prod *= (t[i] - t[l]) / (t[j] - t[l]);
            }
            term += prod / (t[j] - t[k]);
        }
        sum += y[j] * term;
    }
    return sum;
}

// Minimum of q(s) = A s^2 + B s + C over [0, 1]; q is the piece derivative
// normalized by the secant, so q >= 0 means the piece is monotone.
double piece_derivative_min(double alpha, double beta) {
    const double A = 3.0 * (alpha + beta - 2.0);
    const double B = 6.0 - 4.0 * alpha - 2.0 * beta;
    const double C = alpha;
    double m = std::min(C, A + B + C);  // q(0), q(1)
    if (A != 0.0) {
        double s = -B / (2.0 * A);
        if (s > 0.0 && s < 1.0) m = std::min(m, (A * s + B) * s + C);
    }
    return m;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> t, std::vector<double> y)
    : t_(std::move(t)), y_(std::move(y)) {
    const std::size_t n = t_.size();
    if (n < 3 || y_.size() != n)
        throw std::invalid_argument("MonotoneCubic needs >= 3 knots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(t_[i] > t_[i - 1]))
            throw std::invalid_argument("knot abscissae must be strictly increasing");

    // Base estimates: local cubic (quadratic when only 3 knots exist).
    const std::size_t m = std::min<std::size_t>(4, n);
    d_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = (i == 0) ? 0 : i - 1;
        lo = std::min(lo, n - m);
        d_[i] = local_poly_derivative(t_, y_, lo, m, i);
    }

    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        delta[i] = (y_[i + 1] - y_[i]) / (t_[i + 1] - t_[i]);

    // Zero out derivatives at data extrema and flats, and fix signs inside
    // monotone runs.
    for (std::size_t i = 0; i < n; ++i) {
        double dl = (i == 0) ? delta[0] : delta[i - 1];
        double dr = (i + 1 == n) ? delta[n - 2] : delta[i];
        if (dl * dr <= 0.0 && i > 0 && i + 1 < n) {
            d_[i] = 0.0;
        } else if (d_[i] * (dl != 0.0 ? dl : dr) < 0.0) {
            d_[i] = 0.0;
        }
    }

    // Where a piece over locally monotone data is itself non-monotone,
    // shrink its endpoint derivatives onto the radius-3 disk (Fritsch-
    // Carlson sufficient region). Shrinking one knot can re-expose a
    // neighbour, so sweep until stable.
    for (int pass = 0; pass < 32; ++pass) {
        bool changed = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (delta[i] == 0.0) {
                if (d_[i] != 0.0 || d_[i + 1] != 0.0) {
                    d_[i] = d_[i + 1] = 0.0;
                    changed = true;
                }
                continue;
            }
            double alpha = d_[i] / delta[i];
            double beta = d_[i + 1] / delta[i];
            if (piece_derivative_min(alpha, beta) >= -1e-12) continue;
            double r = std::hypot(alpha, beta);
            if (r > 3.0) {
                double f = 3.0 / r;
                d_[i] *= f;
                d_[i + 1] *= f;
                changed = true;
            }
        }
        if (!changed) break;
    }
}

double MonotoneCubic::operator()(double x) const {
    if (x < t_.front() || x > t_.back())
        throw std::out_of_range("evaluation outside knot range");
    auto it = std::upper_bound(t_.begin(), t_.end(), x);
    std::size_t i = (it == t_.begin()) ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    if (i + 1 >= t_.size()) i = t_.size() - 2;
    const double h = t_[i + 1] - t_[i];
    const double s = (x - t_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return y_[i] * (2 * s3 - 3 * s2 + 1) + h * d_[i] * (s3 - 2 * s2 + s) +
           y_[i + 1] * (-2 * s3 + 3 * s2) + h * d_[i + 1] * (s3 - s2);
}

double MonotoneCubic::derivative(double x) const {
    if (x < t_.front() || x > t_.back())
        throw std::out_of_range("evaluation outside knot range");
    auto it = std::upper_bound(t_.begin(), t_.end(), x);
    std::size_t i = (it == t_.begin()) ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    if (i + 1 >= t_.size()) i = t_.size() - 2;
    const double h = t_[i + 1] - t_[i];
    const double s = (x - t_[i]) / h;
    const double s2 = s * s;
    return (y_[i] * (6 * s2 - 6 * s) + h * d_[i] * (3 * s2 - 4 * s + 1) +
            y_[i + 1] * (-6 * s2 + 6 * s) + h * d_[i + 1] * (3 * s2 - 2 * s)) /
           h;
}

}  // namespace ctp::hermite
