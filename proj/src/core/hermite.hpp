#pragma once

#include <vector>

namespace ctp::hermite {

/// Piecewise cubic Hermite interpolant with shape-preserving knot
/// derivatives.
///
/// Derivatives are estimated from the local cubic through the four nearest
/// knots, so data sampled from any cubic polynomial is reproduced exactly
/// as long as the data is monotone there. On locally monotone data the
/// interpolant never leaves the range of the bracketing knots: each piece
/// is tested against the exact monotonicity condition and the endpoint
/// derivatives are scaled back only when the piece actually overshoots.
class MonotoneCubic {
public:
    /// Knot abscissae must be strictly increasing; at least 3 knots.
    MonotoneCubic(std::vector<double> t, std::vector<double> y);

    /// Evaluates the interpolant. x must lie within [t.front(), t.back()].
    double operator()(double x) const;

    /// One-sided derivative at x (right-sided except at the last knot).
    double derivative(double x) const;

    const std::vector<double>& knot_derivatives() const { return d_; }

private:
    std::vector<double> t_, y_, d_;
};

}  // namespace ctp::hermite
