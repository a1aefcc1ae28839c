#pragma once

#include <functional>
#include <vector>

namespace ctp::numeric {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int evaluations = 0;
};

/// Derivative-free minimization with the standard simplex moves
/// (reflect 1, expand 2, contract 0.5, shrink 0.5). Deterministic for a
/// given starting point and step.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, double initial_step = 0.1,
                             double tolerance = 1e-10, int max_evaluations = 20000);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// CDF of the chi-square distribution with `dof` degrees of freedom.
double chi_square_cdf(double x, int dof);

/// Quantile of the chi-square distribution (inverse CDF by bisection).
double chi_square_quantile(double prob, int dof);

double mean(const std::vector<double>& v);

/// Population variance (divide by n).
double variance(const std::vector<double>& v);

double stddev(const std::vector<double>& v);

}  // namespace ctp::numeric
