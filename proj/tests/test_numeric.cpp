#include <doctest.h>

#include <cmath>

#include "numeric.hpp"

using namespace ctp::numeric;

TEST_CASE("nelder_mead minimizes a shifted quadratic bowl") {
    auto f = [](const std::vector<double>& x) {
        double a = x[0] - 1.5, b = x[1] + 2.0, c = x[2] - 0.25;
        return a * a + 2.0 * b * b + 0.5 * c * c + 3.0;
    };
    auto r = nelder_mead(f, {0.0, 0.0, 0.0}, 0.5, 1e-12, 20000);
    CHECK(r.value == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(r.x[0] == doctest::Approx(1.5).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-4));
    CHECK(r.x[2] == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("nelder_mead handles the Rosenbrock valley") {
    auto f = [](const std::vector<double>& x) {
        double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    auto r = nelder_mead(f, {-1.2, 1.0}, 0.5, 1e-14, 20000);
    CHECK(r.value < 1e-8);
}

TEST_CASE("chi-square quantiles match table values") {
    // Standard 95% critical values.
    CHECK(chi_square_quantile(0.95, 1) == doctest::Approx(3.8415).epsilon(1e-4));
    CHECK(chi_square_quantile(0.95, 10) == doctest::Approx(18.307).epsilon(1e-4));
    CHECK(chi_square_quantile(0.95, 18) == doctest::Approx(28.869).epsilon(1e-4));
    // Quantile inverts the CDF.
    for (int dof : {2, 7, 19}) {
        double x = chi_square_quantile(0.9, dof);
        CHECK(chi_square_cdf(x, dof) == doctest::Approx(0.9).epsilon(1e-10));
    }
}

TEST_CASE("population moments") {
    std::vector<double> v{0.02, 0.0};
    CHECK(mean(v) == doctest::Approx(0.01));
    CHECK(stddev(v) == doctest::Approx(0.01));
    CHECK(variance({1.0, 1.0, 1.0}) == 0.0);
}
