#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ctp::forecaster {

/// ARIMA(p,d,q) orders. p + q must be at least 1.
struct ArimaSpec {
    int p = 1;
    int d = 1;
    int q = 1;

    int min_sample() const { return 10 + p + d + q; }
};

/// A fitted ARIMA model. Coefficients minimize the conditional sum of
/// squared innovations on the d-differenced series; stationarity and
/// invertibility are enforced by optimizing over partial-autocorrelation
/// coordinates, so the AR and MA polynomial roots stay outside the unit
/// circle.
struct ArimaFit {
    ArimaSpec spec;
    std::vector<double> phi;
    std::vector<double> theta;
    double intercept = 0.0;  // constant term of the differenced-scale recursion
    double mu = 0.0;         // mean of the differenced series
    double sigma2 = 0.0;
    bool converged = true;

    std::vector<double> diffed;     // the d-differenced series the model saw
    std::vector<double> residuals;  // innovations, aligned with `diffed` (first p are 0)
    std::vector<double> fitted;     // one-step-ahead fitted values, original scale
    int fitted_offset = 0;          // index into the original series of fitted[0]
};

struct Forecast {
    int horizon = 3;
    std::vector<double> points;  // predicted prices, original scale
    double sigma = 0.0;          // population std of the predicted points
};

struct WindowChoice {
    int length = 0;
    double r2 = 0.0;
};

struct WhiteNoiseReport {
    double q_stat = 0.0;
    double critical = 0.0;
    int dof = 0;
    bool pass = false;
    double max_abs_acf = 0.0;
};

/// d-fold first differencing; output length = input length - d.
std::vector<double> difference(const std::vector<double>& series, int d);

/// Inverse of `difference`: rebuilds the original series from the
/// differenced one and the d retained leading values.
std::vector<double> integrate(const std::vector<double>& diffed,
                              const std::vector<double>& initial);

/// Biased (divide-by-N) autocorrelations for lags 0..max_lag; lag 0 is 1.
std::vector<double> acf(const std::vector<double>& series, int max_lag);

/// Partial autocorrelations via the Durbin-Levinson recursion; entry 0 is
/// kept at 1 so indices line up with `acf`.
std::vector<double> pacf(const std::vector<double>& series, int max_lag);

ArimaFit fit(const std::vector<double>& series, const ArimaSpec& spec);

/// Iterates the ARMA recursion with future innovations at zero, then
/// integrates back to the original scale. `last_values` is the original-
/// scale tail (at least d values) ending where the fit ended.
Forecast forecast(const ArimaFit& fit, const std::vector<double>& last_values, int horizon);

/// R^2 = 1 - SSE/SST.
double r_squared(const std::vector<double>& actual, const std::vector<double>& fitted);

/// Ljung-Box portmanteau test at significance 0.05 with
/// lags - n_fitted_params degrees of freedom.
WhiteNoiseReport white_noise_check(const std::vector<double>& residuals, int lags,
                                   int n_fitted_params = 0);

/// In-sample R^2 of a fit over the trailing `window` prices; the scoring
/// primitive behind the window-length searches. Returns -infinity when the
/// fit is degenerate.
double window_score(const std::vector<double>& prices, const ArimaSpec& spec, int window);

/// Scores every candidate window length by its worst sliding-position R^2
/// over the evaluation span (default: last 200 days, stride 5) and returns
/// the candidate with the best worst case.
WindowChoice optimal_window(const std::vector<double>& prices, const ArimaSpec& spec,
                            const std::vector<int>& candidates, int eval_span = 200,
                            int stride = 5);

/// Hill-climbs T by comparing score(T-1), score(T), score(T+1) until a
/// local maximum or the step budget is hit. The returned score is never
/// below score(start).
WindowChoice hill_climb_window(const std::function<double(int)>& score, int start, int lo,
                               int hi, int budget = 50);

/// `hill_climb_window` bound to the in-sample R^2 scorer on `prices`.
WindowChoice adaptive_window(const std::vector<double>& prices, const ArimaSpec& spec,
                             int start, int budget = 50);

void export_correlogram_csv(const std::string& path, const std::vector<double>& acf_values,
                            const std::vector<double>& pacf_values);
void export_fit_csv(const std::string& path, const std::vector<std::string>& labels,
                    const std::vector<double>& actual, const std::vector<double>& fitted,
                    const std::vector<double>& residuals);
void export_window_scores_csv(const std::string& path,
                              const std::vector<WindowChoice>& scores);

}  // namespace ctp::forecaster
