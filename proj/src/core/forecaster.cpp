#include "forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "numeric.hpp"
#include "util.hpp"

namespace ctp::forecaster {

using util::NumericError;

namespace {

constexpr double kPartialMargin = 1.0 - 1e-7;

// Durbin-Levinson map from partial autocorrelations in (-1, 1) to the
// coefficients of a stationary AR polynomial.
std::vector<double> ar_from_partials(const std::vector<double>& partials) {
    std::vector<double> a;
    for (double r : partials) {
        std::vector<double> next(a.size() + 1);
        next.back() = r;
        for (std::size_t j = 0; j < a.size(); ++j) next[j] = a[j] - r * a[a.size() - 1 - j];
        a = std::move(next);
    }
    return a;
}

struct Params {
    std::vector<double> phi;
    std::vector<double> theta;
    double mu = 0.0;
};

Params decode(const std::vector<double>& u, int p, int q) {
    Params out;
    std::vector<double> rp(p), rq(q);
    for (int i = 0; i < p; ++i) rp[i] = kPartialMargin * std::tanh(u[i]);
    for (int j = 0; j < q; ++j) rq[j] = kPartialMargin * std::tanh(u[p + j]);
    out.phi = ar_from_partials(rp);
    out.theta = ar_from_partials(rq);
    for (double& t : out.theta) t = -t;
    out.mu = u[p + q];
    return out;
}

// Conditional sum of squared innovations on the centered differenced
// series; presample values and innovations are taken as zero.
double css(const std::vector<double>& z, const Params& par, std::vector<double>& resid) {
    const int n = static_cast<int>(z.size());
    const int p = static_cast<int>(par.phi.size());
    const int q = static_cast<int>(par.theta.size());
    resid.assign(n, 0.0);
    double sum = 0.0;
    for (int t = p; t < n; ++t) {
        double pred = 0.0;
        for (int i = 0; i < p; ++i) pred += par.phi[i] * (z[t - 1 - i] - par.mu);
        for (int j = 0; j < q; ++j)
            if (t - 1 - j >= p) pred += par.theta[j] * resid[t - 1 - j];
        double e = (z[t] - par.mu) - pred;
        resid[t] = e;
        sum += e * e;
    }
    return sum;
}

}  // namespace

std::vector<double> difference(const std::vector<double>& series, int d) {
    if (d < 0) throw std::invalid_argument("negative differencing order");
    if (static_cast<int>(series.size()) <= d)
        throw NumericError("series too short to difference");
    std::vector<double> z = series;
    for (int k = 0; k < d; ++k) {
        for (std::size_t i = z.size() - 1; i > 0; --i) z[i] -= z[i - 1];
        z.erase(z.begin());
    }
    return z;
}

std::vector<double> integrate(const std::vector<double>& diffed,
                              const std::vector<double>& initial) {
    std::vector<double> y = diffed;
    for (std::size_t k = initial.size(); k > 0; --k) {
        y.insert(y.begin(), difference(std::vector<double>(initial.begin(), initial.begin() + k),
                                       static_cast<int>(k - 1))
                                .back());
        for (std::size_t i = 1; i < y.size(); ++i) y[i] += y[i - 1];
    }
    return y;
}

std::vector<double> acf(const std::vector<double>& series, int max_lag) {
    const int n = static_cast<int>(series.size());
    if (n <= max_lag || max_lag < 0) throw NumericError("series too short for requested lags");
    const double m = numeric::mean(series);
    double c0 = 0.0;
    for (double x : series) c0 += (x - m) * (x - m);
    c0 /= n;
    if (c0 < 1e-300) throw NumericError("zero-variance series has no autocorrelations");
    std::vector<double> rho(max_lag + 1, 1.0);
    for (int k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (int t = k; t < n; ++t) ck += (series[t] - m) * (series[t - k] - m);
        rho[k] = ck / n / c0;
    }
    return rho;
}

std::vector<double> pacf(const std::vector<double>& series, int max_lag) {
    const std::vector<double> rho = acf(series, max_lag);
    std::vector<double> out(max_lag + 1, 1.0);
    std::vector<double> prev;
    double err = 1.0;
    for (int k = 1; k <= max_lag; ++k) {
        double num = rho[k];
        for (std::size_t j = 0; j < prev.size(); ++j) num -= prev[j] * rho[k - 1 - j];
        double pk = (err > 1e-14) ? num / err : 0.0;
        out[k] = pk;
        std::vector<double> next(prev.size() + 1);
        next.back() = pk;
        for (std::size_t j = 0; j < prev.size(); ++j)
            next[j] = prev[j] - pk * prev[prev.size() - 1 - j];
        err *= (1.0 - pk * pk);
        prev = std::move(next);
    }
    return out;
}

ArimaFit fit(const std::vector<double>& series, const ArimaSpec& spec) {
    if (spec.p < 0 || spec.d < 0 || spec.q < 0 || spec.p + spec.q < 1)
        throw std::invalid_argument("invalid ARIMA orders");
    if (static_cast<int>(series.size()) < spec.min_sample())
        throw NumericError("series shorter than the minimum identifiable sample");

    std::vector<double> z = difference(series, spec.d);
    if (numeric::variance(z) < 1e-300)
        throw NumericError("degenerate series: no variance after differencing");

    // Start the AR partials from the sample PACF, MA partials at zero.
    std::vector<double> start(spec.p + spec.q + 1, 0.0);
    if (spec.p > 0) {
        auto sample = pacf(z, std::min<int>(spec.p, static_cast<int>(z.size()) - 1));
        for (int i = 0; i < spec.p && i + 1 < static_cast<int>(sample.size()); ++i)
            start[i] = std::atanh(std::clamp(sample[i + 1], -0.9, 0.9));
    }
    start[spec.p + spec.q] = numeric::mean(z);

    std::vector<double> work;
    auto objective = [&](const std::vector<double>& u) {
        return css(z, decode(u, spec.p, spec.q), work);
    };
    auto opt = numeric::nelder_mead(objective, start, 0.2, 1e-11,
                                    2500 * (spec.p + spec.q + 1));

    ArimaFit out;
    out.spec = spec;
    Params par = decode(opt.x, spec.p, spec.q);
    out.phi = par.phi;
    out.theta = par.theta;
    out.mu = par.mu;
    double phi_sum = 0.0;
    for (double f : out.phi) phi_sum += f;
    out.intercept = par.mu * (1.0 - phi_sum);
    out.converged = opt.converged;
    out.diffed = z;

    double sse = css(z, par, out.residuals);
    const int used = static_cast<int>(z.size()) - spec.p;
    out.sigma2 = (used > 0) ? sse / used : 0.0;

    // One-step-ahead fitted values back on the original scale: the
    // predicted difference plus the actual lower-order difference tails.
    std::vector<std::vector<double>> pyramid{series};
    for (int k = 1; k < spec.d; ++k) pyramid.push_back(difference(pyramid.back(), 1));
    out.fitted_offset = spec.d + spec.p;
    out.fitted.clear();
    for (int t = spec.p; t < static_cast<int>(z.size()); ++t) {
        const int idx = t + spec.d;  // original-series index being predicted
        double value = z[t] - out.residuals[t];
        for (int k = 0; k < spec.d; ++k) value += pyramid[k][idx - 1 - k];
        out.fitted.push_back(value);
    }
    return out;
}

Forecast forecast(const ArimaFit& fit, const std::vector<double>& last_values, int horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (static_cast<int>(last_values.size()) < fit.spec.d)
        throw std::invalid_argument("need at least d trailing original values");

    const int p = fit.spec.p, q = fit.spec.q, d = fit.spec.d;
    std::vector<double> w;  // centered differenced tail, oldest first
    for (int i = std::max(0, static_cast<int>(fit.diffed.size()) - std::max(p, 1));
         i < static_cast<int>(fit.diffed.size()); ++i)
        w.push_back(fit.diffed[i] - fit.mu);
    std::vector<double> e;
    for (int i = std::max(0, static_cast<int>(fit.residuals.size()) - std::max(q, 1));
         i < static_cast<int>(fit.residuals.size()); ++i)
        e.push_back(fit.residuals[i]);

    // Tails of each difference order 0..d-1, used for re-integration.
    std::vector<double> level_tail(d);
    for (int k = 0; k < d; ++k)
        level_tail[k] = difference(last_values, k).back();

    Forecast out;
    out.horizon = horizon;
    for (int h = 0; h < horizon; ++h) {
        double pred = 0.0;
        for (int i = 0; i < p; ++i) pred += fit.phi[i] * w[w.size() - 1 - i];
        for (int j = 0; j < q; ++j) {
            int idx = static_cast<int>(e.size()) - 1 - j;
            if (idx >= 0) pred += fit.theta[j] * e[idx];
        }
        double z_next = pred + fit.mu;
        w.push_back(pred);  // centered value of the forecast
        e.push_back(0.0);

        double value = z_next;
        for (int k = d - 1; k >= 0; --k) {
            value += level_tail[k];
            level_tail[k] = value;
        }
        out.points.push_back(value);
    }
    out.sigma = numeric::stddev(out.points);

    // Forecast-error std of the last point: psi weights of the integrated
    // process, phi_tilde(B) = phi(B) (1-B)^d.
    std::vector<double> phi_tilde(p + d, 0.0);
    {
        std::vector<double> poly{1.0};  // coefficients of phi(B) (1-B)^d
        for (int i = 0; i < p; ++i) poly.push_back(-fit.phi[i]);
        for (int k = 0; k < d; ++k) {
            std::vector<double> next(poly.size() + 1, 0.0);
            for (std::size_t j = 0; j < poly.size(); ++j) {
                next[j] += poly[j];
                next[j + 1] -= poly[j];
            }
            poly = std::move(next);
        }
        for (std::size_t j = 1; j < poly.size(); ++j) phi_tilde[j - 1] = -poly[j];
    }
    std::vector<double> psi{1.0};
    double err_var = 1.0;
    for (int j = 1; j < horizon; ++j) {
        double v = (j - 1 < q) ? fit.theta[j - 1] : 0.0;
        for (int i = 0; i < static_cast<int>(phi_tilde.size()) && i < j; ++i)
            v += phi_tilde[i] * psi[j - 1 - i];
        psi.push_back(v);
        err_var += v * v;
    }
    out.error_std = std::sqrt(std::max(0.0, fit.sigma2) * err_var);
    return out;
}

double r_squared(const std::vector<double>& actual, const std::vector<double>& fitted) {
    if (actual.size() != fitted.size() || actual.size() < 2)
        throw std::invalid_argument("r_squared needs two equal-length samples");
    const double m = numeric::mean(actual);
    double sst = 0.0, sse = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        sst += (actual[i] - m) * (actual[i] - m);
        sse += (actual[i] - fitted[i]) * (actual[i] - fitted[i]);
    }
    if (sst < 1e-300) throw NumericError("r_squared: actual series has zero variance");
    return 1.0 - sse / sst;
}

WhiteNoiseReport white_noise_check(const std::vector<double>& residuals, int lags,
                                   int n_fitted_params) {
    const int n = static_cast<int>(residuals.size());
    if (n <= lags) throw NumericError("need more residuals than lags");
    if (lags <= n_fitted_params)
        throw std::invalid_argument("lags must exceed the fitted parameter count");

    const auto rho = acf(residuals, lags);
    WhiteNoiseReport rep;
    for (int k = 1; k <= lags; ++k) {
        rep.q_stat += rho[k] * rho[k] / (n - k);
        rep.max_abs_acf = std::max(rep.max_abs_acf, std::abs(rho[k]));
    }
    rep.q_stat *= n * (n + 2.0);
    rep.dof = lags - n_fitted_params;
    rep.critical = numeric::chi_square_quantile(0.95, rep.dof);
    rep.pass = rep.q_stat <= rep.critical;
    return rep;
}

double window_score(const std::vector<double>& prices, const ArimaSpec& spec, int window) {
    const int n = static_cast<int>(prices.size());
    window = std::min(window, n);
    if (window < spec.min_sample()) return -std::numeric_limits<double>::infinity();
    std::vector<double> slice(prices.end() - window, prices.end());
    try {
        ArimaFit f = fit(slice, spec);
        std::vector<double> actual(slice.begin() + f.fitted_offset, slice.end());
        return r_squared(actual, f.fitted);
    } catch (const std::exception&) {
        return -std::numeric_limits<double>::infinity();
    }
}

WindowChoice optimal_window(const std::vector<double>& prices, const ArimaSpec& spec,
                            const std::vector<int>& candidates, int eval_span, int stride) {
    const int n = static_cast<int>(prices.size());
    if (candidates.empty()) throw std::invalid_argument("no window candidates");
    const int span = std::min(eval_span, n);

    WindowChoice best{0, -std::numeric_limits<double>::infinity()};
    bool any = false;
    for (int t : candidates) {
        if (t < spec.min_sample() || t > n) continue;
        double worst = std::numeric_limits<double>::infinity();
        bool ok = false;
        for (int end_day = n - span; end_day < n; end_day += stride) {
            if (end_day - t + 1 < 0) continue;
            std::vector<double> slice(prices.begin() + (end_day - t + 1),
                                      prices.begin() + (end_day + 1));
            double score;
            try {
                ArimaFit f = fit(slice, spec);
                std::vector<double> actual(slice.begin() + f.fitted_offset, slice.end());
                score = r_squared(actual, f.fitted);
            } catch (const std::exception&) {
                score = -std::numeric_limits<double>::infinity();
            }
            worst = std::min(worst, score);
            ok = true;
        }
        if (!ok) continue;
        any = true;
        if (worst > best.r2) best = {t, worst};
    }
    if (!any) throw NumericError("no candidate window fits the available data");
    return best;
}

WindowChoice hill_climb_window(const std::function<double(int)>& score, int start, int lo,
                               int hi, int budget) {
    start = std::clamp(start, lo, hi);
    std::map<int, double> cache;
    auto eval = [&](int t) {
        auto it = cache.find(t);
        if (it != cache.end()) return it->second;
        double s = score(t);
        cache[t] = s;
        return s;
    };

    int current = start;
    double current_score = eval(current);
    for (int step = 0; step < budget; ++step) {
        int best_t = current;
        double best_s = current_score;
        for (int t : {current - 1, current + 1}) {
            if (t < lo || t > hi) continue;
            double s = eval(t);
            if (s > best_s) {
                best_s = s;
                best_t = t;
            }
        }
        if (best_t == current) break;
        current = best_t;
        current_score = best_s;
    }
    return {current, current_score};
}

WindowChoice adaptive_window(const std::vector<double>& prices, const ArimaSpec& spec,
                             int start, int budget) {
    const int hi = static_cast<int>(prices.size());
    const int lo = spec.min_sample();
    if (hi < lo) throw NumericError("not enough history for the adaptive window");
    return hill_climb_window([&](int t) { return window_score(prices, spec, t); }, start, lo,
                             hi, budget);
}

void export_correlogram_csv(const std::string& path, const std::vector<double>& acf_values,
                            const std::vector<double>& pacf_values) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw util::DataError("cannot write " + path);
    out << "lag,acf,pacf\n";
    for (std::size_t k = 0; k < acf_values.size(); ++k) {
        out << k << ',' << util::format_double(acf_values[k]) << ',';
        out << (k < pacf_values.size() ? util::format_double(pacf_values[k]) : "") << '\n';
    }
}

void export_fit_csv(const std::string& path, const std::vector<std::string>& labels,
                    const std::vector<double>& actual, const std::vector<double>& fitted,
                    const std::vector<double>& residuals) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw util::DataError("cannot write " + path);
    out << "date,actual,fitted,residual\n";
    for (std::size_t i = 0; i < actual.size(); ++i) {
        out << (i < labels.size() ? labels[i] : std::to_string(i)) << ','
            << util::format_double(actual[i]) << ',' << util::format_double(fitted[i]) << ','
            << util::format_double(residuals[i]) << '\n';
    }
}

void export_window_scores_csv(const std::string& path,
                              const std::vector<WindowChoice>& scores) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw util::DataError("cannot write " + path);
    out << "T,r2_min\n";
    for (const auto& s : scores)
        out << s.length << ',' << util::format_double(s.r2) << '\n';
}

}  // namespace ctp::forecaster
