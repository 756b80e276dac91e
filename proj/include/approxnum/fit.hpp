#pragma once

// Linearised least-squares fits of decay models to spectra.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "approxnum/errors.hpp"
#include "approxnum/operator.hpp"

namespace approxnum {

enum class DecayModel { power, power_log, stretched, root_exp };

inline std::string model_name(DecayModel m) {
  switch (m) {
    case DecayModel::power: return "power";
    case DecayModel::power_log: return "power_log";
    case DecayModel::stretched: return "stretched";
    case DecayModel::root_exp: return "root_exp";
  }
  return "?";
}

inline DecayModel parse_model(const std::string& s) {
  if (s == "power") return DecayModel::power;
  if (s == "power_log") return DecayModel::power_log;
  if (s == "stretched") return DecayModel::stretched;
  if (s == "root_exp") return DecayModel::root_exp;
  throw error(errc::parse_error, "unknown decay model '" + s + "'");
}

struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw error(errc::invalid_argument, "regression needs two or more points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw error(errc::invalid_argument, "degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    sse += e * e;
  }
  f.r2 = syy > 0 ? std::max(0.0, 1.0 - sse / syy) : 1.0;
  return f;
}

// power:     log s = log C - p log n            (rate = p)
// power_log: log s - q log log n = log C - p log n
// stretched: log s = a - c n / log n            (rate = c)
// root_exp:  log s = a - c sqrt(n)              (rate = c)
struct DecayFit {
  DecayModel model = DecayModel::power;
  double rate = 0;
  double log_prefactor = 0;
  double q = 0;
  double r2 = 0;
  std::size_t n_min = 0, n_max = 0;
};

inline double model_abscissa(DecayModel m, double n) {
  switch (m) {
    case DecayModel::power:
    case DecayModel::power_log: return std::log(n);
    case DecayModel::stretched: return n / std::log(n);
    case DecayModel::root_exp: return std::sqrt(n);
  }
  return 0;
}

// Fit to values v[i] at indices n[i].
inline DecayFit fit_values(const std::vector<double>& n, const std::vector<double>& v, DecayModel m, double q = 0.0) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(v[i] > 0)) throw error(errc::zero_in_window, "non-positive value at n = " + std::to_string(n[i]));
    x.push_back(model_abscissa(m, n[i]));
    double yy = std::log(v[i]);
    if (m == DecayModel::power_log) yy -= q * std::log(std::log(n[i]));
    y.push_back(yy);
  }
  const auto lf = linear_fit(x, y);
  DecayFit f;
  f.model = m;
  f.rate = -lf.slope;
  f.log_prefactor = lf.intercept;
  f.q = q;
  f.r2 = lf.r2;
  return f;
}

inline DecayFit fit_decay(const SingularSpectrum& s, DecayModel m, std::size_t n_min, std::size_t n_max, double q = 0.0) {
  if (n_min < 2 || n_max <= n_min) throw error(errc::invalid_argument, "fit window must satisfy 2 <= n_min < n_max");
  if (n_max > s.horizon || n_max > s.size())
    throw error(errc::window_exceeds_horizon,
                "window end " + std::to_string(n_max) + " beyond horizon " + std::to_string(s.horizon));
  std::vector<double> n, v;
  for (std::size_t k = n_min; k <= n_max; ++k) {
    n.push_back(double(k));
    v.push_back(s.at(k));
  }
  DecayFit f = fit_values(n, v, m, q);
  f.n_min = n_min;
  f.n_max = n_max;
  return f;
}

// Which of two fits describes the data better by at least `margin` in R^2.
inline std::string compare_fits(const DecayFit& a, const DecayFit& b, double margin = 0.02) {
  if (a.r2 >= b.r2 + margin) return model_name(a.model);
  if (b.r2 >= a.r2 + margin) return model_name(b.model);
  return "inconclusive";
}

// Log-log slope of values against indices.
inline double loglog_slope(const std::vector<double>& n, const std::vector<double>& v) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(v[i] > 0)) throw error(errc::zero_in_window, "non-positive value in slope fit");
    x.push_back(std::log(n[i]));
    y.push_back(std::log(v[i]));
  }
  return linear_fit(x, y).slope;
}

}  // namespace approxnum
