#pragma once

// Disc geometry and H^2 quantities: metrics, kernels, Blaschke products,
// separation and Carleson estimates.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <unordered_map>
#include <vector>

#include "approxnum/errors.hpp"
#include "approxnum/series.hpp"

namespace approxnum {

using PointSequence = std::vector<cplx>;

inline double pseudo_distance(cplx z, cplx w) {
  const double den = std::abs(1.0 - std::conj(z) * w);
  if (den < 1e-300) throw error(errc::degenerate_denominator, "|1 - conj(z) w| vanishes");
  return std::min(1.0, std::abs(z - w) / den);
}

inline double hyperbolic_distance(cplx z, cplx w) {
  const double r = pseudo_distance(z, w);
  return std::log1p(r) - std::log1p(-r);
}

inline double kernel_norm_sq(cplx w) { return 1.0 / (1.0 - std::norm(w)); }

struct BlaschkeProduct {
  std::vector<cplx> zeros;
  std::size_t degree() const { return zeros.size(); }
};

inline cplx blaschke_factor(cplx a, cplx z) {
  if (a == cplx(0.0)) return z;
  return (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
}

inline cplx blaschke_eval(const BlaschkeProduct& b, cplx z) {
  cplx v = 1.0;
  for (const auto& a : b.zeros) v *= blaschke_factor(a, z);
  return v;
}

// |B(z)| as a sum of logs, so that high degrees do not underflow.
inline double blaschke_log_modulus(const BlaschkeProduct& b, cplx z) {
  double s = 0.0;
  for (const auto& a : b.zeros) {
    const double r = (a == cplx(0.0)) ? std::abs(z) : pseudo_distance(a, z);
    if (r == 0.0) return -std::numeric_limits<double>::infinity();
    s += std::log(r);
  }
  return s;
}

// Trapezoid rule for 2 * integral |dz| / (1 - |z|^2) along the polygon.
inline double hyperbolic_length(const std::vector<cplx>& samples) {
  for (const auto& z : samples)
    if (std::abs(z) >= 1.0 - 1e-12) throw error(errc::curve_touches_boundary, "sample on or outside the circle");
  double len = 0.0;
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double f0 = 2.0 / (1.0 - std::norm(samples[k - 1]));
    const double f1 = 2.0 / (1.0 - std::norm(samples[k]));
    len += 0.5 * (f0 + f1) * std::abs(samples[k] - samples[k - 1]);
  }
  return len;
}

// Parametrised curve on [a, b]; the sample count doubles until the relative
// change drops below tol.
inline double hyperbolic_length(const std::function<cplx(double)>& curve, double a, double b, double tol = 1e-6,
                                std::size_t max_samples = std::size_t(1) << 22) {
  std::size_t m = 64;
  auto sample = [&](std::size_t k) {
    std::vector<cplx> pts(k + 1);
    for (std::size_t i = 0; i <= k; ++i) pts[i] = curve(a + (b - a) * double(i) / double(k));
    return hyperbolic_length(pts);
  };
  double prev = sample(m);
  while (m < max_samples) {
    m *= 2;
    const double cur = sample(m);
    if (std::abs(cur - prev) <= tol * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

// log delta(Z) = min_j sum_{k != j} log rho(z_j, z_k); 0 for a singleton.
inline double log_uniform_separation(const PointSequence& z) {
  double best = 0.0;
  bool first = true;
  for (std::size_t j = 0; j < z.size(); ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (k == j) continue;
      if (std::abs(z[j] - z[k]) < 1e-15) throw error(errc::duplicate_points, "repeated point in sequence");
      s += std::log(pseudo_distance(z[j], z[k]));
    }
    if (first || s < best) best = s;
    first = false;
  }
  return best;
}

inline double uniform_separation(const PointSequence& z) { return std::exp(log_uniform_separation(z)); }

struct CarlesonEstimate {
  double geometric = 0.0;  // max over the dyadic window grid of nu(Q)/delta
  double log_bound = 0.0;  // 1 + log(1/delta(Z))
  double best_delta = 0.0;
  double best_theta = 0.0;
  int levels = 0;
  std::size_t windows = 0;  // windows carrying mass that were evaluated
};

// Windows Q(theta0, d) = {|z| >= 1 - d, |arg z - theta0| <= d}, d = 2^{-m},
// centres theta0 = -pi + k d/2. Only centres near an atom can carry mass, so
// each level costs O(|Z|). The origin lies in every window with d >= 1.
inline double carleson_geometric(const PointSequence& z, CarlesonEstimate* info = nullptr) {
  const double pi = std::numbers::pi;
  double best = 0.0, best_d = 0.0, best_th = 0.0;
  int levels = 0;
  std::size_t windows = 0;
  for (int m = 0; m <= 52; ++m) {
    const double d = std::ldexp(1.0, -m);
    const double step = 0.5 * d;
    const long kmax = long(std::ceil(2.0 * pi / step));
    std::unordered_map<long, double> mass;
    double everywhere = 0.0;
    bool any = false;
    for (const auto& p : z) {
      const double r = std::abs(p);
      if (r < 1.0 - d) continue;
      any = true;
      const double nu = 1.0 - r * r;
      if (r == 0.0) {
        everywhere += nu;
        continue;
      }
      const double th = std::arg(p);
      std::set<long> hit;
      for (int wrap = -1; wrap <= 1; ++wrap) {
        const double x = th + 2.0 * pi * wrap;
        const long lo = std::max(0L, long(std::ceil((x - d + pi) / step - 1e-12)));
        const long hi = std::min(kmax, long(std::floor((x + d + pi) / step + 1e-12)));
        for (long k = lo; k <= hi; ++k) {
          const double c = -pi + double(k) * step;
          if (std::abs(x - c) <= d * (1.0 + 1e-12)) hit.insert(k);
        }
      }
      for (long k : hit) mass[k] += nu;
    }
    if (!any) break;
    ++levels;
    double level_best = everywhere;
    double level_th = 0.0;
    for (const auto& [k, v] : mass) {
      ++windows;
      if (v + everywhere > level_best || (v + everywhere == level_best && -pi + k * step < level_th)) {
        level_best = v + everywhere;
        level_th = -pi + double(k) * step;
      }
    }
    if (level_best / d > best) {
      best = level_best / d;
      best_d = d;
      best_th = level_th;
    }
  }
  if (info) {
    info->geometric = best;
    info->best_delta = best_d;
    info->best_theta = best_th;
    info->levels = levels;
    info->windows = windows;
  }
  return best;
}

inline CarlesonEstimate carleson_norm(const PointSequence& z) {
  CarlesonEstimate e;
  carleson_geometric(z, &e);
  if (z.size() >= 1) e.log_bound = 1.0 - log_uniform_separation(z);
  return e;
}

// Shapiro-Shields type bound M(Z) <= ||nu_Z||^{1/2} / delta(Z).
inline double interpolation_constant_bound(const PointSequence& z) {
  const double ld = log_uniform_separation(z);
  return std::sqrt(carleson_geometric(z)) * std::exp(-ld);
}

}  // namespace approxnum
