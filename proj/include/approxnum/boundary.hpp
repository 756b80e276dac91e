#pragma once

// Boundary sampling: the exponential grid clustered at z = 1, dyadic
// Gauss-Legendre shells, self-map validation and a small parallel loop.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#include "approxnum/series.hpp"

namespace approxnum {

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// handled by exactly one worker, so results written per index are
// independent of the thread count.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t w = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t k = 0; k < w; ++k)
    pool.emplace_back([&, k] {
      for (std::size_t i = k; i < n; i += w) body(i);
    });
  for (auto& th : pool) th.join();
}

// Uniform grid of m angles on (-pi, pi] merged with t = +-pi 2^{-j/8},
// j = 1..8*depth, and t = 0. Sorted, without duplicates.
inline std::vector<double> boundary_grid(std::size_t m, int depth = 60) {
  const double pi = std::numbers::pi;
  std::vector<double> t;
  t.reserve(m + 16 * std::size_t(depth) + 1);
  for (std::size_t k = 0; k < m; ++k) t.push_back(-pi + 2.0 * pi * double(k + 1) / double(m));
  for (int j = 1; j <= 8 * depth; ++j) {
    const double x = pi * std::exp2(-double(j) / 8.0);
    t.push_back(x);
    t.push_back(-x);
  }
  t.push_back(0.0);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

struct Quadrature {
  std::vector<double> t;
  std::vector<double> w;  // normalised: sum of weights approximates (1/2pi) * length
};

// Gauss-Legendre nodes and weights on [-1, 1].
inline void gauss_legendre(unsigned p, std::vector<double>& x, std::vector<double>& w) {
  using boost::math::legendre_p_prime;
  const auto pos = boost::math::legendre_p_zeros<double>(int(p));
  x.clear();
  w.clear();
  for (double r : pos) {
    const double d = legendre_p_prime(int(p), r);
    const double wt = 2.0 / ((1.0 - r * r) * d * d);
    x.push_back(r);
    w.push_back(wt);
    if (r != 0.0) {
      x.push_back(-r);
      w.push_back(wt);
    }
  }
}

// Shells [pi 2^{-k-1}, pi 2^{-k}], k < shells, mirrored to negative angles,
// with p Gauss-Legendre nodes each. Weights carry the 1/(2 pi) of the Haar
// measure. The arc |t| < pi 2^{-shells} is dropped.
inline Quadrature dyadic_shells(unsigned shells, unsigned p) {
  std::vector<double> x, w;
  gauss_legendre(p, x, w);
  Quadrature q;
  const double pi = std::numbers::pi;
  for (unsigned k = 0; k < shells; ++k) {
    const double a = pi * std::exp2(-double(k) - 1.0), b = pi * std::exp2(-double(k));
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = 0.5 * (b - a) * x[i] + 0.5 * (a + b);
      const double wt = 0.5 * (b - a) * w[i] / (2.0 * pi);
      q.t.push_back(t);
      q.w.push_back(wt);
      q.t.push_back(-t);
      q.w.push_back(wt);
    }
  }
  return q;
}

struct ValidationReport {
  double max_modulus = 0.0;
  double t_at_max = 0.0;
  bool pass = false;
  std::size_t samples = 0;
  // Fit of log(1 - |f(e^{it})|^2) = log(coefficient) + exponent * log|t|
  // on 1e-6 <= |t| <= 1e-3, when f(1) lies on the circle.
  bool contact_at_one = false;
  double exponent = 0.0;
  double coefficient = 0.0;
};

inline ValidationReport validate_self_map(const Symbol& f, std::size_t m = 4096) {
  ValidationReport rep;
  const auto grid = boundary_grid(std::max<std::size_t>(m, 64));
  rep.samples = grid.size();
  for (double t : grid) {
    double a;
    try {
      a = std::abs(f.on_boundary(t));
    } catch (const error&) {
      a = std::numeric_limits<double>::infinity();
    }
    if (!(a <= rep.max_modulus)) {
      rep.max_modulus = a;
      rep.t_at_max = t;
    }
  }
  rep.pass = rep.max_modulus <= 1.0 + 1e-12;

  const double at_one = std::abs(f.on_boundary(0.0));
  rep.contact_at_one = std::abs(at_one - 1.0) < 1e-9;
  if (rep.contact_at_one) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (double t : grid) {
      const double at = std::abs(t);
      if (at < 1e-6 || at > 1e-3) continue;
      const double v = 1.0 - std::norm(f.on_boundary(t));
      if (!(v > 0)) continue;
      const double x = std::log(at), y = std::log(v);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      ++cnt;
    }
    if (cnt >= 2) {
      const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      rep.exponent = slope;
      rep.coefficient = std::exp((sy - slope * sx) / cnt);
    }
  }
  return rep;
}

}  // namespace approxnum
