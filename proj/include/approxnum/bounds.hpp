#pragma once

// Lower and upper certificates for a_n of (weighted) composition operators
// and their differences, plus the Hilbert-Schmidt boundary integral.
//
// Every estimate is evaluated without its unspecified absolute constant;
// only rates are meaningful. Boundary suprema are sampled, not certified.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "approxnum/boundary.hpp"
#include "approxnum/errors.hpp"
#include "approxnum/hardy.hpp"
#include "approxnum/operator.hpp"
#include "approxnum/series.hpp"

namespace approxnum {

// ---------------------------------------------------------------- sequences

// z_j = (1 + e^{i/(n-j)})/2, 1 <= j <= floor(n/2).
inline PointSequence sequence_boundary_pinch(std::size_t n) {
  if (n < 4) throw error(errc::invalid_argument, "pinch sequence needs n >= 4");
  PointSequence z;
  for (std::size_t j = 1; j <= n / 2; ++j) z.push_back(0.5 * (1.0 + std::polar(1.0, 1.0 / double(n - j))));
  return z;
}

struct RadialSequence {
  double eps = 0.0;
  std::size_t first = 0;  // ceil(j0)
  std::size_t last = 0;   // n
  PointSequence z;
  std::vector<double> one_minus_z;  // e^{-j eps}, exact
};

// z_j = 1 - e^{-j eps}, eps = log(n)/n, ceil(|log eps|/(2 eps)) <= j <= n.
inline RadialSequence sequence_radial_detail(std::size_t n) {
  if (n < 2) throw error(errc::empty_range, "radial sequence needs n >= 2");
  RadialSequence r;
  r.eps = std::log(double(n)) / double(n);
  const double j0 = std::abs(std::log(r.eps)) / (2.0 * r.eps);
  r.first = std::size_t(std::ceil(j0));
  r.last = n;
  if (r.first >= n) throw error(errc::empty_range, "start index |log eps|/(2 eps) is not below n");
  for (std::size_t j = r.first; j <= n; ++j) {
    const double d = std::exp(-double(j) * r.eps);
    r.one_minus_z.push_back(d);
    r.z.push_back(1.0 - d);
  }
  return r;
}

inline PointSequence sequence_radial(std::size_t n) { return sequence_radial_detail(n).z; }

// ---------------------------------------------------------------- lower

struct LowerCertificate {
  std::size_t n = 0;  // card(Z)
  PointSequence Z, W;
  double delta_Z = 0, delta_W = 0;
  double log_delta_Z = 0, log_delta_W = 0;
  double carleson_Z = 0, carleson_W = 0;
  double M_W = 0;
  double inf_ratio = 0;
  double value_theorem = 0;
  double value_constant_free = 0;
};

namespace detail {

inline void require_distinct_inside(const PointSequence& w) {
  for (const auto& x : w)
    if (!(std::abs(x) < 1.0)) throw error(errc::image_on_boundary, "image point is not inside the disc");
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (std::abs(w[i] - w[j]) < 1e-14) throw error(errc::colliding_images, "two image points coincide");
}

// delta^a (1 + log(1/delta))^{-1/2} style factors are assembled in logs.
inline double constant_free(double log_dw, double log_dz, double log_inf) {
  return std::exp(log_dw + 0.5 * log_inf - 0.5 * std::log1p(-log_dw) - 0.5 * std::log1p(-log_dz));
}

}  // namespace detail

inline LowerCertificate lower_certificate(const Symbol& phi, const Symbol& psi, const PointSequence& z) {
  if (z.empty()) throw error(errc::invalid_argument, "empty sequence");
  LowerCertificate c;
  c.n = z.size();
  c.Z = z;
  double inf = std::numeric_limits<double>::infinity();
  for (const auto& p : z) {
    const cplx a = phi(p), b = psi(p);
    c.W.push_back(a);
    c.W.push_back(b);
    const double nz = 1.0 - std::norm(p);
    inf = std::min(inf, nz / (1.0 - std::norm(a)) + nz / (1.0 - std::norm(b)));
  }
  detail::require_distinct_inside(c.W);
  c.inf_ratio = inf;
  c.log_delta_Z = log_uniform_separation(z);
  c.log_delta_W = log_uniform_separation(c.W);
  c.delta_Z = std::exp(c.log_delta_Z);
  c.delta_W = std::exp(c.log_delta_W);
  c.carleson_Z = carleson_geometric(z);
  c.carleson_W = carleson_geometric(c.W);
  c.M_W = std::sqrt(c.carleson_W) * std::exp(-c.log_delta_W);
  c.value_theorem =
      std::exp(-0.5 * std::log(c.carleson_W) + c.log_delta_W - 0.5 * std::log(c.carleson_Z) + 0.5 * std::log(inf));
  c.value_constant_free = detail::constant_free(c.log_delta_W, c.log_delta_Z, std::log(inf));
  return c;
}

// ---------------------------------------------------------------- Blaschke zeros

struct LevelCurve {
  double offset = 0;              // curve parameter u corresponds to the angle offset + u
  double u_begin = 0, u_end = 0;  // parameter interval of {|phi| <= r} inside [0, 2 pi]
  std::vector<double> u;
  std::vector<cplx> points;
  std::vector<double> cumulative;  // hyperbolic arc length
  double length = 0;
  bool empty = true;
};

// Omega_r = phi({e^{it} : |phi(e^{it})| <= r}). The parameter starts at the
// sampled maximum of |phi|, so a single arc never wraps around u = 0.
inline LevelCurve level_curve(const Symbol& phi, double r, std::size_t samples = 1 << 14) {
  if (!(r > 0.0 && r < 1.0)) throw error(errc::invalid_argument, "r must lie in (0, 1)");
  const double two_pi = 2.0 * std::numbers::pi;
  const std::size_t m = 4096;
  LevelCurve lc;
  double top = -1.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = two_pi * double(k) / double(m) - (k > m / 2 ? two_pi : 0.0);
    const double a = std::abs(phi.on_boundary(t));
    if (a > top) top = a, lc.offset = t;
  }
  auto image = [&](double u) {
    double t = lc.offset + u;
    if (t > std::numbers::pi) t -= two_pi;
    return phi.on_boundary(t);
  };
  std::vector<char> inside(m);
  for (std::size_t k = 0; k < m; ++k) inside[k] = std::abs(image(two_pi * (k + 0.5) / m)) <= r;
  std::size_t runs = 0;
  for (std::size_t k = 0; k < m; ++k)
    if (inside[k] && (k == 0 || !inside[k - 1])) ++runs;
  if (runs == 0) return lc;
  if (runs > 1) throw error(errc::disconnected_level_set, "sampled {|phi| <= r} has several components");
  lc.empty = false;
  std::size_t first = m, last = 0;
  for (std::size_t k = 0; k < m; ++k)
    if (inside[k]) first = std::min(first, k), last = k;
  auto f = [&](double u) { return std::abs(image(u)) - r; };
  auto bisect = [&](double in, double out) {
    for (int it = 0; it < 200 && std::abs(in - out) > 1e-15 * two_pi; ++it) {
      const double mid = 0.5 * (in + out);
      (f(mid) <= 0 ? in : out) = mid;
    }
    return in;
  };
  const double du = two_pi / double(m);
  const double u0 = two_pi * (double(first) + 0.5) / double(m), u1 = two_pi * (double(last) + 0.5) / double(m);
  lc.u_begin = (first == 0 && f(0.0) <= 0) ? 0.0 : bisect(u0, std::max(0.0, u0 - du));
  lc.u_end = (last == m - 1 && f(two_pi) <= 0) ? two_pi : bisect(u1, std::min(two_pi, u1 + du));
  lc.u.resize(samples + 1);
  lc.points.resize(samples + 1);
  lc.cumulative.assign(samples + 1, 0.0);
  for (std::size_t k = 0; k <= samples; ++k) {
    lc.u[k] = lc.u_begin + (lc.u_end - lc.u_begin) * double(k) / double(samples);
    lc.points[k] = image(lc.u[k]);
    if (k > 0) {
      const double g0 = 2.0 / (1.0 - std::norm(lc.points[k - 1])), g1 = 2.0 / (1.0 - std::norm(lc.points[k]));
      lc.cumulative[k] = lc.cumulative[k - 1] + 0.5 * (g0 + g1) * std::abs(lc.points[k] - lc.points[k - 1]);
    }
  }
  lc.length = lc.cumulative.back();
  return lc;
}

// n - 1 zeros at hyperbolic arc positions (k - 1/2) L/(n - 1) along Omega_r.
inline BlaschkeProduct blaschke_zeros_for_symbol(const Symbol& phi, double r, std::size_t n) {
  if (n < 1) throw error(errc::invalid_argument, "n must be positive");
  BlaschkeProduct b;
  if (n == 1) return b;
  const LevelCurve lc = level_curve(phi, r);
  if (lc.empty) throw error(errc::disconnected_level_set, "{|phi| <= r} is empty on the boundary");
  const double step = lc.length / double(n - 1);
  std::size_t seg = 1;
  for (std::size_t k = 1; k <= n - 1; ++k) {
    const double s = (double(k) - 0.5) * step;
    while (seg + 1 < lc.cumulative.size() && lc.cumulative[seg] < s) ++seg;
    const double l0 = lc.cumulative[seg - 1], l1 = lc.cumulative[seg];
    const double a = l1 > l0 ? (s - l0) / (l1 - l0) : 0.0;
    const double u = lc.u[seg - 1] + a * (lc.u[seg] - lc.u[seg - 1]);
    double t = lc.offset + u;
    if (t > std::numbers::pi) t -= 2.0 * std::numbers::pi;
    b.zeros.push_back(phi.on_boundary(t));
  }
  return b;
}

// ---------------------------------------------------------------- upper

struct UpperCertificate {
  std::size_t n = 0;
  double r = 0;
  BlaschkeProduct zeros;
  double sup_B_phi = 0, sup_B_psi = 0;  // on {|phi| <= r}, {|psi| <= r}
  double sup_w_phi = 0, sup_w_psi = 0;  // w = rho(phi, psi) on {|phi| > r}, {|psi| > r}
  double norm_phi = 0, norm_psi = 0;
  double value = 0;
  bool empty_B_phi = false, empty_B_psi = false, empty_w_phi = false, empty_w_psi = false;
  bool stable = true;  // suprema agree within 2% under one grid doubling
  std::size_t samples = 0;
};

namespace detail {

struct Suprema {
  double b_phi = 0, b_psi = 0, w_phi = 0, w_psi = 0;
  bool nb_phi = true, nb_psi = true, nw_phi = true, nw_psi = true;
};

// Samples with 1 - |.|^2 below this are skipped for w: the pseudohyperbolic
// distance between two points that close to the circle loses all precision.
inline constexpr double conditioning_floor = 1e-10;

inline Suprema upper_suprema(const Symbol& phi, const Symbol& psi, double r, const BlaschkeProduct& b,
                             const std::vector<double>& grid) {
  Suprema s;
  for (double t : grid) {
    const EvalPoint p = EvalPoint::boundary(t);
    const cplx a = phi.evaluate(p), c = psi.evaluate(p);
    const double ma = std::abs(a), mc = std::abs(c);
    if (ma <= r) {
      s.b_phi = std::max(s.b_phi, std::exp(blaschke_log_modulus(b, a)));
      s.nb_phi = false;
    }
    if (mc <= r) {
      s.b_psi = std::max(s.b_psi, std::exp(blaschke_log_modulus(b, c)));
      s.nb_psi = false;
    }
    if (ma > r || mc > r) {
      const bool ok = 1.0 - ma * ma >= conditioning_floor && 1.0 - mc * mc >= conditioning_floor;
      const double w = ok ? pseudo_distance(a, c) : 0.0;
      if (ma > r) {
        s.nw_phi = false;
        s.w_phi = std::max(s.w_phi, w);
      }
      if (mc > r) {
        s.nw_psi = false;
        s.w_psi = std::max(s.w_psi, w);
      }
    }
  }
  return s;
}

// sup |B(phi)| over m + 1 points of Omega_r equally spaced in hyperbolic
// arc length; the maxima of |B| sit between consecutive zeros.
inline double arc_sup(const Symbol& phi, const LevelCurve& lc, const BlaschkeProduct& b, std::size_t m) {
  if (lc.empty) return 0.0;
  double best = 0.0;
  std::size_t seg = 1;
  for (std::size_t k = 0; k <= m; ++k) {
    const double s = lc.length * double(k) / double(m);
    while (seg + 1 < lc.cumulative.size() && lc.cumulative[seg] < s) ++seg;
    const double l0 = lc.cumulative[seg - 1], l1 = lc.cumulative[seg];
    const double a = l1 > l0 ? std::clamp((s - l0) / (l1 - l0), 0.0, 1.0) : 0.0;
    double t = lc.offset + lc.u[seg - 1] + a * (lc.u[seg] - lc.u[seg - 1]);
    if (t > std::numbers::pi) t -= 2.0 * std::numbers::pi;
    best = std::max(best, std::exp(blaschke_log_modulus(b, phi.on_boundary(t))));
  }
  return best;
}

inline bool within(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) || std::max(a, b) < 1e-300;
}

}  // namespace detail

inline UpperCertificate upper_certificate(const Symbol& phi, const Symbol& psi, std::size_t n, double r,
                                          const BlaschkeProduct& zeros, std::size_t samples = 1 << 14) {
  if (!(r > 0.0 && r < 1.0)) throw error(errc::invalid_argument, "r must lie in (0, 1)");
  if (zeros.degree() + 1 != n) throw error(errc::invalid_argument, "Blaschke degree must be n - 1");
  UpperCertificate c;
  c.n = n;
  c.r = r;
  c.zeros = zeros;
  const auto g1 = boundary_grid(samples), g2 = boundary_grid(2 * samples);
  c.samples = g2.size();
  auto s1 = detail::upper_suprema(phi, psi, r, zeros, g1);
  auto s2 = detail::upper_suprema(phi, psi, r, zeros, g2);
  const LevelCurve lphi = level_curve(phi, r), lpsi = level_curve(psi, r);
  const std::size_t arc = std::max<std::size_t>(4096, 64 * n);
  s1.b_phi = std::max(s1.b_phi, detail::arc_sup(phi, lphi, zeros, arc));
  s2.b_phi = std::max(s2.b_phi, detail::arc_sup(phi, lphi, zeros, 2 * arc));
  s1.b_psi = std::max(s1.b_psi, detail::arc_sup(psi, lpsi, zeros, arc));
  s2.b_psi = std::max(s2.b_psi, detail::arc_sup(psi, lpsi, zeros, 2 * arc));
  c.stable = detail::within(s1.b_phi, s2.b_phi, 0.02) && detail::within(s1.b_psi, s2.b_psi, 0.02) &&
             detail::within(s1.w_phi, s2.w_phi, 0.02) && detail::within(s1.w_psi, s2.w_psi, 0.02);
  c.sup_B_phi = s2.b_phi;
  c.sup_B_psi = s2.b_psi;
  c.sup_w_phi = s2.w_phi;
  c.sup_w_psi = s2.w_psi;
  c.empty_B_phi = s2.nb_phi;
  c.empty_B_psi = s2.nb_psi;
  c.empty_w_phi = s2.nw_phi;
  c.empty_w_psi = s2.nw_psi;
  c.norm_phi = operator_norm_bound(phi);
  c.norm_psi = operator_norm_bound(psi);
  c.value = (c.sup_B_phi + c.sup_B_psi + c.sup_w_phi + c.sup_w_psi) * (c.norm_phi + c.norm_psi);
  return c;
}

// r-grid with 1 - r log-spaced from 0.5 down to `smallest`.
inline std::vector<double> default_r_grid(std::size_t count = 48, double smallest = 1e-6) {
  std::vector<double> r;
  for (std::size_t k = 0; k < count; ++k) {
    const double e = std::log(0.5) + (std::log(smallest) - std::log(0.5)) * double(k) / double(count - 1);
    r.push_back(1.0 - std::exp(e));
  }
  return r;
}

struct OptimizedUpper {
  UpperCertificate best;
  std::vector<double> r_trace, value_trace;
  std::size_t best_index = 0;
};

// Minimises over the grid; ties go to the smallest r.
inline OptimizedUpper optimize_upper(const Symbol& phi, const Symbol& psi, std::size_t n, const std::vector<double>& rs,
                                     unsigned threads = 1, std::size_t samples = 1 << 14) {
  if (rs.empty()) throw error(errc::invalid_argument, "empty r grid");
  std::vector<UpperCertificate> certs(rs.size());
  parallel_for(rs.size(), threads, [&](std::size_t i) {
    certs[i] = upper_certificate(phi, psi, n, rs[i], blaschke_zeros_for_symbol(phi, rs[i], n), samples);
  });
  OptimizedUpper o;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    o.r_trace.push_back(rs[i]);
    o.value_trace.push_back(certs[i].value);
    const auto& cur = certs[i];
    const auto& b = certs[o.best_index];
    if (cur.value < b.value || (cur.value == b.value && cur.r < b.r)) o.best_index = i;
  }
  o.best = certs[o.best_index];
  return o;
}

// ---------------------------------------------------------------- Hilbert-Schmidt

struct HsResult {
  double value = 0;  // (1/2pi) integral; equals the squared HS norm sum_k ||phi^k - psi^k||^2
  bool divergent = false;
  double tail = 0;          // geometric extrapolation past the last shell
  double shell_ratio = 0;   // ratio of consecutive shell integrals at the end
  std::size_t shells = 0;
};

inline double hs_integrand(const Symbol& phi, const Symbol& psi, double t) {
  const EvalPoint p = EvalPoint::boundary(t);
  const cplx a = phi.evaluate(p), b = psi.evaluate(p);
  const double na = std::norm(a), nb = std::norm(b);
  const double rho = pseudo_distance(a, b);
  return (1.0 - na * nb) / ((1.0 - na) * (1.0 - nb)) * rho * rho;
}

// Dyadic shells pi 2^{-k-1} <= |t| <= pi 2^{-k}, each integrated adaptively.
// Refinement towards t = 0 stops once a sample falls under the conditioning
// floor; the remaining arc is extrapolated from the shell ratio. A ratio
// that does not fall below one means the integral diverges.
inline HsResult hs_norm(const Symbol& phi, const Symbol& psi) {
  HsResult res;
  if (phi.structurally_equal(psi)) return res;
  using boost::math::quadrature::gauss_kronrod;
  const double pi = std::numbers::pi;
  auto conditioned = [&](double t) {
    for (double s : {t, -t}) {
      const EvalPoint p = EvalPoint::boundary(s);
      if (1.0 - std::norm(phi.evaluate(p)) < detail::conditioning_floor ||
          1.0 - std::norm(psi.evaluate(p)) < detail::conditioning_floor)
        return false;
    }
    return true;
  };
  std::vector<double> shell;
  double total = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double a = pi * std::exp2(-double(k) - 1.0), b = pi * std::exp2(-double(k));
    if (!conditioned(a)) break;
    // Integrated over the unit interval so the error control stays relative
    // on narrow shells.
    auto f = [&](double u) {
      const double t = a + (b - a) * u;
      return hs_integrand(phi, psi, t) + hs_integrand(phi, psi, -t);
    };
    const double v = (b - a) * gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 15, 1e-12) / (2.0 * pi);
    shell.push_back(v);
    total += v;
    if (v <= 1e-17 * total) break;
  }
  res.shells = shell.size();
  const std::size_t m = shell.size();
  if (m >= 4) {
    double q = 0.0;
    int cnt = 0;
    for (std::size_t i = m - 3; i < m; ++i)
      if (shell[i - 1] > 0) {
        q += shell[i] / shell[i - 1];
        ++cnt;
      }
    q = cnt ? q / cnt : 0.0;
    res.shell_ratio = q;
    if (q >= 1.0 - 5e-3) {
      res.divergent = true;
      res.value = std::numeric_limits<double>::infinity();
      return res;
    }
    res.tail = shell.back() * q / (1.0 - q);
  }
  res.value = total + res.tail;
  return res;
}

// ---------------------------------------------------------------- weighted

struct WeightedCertificate {
  std::size_t n = 0;
  // upper (single weighted operator)
  double r = 0;
  BlaschkeProduct zeros;
  double sup_B_phi = 0;
  double delta0 = 0;          // sup |omega(phi(e^{it}))| on {|phi| > r}
  double delta0_direct = 0;   // sup |omega(e^{it})| on the same set
  double omega_sup = 0;       // sampled ||omega||_inf
  double norm_phi = 0;
  double norm_T = 0;          // <= ||omega||_inf ||C_phi||
  double value_upper = 0;
  bool stable = true;
  // lower
  PointSequence Z, W;
  double delta_Z = 0, delta_W = 0, log_delta_Z = 0, log_delta_W = 0;
  double carleson_Z = 0, carleson_W = 0, M_W = 0;
  double inf_ratio = 0;
  double value_theorem = 0;
  double value_constant_free = 0;
};

inline double sup_norm(const Symbol& f, std::size_t samples = 1 << 14) {
  double s = 0.0;
  for (double t : boundary_grid(samples)) s = std::max(s, std::abs(f.on_boundary(t)));
  return s;
}

inline WeightedCertificate weighted_upper_certificate(const Symbol& omega, const Symbol& phi, std::size_t n, double r,
                                                      const BlaschkeProduct& zeros, std::size_t samples = 1 << 14) {
  if (!(r > 0.0 && r < 1.0)) throw error(errc::invalid_argument, "r must lie in (0, 1)");
  if (zeros.degree() + 1 != n) throw error(errc::invalid_argument, "Blaschke degree must be n - 1");
  WeightedCertificate c;
  c.n = n;
  c.r = r;
  c.zeros = zeros;
  auto sweep = [&](std::size_t m, double& b, double& d0, double& dd, double& om) {
    b = d0 = dd = om = 0.0;
    for (double t : boundary_grid(m)) {
      const EvalPoint p = EvalPoint::boundary(t);
      const cplx a = phi.evaluate(p);
      const double w = std::abs(omega.evaluate(p));
      om = std::max(om, w);
      if (std::abs(a) <= r) {
        b = std::max(b, std::exp(blaschke_log_modulus(zeros, a)));
      } else {
        d0 = std::max(d0, std::abs(omega(a)));
        dd = std::max(dd, w);
      }
    }
  };
  double b1, d01, dd1, om1;
  sweep(samples, b1, d01, dd1, om1);
  sweep(2 * samples, c.sup_B_phi, c.delta0, c.delta0_direct, c.omega_sup);
  c.stable = detail::within(b1, c.sup_B_phi, 0.02) && detail::within(d01, c.delta0, 0.02);
  c.norm_phi = operator_norm_bound(phi);
  c.norm_T = c.omega_sup * c.norm_phi;
  c.value_upper = std::sqrt(std::pow(c.sup_B_phi * c.norm_T, 2) + std::pow(c.delta0 * c.norm_phi, 2));
  return c;
}

// Same grid search as optimize_upper, with zeros on the level curve of phi.
inline WeightedCertificate optimize_weighted_upper(const Symbol& omega, const Symbol& phi, std::size_t n,
                                                   const std::vector<double>& rs, unsigned threads = 1,
                                                   std::size_t samples = 1 << 14) {
  if (rs.empty()) throw error(errc::invalid_argument, "empty r grid");
  std::vector<WeightedCertificate> certs(rs.size());
  parallel_for(rs.size(), threads, [&](std::size_t i) {
    certs[i] = weighted_upper_certificate(omega, phi, n, rs[i], blaschke_zeros_for_symbol(phi, rs[i], n), samples);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < certs.size(); ++i)
    if (certs[i].value_upper < certs[best].value_upper) best = i;
  return certs[best];
}

inline WeightedCertificate weighted_lower_certificate(const Symbol& omega, const Symbol& phi, const PointSequence& z) {
  if (z.empty()) throw error(errc::invalid_argument, "empty sequence");
  WeightedCertificate c;
  c.n = z.size();
  c.Z = z;
  double inf = std::numeric_limits<double>::infinity();
  for (const auto& p : z) {
    const cplx a = phi(p);
    c.W.push_back(a);
    inf = std::min(inf, std::norm(omega(p)) * (1.0 - std::norm(p)) / (1.0 - std::norm(a)));
  }
  detail::require_distinct_inside(c.W);
  c.inf_ratio = inf;
  c.log_delta_Z = log_uniform_separation(z);
  c.log_delta_W = log_uniform_separation(c.W);
  c.delta_Z = std::exp(c.log_delta_Z);
  c.delta_W = std::exp(c.log_delta_W);
  c.carleson_Z = carleson_geometric(z);
  c.carleson_W = carleson_geometric(c.W);
  c.M_W = std::sqrt(c.carleson_W) * std::exp(-c.log_delta_W);
  if (inf <= 0.0) return c;
  c.value_theorem =
      std::exp(-0.5 * std::log(c.carleson_W) + c.log_delta_W - 0.5 * std::log(c.carleson_Z) + 0.5 * std::log(inf));
  c.value_constant_free = detail::constant_free(c.log_delta_W, c.log_delta_Z, std::log(inf));
  return c;
}

// ---------------------------------------------------------------- bidisc

// a_n read from a truncated spectrum. Past the horizon the value at n* is
// used when clamping is allowed: a_n <= a_{n*} since approximation numbers
// do not increase.
inline double spectrum_value(const SingularSpectrum& s, std::size_t n, bool clamp, bool* clamped = nullptr) {
  if (n < 1) throw error(errc::invalid_argument, "index must be positive");
  if (n <= s.horizon) return s.at(n);
  if (!clamp || s.horizon == 0)
    throw error(errc::horizon_exceeded,
                "index " + std::to_string(n) + " beyond horizon " + std::to_string(s.horizon));
  if (clamped) *clamped = true;
  return s.at(s.horizon);
}

struct SpectraInputs {
  SingularSpectrum difference;  // C_phi0 - C_phi1
  SingularSpectrum phi0;        // C_phi0
  SingularSpectrum phi1;        // C_phi1
};

struct WeightedDifference {
  double value = 0;
  double first = 0, second = 0;  // the two combinations
  bool clamped = false;
};

// min(||u0|| a_n(D) + ||u0 - u1|| a_n(C_phi1), ||u1|| a_n(D) + ||u0 - u1|| a_n(C_phi0))
// with the norms given explicitly.
inline WeightedDifference weighted_difference_from_norms(double u0, double u1, double u01, std::size_t n,
                                                         const SpectraInputs& s, bool clamp = false) {
  WeightedDifference r;
  const double d = spectrum_value(s.difference, n, clamp, &r.clamped);
  const double c0 = u01 > 0 ? spectrum_value(s.phi0, n, clamp, &r.clamped) : 0.0;
  const double c1 = u01 > 0 ? spectrum_value(s.phi1, n, clamp, &r.clamped) : 0.0;
  r.first = u0 * d + u01 * c1;
  r.second = u1 * d + u01 * c0;
  r.value = std::min(r.first, r.second);
  return r;
}

inline WeightedDifference weighted_difference_bound(const Symbol& u0, const Symbol& u1, std::size_t n,
                                                    const SpectraInputs& s, bool clamp = false) {
  return weighted_difference_from_norms(sup_norm(u0), sup_norm(u1), sup_norm(u0 - u1), n, s, clamp);
}

struct TriangularBound {
  double value = 0;
  std::size_t N = 0;  // n_0 + ... + n_K - K
  std::vector<double> blocks;
  double tail = 0;
  bool clamped = false;
};

// max over k <= K of the block bounds with weights u_i^k, and the tail
// sup_{k > K} (||u0||^k ||C_phi0|| + ||u1||^k ||C_phi1||).
inline TriangularBound triangular_bound(const Symbol& u0, const Symbol& u1, const Symbol& phi0, const Symbol& phi1,
                                        const std::vector<std::size_t>& sizes, const SpectraInputs& s,
                                        bool clamp = false) {
  if (sizes.empty()) throw error(errc::invalid_argument, "need at least one block");
  const double n0 = sup_norm(u0), n1 = sup_norm(u1);
  if (n0 > 1.0 + 1e-12 || n1 > 1.0 + 1e-12) throw error(errc::weight_too_large, "weights must satisfy ||u|| <= 1");
  TriangularBound t;
  const std::size_t K = sizes.size() - 1;
  std::size_t total = 0;
  for (auto v : sizes) total += v;
  t.N = total - K;
  for (std::size_t k = 0; k <= K; ++k) {
    const double diff = k == 0 ? 0.0 : sup_norm(u0.pow(int(k)) - u1.pow(int(k)));
    const auto w = weighted_difference_from_norms(std::pow(n0, double(k)), std::pow(n1, double(k)), diff, sizes[k], s,
                                                  clamp);
    t.clamped = t.clamped || w.clamped;
    t.blocks.push_back(w.value);
  }
  const double c0 = operator_norm_bound(phi0), c1 = operator_norm_bound(phi1);
  t.tail = std::pow(n0, double(K + 1)) * c0 + std::pow(n1, double(K + 1)) * c1;
  t.value = t.tail;
  for (double b : t.blocks) t.value = std::max(t.value, b);
  return t;
}

// ---------------------------------------------------------------- radial lemmas

struct RadialDiagnostics {
  double eps = 0;
  std::vector<double> decay_ratio;     // (1 - |phi(z_{j+1})|)/(1 - |phi(z_j)|)
  double decay_bound = 0;              // e^{-eps/4}
  std::vector<double> mass_ratio_phi;  // (1 - |z_j|^2)/(1 - |phi(z_j)|^2)
  std::vector<double> mass_ratio_psi;
  double mass_bound = 0;               // e^{-n eps/2}/2
  bool decay_holds = true, mass_holds = true;
};

inline RadialDiagnostics radial_diagnostics(const Symbol& phi, const Symbol& psi, std::size_t n) {
  const auto seq = sequence_radial_detail(n);
  RadialDiagnostics d;
  d.eps = seq.eps;
  d.decay_bound = std::exp(-seq.eps / 4.0);
  d.mass_bound = 0.5 * std::exp(-double(n) * seq.eps / 2.0);
  std::vector<double> gap;
  for (std::size_t i = 0; i < seq.z.size(); ++i) {
    const double e = seq.one_minus_z[i];
    const EvalPoint p{seq.z[i], e};
    const double a = std::abs(phi.evaluate(p)), b = std::abs(psi.evaluate(p));
    gap.push_back(1.0 - a);
    const double nz = e * (2.0 - e);
    d.mass_ratio_phi.push_back(nz / (1.0 - a * a));
    d.mass_ratio_psi.push_back(nz / (1.0 - b * b));
    d.mass_holds = d.mass_holds && d.mass_ratio_phi.back() >= d.mass_bound && d.mass_ratio_psi.back() >= d.mass_bound;
  }
  for (std::size_t i = 0; i + 1 < gap.size(); ++i) {
    d.decay_ratio.push_back(gap[i + 1] / gap[i]);
    d.decay_holds = d.decay_holds && d.decay_ratio.back() <= d.decay_bound;
  }
  return d;
}

}  // namespace approxnum
