#pragma once

// Galerkin discretisation on a lattice of reproducing kernels clustered at
// the contact point z = 1.
//
// The lattice points a_j give an orthonormal Takenaka-Malmquist basis
//   e_j(z) = sqrt(1 - |a_j|^2) / (1 - conj(a_j) z) * prod_{i<j} b_{a_i}(z)
// of E = span{k_{a_j}}. For T = sum_i c_i M_{w_i} C_{phi_i} the matrix
// sqrt(q_m) (T e_j)(e^{i t_m}) over boundary quadrature nodes t_m has the
// singular values of T restricted to E, which bound a_n(T) from below.
// Monomial truncations converge far too slowly for symbols touching the
// circle at 1; this basis resolves the contact point geometrically.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "approxnum/boundary.hpp"
#include "approxnum/errors.hpp"
#include "approxnum/operator.hpp"
#include "approxnum/series.hpp"

namespace approxnum {

struct LatticeOptions {
  double depth = 18.0;        // deepest level has 1 - |a| ~ e^{-depth}
  double max_angle = 1.45;    // |arg(1 - a)| bound
  double containment = 1.6;   // keep 1 - s e^{i theta} only when s < containment * cos(theta)
  unsigned shells = 0;        // dyadic quadrature shells; 0 picks from the symbols
  unsigned nodes = 0;         // Gauss-Legendre nodes per shell; 0 picks from N
  double tail = 14.0;         // extra depth covered by the quadrature past the contact angle
  unsigned threads = 1;
  std::size_t memory_budget = std::size_t(1536) << 20;  // bytes for the row buffer
};

struct BoundaryTerm {
  cplx coefficient = 1.0;
  std::optional<Symbol> weight;
  Symbol map;
};

struct LatticePoint {
  cplx a;
  cplx one_minus_a;
  double one_minus_abs_sq;  // 1 - |a|^2 without cancellation
};

namespace detail {

inline std::vector<LatticePoint> lattice_with_step(double h, const LatticeOptions& o) {
  std::vector<LatticePoint> pts;
  pts.push_back({0.0, 1.0, 1.0});
  const long jmax = long(std::ceil(o.depth / h));
  const long amax = long(std::floor(o.max_angle / h));
  for (long j = 0; j <= jmax; ++j) {
    const double s = std::exp(-double(j) * h);
    for (long k = -amax; k <= amax; ++k) {
      if (j == 0 && k == 0) continue;  // the origin, already present
      const double th = double(k) * h;
      if (!(s < o.containment * std::cos(th))) continue;
      const cplx d = std::polar(s, th);
      pts.push_back({1.0 - d, d, 2.0 * s * std::cos(th) - s * s});
    }
  }
  return pts;
}

}  // namespace detail

// Exactly n points: the step is shrunk until the lattice holds at least n
// points, and the deepest surplus points are dropped.
inline std::vector<LatticePoint> kernel_lattice(std::size_t n, const LatticeOptions& o = {}) {
  if (n < 1) throw error(errc::invalid_argument, "lattice size must be positive");
  double h = std::sqrt(o.depth * 2.0 * o.max_angle / double(n));
  auto pts = detail::lattice_with_step(h, o);
  while (pts.size() < n) {
    h *= 0.99;
    pts = detail::lattice_with_step(h, o);
  }
  pts.resize(n);
  return pts;
}

// Smallest grid angle at which the image of the boundary reaches the
// deepest lattice level.
inline double contact_angle(const Symbol& phi, double depth) {
  const double target = std::exp(-depth);
  double last = std::numbers::pi;
  for (int m = 1; m <= 8 * 1000; ++m) {
    const double t = std::numbers::pi * std::exp2(-double(m) / 8.0);
    if (t < 1e-300) break;
    const cplx a = phi.on_boundary(t), b = phi.on_boundary(-t);
    if (std::abs(1.0 - a) < target && std::abs(1.0 - b) < target) return last;
    last = t;
  }
  return last;
}

struct LatticePlan {
  unsigned shells = 0;
  unsigned nodes = 0;
  std::size_t rows = 0;
};

inline LatticePlan plan_lattice(const std::vector<BoundaryTerm>& terms, std::size_t n, const LatticeOptions& o) {
  LatticePlan p;
  // Shells down to where the images sit e^{-tail} deeper than the last
  // lattice level; the node count only has to resolve the contact shells.
  double core = std::numbers::pi, deep = std::numbers::pi;
  for (const auto& term : terms) {
    core = std::min(core, contact_angle(term.map, o.depth));
    deep = std::min(deep, contact_angle(term.map, o.depth + o.tail));
  }
  const double spanned = std::max(1.0, std::log2(std::numbers::pi / core));
  const unsigned core_shells = unsigned(std::clamp(std::ceil(spanned) + 4.0, 30.0, 1000.0));
  if (o.shells) {
    p.shells = o.shells;
  } else {
    const double reach = std::max(1.0, std::log2(std::numbers::pi / deep));
    p.shells = unsigned(std::clamp(std::ceil(reach) + 4.0, double(core_shells), 1000.0));
  }
  if (o.nodes) {
    p.nodes = o.nodes;
  } else {
    // The basis functions wind once per lattice point met by the image
    // curve; the shells spanned by the contact region share that winding.
    const double per_shell = 1.25 * double(n) / double(std::max(1u, std::min(core_shells, p.shells) - 4));
    p.nodes = unsigned(std::max(48.0, std::ceil(per_shell)));
  }
  p.rows = 2 * std::size_t(p.shells) * p.nodes;
  return p;
}

// The shells resolve one contact region around t = 0, so |1 - phi(e^{it})|
// may not drop well below its values at smaller |t| (a second approach to 1
// elsewhere on the circle).
inline bool single_contact_at_one(const Symbol& phi) {
  const double pi = std::numbers::pi;
  std::vector<double> ts;
  for (int m = 0; m <= 8 * 40; ++m) ts.push_back(pi * std::exp2(-double(m) / 8.0));
  for (int m = 1; m < 2048; ++m) ts.push_back(pi * double(m) / 2048.0);
  std::sort(ts.begin(), ts.end());
  for (double sign : {1.0, -1.0}) {
    std::vector<double> d(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) d[i] = std::abs(1.0 - phi.on_boundary(sign * ts[i]));
    double inner = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      while (ts[j] <= 0.5 * ts[i]) inner = std::max(inner, d[j++]);
      if (d[i] < 0.25 * inner) return false;
    }
  }
  return true;
}

// One row sqrt(q) * sum_i c_i w_i(e^{it}) e_j(phi_i(e^{it})), j < n.
inline void lattice_row(const std::vector<BoundaryTerm>& terms, const std::vector<LatticePoint>& pts, double t,
                        double q, cplx* out, std::size_t stride) {
  const std::size_t n = pts.size();
  const double sq = std::sqrt(q);
  const EvalPoint p = EvalPoint::boundary(t);
  for (std::size_t j = 0; j < n; ++j) out[j * stride] = 0.0;
  for (const auto& term : terms) {
    cplx c = term.coefficient * sq;
    if (term.weight) c *= term.weight->evaluate(p);
    if (c == cplx(0.0)) continue;
    const cplx z = term.map.evaluate(p);
    const cplx omz = 1.0 - z;
    cplx b = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& L = pts[j];
      // 1 - conj(a) z = (1 - conj(a)) + conj(a)(1 - z)
      const cplx den = std::conj(L.one_minus_a) + std::conj(L.a) * omz;
      out[j * stride] += c * b * (std::sqrt(L.one_minus_abs_sq) / den);
      b *= (z - L.a) / den;
    }
  }
}

struct LatticeResult {
  SingularSpectrum spectrum;
  LatticePlan plan;
};

inline LatticeResult lattice_spectrum(const std::vector<BoundaryTerm>& terms, std::size_t n,
                                      const LatticeOptions& o = {}) {
  if (terms.empty()) throw error(errc::invalid_argument, "no operator terms");
  for (const auto& term : terms) {
    require_self_map(term.map);
    if (!single_contact_at_one(term.map))
      throw error(errc::invalid_argument, "kernel basis needs the boundary image to approach 1 only near t = 0 (" +
                                              term.map.name() + "); use the monomial basis");
  }
  const auto pts = kernel_lattice(n, o);
  const LatticePlan plan = plan_lattice(terms, n, o);
  const Quadrature quad = dyadic_shells(plan.shells, plan.nodes);
  const std::size_t total = quad.t.size();

  // Rows are folded into a running triangular factor R: each pass factors
  // [R; next block] in place.
  const std::size_t bytes_per_row = n * sizeof(cplx);
  std::size_t block = o.memory_budget / bytes_per_row;
  block = block > n ? block - n : 0;
  block = std::max<std::size_t>(block, n);
  block = std::min(block, total);

  Eigen::MatrixXcd work(std::min(n + block, total + n), n);
  std::size_t r_rows = 0;
  std::size_t next = 0;
  while (next < total) {
    const std::size_t take = std::min(block, total - next);
    parallel_for(take, o.threads, [&](std::size_t i) {
      lattice_row(terms, pts, quad.t[next + i], quad.w[next + i], &work(r_rows + i, 0), std::size_t(work.rows()));
    });
    next += take;
    const std::size_t filled = r_rows + take;
    auto active = work.topRows(filled);
    if (!active.allFinite()) throw error(errc::non_finite, "boundary rows are not finite");
    Eigen::HouseholderQR<Eigen::Ref<Eigen::MatrixXcd>> qr(active);
    r_rows = std::min(filled, n);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = c + 1; r < r_rows; ++r) work(r, c) = 0.0;
  }

  LatticeResult res;
  res.plan = plan;
  res.spectrum.sigma = singular_values(work.topRows(r_rows).triangularView<Eigen::Upper>().toDenseMatrix());
  res.spectrum.sigma.resize(n, 0.0);
  res.spectrum.N = n;
  res.spectrum.horizon = n;
  res.spectrum.basis = "kernel";
  return res;
}

inline SpectrumBuilder lattice_builder(std::vector<BoundaryTerm> terms, LatticeOptions o = {}) {
  return [terms = std::move(terms), o](std::size_t n) { return lattice_spectrum(terms, n, o).spectrum; };
}

inline std::vector<BoundaryTerm> composition_terms(const Symbol& phi) { return {{1.0, std::nullopt, phi}}; }
inline std::vector<BoundaryTerm> weighted_terms(const Symbol& omega, const Symbol& phi) {
  return {{1.0, omega, phi}};
}
inline std::vector<BoundaryTerm> difference_terms(const Symbol& phi, const Symbol& psi) {
  return {{1.0, std::nullopt, phi}, {-1.0, std::nullopt, psi}};
}

}  // namespace approxnum
