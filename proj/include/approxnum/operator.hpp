#pragma once

// Truncated matrices of composition operators in the monomial basis, their
// singular values, tensor products and the doubling diagnostic.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "approxnum/boundary.hpp"
#include "approxnum/errors.hpp"
#include "approxnum/series.hpp"

namespace approxnum {

struct TruncatedOperator {
  Eigen::MatrixXcd matrix;
  std::string symbol;
  std::string weight = "1";
  std::size_t N = 0;
};

struct SingularSpectrum {
  std::vector<double> sigma;
  std::size_t N = 0;
  std::size_t horizon = 0;  // n* (1-based); values up to it are trusted
  std::string basis = "monomial";

  std::size_t size() const { return sigma.size(); }
  // 1-based access, as in a_n.
  double at(std::size_t n) const { return sigma.at(n - 1); }
};

inline void require_self_map(const Symbol& f) {
  const auto rep = validate_self_map(f, 4096);
  if (!rep.pass)
    throw error(errc::not_self_map, "'" + f.name() + "' reaches modulus " + std::to_string(rep.max_modulus) +
                                        " on the boundary");
}

namespace detail {

// out[i] = sum_j a[j] b[i-j] for i < n; the output range is split across
// workers so every entry is produced by one deterministic loop.
template <class T>
void cauchy(const std::vector<T>& a, std::size_t la, const std::vector<T>& b, std::size_t lb, std::vector<T>& out,
            std::size_t n, unsigned threads) {
  out.assign(n, T(0));
  const std::size_t chunk = 256;
  const std::size_t blocks = (n + chunk - 1) / chunk;
  parallel_for(blocks, threads, [&](std::size_t blk) {
    const std::size_t i0 = blk * chunk, i1 = std::min(n, i0 + chunk);
    for (std::size_t i = i0; i < i1; ++i) {
      T s(0);
      const std::size_t jlo = (i + 1 > lb) ? i + 1 - lb : 0;
      const std::size_t jhi = std::min(i + 1, la);
      for (std::size_t j = jlo; j < jhi; ++j) s += a[j] * b[i - j];
      out[i] = s;
    }
  });
}

template <class T>
std::size_t trimmed(const std::vector<T>& v) {
  std::size_t n = v.size();
  while (n > 0 && v[n - 1] == T(0)) --n;
  return n;
}

template <class T>
T from_cplx(cplx x) {
  if constexpr (std::is_same_v<T, double>)
    return x.real();
  else
    return x;
}

// Columns w * f^k, k < n, of the truncated coefficients.
template <class T>
Eigen::MatrixXcd power_columns(const CoefficientVector& w, const CoefficientVector& f, std::size_t n,
                               unsigned threads) {
  std::vector<T> base(n), col(n), next;
  for (std::size_t k = 0; k < n; ++k) {
    base[k] = from_cplx<T>(f[k]);
    col[k] = from_cplx<T>(w[k]);
  }
  const std::size_t lb = trimmed(base);
  Eigen::MatrixXcd m(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) m(i, k) = cplx(col[i]);
    if (k + 1 < n) {
      cauchy(col, trimmed(col), base, lb, next, n, threads);
      col.swap(next);
    }
  }
  return m;
}

inline Eigen::MatrixXcd power_matrix(const CoefficientVector& w, const CoefficientVector& f, std::size_t n,
                                     unsigned threads) {
  if (w.is_real() && f.is_real()) return power_columns<double>(w, f, n, threads);
  return power_columns<cplx>(w, f, n, threads);
}

}  // namespace detail

inline TruncatedOperator weighted_composition_matrix(const Symbol& omega, const Symbol& phi, std::size_t n,
                                                     unsigned threads = 1) {
  if (n < 1) throw error(errc::invalid_argument, "truncation must be positive");
  require_self_map(phi);
  const auto w = omega.taylor(n);
  if (!all_finite(w)) throw error(errc::non_finite, "weight coefficients are not finite");
  TruncatedOperator op;
  op.matrix = detail::power_matrix(w, phi.taylor(n), n, threads);
  op.symbol = phi.name();
  op.weight = omega.name();
  op.N = n;
  return op;
}

inline TruncatedOperator composition_matrix(const Symbol& phi, std::size_t n, unsigned threads = 1) {
  auto op = weighted_composition_matrix(Symbol::constant(1.0).named("1"), phi, n, threads);
  op.weight = "1";
  return op;
}

inline TruncatedOperator difference_matrix(const Symbol& phi, const Symbol& psi, std::size_t n, unsigned threads = 1) {
  auto a = composition_matrix(phi, n, threads);
  const auto b = composition_matrix(psi, n, threads);
  a.matrix -= b.matrix;
  a.symbol = phi.name() + " - " + psi.name();
  return a;
}

// Dense SVD (values only), sorted non-increasing.
inline std::vector<double> singular_values(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return {};
  if (!a.allFinite()) throw error(errc::numerical_breakdown, "matrix has non-finite entries");
  Eigen::VectorXd s;
  if (a.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a.real());
    if (svd.info() != Eigen::Success) throw error(errc::numerical_breakdown, "SVD did not converge");
    s = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
    if (svd.info() != Eigen::Success) throw error(errc::numerical_breakdown, "SVD did not converge");
    s = svd.singularValues();
  }
  std::vector<double> out(s.data(), s.data() + s.size());
  std::stable_sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

inline SingularSpectrum singular_spectrum(const TruncatedOperator& a) {
  SingularSpectrum s;
  s.sigma = singular_values(a.matrix);
  s.N = a.N;
  s.horizon = s.sigma.size();
  return s;
}

inline SingularSpectrum difference_spectrum(const Symbol& phi, const Symbol& psi, std::size_t n, unsigned threads = 1) {
  if (phi.structurally_equal(psi)) {
    require_self_map(phi);
    SingularSpectrum s;
    s.sigma.assign(n, 0.0);
    s.N = n;
    s.horizon = n;
    return s;
  }
  return singular_spectrum(difference_matrix(phi, psi, n, threads));
}

// ||C_phi|| <= sqrt((1 + |phi(0)|) / (1 - |phi(0)|)).
inline double operator_norm_bound(const Symbol& phi) {
  const double a = std::abs(phi(0.0));
  if (a >= 1.0) throw error(errc::boundary_fixed_origin, "|phi(0)| >= 1");
  return std::sqrt((1.0 + a) / (1.0 - a));
}

// Largest `count` products s_m t_n. The horizon is the longest prefix built
// only from trusted factors.
inline SingularSpectrum tensor_spectrum(const SingularSpectrum& s, const SingularSpectrum& t, std::size_t count) {
  if (s.sigma.empty() || t.sigma.empty()) throw error(errc::invalid_argument, "empty spectrum");
  struct P {
    double v;
    std::size_t m, n;
  };
  std::vector<P> all;
  all.reserve(s.size() * t.size());
  for (std::size_t m = 0; m < s.size(); ++m)
    for (std::size_t n = 0; n < t.size(); ++n) all.push_back({s.sigma[m] * t.sigma[n], m, n});
  std::stable_sort(all.begin(), all.end(), [](const P& a, const P& b) { return a.v > b.v; });
  count = std::min(count, all.size());
  SingularSpectrum out;
  out.N = s.N * t.N;
  out.basis = s.basis == t.basis ? s.basis : s.basis + "x" + t.basis;
  out.sigma.resize(count);
  out.horizon = count;
  for (std::size_t i = 0; i < count; ++i) {
    out.sigma[i] = all[i].v;
    if (out.horizon == count && (all[i].m >= s.horizon || all[i].n >= t.horizon)) out.horizon = i;
  }
  return out;
}

// Largest n* such that sigma_n agrees within `rel` between the two spectra for
// all n <= n*.
inline std::size_t agreement_horizon(const std::vector<double>& a, const std::vector<double>& b, double rel = 0.01) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = a[i], y = b[i];
    const double scale = std::max(std::abs(x), std::abs(y));
    if (scale < 1e-300) continue;
    if (std::abs(x - y) > rel * scale) return i;
  }
  return n;
}

using SpectrumBuilder = std::function<SingularSpectrum(std::size_t)>;

struct HorizonReport {
  SingularSpectrum coarse;  // at N0, annotated with n*
  SingularSpectrum fine;    // at 2 N0
};

inline HorizonReport convergence_report(const SpectrumBuilder& build, std::size_t n0) {
  if (n0 < 16) throw error(errc::invalid_argument, "doubling diagnostic needs N0 >= 16");
  HorizonReport r{build(n0), build(2 * n0)};
  r.coarse.horizon = agreement_horizon(r.coarse.sigma, r.fine.sigma);
  r.fine.horizon = r.coarse.horizon;
  return r;
}

inline SingularSpectrum convergence_horizon(const SpectrumBuilder& build, std::size_t n0) {
  return convergence_report(build, n0).coarse;
}

inline void write_csv(std::ostream& os, const SingularSpectrum& s) {
  os << "n,sigma,N,horizon\n";
  char buf[64];
  for (std::size_t i = 0; i < s.sigma.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", s.sigma[i]);
    os << (i + 1) << ',' << buf << ',' << s.N << ',' << s.horizon << '\n';
  }
}

}  // namespace approxnum
