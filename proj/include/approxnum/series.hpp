#pragma once

// Truncated power series arithmetic and the expression trees (symbols) that
// describe self-maps of the disc and weights.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "approxnum/errors.hpp"

namespace approxnum {

using cplx = std::complex<double>;

// First N Maclaurin coefficients c_0..c_{N-1}.
struct CoefficientVector {
  std::vector<cplx> c;

  CoefficientVector() = default;
  explicit CoefficientVector(std::size_t n) : c(n, cplx(0.0)) {}
  explicit CoefficientVector(std::vector<cplx> v) : c(std::move(v)) {}

  std::size_t size() const { return c.size(); }
  cplx& operator[](std::size_t k) { return c[k]; }
  const cplx& operator[](std::size_t k) const { return c[k]; }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& x : c) s += std::norm(x);
    return s;
  }
  bool is_real(double tol = 0.0) const {
    for (const auto& x : c)
      if (std::abs(x.imag()) > tol) return false;
    return true;
  }
};

inline bool all_finite(const CoefficientVector& v) {
  for (const auto& x : v.c)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

namespace series {

inline CoefficientVector truncate(const CoefficientVector& f, std::size_t n) {
  CoefficientVector g(n);
  for (std::size_t k = 0; k < std::min(n, f.size()); ++k) g[k] = f[k];
  return g;
}

inline CoefficientVector add(const CoefficientVector& f, const CoefficientVector& g, std::size_t n) {
  CoefficientVector h(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k < f.size()) h[k] += f[k];
    if (k < g.size()) h[k] += g[k];
  }
  return h;
}

inline CoefficientVector scale(const CoefficientVector& f, cplx s) {
  CoefficientVector g = f;
  for (auto& x : g.c) x *= s;
  return g;
}

// Index one past the last nonzero coefficient.
inline std::size_t effective_length(const CoefficientVector& f) {
  std::size_t n = f.size();
  while (n > 0 && f[n - 1] == cplx(0.0)) --n;
  return n;
}

// Truncated Cauchy product.
inline CoefficientVector mul(const CoefficientVector& f, const CoefficientVector& g, std::size_t n) {
  CoefficientVector h(n);
  const std::size_t lf = std::min(effective_length(f), n);
  const std::size_t lg = std::min(effective_length(g), n);
  for (std::size_t i = 0; i < lf; ++i) {
    const cplx a = f[i];
    if (a == cplx(0.0)) continue;
    const std::size_t top = std::min(lg, n - i);
    for (std::size_t j = 0; j < top; ++j) h[i + j] += a * g[j];
  }
  return h;
}

inline CoefficientVector int_pow(CoefficientVector base, unsigned k, std::size_t n) {
  CoefficientVector r(n);
  r[0] = 1.0;
  base = truncate(base, n);
  while (k > 0) {
    if (k & 1u) r = mul(r, base, n);
    k >>= 1u;
    if (k > 0) base = mul(base, base, n);
  }
  return r;
}

inline CoefficientVector reciprocal(const CoefficientVector& f, std::size_t n) {
  if (f.size() == 0 || f[0] == cplx(0.0))
    throw error(errc::division_by_zero_constant_term, "reciprocal of a series with zero constant term");
  CoefficientVector g(n);
  const cplx inv = 1.0 / f[0];
  g[0] = inv;
  const std::size_t lf = effective_length(f);
  for (std::size_t k = 1; k < n; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 1; j <= std::min(k, lf - 1); ++j) s += f[j] * g[k - j];
    g[k] = -inv * s;
  }
  return g;
}

// f^beta with the principal branch for f_0^beta:
// k f_0 g_k = sum_{j=1}^{k} (beta j - (k - j)) f_j g_{k-j}.
inline CoefficientVector real_pow(const CoefficientVector& f, double beta, std::size_t n) {
  if (f.size() == 0 || f[0] == cplx(0.0))
    throw error(errc::division_by_zero_constant_term, "real power of a series with zero constant term");
  CoefficientVector g(n);
  g[0] = std::pow(f[0], beta);
  const std::size_t lf = effective_length(f);
  for (std::size_t k = 1; k < n; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 1; j <= std::min(k, lf - 1); ++j)
      s += (beta * double(j) - double(k - j)) * f[j] * g[k - j];
    g[k] = s / (double(k) * f[0]);
  }
  return g;
}

// E' = u'E, i.e. E_k = (1/k) sum_{j=1}^{k} j u_j E_{k-j}.
inline CoefficientVector exp(const CoefficientVector& u, std::size_t n) {
  if (u.size() == 0 || !all_finite(u))
    throw error(errc::exp_of_singular_series, "inner series is not a finite truncated expansion");
  CoefficientVector e(n);
  e[0] = std::exp(u[0]);
  const std::size_t lu = effective_length(u);
  for (std::size_t k = 1; k < n; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 1; j <= std::min(k, lu == 0 ? 0 : lu - 1); ++j) s += double(j) * u[j] * e[k - j];
    e[k] = s / double(k);
  }
  if (!all_finite(e)) throw error(errc::exp_of_singular_series, "exponential overflowed");
  return e;
}

}  // namespace series

// Point of evaluation. Keeping 1 - z separately avoids cancellation near the
// contact point z = 1, where all the interesting boundary behaviour sits.
struct EvalPoint {
  cplx z;
  cplx one_minus_z;

  static EvalPoint at(cplx z) { return {z, 1.0 - z}; }
  static EvalPoint boundary(double t) {
    const double s = std::sin(0.5 * t);
    return {std::polar(1.0, t), cplx(2.0 * s * s, -std::sin(t))};
  }
  static EvalPoint radial(double t, double r) {
    const EvalPoint b = boundary(t);
    return {r * b.z, (1.0 - r) + r * b.one_minus_z};
  }
};

class Symbol {
 public:
  enum class kind { var, one_minus_var, constant, sum, product, int_pow, real_pow, exp, recip };

  Symbol() : Symbol(constant(0.0)) {}

  static Symbol z() { return Symbol(make(kind::var)); }
  static Symbol one_minus_z() { return Symbol(make(kind::one_minus_var)); }
  static Symbol constant(cplx c) {
    auto n = make(kind::constant);
    n->value = c;
    return Symbol(n);
  }

  friend Symbol operator+(const Symbol& a, const Symbol& b) { return binary(kind::sum, a, b); }
  friend Symbol operator*(const Symbol& a, const Symbol& b) { return binary(kind::product, a, b); }
  friend Symbol operator-(const Symbol& a, const Symbol& b) { return a + constant(-1.0) * b; }
  friend Symbol operator*(cplx c, const Symbol& b) { return constant(c) * b; }
  friend Symbol operator+(cplx c, const Symbol& b) { return constant(c) + b; }
  friend Symbol operator-(cplx c, const Symbol& b) { return constant(c) - b; }

  Symbol pow(int k) const {
    if (k < 0) return pow(-k).recip();
    auto n = make(kind::int_pow);
    n->a = node_;
    n->exponent = k;
    return Symbol(n);
  }
  Symbol pow(double beta) const {
    auto n = make(kind::real_pow);
    n->a = node_;
    n->beta = beta;
    return Symbol(n);
  }
  Symbol exp() const { return unary(kind::exp); }
  Symbol recip() const { return unary(kind::recip); }

  Symbol named(std::string name) const {
    Symbol s = *this;
    s.name_ = std::move(name);
    return s;
  }
  Symbol as_self_map(bool flag = true) const {
    Symbol s = *this;
    s.self_map_ = flag;
    return s;
  }

  const std::string& name() const { return name_; }
  bool self_map() const { return self_map_; }
  kind node_kind() const { return node_->k; }

  cplx operator()(cplx z) const { return evaluate(EvalPoint::at(z)); }

  // Falls back to the radial limit r -> 1 when the closed-form value at a
  // boundary point is not finite.
  cplx evaluate(const EvalPoint& p) const {
    cplx v = eval(*node_, p);
    if (finite(v)) return v;
    if (std::abs(p.z) >= 1.0 - 1e-12) {
      const double t = std::arg(p.z);
      cplx last = v;
      bool have = false;
      for (int k = 20; k <= 52; k += 4) {
        const cplx w = eval(*node_, EvalPoint::radial(t, 1.0 - std::ldexp(1.0, -k)));
        if (finite(w)) {
          last = w;
          have = true;
        }
      }
      if (have) return last;
    }
    throw error(errc::non_finite, "symbol '" + name_ + "' is not finite at the requested point");
  }
  cplx on_boundary(double t) const { return evaluate(EvalPoint::boundary(t)); }

  // Exp and reciprocal nodes are expanded with twice the requested order
  // before the final truncation.
  CoefficientVector taylor(std::size_t n) const {
    if (n == 0) throw error(errc::invalid_argument, "taylor order must be positive");
    const std::size_t inner = contains_composite(*node_) ? 2 * n : n;
    return series::truncate(expand(*node_, inner), n);
  }

  bool structurally_equal(const Symbol& o) const { return same(*node_, *o.node_); }
  // Whether the tree mentions z at all.
  bool is_constant() const { return !mentions_z(*node_); }

 private:
  struct Node {
    kind k;
    cplx value{0.0};
    int exponent = 0;
    double beta = 0.0;
    std::shared_ptr<const Node> a, b;
  };
  using NodePtr = std::shared_ptr<Node>;

  explicit Symbol(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static NodePtr make(kind k) {
    auto n = std::make_shared<Node>();
    n->k = k;
    return n;
  }
  static Symbol binary(kind k, const Symbol& x, const Symbol& y) {
    auto n = make(k);
    n->a = x.node_;
    n->b = y.node_;
    return Symbol(n);
  }
  Symbol unary(kind k) const {
    auto n = make(k);
    n->a = node_;
    return Symbol(n);
  }

  static bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

  static cplx eval(const Node& n, const EvalPoint& p) {
    switch (n.k) {
      case kind::var: return p.z;
      case kind::one_minus_var: return p.one_minus_z;
      case kind::constant: return n.value;
      case kind::sum: return eval(*n.a, p) + eval(*n.b, p);
      case kind::product: {
        const cplx x = eval(*n.a, p);
        const cplx y = eval(*n.b, p);
        // Real scalars multiply componentwise so that infinities stay
        // signed instead of turning into NaN.
        if (n.a->k == kind::constant && x.imag() == 0.0) return {x.real() * y.real(), x.real() * y.imag()};
        if (n.b->k == kind::constant && y.imag() == 0.0) return {y.real() * x.real(), y.real() * x.imag()};
        if (x == cplx(0.0) || y == cplx(0.0)) return 0.0;
        return x * y;
      }
      case kind::int_pow: {
        const cplx x = eval(*n.a, p);
        cplx r = 1.0;
        for (int i = 0; i < n.exponent; ++i) r *= x;
        return r;
      }
      case kind::real_pow: {
        const cplx x = eval(*n.a, p);
        if (x == cplx(0.0)) {
          if (n.beta > 0) return 0.0;
          if (n.beta == 0) return 1.0;
          return {std::numeric_limits<double>::infinity(), 0.0};
        }
        if (x.imag() == 0.0 && x.real() > 0.0) return std::pow(x.real(), n.beta);
        return std::pow(x, n.beta);
      }
      case kind::exp: {
        const cplx x = eval(*n.a, p);
        if (x.real() == -std::numeric_limits<double>::infinity()) return 0.0;
        return std::exp(x);
      }
      case kind::recip: {
        const cplx x = eval(*n.a, p);
        if (x == cplx(0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
        if (x.imag() == 0.0) return 1.0 / x.real();
        return 1.0 / x;
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  }

  static CoefficientVector expand(const Node& n, std::size_t m) {
    switch (n.k) {
      case kind::var: {
        CoefficientVector v(m);
        if (m > 1) v[1] = 1.0;
        return v;
      }
      case kind::one_minus_var: {
        CoefficientVector v(m);
        v[0] = 1.0;
        if (m > 1) v[1] = -1.0;
        return v;
      }
      case kind::constant: {
        CoefficientVector v(m);
        v[0] = n.value;
        return v;
      }
      case kind::sum: return series::add(expand(*n.a, m), expand(*n.b, m), m);
      case kind::product:
        if (n.a->k == kind::constant) return series::scale(expand(*n.b, m), n.a->value);
        if (n.b->k == kind::constant) return series::scale(expand(*n.a, m), n.b->value);
        return series::mul(expand(*n.a, m), expand(*n.b, m), m);
      case kind::int_pow: return series::int_pow(expand(*n.a, m), unsigned(n.exponent), m);
      case kind::real_pow: return series::real_pow(expand(*n.a, m), n.beta, m);
      case kind::exp: return series::exp(expand(*n.a, m), m);
      case kind::recip: return series::reciprocal(expand(*n.a, m), m);
    }
    return CoefficientVector(m);
  }

  static bool contains_composite(const Node& n) {
    if (n.k == kind::exp || n.k == kind::recip) return true;
    return (n.a && contains_composite(*n.a)) || (n.b && contains_composite(*n.b));
  }
  static bool mentions_z(const Node& n) {
    if (n.k == kind::var || n.k == kind::one_minus_var) return true;
    return (n.a && mentions_z(*n.a)) || (n.b && mentions_z(*n.b));
  }
  static bool same(const Node& x, const Node& y) {
    if (&x == &y) return true;
    if (x.k != y.k || x.value != y.value || x.exponent != y.exponent || x.beta != y.beta) return false;
    if (bool(x.a) != bool(y.a) || bool(x.b) != bool(y.b)) return false;
    return (!x.a || same(*x.a, *y.a)) && (!x.b || same(*x.b, *y.b));
  }

  std::shared_ptr<const Node> node_;
  std::string name_ = "expr";
  bool self_map_ = false;
};

}  // namespace approxnum
