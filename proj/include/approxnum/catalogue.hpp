#pragma once

// Named symbol families and the textual form `name(key=value, ...)`.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "approxnum/errors.hpp"
#include "approxnum/series.hpp"

namespace approxnum::catalogue {

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline std::string fmt(cplx x) {
  if (x.imag() == 0.0) return fmt(x.real());
  std::ostringstream os;
  os.precision(17);
  os << x.real() << (x.imag() < 0 ? "-" : "+") << std::abs(x.imag()) << "i";
  return os.str();
}

}  // namespace detail

inline Symbol identity() { return Symbol::z().named("identity").as_self_map(); }

inline Symbol constant(cplx c) {
  return Symbol::constant(c).named("constant(c=" + detail::fmt(c) + ")").as_self_map(std::abs(c) <= 1.0);
}

inline Symbol dilation(cplx a) {
  return (a * Symbol::z()).named("dilation(a=" + detail::fmt(a) + ")").as_self_map(std::abs(a) <= 1.0);
}

inline Symbol half_map() { return (0.5 + 0.5 * Symbol::z()).named("half_map").as_self_map(); }

// (1+z)/2 + c (z-1)^alpha with (z-1)^alpha read as e^{i pi alpha}(1-z)^alpha,
// the branch analytic in the disc. Integer alpha gives the exact sign (-1)^alpha.
inline Symbol power_perturbation(double alpha, double c) {
  if (!(alpha > 2.0)) throw error(errc::invalid_argument, "power_perturbation needs alpha > 2");
  if (!(c > 0.0 && c < 1.0 / 128.0)) throw error(errc::invalid_argument, "power_perturbation needs c in (0, 1/128)");
  cplx phase;
  if (alpha == std::round(alpha))
    phase = (static_cast<long long>(alpha) % 2 == 0) ? 1.0 : -1.0;
  else
    phase = std::polar(1.0, std::numbers::pi * alpha);
  const Symbol s = (0.5 + 0.5 * Symbol::z()) + (c * phase) * Symbol::one_minus_z().pow(alpha);
  return s.named("power_perturbation(alpha=" + detail::fmt(alpha) + ",c=" + detail::fmt(c) + ")").as_self_map();
}

inline Symbol corner_map() {
  return (1.0 + Symbol::one_minus_z().pow(0.5)).recip().named("corner_map").as_self_map();
}

// The exponential factor exp(-(1-z)^{-1/2}) is flat at the contact point.
inline Symbol corner_bump() { return (-1.0 * Symbol::one_minus_z().pow(-0.5)).exp().named("corner_bump"); }

inline Symbol corner_perturbation(double c = 0.01) {
  if (!(std::abs(c) > 0.0 && std::abs(c) <= 0.05))
    throw error(errc::invalid_argument, "corner_perturbation needs 0 < |c| <= 0.05");
  const Symbol s = (1.0 + Symbol::one_minus_z().pow(0.5)).recip() + c * corner_bump();
  return s.named("corner_perturbation(c=" + detail::fmt(c) + ")").as_self_map();
}

inline Symbol weight_power(double alpha) {
  return Symbol::one_minus_z().pow(alpha).named("weight_power(alpha=" + detail::fmt(alpha) + ")");
}

// e^{i theta} (a - z)/(1 - conj(a) z); theta = 0 is the involution swapping 0 and a.
inline Symbol mobius(cplx a, double theta = 0.0) {
  if (!(std::abs(a) < 1.0)) throw error(errc::invalid_argument, "mobius needs |a| < 1");
  const Symbol s = std::polar(1.0, theta) * ((a - Symbol::z()) * (1.0 - std::conj(a) * Symbol::z()).recip());
  return s.named("mobius(a=" + detail::fmt(a) + ",theta=" + detail::fmt(theta) + ")").as_self_map();
}

// Parses "1.5", "-2e-3", "0.1+0.2i", "-0.5i".
inline cplx parse_complex(const std::string& text) {
  const char* s = text.c_str();
  char* end = nullptr;
  const double x = std::strtod(s, &end);
  if (end == s) throw error(errc::parse_error, "expected a number, got '" + text + "'");
  if (*end == '\0') return x;
  if (*end == 'i' && end[1] == '\0') return {0.0, x};
  if (*end != '+' && *end != '-') throw error(errc::parse_error, "unexpected '" + std::string(end) + "' in '" + text + "'");
  const char* s2 = end;
  const double y = std::strtod(s2, &end);
  if (end == s2 || *end != 'i' || end[1] != '\0')
    throw error(errc::parse_error, "malformed complex value '" + text + "'");
  return {x, y};
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct Call {
  std::string name;
  std::map<std::string, cplx> args;
};

inline Call parse_call(const std::string& text) {
  const std::string t = trim(text);
  Call out;
  const auto open = t.find('(');
  if (open == std::string::npos) {
    out.name = t;
  } else {
    if (t.back() != ')') throw error(errc::parse_error, "missing ')' in '" + t + "'");
    out.name = trim(t.substr(0, open));
    std::string body = t.substr(open + 1, t.size() - open - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw error(errc::parse_error, "expected key=value, got '" + item + "'");
      const std::string key = trim(item.substr(0, eq));
      if (key.empty()) throw error(errc::parse_error, "empty key in '" + item + "'");
      out.args[key] = parse_complex(trim(item.substr(eq + 1)));
    }
  }
  if (out.name.empty()) throw error(errc::parse_error, "empty symbol name in '" + t + "'");
  for (char ch : out.name)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
      throw error(errc::parse_error, "bad symbol name '" + out.name + "'");
  return out;
}

inline const char* grammar() {
  return "symbol := name | name(key=value, ...)\n"
         "  identity\n"
         "  constant(c=<complex>)\n"
         "  dilation(a=<complex>)\n"
         "  half_map\n"
         "  power_perturbation(alpha=<real > 2>, c=<real in (0, 1/128)>; default c=0.005)\n"
         "  corner_map\n"
         "  corner_perturbation(c=<real>; default 0.01)\n"
         "  corner_bump\n"
         "  weight_power(alpha=<real>)\n"
         "  mobius(a=<complex>, theta=<real>; default theta=0)\n"
         "complex := x | x+yi | x-yi | yi\n";
}

inline Symbol parse(const std::string& text) {
  const Call sp = parse_call(text);
  std::map<std::string, cplx> args = sp.args;
  auto take = [&](const std::string& key, std::optional<cplx> fallback = std::nullopt) -> cplx {
    auto it = args.find(key);
    if (it == args.end()) {
      if (fallback) return *fallback;
      throw error(errc::parse_error, "symbol '" + sp.name + "' needs parameter '" + key + "'");
    }
    const cplx v = it->second;
    args.erase(it);
    return v;
  };
  auto real = [&](const std::string& key, std::optional<double> fallback = std::nullopt) -> double {
    const cplx v = take(key, fallback ? std::optional<cplx>(*fallback) : std::nullopt);
    if (v.imag() != 0.0) throw error(errc::parse_error, "parameter '" + key + "' must be real");
    return v.real();
  };

  Symbol s;
  if (sp.name == "identity") s = identity();
  else if (sp.name == "constant") s = constant(take("c"));
  else if (sp.name == "dilation") s = dilation(take("a"));
  else if (sp.name == "half_map") s = half_map();
  else if (sp.name == "power_perturbation") {
    const double alpha = real("alpha");
    s = power_perturbation(alpha, real("c", 0.005));
  } else if (sp.name == "corner_map") s = corner_map();
  else if (sp.name == "corner_perturbation") s = corner_perturbation(real("c", 0.01));
  else if (sp.name == "corner_bump") s = corner_bump();
  else if (sp.name == "weight_power") s = weight_power(real("alpha"));
  else if (sp.name == "mobius") {
    const cplx a = take("a");
    s = mobius(a, real("theta", 0.0));
  } else
    throw error(errc::parse_error, "unknown symbol '" + sp.name + "'");

  if (!args.empty()) throw error(errc::parse_error, "unknown parameter '" + args.begin()->first + "' for '" + sp.name + "'");
  return s;
}

}  // namespace approxnum::catalogue
