#pragma once

// JSON and CSV forms of spectra, fits and certificates.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "approxnum/bounds.hpp"
#include "approxnum/errors.hpp"
#include "approxnum/fit.hpp"
#include "approxnum/hardy.hpp"
#include "approxnum/operator.hpp"

namespace approxnum {

using json = nlohmann::ordered_json;

// Non-finite doubles have no JSON literal; they are written as strings.
inline json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline double num_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  return std::nan("");
}

inline json points_json(const std::vector<cplx>& z) {
  json a = json::array();
  for (const auto& p : z) a.push_back({num(p.real()), num(p.imag())});
  return a;
}

inline json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline std::vector<double> nums_from(const json& a) {
  std::vector<double> v;
  for (const auto& x : a) v.push_back(num_from(x));
  return v;
}

inline json to_json(const SingularSpectrum& s) {
  return {{"N", s.N}, {"horizon", s.horizon}, {"basis", s.basis}, {"sigma", nums(s.sigma)}};
}

inline SingularSpectrum spectrum_from_json(const json& j) {
  SingularSpectrum s;
  s.N = j.at("N").get<std::size_t>();
  s.horizon = j.at("horizon").get<std::size_t>();
  s.basis = j.at("basis").get<std::string>();
  s.sigma = nums_from(j.at("sigma"));
  return s;
}

inline json to_json(const DecayFit& f) {
  return {{"model", model_name(f.model)}, {"rate", num(f.rate)},   {"log_prefactor", num(f.log_prefactor)},
          {"q", num(f.q)},                {"r2", num(f.r2)},       {"n_min", f.n_min},
          {"n_max", f.n_max}};
}

inline json to_json(const LowerCertificate& c) {
  return {{"kind", "lower"},
          {"n", c.n},
          {"Z", points_json(c.Z)},
          {"W", points_json(c.W)},
          {"delta_Z", num(c.delta_Z)},
          {"delta_W", num(c.delta_W)},
          {"log_delta_Z", num(c.log_delta_Z)},
          {"log_delta_W", num(c.log_delta_W)},
          {"carleson_Z", num(c.carleson_Z)},
          {"carleson_W", num(c.carleson_W)},
          {"M_W", num(c.M_W)},
          {"inf_ratio", num(c.inf_ratio)},
          {"value_theorem", num(c.value_theorem)},
          {"value_constant_free", num(c.value_constant_free)},
          {"constants", "unspecified"}};
}

inline json to_json(const UpperCertificate& c) {
  return {{"kind", "upper"},
          {"n", c.n},
          {"r", num(c.r)},
          {"zeros", points_json(c.zeros.zeros)},
          {"sup_B_phi", num(c.sup_B_phi)},
          {"sup_B_psi", num(c.sup_B_psi)},
          {"sup_w_phi", num(c.sup_w_phi)},
          {"sup_w_psi", num(c.sup_w_psi)},
          {"empty_B_phi", c.empty_B_phi},
          {"empty_B_psi", c.empty_B_psi},
          {"empty_w_phi", c.empty_w_phi},
          {"empty_w_psi", c.empty_w_psi},
          {"norm_phi", num(c.norm_phi)},
          {"norm_psi", num(c.norm_psi)},
          {"value", num(c.value)},
          {"stable", c.stable},
          {"samples", c.samples},
          {"constants", "unspecified"},
          {"sampled_supremum", true}};
}

inline json to_json(const OptimizedUpper& o) {
  json j = to_json(o.best);
  j["r_trace"] = nums(o.r_trace);
  j["value_trace"] = nums(o.value_trace);
  return j;
}

inline json to_json(const WeightedCertificate& c) {
  return {{"kind", "weighted"},
          {"n", c.n},
          {"r", num(c.r)},
          {"zeros", points_json(c.zeros.zeros)},
          {"sup_B_phi", num(c.sup_B_phi)},
          {"delta0", num(c.delta0)},
          {"delta0_direct", num(c.delta0_direct)},
          {"omega_sup", num(c.omega_sup)},
          {"norm_phi", num(c.norm_phi)},
          {"norm_T", num(c.norm_T)},
          {"value_upper", num(c.value_upper)},
          {"stable", c.stable},
          {"Z", points_json(c.Z)},
          {"W", points_json(c.W)},
          {"delta_Z", num(c.delta_Z)},
          {"delta_W", num(c.delta_W)},
          {"carleson_Z", num(c.carleson_Z)},
          {"carleson_W", num(c.carleson_W)},
          {"M_W", num(c.M_W)},
          {"inf_ratio", num(c.inf_ratio)},
          {"value_theorem", num(c.value_theorem)},
          {"value_constant_free", num(c.value_constant_free)},
          {"constants", "unspecified"},
          {"sampled_supremum", true}};
}

inline json to_json(const HsResult& h) {
  return {{"kind", "hs_norm"},      {"value", num(h.value)},   {"squared", true},
          {"divergent", h.divergent}, {"tail", num(h.tail)}, {"shell_ratio", num(h.shell_ratio)},
          {"shells", h.shells}};
}

inline json to_json(const TriangularBound& t) {
  return {{"kind", "triangular"}, {"value", num(t.value)}, {"N", t.N},
          {"blocks", nums(t.blocks)}, {"tail", num(t.tail)}, {"clamped", t.clamped}};
}

inline json to_json(const RadialDiagnostics& d) {
  return {{"kind", "radial"},
          {"eps", num(d.eps)},
          {"decay_ratio", nums(d.decay_ratio)},
          {"decay_bound", num(d.decay_bound)},
          {"mass_ratio_phi", nums(d.mass_ratio_phi)},
          {"mass_ratio_psi", nums(d.mass_ratio_psi)},
          {"mass_bound", num(d.mass_bound)},
          {"decay_holds", d.decay_holds},
          {"mass_holds", d.mass_holds}};
}

inline json to_json(const CarlesonEstimate& e) {
  return {{"geometric", num(e.geometric)}, {"log_bound", num(e.log_bound)}, {"best_delta", num(e.best_delta)},
          {"best_theta", num(e.best_theta)}, {"levels", e.levels},         {"windows", e.windows}};
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw error(errc::invalid_argument, "cannot write '" + path + "'");
  os << text;
  if (!os) throw error(errc::invalid_argument, "write to '" + path + "' failed");
}

inline void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline void write_spectrum_csv(const std::string& path, const SingularSpectrum& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw error(errc::invalid_argument, "cannot write '" + path + "'");
  write_csv(os, s);
}

}  // namespace approxnum
