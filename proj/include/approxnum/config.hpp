#pragma once

// Run configuration: a flat key = value file, overridden by flags.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "approxnum/catalogue.hpp"
#include "approxnum/errors.hpp"

namespace approxnum {

struct RunConfig {
  std::string command;
  std::string experiment;  // smooth | corner | weighted | bidisc
  std::string symbol = "identity";
  std::string phi = "half_map";
  std::string psi = "power_perturbation(alpha=3, c=0.005)";
  std::string omega = "weight_power(alpha=1)";
  std::size_t N = 1024;
  std::size_t n_min = 8, n_max = 100;
  std::size_t n = 16;  // index for single certificates
  std::size_t r_count = 32;
  double r_smallest = 1e-7;
  std::size_t samples = 1 << 14;
  double alpha = 3.0;
  std::optional<double> c;  // unset: each experiment uses its own default
  std::string kind = "triangular";
  std::string model = "power";
  std::string input;  // spectrum CSV for `fit`
  std::string basis = "auto";  // auto | kernel | monomial
  std::string out_dir;
  unsigned threads = 1;
  bool certificates = true;
  bool dry_run = false;
};

inline std::string default_out_dir() {
  if (const char* e = std::getenv("APPROXNUM_OUT"); e && *e) return e;
  return "approxnum-out";
}

namespace detail {

inline std::size_t to_count(const std::string& v, const std::string& where) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size() || x <= 0)
    throw error(errc::parse_error, where + ": expected a positive integer, got '" + v + "'");
  return std::size_t(x);
}

inline double to_real(const std::string& v, const std::string& where) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (...) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw error(errc::parse_error, where + ": expected a number, got '" + v + "'");
  return x;
}

inline bool to_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw error(errc::parse_error, where + ": expected true or false, got '" + v + "'");
}

}  // namespace detail

// `where` names the origin ("config.txt:7" or "--N") for error messages.
inline void set_option(RunConfig& c, const std::string& key, const std::string& value, const std::string& where) {
  using namespace detail;
  if (key == "experiment") c.experiment = value;
  else if (key == "symbol") c.symbol = value;
  else if (key == "phi") c.phi = value;
  else if (key == "psi") c.psi = value;
  else if (key == "omega") c.omega = value;
  else if (key == "N") c.N = to_count(value, where);
  else if (key == "n_min") c.n_min = to_count(value, where);
  else if (key == "n_max") c.n_max = to_count(value, where);
  else if (key == "n") c.n = to_count(value, where);
  else if (key == "r_count") c.r_count = to_count(value, where);
  else if (key == "r_smallest") c.r_smallest = to_real(value, where);
  else if (key == "samples") c.samples = to_count(value, where);
  else if (key == "alpha") c.alpha = to_real(value, where);
  else if (key == "c") c.c = to_real(value, where);
  else if (key == "kind") c.kind = value;
  else if (key == "model") c.model = value;
  else if (key == "input") c.input = value;
  else if (key == "basis") c.basis = value;
  else if (key == "out") c.out_dir = value;
  else if (key == "threads") c.threads = unsigned(to_count(value, where));
  else if (key == "certificates") c.certificates = to_bool(value, where);
  else throw error(errc::parse_error, where + ": unknown key '" + key + "'");
}

// Lines are `key = value`; blank lines and lines starting with '#' are skipped.
inline std::vector<std::pair<std::string, std::string>> read_config_text(const std::string& text,
                                                                          const std::string& source,
                                                                          std::vector<std::string>* origins = nullptr) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream is(text);
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    const std::string t = catalogue::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string where = source + ":" + std::to_string(no);
    if (eq == std::string::npos) throw error(errc::parse_error, where + ": expected key = value");
    const std::string key = catalogue::trim(t.substr(0, eq));
    if (key.empty()) throw error(errc::parse_error, where + ": empty key");
    out.emplace_back(key, catalogue::trim(t.substr(eq + 1)));
    if (origins) origins->push_back(where);
  }
  return out;
}

inline void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw error(errc::parse_error, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  std::vector<std::string> origins;
  const auto kv = read_config_text(ss.str(), path, &origins);
  for (std::size_t i = 0; i < kv.size(); ++i) set_option(c, kv[i].first, kv[i].second, origins[i]);
}

inline void require_symbol(const std::string& text, const std::string& key) {
  try {
    catalogue::parse(text);
  } catch (const error& e) {
    throw error(errc::parse_error, key + ": " + e.message());
  }
}

inline void validate(const RunConfig& c) {
  if (c.n_min < 2) throw error(errc::invalid_argument, "n_min must be at least 2");
  if (c.n_max <= c.n_min) throw error(errc::invalid_argument, "n_max must exceed n_min");
  if (!(c.r_smallest > 0.0 && c.r_smallest < 0.5)) throw error(errc::invalid_argument, "r_smallest must lie in (0, 0.5)");
  if (c.basis != "auto" && c.basis != "kernel" && c.basis != "monomial")
    throw error(errc::invalid_argument, "basis must be auto, kernel or monomial");
  for (const auto& [k, v] : {std::pair<const char*, const std::string*>{"symbol", &c.symbol},
                             {"phi", &c.phi},
                             {"psi", &c.psi},
                             {"omega", &c.omega}})
    require_symbol(*v, k);
}

// Creates the directory and probes it with a scratch file.
inline void require_writable(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto probe = std::filesystem::path(dir) / ".approxnum-probe";
  std::ofstream os(probe);
  if (ec || !os) throw error(errc::invalid_argument, "output directory '" + dir + "' is not writable");
  os.close();
  std::filesystem::remove(probe, ec);
}

}  // namespace approxnum
