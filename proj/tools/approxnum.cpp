// approxnum: approximation numbers of (differences of) composition
// operators on H^2 from the command line.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "approxnum/bounds.hpp"
#include "approxnum/catalogue.hpp"
#include "approxnum/config.hpp"
#include "approxnum/experiments.hpp"
#include "approxnum/fit.hpp"
#include "approxnum/io.hpp"
#include "approxnum/lattice.hpp"
#include "approxnum/operator.hpp"

using namespace approxnum;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

struct Table {
  std::vector<std::pair<std::string, std::string>> rows;
  void add(const std::string& k, const std::string& v) { rows.emplace_back(k, v); }
  void add(const std::string& k, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    add(k, std::string(buf));
  }
  void print(std::ostream& os) const {
    std::size_t w = 0;
    for (const auto& r : rows) w = std::max(w, r.first.size());
    for (const auto& r : rows) os << r.first << std::string(w - r.first.size() + 2, ' ') << r.second << '\n';
  }
};

std::string out_dir(const RunConfig& c) { return c.out_dir.empty() ? default_out_dir() : c.out_dir; }

ExperimentOptions experiment_options(const RunConfig& c) {
  ExperimentOptions o;
  o.N = c.N;
  o.n_min = c.n_min;
  o.n_max = c.n_max;
  o.r_count = c.r_count;
  o.r_smallest = c.r_smallest;
  o.samples = c.samples;
  o.threads = c.threads;
  o.basis = c.basis;
  o.certificates = c.certificates;
  return o;
}

// Spectrum with the doubling diagnostic when N is large enough for it.
SingularSpectrum measured(const std::vector<BoundaryTerm>& terms, const RunConfig& c, Table& t) {
  ExperimentOptions o = experiment_options(c);
  o.basis = resolve_basis(c.basis, terms);
  t.add("basis", o.basis);
  if (c.N < 16) {
    auto s = term_builder(terms, o)(c.N);
    s.basis = o.basis;
    return s;
  }
  auto s = measure(terms, o).coarse;
  s.basis = o.basis;
  return s;
}

void summarise_spectrum(const SingularSpectrum& s, Table& t) {
  t.add("N", std::to_string(s.N));
  t.add("horizon", std::to_string(s.horizon));
  for (std::size_t n : {1, 2, 4, 8, 16, 32, 64, 100})
    if (n <= s.size()) t.add("sigma_" + std::to_string(n), s.at(n));
}

void write_spectrum(const SingularSpectrum& s, const RunConfig& c, Table& t) {
  require_writable(out_dir(c));
  const auto p = (std::filesystem::path(out_dir(c)) / "spectrum.csv").string();
  write_spectrum_csv(p, s);
  t.add("csv", p);
}

void write_certificates(const json& j, const RunConfig& c, Table& t) {
  require_writable(out_dir(c));
  const auto p = (std::filesystem::path(out_dir(c)) / "certificates.json").string();
  write_json(p, j);
  t.add("certificates", p);
}

SingularSpectrum read_spectrum_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw error(errc::parse_error, "cannot read spectrum '" + path + "'");
  SingularSpectrum s;
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    if (no == 1 || catalogue::trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string f[4];
    for (auto& x : f)
      if (!std::getline(ls, x, ',')) throw error(errc::parse_error, path + ":" + std::to_string(no) + ": need 4 fields");
    const std::string where = path + ":" + std::to_string(no);
    s.sigma.push_back(detail::to_real(f[1], where));
    s.N = detail::to_count(f[2], where);
    s.horizon = f[3] == "0" ? 0 : detail::to_count(f[3], where);
  }
  if (s.sigma.empty()) throw error(errc::parse_error, "spectrum '" + path + "' has no rows");
  return s;
}

int run(const RunConfig& c) {
  Table t;
  t.add("command", c.command);
  const auto sym = [](const std::string& s) { return catalogue::parse(s); };

  if (c.command == "spectrum") {
    const auto s = measured(composition_terms(sym(c.symbol)), c, t);
    summarise_spectrum(s, t);
    write_spectrum(s, c, t);
  } else if (c.command == "diff-spectrum") {
    const Symbol phi = sym(c.phi), psi = sym(c.psi);
    SingularSpectrum s;
    if (phi.structurally_equal(psi)) {
      s = difference_spectrum(phi, psi, c.N, c.threads);
      t.add("basis", "exact zero");
    } else {
      s = measured(difference_terms(phi, psi), c, t);
    }
    summarise_spectrum(s, t);
    write_spectrum(s, c, t);
  } else if (c.command == "weighted") {
    const auto s = measured(weighted_terms(sym(c.omega), sym(c.phi)), c, t);
    summarise_spectrum(s, t);
    if (s.horizon > c.n_min + 1) {
      const auto f = fit_in_window(s, parse_model(c.model), experiment_options(c));
      t.add("fit_" + model_name(f.model), f.rate);
      t.add("fit_r2", f.r2);
    }
    write_spectrum(s, c, t);
  } else if (c.command == "lower-bound") {
    const Symbol phi = sym(c.phi), psi = sym(c.psi);
    const auto lc = lower_certificate(phi, psi, sequence_boundary_pinch(c.n));
    t.add("n", std::to_string(c.n));
    t.add("value_theorem", lc.value_theorem);
    t.add("value_constant_free", lc.value_constant_free);
    t.add("delta_W", lc.delta_W);
    t.add("carleson_W", lc.carleson_W);
    write_certificates(json::array({to_json(lc)}), c, t);
  } else if (c.command == "upper-bound") {
    const Symbol phi = sym(c.phi), psi = sym(c.psi);
    const auto uc = optimize_upper(phi, psi, c.n, default_r_grid(c.r_count, c.r_smallest), c.threads, c.samples);
    t.add("n", std::to_string(c.n));
    t.add("r", uc.best.r);
    t.add("value", uc.best.value);
    t.add("stable", uc.best.stable ? "yes" : "no");
    write_certificates(json::array({to_json(uc)}), c, t);
  } else if (c.command == "hs-norm") {
    const auto h = hs_norm(sym(c.phi), sym(c.psi));
    t.add("hs_norm_squared", h.value);
    t.add("divergent", h.divergent ? "yes" : "no");
    t.add("shells", std::to_string(h.shells));
    write_certificates(json::array({to_json(h)}), c, t);
  } else if (c.command == "fit") {
    const auto s = read_spectrum_csv(c.input);
    const auto f = fit_in_window(s, parse_model(c.model), experiment_options(c));
    t.add("model", model_name(f.model));
    t.add("rate", f.rate);
    t.add("log_prefactor", f.log_prefactor);
    t.add("r2", f.r2);
    t.add("window", std::to_string(f.n_min) + ".." + std::to_string(f.n_max));
  } else if (c.command == "experiment" || c.command == "bidisc") {
    const ExperimentOptions o = experiment_options(c);
    ExperimentResult r;
    const std::string e = c.command == "bidisc" ? "bidisc" : c.experiment;
    if (e == "smooth") {
      r = run_smooth_perturbation(c.alpha, c.c.value_or(0.005), o);
    } else if (e == "corner") {
      r = run_corner_perturbation(c.c.value_or(0.01), o);
    } else if (e == "weighted") {
      r = run_weighted_power(c.alpha, o);
    } else if (e == "bidisc") {
      BidiscParams bp;
      bp.kind = c.kind;
      r = run_bidisc(bp, o);
    } else {
      throw error(errc::invalid_argument, "unknown experiment '" + e + "' (smooth, corner, weighted, bidisc)");
    }
    require_writable(out_dir(c));
    write_result(r, out_dir(c));
    t.add("experiment", r.name);
    for (const auto& f : r.fits) {
      t.add(f.name, f.fit.rate);
      t.add(f.name + "_r2", f.fit.r2);
    }
    for (const auto& v : r.verdicts) t.add("verdict " + v.name, v.pass ? "pass" : "FAIL");
    t.add("result", r.paths.back());
  }
  t.print(std::cout);
  return 0;
}

struct Flag {
  std::string name;  // CLI spelling without dashes
  std::string key;   // RunConfig key
  std::string help;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximation numbers of composition operators on H^2"};
  app.require_subcommand(1);
  app.footer(std::string("Symbol grammar:\n") + catalogue::grammar());

  std::string config_file;
  bool dry_run = false;
  std::map<std::string, std::string> values;
  std::vector<std::pair<CLI::Option*, Flag>> bound;

  const Flag common[] = {{"N", "N", "truncation size"},
                         {"n-min", "n_min", "fit window start"},
                         {"n-max", "n_max", "fit window end"},
                         {"threads", "threads", "worker threads"},
                         {"basis", "basis", "auto, kernel or monomial"},
                         {"out", "out", "output directory (default $APPROXNUM_OUT or ./approxnum-out)"},
                         {"samples", "samples", "boundary samples"}};
  const std::map<std::string, std::vector<Flag>> extra{
      {"spectrum", {{"symbol", "symbol", "symbol expression"}}},
      {"diff-spectrum", {{"phi", "phi", "first symbol"}, {"psi", "psi", "second symbol"}}},
      {"lower-bound", {{"phi", "phi", "first symbol"}, {"psi", "psi", "second symbol"}, {"n", "n", "index"}}},
      {"upper-bound",
       {{"phi", "phi", "first symbol"},
        {"psi", "psi", "second symbol"},
        {"n", "n", "index"},
        {"r-count", "r_count", "points in the r grid"},
        {"r-smallest", "r_smallest", "smallest 1 - r"}}},
      {"hs-norm", {{"phi", "phi", "first symbol"}, {"psi", "psi", "second symbol"}}},
      {"weighted",
       {{"omega", "omega", "weight expression"}, {"phi", "phi", "symbol expression"}, {"model", "model", "decay model"}}},
      {"bidisc", {{"kind", "kind", "split, glued or triangular"}}},
      {"experiment",
       {{"alpha", "alpha", "exponent"},
        {"c", "c", "perturbation size"},
        {"kind", "kind", "bidisc kind"},
        {"r-count", "r_count", "points in the r grid"},
        {"r-smallest", "r_smallest", "smallest 1 - r"},
        {"certificates", "certificates", "evaluate certificates (true/false)"}}},
      {"fit", {{"input", "input", "spectrum CSV"}, {"model", "model", "power, power_log, stretched or root_exp"}}},
  };

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, flags] : extra) {
    auto* sub = app.add_subcommand(name);
    subs[name] = sub;
    sub->add_option("--config", config_file, "key = value file; flags override it");
    sub->add_flag("--dry-run", dry_run, "validate the configuration and stop");
    if (name == "experiment")
      bound.push_back({sub->add_option("name", values["experiment"], "smooth, corner, weighted or bidisc")->required(),
                       {"name", "experiment", ""}});
    for (const auto& f : common) bound.push_back({sub->add_option("--" + f.name, values["flag:" + name + f.key], f.help), f});
    for (const auto& f : flags) bound.push_back({sub->add_option("--" + f.name, values["flag:" + name + f.key], f.help), f});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) std::cerr << "\nSymbol grammar:\n" << catalogue::grammar();
    return code == 0 ? 0 : exit_config;
  }

  RunConfig cfg;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) cfg.command = name;
  try {
    if (!config_file.empty()) apply_config_file(cfg, config_file);
    for (const auto& [opt, f] : bound) {
      if (opt->count() == 0) continue;
      const std::string& v = f.key == "experiment" ? values["experiment"] : values["flag:" + cfg.command + f.key];
      set_option(cfg, f.key, v, "--" + f.name);
    }
    cfg.dry_run = dry_run;
    if (cfg.command == "fit" && cfg.input.empty()) throw error(errc::invalid_argument, "fit needs --input");
    validate(cfg);
    parse_model(cfg.model);
    if (cfg.dry_run) {
      require_writable(out_dir(cfg));
      std::cout << "configuration ok\n";
      return 0;
    }
    return run(cfg);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.code() == errc::parse_error) std::cerr << "\nSymbol grammar:\n" << catalogue::grammar();
    return is_config_error(e.code()) ? exit_config : exit_numeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numeric;
  }
}
