#include <cmath>
#include <filesystem>
#include <fstream>

#include "catch_amalgamated.hpp"

#include "approxnum/experiments.hpp"

using namespace approxnum;
using Catch::Matchers::WithinAbs;

namespace {

SingularSpectrum power_spectrum(std::size_t N, double p, std::size_t horizon) {
  SingularSpectrum s;
  for (std::size_t n = 1; n <= N; ++n) s.sigma.push_back(std::pow(double(n), -p));
  s.N = N;
  s.horizon = horizon;
  s.basis = "kernel";
  return s;
}

ExperimentResult synthetic() {
  ExperimentResult r;
  r.name = "synthetic";
  r.spectra = {{"main", power_spectrum(64, 1.5, 60)}};
  r.fits.push_back({"main_power", "main", fit_decay(r.spectra[0].second, DecayModel::power, 8, 40)});
  r.verdicts.push_back(interval_verdict("power_exponent", r.fits[0].fit.rate, 1.0, 2.0));
  r.verdicts.push_back(below_verdict("small", 0.001, 0.01));
  r.data["note"] = "synthetic";
  return r;
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

std::filesystem::path scratch(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("approxnum_test_" + name);
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("check kinds") {
  CHECK(evaluate_check({{"kind", "interval"}, {"value", 1.0}, {"lo", 0.5}, {"hi", 1.5}}));
  CHECK_FALSE(evaluate_check({{"kind", "interval"}, {"value", "nan"}, {"lo", 0.5}, {"hi", 1.5}}));
  CHECK(evaluate_check({{"kind", "at_least"}, {"value", 0.95}, {"threshold", 0.95}}));
  CHECK_FALSE(evaluate_check({{"kind", "below"}, {"value", 0.01}, {"threshold", 0.01}}));
  CHECK(evaluate_check({{"kind", "below"}, {"value", "-inf"}, {"threshold", 0.01}}));
  CHECK(evaluate_check({{"kind", "margin"}, {"a", 0.99}, {"b", 0.96}, {"margin", 0.02}}));
  CHECK_FALSE(evaluate_check({{"kind", "margin"}, {"a", 0.99}, {"b", 0.98}, {"margin", 0.02}}));
  CHECK(evaluate_check({{"kind", "pairwise"}, {"values", {1.0, 1.3, 1.4}}, {"tol", 0.5}}));
  CHECK_FALSE(evaluate_check({{"kind", "pairwise"}, {"values", {1.0, 1.3, 1.6}}, {"tol", 0.5}}));
  CHECK_FALSE(evaluate_check({{"kind", "pairwise"}, {"values", json::array()}, {"tol", 0.5}}));
  CHECK(evaluate_check({{"kind", "elementwise_less"}, {"a", {1, 2}}, {"b", {2, 3}}}));
  CHECK_FALSE(evaluate_check({{"kind", "elementwise_less"}, {"a", {1, 3}}, {"b", {2, 3}}}));
  CHECK_FALSE(evaluate_check({{"kind", "elementwise_less"}, {"a", {1}}, {"b", {2, 3}}}));
  CHECK(evaluate_check({{"kind", "elementwise_at_least"}, {"a", {2, 3}}, {"b", {2, 3}}}));
  CHECK(evaluate_check({{"kind", "all_at_most"}, {"values", {0.1, 0.2}}, {"bound", 0.2}}));
  CHECK_FALSE(evaluate_check({{"kind", "all_at_least"}, {"values", {0.1, 0.2}}, {"bound", 0.2}}));
  CHECK_FALSE(evaluate_check({{"kind", "all_at_least"}, {"values", json::array()}, {"bound", 0.2}}));
  CHECK(evaluate_check({{"kind", "flag"}, {"value", true}}));
  CHECK_THROWS_AS(evaluate_check({{"kind", "vibes"}}), error);
}

TEST_CASE("stored results re-check and tampering is detected") {
  const auto r = synthetic();
  REQUIRE(r.pass());
  json j = to_json(r);
  auto rep = recheck_verdicts(j);
  CHECK(rep.consistent);
  CHECK(rep.pass);

  json bad = j;
  bad["verdicts"][1]["check"]["value"] = 0.5;
  rep = recheck_verdicts(bad);
  CHECK_FALSE(rep.consistent);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.mismatches.size() == 2);
  CHECK(rep.mismatches[0] == "verdict small");

  bad = j;
  bad["spectra"]["main"]["sigma"][20] = 1e-3;
  rep = recheck_verdicts(bad);
  CHECK_FALSE(rep.consistent);
  CHECK(rep.mismatches[0] == "fit main_power");

  bad = j;
  bad["pass"] = false;
  CHECK_FALSE(recheck_verdicts(bad).consistent);
}

TEST_CASE("fit window clips to the horizon and the last positive value") {
  auto s = power_spectrum(128, 1.0, 70);
  CHECK(fit_window(s, 8, 100) == std::pair<std::size_t, std::size_t>{8, 70});
  s.sigma[49] = 0.0;
  CHECK(fit_window(s, 8, 100) == std::pair<std::size_t, std::size_t>{8, 49});
  s.horizon = 8;
  CHECK_THROWS_MATCHES(fit_window(s, 8, 100), error, Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::window_exceeds_horizon;
                       }));
}

TEST_CASE("written results read back and re-check") {
  auto r = synthetic();
  r.spectra.push_back({"second", power_spectrum(8, 2.0, 8)});
  const auto dir = scratch("write");
  write_result(r, dir.string());
  CHECK(std::filesystem::exists(dir / "spectrum.csv"));
  CHECK(std::filesystem::exists(dir / "spectrum_second.csv"));
  CHECK(std::filesystem::exists(dir / "certificates.json"));
  const json j = read_file((dir / "result.json").string());
  CHECK(j.at("experiment") == "synthetic");
  CHECK(j.at("paths").size() == 4);
  const auto rep = recheck_verdicts(j);
  CHECK(rep.consistent);
  CHECK(rep.pass);
  // Doubles survive the text round trip exactly.
  CHECK(spectrum_from_json(j.at("spectra").at("main")).sigma == r.spectra[0].second.sigma);
  std::ifstream csv(dir / "spectrum.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "n,sigma,N,horizon");
  std::filesystem::remove_all(dir);
}

TEST_CASE("basis resolution") {
  CHECK(resolve_basis("auto", difference_terms(catalogue::corner_map(), catalogue::corner_perturbation(0.01))) ==
        "kernel");
  CHECK(resolve_basis("auto", composition_terms(catalogue::dilation(0.5))) == "monomial");
  CHECK(resolve_basis("auto", composition_terms(catalogue::mobius(0.3))) == "monomial");
  CHECK(resolve_basis("monomial", composition_terms(catalogue::corner_map())) == "monomial");
  ExperimentOptions o;
  o.basis = "spline";
  CHECK_THROWS_AS(term_builder(composition_terms(catalogue::half_map()), o), error);
}

TEST_CASE("weighted experiment at small size") {
  ExperimentOptions o;
  o.N = 256;
  o.n_max = 64;
  o.certificates = false;
  const auto r = run_weighted_power(1.0, o);
  CHECK(r.name == "weighted");
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts[0].name == "power_exponent");
  CHECK(r.spectrum("weighted").N == 256);
  CHECK(r.spectrum("weighted_fine").N == 512);
  CHECK(r.fits[0].fit.n_max <= r.spectrum("weighted").horizon);
  CHECK(recheck_verdicts(to_json(r)).consistent);
  CHECK_THROWS_AS(run_weighted_power(-1.0, o), error);
}

TEST_CASE("unweighted composition does not decay") {
  ExperimentOptions o;
  o.N = 128;
  o.n_max = 40;
  o.certificates = false;
  const auto r = run_weighted_power(0.0, o);
  REQUIRE(r.verdicts.size() == 1);
  CHECK(r.verdicts[0].name == "zero_slope");
  CHECK(r.verdicts[0].pass);
  // The essential norm of C_phi for phi = (1 + z)/2 is sqrt(2).
  CHECK_THAT(r.spectrum("weighted").at(20), WithinAbs(std::sqrt(2.0), 0.05));
}

TEST_CASE("experiment preconditions") {
  ExperimentOptions o;
  o.N = 512;
  CHECK_THROWS_AS(run_corner_perturbation(0.01, o), error);
  BidiscParams bp;
  bp.kind = "annulus";
  CHECK_THROWS_AS(run_bidisc(bp, o), error);
}

TEST_CASE("glued bidisc restriction") {
  ExperimentOptions o;
  o.N = 64;
  BidiscParams bp;
  bp.kind = "glued";
  const auto r = run_bidisc(bp, o);
  CHECK(r.pass());
  CHECK(r.spectrum("restricted").N == 64);
}

TEST_CASE("split bidisc tensor bound") {
  ExperimentOptions o;
  o.N = 64;
  BidiscParams bp;
  bp.kind = "split";
  const auto r = run_bidisc(bp, o);
  CHECK(r.pass());
  const auto& t = r.spectrum("tensor");
  const auto& d = r.spectrum("difference");
  const auto& f = r.spectrum("factor");
  CHECK(t.at(1) == Catch::Approx(d.at(1) * f.at(1)).epsilon(1e-12));
}
