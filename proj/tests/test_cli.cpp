#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "catch_amalgamated.hpp"

#include "approxnum/config.hpp"
#include "approxnum/io.hpp"

using namespace approxnum;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(APPROXNUM_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  while (std::size_t k = std::fread(buf, 1, sizeof buf, p)) r.output.append(buf, k);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("approxnum_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("dilation spectrum through the CLI") {
  const auto d = scratch("spectrum");
  const auto r = cli("spectrum --symbol 'dilation(a=0.5)' --N 32 --out " + quoted(d));
  INFO(r.output);
  REQUIRE(r.code == 0);
  CHECK(r.output.find("monomial") != std::string::npos);
  std::ifstream csv(d / "spectrum.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "n,sigma,N,horizon");
  int n = 0;
  while (std::getline(csv, line)) {
    ++n;
    const double s = std::stod(line.substr(line.find(',') + 1));
    CHECK(std::abs(s - std::pow(0.5, n - 1)) < 1e-12);
  }
  CHECK(n == 32);
}

TEST_CASE("hs-norm through the CLI matches Parseval") {
  const auto d = scratch("hs");
  const auto r = cli("hs-norm --phi 'dilation(a=0.5)' --psi 'dilation(a=0.3)' --out " + quoted(d));
  INFO(r.output);
  REQUIRE(r.code == 0);
  const auto j = json::parse(slurp(d / "certificates.json"));
  const double exact = 1 / 0.75 + 1 / 0.91 - 2 / 0.85;
  CHECK(std::abs(num_from(j[0].at("value")) - exact) < 1e-5 * exact);
  CHECK(j[0].at("squared") == true);
}

TEST_CASE("exit codes") {
  const auto d = scratch("codes");
  auto r = cli("spectrum --symbol 'dilaton(a=0.5)' --out " + quoted(d));
  CHECK(r.code == 2);
  CHECK(r.output.find("dilaton") != std::string::npos);
  CHECK(r.output.find("Symbol grammar") != std::string::npos);
  CHECK(cli("spectrum --N 0 --out " + quoted(d)).code == 2);
  CHECK(cli("").code == 2);
  CHECK(cli("spectrum --no-such-flag").code == 2);
  CHECK(cli("experiment nonsense --out " + quoted(d)).code == 2);
  CHECK(cli("spectrum --basis spline --out " + quoted(d)).code == 2);
  CHECK(cli("--help").code == 0);
  // Identical symbols leave the lower certificate without separated images.
  r = cli("lower-bound --phi half_map --psi half_map --n 8 --out " + quoted(d));
  CHECK(r.code == 3);
  CHECK(r.output.find("CollidingImages") != std::string::npos);
}

TEST_CASE("dry run validates without computing") {
  const auto d = scratch("dry");
  auto r = cli("experiment corner --dry-run --out " + quoted(d / "out"));
  CHECK(r.code == 0);
  CHECK(r.output.find("configuration ok") != std::string::npos);
  CHECK_FALSE(fs::exists(d / "out" / "result.json"));
  CHECK(cli("weighted --omega 'weight_power(beta=1)' --dry-run --out " + quoted(d)).code == 2);
}

TEST_CASE("config file with flag override") {
  const auto d = scratch("config");
  {
    std::ofstream cfg(d / "run.cfg");
    cfg << "# dilation run\nsymbol = dilation(a=0.25)\nN = 24\nout = " << (d / "from_file").string() << "\n";
  }
  auto r = cli("spectrum --config " + quoted(d / "run.cfg") + " --N 12");
  INFO(r.output);
  REQUIRE(r.code == 0);
  const std::string csv = slurp(d / "from_file" / "spectrum.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  CHECK(csv.find("\n2,0.25,12,") != std::string::npos);

  {
    std::ofstream cfg(d / "bad.cfg");
    cfg << "symbol = identity\n\nN = twelve\n";
  }
  r = cli("spectrum --config " + quoted(d / "bad.cfg"));
  CHECK(r.code == 2);
  CHECK(r.output.find("bad.cfg:3") != std::string::npos);
  {
    std::ofstream cfg(d / "unknown.cfg");
    cfg << "colour = blue\n";
  }
  r = cli("spectrum --config " + quoted(d / "unknown.cfg"));
  CHECK(r.code == 2);
  CHECK(r.output.find("colour") != std::string::npos);
}

TEST_CASE("default configuration") {
  const RunConfig c;
  CHECK(c.N == 1024);
  CHECK(c.n_min == 8);
  CHECK(c.n_max == 100);
  CHECK(c.basis == "auto");
  CHECK_FALSE(c.c.has_value());
  std::vector<std::string> origins;
  const auto kv = read_config_text("N = 64\n# comment\nn_max = 40\n", "mem", &origins);
  REQUIRE(kv.size() == 2);
  CHECK(kv[1] == std::pair<std::string, std::string>{"n_max", "40"});
  CHECK(origins[1] == "mem:3");
  CHECK_THROWS_AS(read_config_text("N 64\n", "mem"), error);
  RunConfig f;
  for (std::size_t i = 0; i < kv.size(); ++i) set_option(f, kv[i].first, kv[i].second, origins[i]);
  CHECK(f.N == 64);
  CHECK(f.n_max == 40);
  CHECK_NOTHROW(validate(f));
  f.n_max = 4;
  CHECK_THROWS_AS(validate(f), error);
}

TEST_CASE("repeated runs are byte identical") {
  const auto a = scratch("repeat_a"), b = scratch("repeat_b");
  const std::string args = "upper-bound --phi corner_map --psi 'corner_perturbation(c=0.01)' --n 6 --r-count 4 "
                           "--samples 1024 --out ";
  REQUIRE(cli(args + quoted(a)).code == 0);
  REQUIRE(cli(args + quoted(b)).code == 0);
  CHECK(slurp(a / "certificates.json") == slurp(b / "certificates.json"));
  const std::string diff = "diff-spectrum --phi half_map --psi 'dilation(a=0.5)' --N 64 --basis kernel --out ";
  REQUIRE(cli(diff + quoted(a)).code == 0);
  REQUIRE(cli(diff + quoted(b)).code == 0);
  CHECK(slurp(a / "spectrum.csv") == slurp(b / "spectrum.csv"));
}

TEST_CASE("fit reads a spectrum written by the CLI") {
  const auto d = scratch("fit");
  REQUIRE(cli("spectrum --symbol 'dilation(a=0.5)' --N 40 --out " + quoted(d)).code == 0);
  const auto r = cli("fit --input " + quoted(d / "spectrum.csv") + " --model root_exp --n-max 30");
  INFO(r.output);
  CHECK(r.code == 0);
  CHECK(r.output.find("root_exp") != std::string::npos);
  CHECK(cli("fit --input " + quoted(d / "missing.csv")).code == 2);
}

TEST_CASE("sample configurations validate") {
  const fs::path samples(APPROXNUM_SAMPLES);
  const std::pair<const char*, const char*> runs[] = {{"smooth_alpha3.cfg", "experiment smooth"},
                                                      {"corner.cfg", "experiment corner"},
                                                      {"weighted.cfg", "weighted"},
                                                      {"triangular.cfg", "bidisc"}};
  const auto d = scratch("samples");
  for (const auto& [file, command] : runs) {
    const auto r = cli(std::string(command) + " --config " + quoted(samples / file) + " --dry-run --out " + quoted(d));
    INFO(file << ": " << r.output);
    CHECK(r.code == 0);
  }
}

TEST_CASE("smooth experiment end to end") {
  const auto d = scratch("smooth");
  const auto r = cli("experiment smooth --alpha 3 --c 0.005 --N 1024 --certificates false --out " + quoted(d));
  INFO(r.output);
  REQUIRE(r.code == 0);
  CHECK(r.output.find("verdict power_exponent  pass") != std::string::npos);
  const auto j = json::parse(slurp(d / "result.json"));
  CHECK(j.at("pass") == true);
  CHECK(j.at("parameters").at("basis") == "auto");
}
