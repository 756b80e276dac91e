#include <cmath>

#include <Eigen/Dense>

#include "catch_amalgamated.hpp"

#include "approxnum/fit.hpp"

using namespace approxnum;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SingularSpectrum make(std::size_t N, auto f) {
  SingularSpectrum s;
  for (std::size_t n = 1; n <= N; ++n) s.sigma.push_back(f(double(n)));
  s.N = N;
  s.horizon = N;
  s.basis = "monomial";
  return s;
}

// Least squares through a QR solve, independent of the closed-form sums.
Eigen::Vector2d lstsq(const std::vector<double>& x, const std::vector<double>& y) {
  Eigen::MatrixXd A(x.size(), 2);
  Eigen::VectorXd b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) A(i, 0) = 1.0, A(i, 1) = x[i], b(i) = y[i];
  return A.colPivHouseholderQr().solve(b);
}

}  // namespace

TEST_CASE("exact models are recovered") {
  const auto power = make(100, [](double n) { return 3.0 * std::pow(n, -2.0); });
  auto f = fit_decay(power, DecayModel::power, 8, 100);
  CHECK_THAT(f.rate, WithinAbs(2.0, 1e-8));
  CHECK_THAT(f.log_prefactor, WithinAbs(std::log(3.0), 1e-8));
  CHECK_THAT(f.r2, WithinAbs(1.0, 1e-12));
  CHECK(f.n_min == 8);
  CHECK(f.n_max == 100);

  const auto root = make(100, [](double n) { return 0.5 * std::exp(-0.3 * std::sqrt(n)); });
  CHECK_THAT(fit_decay(root, DecayModel::root_exp, 8, 100).rate, WithinAbs(0.3, 1e-8));

  const auto stretched = make(100, [](double n) { return std::exp(1.0 - 0.7 * n / std::log(n)); });
  f = fit_decay(stretched, DecayModel::stretched, 8, 100);
  CHECK_THAT(f.rate, WithinAbs(0.7, 1e-8));
  CHECK_THAT(f.log_prefactor, WithinAbs(1.0, 1e-8));

  const auto plog = make(100, [](double n) { return std::pow(std::log(n), 1.5) * std::pow(n, -1.25); });
  f = fit_decay(plog, DecayModel::power_log, 8, 100, 1.5);
  CHECK_THAT(f.rate, WithinAbs(1.25, 1e-8));
  CHECK(f.q == 1.5);
}

TEST_CASE("(log n)/n gives an effective exponent below one") {
  const auto s = make(64, [](double n) { return std::log(n) / n; });
  const auto f = fit_decay(s, DecayModel::power, 8, 64);
  // d log log n / d log n = 1/log n pulls the slope to about 1 - 1/log(23).
  CHECK(f.rate > 0.68);
  CHECK(f.rate < 0.69);
  std::vector<double> x, y;
  for (int n = 8; n <= 64; ++n) x.push_back(std::log(double(n))), y.push_back(std::log(std::log(double(n)) / n));
  const auto c = lstsq(x, y);
  CHECK_THAT(f.rate, WithinAbs(-c(1), 1e-10));
  CHECK_THAT(f.log_prefactor, WithinAbs(c(0), 1e-10));
  CHECK(f.r2 > 0.9);
  CHECK(f.r2 <= 1.0);
}

TEST_CASE("R^2 lies in [0, 1]") {
  const auto noisy = make(40, [](double n) { return 1.0 + 0.5 * std::sin(n); });
  for (auto m : {DecayModel::power, DecayModel::stretched, DecayModel::root_exp}) {
    const auto f = fit_decay(noisy, m, 2, 40);
    CHECK(f.r2 >= 0.0);
    CHECK(f.r2 <= 1.0);
  }
}

TEST_CASE("fit windows and zeros") {
  auto s = make(20, [](double n) { return std::pow(n, -1.0); });
  s.sigma[9] = 0.0;
  CHECK_THROWS_MATCHES(fit_decay(s, DecayModel::power, 4, 12), error, Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::zero_in_window;
                       }));
  s.horizon = 8;
  CHECK_THROWS_MATCHES(fit_decay(s, DecayModel::power, 2, 9), error, Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::window_exceeds_horizon;
                       }));
  CHECK_THROWS_AS(fit_decay(s, DecayModel::power, 1, 5), error);
  CHECK_THROWS_AS(fit_decay(s, DecayModel::power, 5, 5), error);
}

TEST_CASE("comparing fits") {
  DecayFit a, b;
  a.model = DecayModel::stretched;
  b.model = DecayModel::root_exp;
  a.r2 = 0.99, b.r2 = 0.96;
  CHECK(compare_fits(a, b) == "stretched");
  b.r2 = 0.98;
  CHECK(compare_fits(a, b) == "inconclusive");
  CHECK(compare_fits(a, b, 0.005) == "stretched");
  a.r2 = 0.90;
  CHECK(compare_fits(a, b) == "root_exp");
}

TEST_CASE("model names round trip") {
  for (auto m : {DecayModel::power, DecayModel::power_log, DecayModel::stretched, DecayModel::root_exp})
    CHECK(parse_model(model_name(m)) == m);
  CHECK_THROWS_AS(parse_model("exp"), error);
}

TEST_CASE("log-log slope") {
  CHECK_THAT(loglog_slope({1, 2, 4, 8}, {1, 0.25, 0.0625, 0.015625}), WithinAbs(-2.0, 1e-12));
  CHECK_THROWS_AS(loglog_slope({1, 2}, {1, 0}), error);
  CHECK_THROWS_AS(linear_fit({1.0}, {1.0}), error);
  CHECK_THROWS_AS(linear_fit({2.0, 2.0}, {1.0, 3.0}), error);
}
