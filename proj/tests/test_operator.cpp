#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "catch_amalgamated.hpp"

#include "approxnum/catalogue.hpp"
#include "approxnum/operator.hpp"

using namespace approxnum;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

Eigen::MatrixXcd random_matrix(std::mt19937& g, int n) {
  std::normal_distribution<double> d;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(d(g), d(g)) / double(1 + i + j);
  return m;
}

}  // namespace

TEST_CASE("dilation spectrum is |a|^{n-1}") {
  const auto start = std::chrono::steady_clock::now();
  for (cplx a : {cplx(0.5), cplx(-0.9), cplx(0.3, 0.4)}) {
    const auto s = singular_spectrum(composition_matrix(catalogue::dilation(a), 40));
    for (std::size_t n = 1; n <= 40; ++n) CHECK_THAT(s.at(n), WithinAbs(std::pow(std::abs(a), double(n - 1)), 1e-10));
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 1.0);
}

TEST_CASE("constant symbol is rank one") {
  for (cplx c : {cplx(0.5), cplx(0.2, -0.7), cplx(0.0)}) {
    const auto s = singular_spectrum(composition_matrix(catalogue::constant(c), 64));
    CHECK_THAT(s.at(1), WithinAbs(1.0 / std::sqrt(1.0 - std::norm(c)), 1e-10));
    CHECK_THAT(s.at(2), WithinAbs(0.0, 1e-10));
  }
}

TEST_CASE("identity has unit spectrum") {
  const auto s = singular_spectrum(composition_matrix(catalogue::identity(), 50));
  for (double x : s.sigma) CHECK_THAT(x, WithinAbs(1.0, 1e-12));
}

TEST_CASE("composition reverses order of symbols for maps fixing the origin") {
  // C_{phi o psi} = C_psi C_phi; with phi(0) = psi(0) = 0 the truncations are
  // lower triangular and the identity holds exactly.
  const Symbol phi = (Symbol::z() * (0.5 + 0.5 * Symbol::z())).named("z(1+z)/2").as_self_map();
  const Symbol psi = catalogue::dilation(0.7);
  const Symbol comp = (0.7 * Symbol::z() * (0.5 + 0.35 * Symbol::z())).named("phi o psi").as_self_map();
  const std::size_t n = 24;
  const auto lhs = composition_matrix(comp, n).matrix;
  const auto rhs = (composition_matrix(psi, n).matrix * composition_matrix(phi, n).matrix).eval();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
  // Dilation semigroup.
  const auto d = (composition_matrix(catalogue::dilation(0.5), n).matrix *
                  composition_matrix(catalogue::dilation(0.6), n).matrix)
                     .eval();
  CHECK((d - composition_matrix(catalogue::dilation(0.3), n).matrix).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("matrix columns are the coefficients of phi^k") {
  const Symbol phi = catalogue::half_map();
  const auto m = composition_matrix(phi, 8).matrix;
  // (1 + z)^k / 2^k has coefficients binom(k, i)/2^k.
  for (int k = 0; k < 8; ++k)
    for (int i = 0; i < 8; ++i) {
      double b = 0;
      if (i <= k) b = std::tgamma(k + 1.0) / (std::tgamma(i + 1.0) * std::tgamma(k - i + 1.0)) / std::exp2(k);
      CHECK_THAT(m(i, k).real(), WithinAbs(b, 1e-15));
    }
}

TEST_CASE("weighted composition with a constant weight scales the spectrum") {
  const auto a = singular_spectrum(composition_matrix(catalogue::dilation(0.4), 30));
  const auto b = singular_spectrum(weighted_composition_matrix(catalogue::constant(3.0), catalogue::dilation(0.4), 30));
  for (std::size_t n = 1; n <= 30; ++n) CHECK_THAT(b.at(n), WithinAbs(3.0 * a.at(n), 1e-12));
}

TEST_CASE("spectra are non-increasing and the difference of equal symbols vanishes") {
  const auto s = singular_spectrum(difference_matrix(catalogue::half_map(), catalogue::dilation(0.5), 64));
  for (std::size_t n = 2; n <= s.size(); ++n) CHECK(s.at(n) <= s.at(n - 1));
  const auto z = difference_spectrum(catalogue::corner_map(), catalogue::corner_map(), 32);
  for (double x : z.sigma) CHECK(x == 0.0);
}

TEST_CASE("operator norm bound dominates the truncated norm") {
  for (const Symbol& f : {catalogue::half_map(), catalogue::dilation(0.8), catalogue::mobius({0.3, 0.2})}) {
    const auto s = singular_spectrum(composition_matrix(f, 64));
    CHECK(s.at(1) <= operator_norm_bound(f) * (1 + 1e-12));
  }
  CHECK_THROWS_AS(operator_norm_bound(catalogue::constant(1.0)), error);
}

TEST_CASE("symbols leaving the disc are rejected") {
  CHECK_THROWS_AS(composition_matrix(catalogue::dilation(1.5), 8), error);
  CHECK_THROWS_AS(composition_matrix((0.6 + 0.6 * Symbol::z()).named("bad"), 8), error);
}

TEST_CASE("singular values report breakdown on non-finite input") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(3, 3);
  m(1, 1) = std::nan("");
  CHECK_THROWS_AS(singular_values(m), error);
}

TEST_CASE("tensor spectrum of dilations is the sorted products") {
  const auto s = singular_spectrum(composition_matrix(catalogue::dilation(0.5), 12));
  const auto t = singular_spectrum(composition_matrix(catalogue::dilation(0.3), 12));
  const auto p = tensor_spectrum(s, t, 50);
  std::vector<double> all;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) all.push_back(std::pow(0.5, i) * std::pow(0.3, j));
  std::sort(all.rbegin(), all.rend());
  for (std::size_t n = 1; n <= 50; ++n) CHECK_THAT(p.at(n), WithinRel(all[n - 1], 1e-10));
  CHECK(p.horizon == 50);
}

TEST_CASE("tensor horizon stops at the first untrusted factor") {
  SingularSpectrum s{{1.0, 0.5, 0.25}, 3, 2, "monomial"}, t{{1.0, 0.1}, 2, 2, "monomial"};
  const auto p = tensor_spectrum(s, t, 6);
  // Products: 1, .5, .25(untrusted), .1, .05, .025
  CHECK(p.horizon == 2);
}

TEST_CASE("a_mn(S x T) >= a_m(S) a_n(T) on Kronecker products") {
  std::mt19937 g(2024);
  for (int trial = 0; trial < 3; ++trial) {
    const auto S = random_matrix(g, 16), T = random_matrix(g, 16);
    const auto sv = singular_values(S), tv = singular_values(T);
    const auto kv = singular_values(kron(S, T));
    // The Kronecker spectrum is exactly the multiset of products.
    const auto p = tensor_spectrum({sv, 16, 16, "dense"}, {tv, 16, 16, "dense"}, 256);
    for (std::size_t i = 0; i < 256; ++i) CHECK_THAT(kv[i], WithinAbs(p.sigma[i], 1e-10 * kv[0]));
    for (std::size_t m = 1; m <= 8; ++m)
      for (std::size_t n = 1; n <= 8; ++n) CHECK(kv[m * n - 1] >= sv[m - 1] * tv[n - 1] - 1e-10);
  }
}

TEST_CASE("agreement horizon") {
  CHECK(agreement_horizon({1.0, 0.5, 0.25}, {1.0, 0.5, 0.25}) == 3);
  CHECK(agreement_horizon({1.0, 0.5, 0.25}, {1.0, 0.504, 0.3}) == 2);
  CHECK(agreement_horizon({1.0, 0.5}, {1.0, 0.6}) == 1);
  CHECK(agreement_horizon({1.0, 0.0, 0.0}, {1.0, 1e-301, 0.0}) == 3);
}

TEST_CASE("doubling diagnostic on a monomial builder") {
  const SpectrumBuilder b = [](std::size_t n) { return singular_spectrum(composition_matrix(catalogue::dilation(0.8), n)); };
  const auto r = convergence_report(b, 32);
  CHECK(r.coarse.N == 32);
  CHECK(r.fine.N == 64);
  CHECK(r.coarse.horizon <= 32);
  CHECK(r.coarse.horizon >= 30);
  CHECK_THROWS_AS(convergence_report(b, 8), error);
}

TEST_CASE("CSV layout") {
  SingularSpectrum s{{1.0, 0.125}, 2, 1, "monomial"};
  std::ostringstream os;
  write_csv(os, s);
  CHECK(os.str() == "n,sigma,N,horizon\n1,1,2,1\n2,0.125,2,1\n");
}
