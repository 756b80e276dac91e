#include <cmath>
#include <set>

#include "catch_amalgamated.hpp"

#include "approxnum/catalogue.hpp"
#include "approxnum/lattice.hpp"

using namespace approxnum;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("kernel lattice has exactly n distinct points inside the disc") {
  for (std::size_t n : {1u, 7u, 64u, 300u, 1024u}) {
    const auto pts = kernel_lattice(n);
    REQUIRE(pts.size() == n);
    std::set<std::pair<double, double>> seen;
    for (const auto& p : pts) {
      CHECK(std::abs(p.a) < 1.0);
      CHECK(p.one_minus_abs_sq > 0.0);
      CHECK_THAT(p.one_minus_abs_sq, WithinAbs(1.0 - std::norm(p.a), 1e-12));
      CHECK(std::abs(1.0 - p.a - p.one_minus_a) < 1e-15);
      seen.insert({p.a.real(), p.a.imag()});
    }
    CHECK(seen.size() == n);
  }
  CHECK_THROWS_AS(kernel_lattice(0), error);
}

TEST_CASE("identity on the lattice basis has unit spectrum") {
  // The Takenaka-Malmquist functions are orthonormal, so the Gram matrix of
  // the quadrature rows is the identity.
  const auto s = lattice_spectrum(composition_terms(catalogue::identity()), 64).spectrum;
  // The quadrature stops once the boundary image is e^{-tail} deeper than
  // the last lattice level; the lost kernel mass is of that order.
  for (double x : s.sigma) CHECK_THAT(x, WithinAbs(1.0, 1e-6));
  CHECK(s.basis == "kernel");
}

TEST_CASE("lattice spectra are compressions of the exact spectrum") {
  // Restricting to a subspace cannot raise approximation numbers.
  const auto s = lattice_spectrum(composition_terms(catalogue::dilation(0.6)), 96).spectrum;
  for (std::size_t n = 1; n <= 96; ++n) CHECK(s.at(n) <= std::pow(0.6, double(n - 1)) * (1 + 1e-9) + 1e-14);
  CHECK_THAT(s.at(1), WithinAbs(1.0, 1e-9));
}

TEST_CASE("half map norm is recovered from below") {
  // ||C_phi|| = sqrt(2) for phi = (1 + z)/2.
  const auto s = lattice_spectrum(composition_terms(catalogue::half_map()), 256).spectrum;
  CHECK(s.at(1) <= std::sqrt(2.0) * (1 + 1e-9));
  CHECK(s.at(1) > std::sqrt(2.0) * 0.98);
}

TEST_CASE("a second approach to 1 on the circle is rejected") {
  // An automorphism sends t = pi to 1; a rotation sends t = -0.5 there.
  CHECK_FALSE(single_contact_at_one(catalogue::mobius(0.5)));
  CHECK_FALSE(single_contact_at_one(catalogue::dilation(std::polar(1.0, 0.5))));
  CHECK_THROWS_AS(lattice_spectrum(composition_terms(catalogue::mobius(0.5)), 16), error);
  for (const Symbol& f : {catalogue::identity(), catalogue::half_map(), catalogue::corner_map(),
                          catalogue::corner_perturbation(0.01), catalogue::power_perturbation(3.0, 0.005),
                          catalogue::dilation(0.5), catalogue::constant(0.3)})
    CHECK(single_contact_at_one(f));
}

TEST_CASE("quadrature refinement leaves the spectrum unchanged") {
  const auto terms = difference_terms(catalogue::half_map(), catalogue::dilation(0.5));
  LatticeOptions o;
  const auto plan = plan_lattice(terms, 64, o);
  o.shells = plan.shells;
  o.nodes = plan.nodes;
  const auto a = lattice_spectrum(terms, 64, o).spectrum;
  o.nodes = 2 * plan.nodes;
  o.shells = plan.shells + 8;
  const auto b = lattice_spectrum(terms, 64, o).spectrum;
  for (std::size_t n = 1; n <= 32; ++n) CHECK_THAT(a.at(n), WithinRel(b.at(n), 1e-8));
}

TEST_CASE("small memory budgets stream the same factor") {
  const auto terms = composition_terms(catalogue::half_map());
  LatticeOptions o;
  const auto a = lattice_spectrum(terms, 48, o).spectrum;
  o.memory_budget = 200 * 48 * sizeof(cplx);
  o.threads = 2;
  const auto b = lattice_spectrum(terms, 48, o).spectrum;
  for (std::size_t n = 1; n <= 48; ++n) CHECK_THAT(a.at(n), WithinAbs(b.at(n), 1e-12));
}

TEST_CASE("constant weight scales the lattice spectrum") {
  const auto a = lattice_spectrum(composition_terms(catalogue::corner_map()), 64).spectrum;
  const auto b = lattice_spectrum(weighted_terms(catalogue::constant(2.0), catalogue::corner_map()), 64).spectrum;
  for (std::size_t n = 1; n <= 64; ++n) CHECK_THAT(b.at(n), WithinAbs(2.0 * a.at(n), 1e-12 * a.at(1)));
}

TEST_CASE("lattice agrees with the monomial basis for interior symbols") {
  const Symbol psi = catalogue::dilation(0.5);
  const Symbol shrunk = (0.9 * Symbol::z() * (0.5 + 0.5 * Symbol::z())).named("0.9 z(1+z)/2").as_self_map();
  const auto lat = lattice_spectrum(difference_terms(shrunk, psi), 128).spectrum;
  const auto mono = singular_spectrum(difference_matrix(shrunk, psi, 256));
  // Compression from below, tight at the top of the spectrum.
  for (std::size_t n = 1; n <= 64; ++n) CHECK(lat.at(n) <= mono.at(n) * (1 + 1e-9) + 1e-15);
  for (std::size_t n = 1; n <= 3; ++n) CHECK_THAT(lat.at(n), WithinRel(mono.at(n), 1e-3));
}

TEST_CASE("lattice rejects symbols leaving the disc") {
  CHECK_THROWS_AS(lattice_spectrum({}, 8), error);
  CHECK_THROWS_AS(lattice_spectrum(composition_terms(catalogue::dilation(1.2)), 8), error);
}
