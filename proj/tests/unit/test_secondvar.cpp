#include <doctest.h>

#include <cmath>
#include <numbers>

#include "e1lab/clifford_secondvar.hpp"
#include "e1lab/errors.hpp"

using namespace e1lab;
using namespace e1lab::secondvar;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("measure factor and Parseval against quadrature") {
  CHECK(measure_factor() == doctest::Approx(0.5).epsilon(1e-15));
  const TorusField f = TorusField::random(3, 3);
  const TorusField g = TorusField::random(4, 3);
  CHECK(f.reality_defect() == 0.0);
  CHECK(quadrature_inner(f, g, 16) == doctest::Approx(inner(f, g)).epsilon(1e-12));
  CHECK(integral(TorusField::constant(1.0)) == doctest::Approx(2.0 * kPi * kPi));
}

TEST_CASE("Q on the destabilising modes") {
  const auto spec = mode_spectrum(8);
  for (const auto& [l, q] : spec) {
    const TorusField v = TorusField::v_mode(l);
    const double expected = 3.0 * std::numbers::sqrt2 * (1.0 - 3.0 * l * l) * inner(v, v);
    CHECK(q == doctest::Approx(expected).epsilon(1e-13));
    CHECK(q < 0.0);
  }
  CHECK(spec[0].second == doctest::Approx(-6.0 * std::numbers::sqrt2 * kPi * kPi).epsilon(1e-13));
}

TEST_CASE("three evaluations of the second variation agree") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const TorusField f = TorusField::random(seed, 4);
    const double q = second_variation(f);
    CHECK(second_variation_pre_ibp(f) == doctest::Approx(q).epsilon(1e-10));
    CHECK(assembled_second_variation(f) == doctest::Approx(q).epsilon(1e-10));
    const AdjointnessResiduals adj = ibp_adjointness(f, TorusField::random(seed + 100, 4));
    CHECK(std::abs(adj.residual_e1) < 1e-10);
    CHECK(std::abs(adj.residual_T) < 1e-10);
  }
}

TEST_CASE("Clifford torus background") {
  const TorusBackground bg = TorusBackground::clifford();
  CHECK(bg.H == 0.0);
  CHECK(bg.Hcr == 0.5);
  CHECK(hcr_f(bg) == 0.0);
  CHECK(first_variation_density(bg) == 0.0);
  CHECK_THROWS_AS(TorusBackground::make(1.0), Error);
}

TEST_CASE("criticality sweep has a single zero") {
  int zeros = 0;
  for (int k = 1; k <= 99; ++k) {
    const double rho1 = std::sin(k * kPi / 200.0);
    const double e = first_variation_density(TorusBackground::make(rho1));
    if (std::abs(e) < 1e-14) {
      ++zeros;
      CHECK(k == 50);
    }
  }
  CHECK(zeros == 1);
}

TEST_CASE("field operations") {
  TorusField f(2);
  CHECK_THROWS_AS(f.add(3, 0, 1.0), Error);
  const TorusField c = TorusField::cosine(1, 2, 2.0);
  CHECK(c.evaluate(0.3, 0.4) == doctest::Approx(2.0 * std::cos(0.3 + 0.8)));
  const TorusField d = c - c;
  CHECK(d.evaluate(0.1, 0.2) == 0.0);
  // e1 cos(phi2 - phi1) = -sin(...) * 2
  const TorusField e = apply_e1(TorusField::cosine(-1, 1));
  CHECK(e.evaluate(0.2, 0.9) == doctest::Approx(-2.0 * std::sin(0.7)));
}
