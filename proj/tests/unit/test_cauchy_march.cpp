#include <doctest.h>

#include <cmath>
#include <numbers>

#include "e1lab/errors.hpp"
#include "e1lab/hyperbolic_cauchy.hpp"

using namespace e1lab;
using namespace e1lab::cauchy;
using rotsym::Family;

namespace {

double march_error(Family f, double c, double to, int n, Scheme scheme) {
  MarchOptions o;
  o.scheme = scheme;
  const CauchyGrid g = march_cauchy([=](double phi) { return exact_state(f, 1.0, c, phi); }, c, to, n, o);
  REQUIRE(g.status == HaltStatus::Completed);
  return error_against(g, [=](double r, double phi) { return exact_state(f, 1.0, r, phi); });
}

}  // namespace

TEST_CASE("Lax-Wendroff converges at second order") {
  const double e1 = march_error(Family::ParabolaPlus, 1.0, 1.5, 64, Scheme::LaxWendroff);
  const double e2 = march_error(Family::ParabolaPlus, 1.0, 1.5, 128, Scheme::LaxWendroff);
  CHECK(std::log2(e1 / e2) >= 1.8);
  const double t1 = march_error(Family::TypeI, 0.2, 0.3, 64, Scheme::LaxWendroff);
  const double t2 = march_error(Family::TypeI, 0.2, 0.3, 128, Scheme::LaxWendroff);
  CHECK(std::log2(t1 / t2) >= 1.8);
}

TEST_CASE("upwind converges at first order, inward too") {
  const double e1 = march_error(Family::TypeII, 0.8, 0.5, 64, Scheme::Upwind);
  const double e2 = march_error(Family::TypeII, 0.8, 0.5, 128, Scheme::Upwind);
  CHECK(std::log2(e1 / e2) >= 0.9);
}

TEST_CASE("relation residual is recorded per level") {
  const CauchyGrid g = march_cauchy([](double phi) { return exact_state(Family::ParabolaPlus, 1.0, 1.0, phi); },
                                    1.0, 1.2, 32);
  CHECK(g.relation_residual.size() == g.r_values.size());
  CHECK(g.relation_residual.front() < 1e-14);
  CHECK(g.r_values.back() == 1.2);
}

TEST_CASE("precondition errors") {
  auto init = [](double phi) { return exact_state(Family::ParabolaPlus, 1.0, 1.0, phi); };
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  MarchOptions bad;
  bad.cfl = 1.5;
  CHECK(kind([&] { march_cauchy(init, 1.0, 1.5, 64, bad); }) == ErrorKind::CFLViolation);
  auto rough = [&](double phi) {
    StateVector U = init(phi);
    U.alpha += (std::fmod(phi, 1.0) < 0.5 ? 0.01 : -0.01);
    return U;
  };
  CHECK(kind([&] { march_cauchy(rough, 1.0, 1.5, 64); }) == ErrorKind::NonsmoothInitialData);
  auto degenerate = [](double phi) { return StateVector{phi, -0.5, 0.3, 0.0}; };
  CHECK(kind([&] { march_cauchy(degenerate, 1.0, 1.5, 64); }) == ErrorKind::NearCharacteristic);
}

TEST_CASE("uniqueness experiment") {
  UniquenessOptions o;
  o.resolutions = {32, 64, 128};
  const UniquenessReport rep = uniqueness_experiment(
      [](double phi) { return exact_state(Family::ParabolaPlus, 1.0, 1.0, phi); }, 1.0, 1.5, o);
  CHECK(rep.status == HaltStatus::Completed);
  CHECK(rep.scheme_distance[2] < rep.scheme_distance[1]);
  CHECK(rep.scheme_distance[1] < rep.scheme_distance[0]);
  CHECK(rep.gain_spread < 2.0);
  CHECK(rep.deterministic);
}
