#include "e1lab/cli/checks.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "e1lab/clifford_secondvar.hpp"
#include "e1lab/errors.hpp"
#include "e1lab/hyperbolic_cauchy.hpp"
#include "e1lab/jets_invariants.hpp"
#include "e1lab/rotsym.hpp"

namespace e1lab::cli {

namespace {

using rotsym::Family;

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kPi = std::numbers::pi;

class Suite {
 public:
  Suite(std::string name, double scale) : name_(std::move(name)), scale_(scale) {}

  void at_most(const std::string& what, double value, double limit) {
    const double t = limit * scale_;
    rows_.push_back({name_, what, value, "<=", t, value <= t});
  }
  void at_least(const std::string& what, double value, double limit) {
    rows_.push_back({name_, what, value, ">=", limit, value >= limit});
  }
  std::vector<CheckRow> take() { return std::move(rows_); }

 private:
  std::string name_;
  double scale_;
  std::vector<CheckRow> rows_;
};

jets::SurfaceJet random_jet(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  jets::SurfaceJet j;
  j.x = u(rng);
  j.y = u(rng);
  j.u = u(rng);
  j.ux = u(rng);
  j.uy = u(rng);
  j.uxx = u(rng);
  j.uxy = u(rng);
  j.uyy = u(rng);
  return j;
}

void hyperbolicity(Suite& s) {
  std::mt19937_64 rng(1);
  double disc = 0.0, forms = 0.0;
  int used = 0;
  while (used < 10000) {
    const jets::SurfaceJet j = random_jet(rng);
    if (std::hypot(j.ux - j.y, j.uy + j.x) < 1e-6) continue;
    ++used;
    disc = std::max(disc, std::abs(jets::hyperbolicity_witness(j).discriminant + 0.25));
    const auto f = jets::e1_residual_forms(j);
    forms = std::max(forms, std::abs(f.graph_form - f.frame_form) / (1.0 + std::abs(f.graph_form)));
  }
  s.at_most("max |discriminant + 1/4| over 1e4 jets", disc, 1e-12);
  s.at_most("graph vs frame residual form", forms, 1e-10);
}

struct RandomState {
  double r, phi;
  cauchy::StateVector U;
};

RandomState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::uniform_real_distribution<double> rad(0.2, 3.0);
  for (;;) {
    RandomState s{rad(rng), ang(rng), {ang(rng), val(rng), val(rng), val(rng)}};
    if (std::abs(cauchy::det_A(s.r, s.phi, s.U)) > 1e-3) return s;
  }
}

Eigen::Matrix4d to_eigen(const cauchy::Mat4& M) {
  Eigen::Matrix4d E;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) E(i, j) = M[i][j];
  return E;
}

void linalg(Suite& s) {
  std::mt19937_64 rng(2);
  double det = 0.0, inv = 0.0, am = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const RandomState st = random_state(rng);
    const auto M = cauchy::assemble(st.r, st.phi, st.U);
    const Eigen::PartialPivLU<Eigen::Matrix4d> lu(to_eigen(M.A));
    const double d = lu.determinant();
    det = std::max(det, std::abs(cauchy::det_A(st.r, st.phi, st.U) - d) / std::abs(d));
    const Eigen::Matrix4d Ai = lu.inverse();
    inv = std::max(inv, (to_eigen(cauchy::inverse_A(st.r, st.phi, st.U)) - Ai).norm() / Ai.norm());
    const Eigen::Matrix4d a = lu.solve(to_eigen(M.B));
    am = std::max(am, (to_eigen(cauchy::a_matrix(st.r, st.phi, st.U)) - a).norm() / a.norm());
  }
  s.at_most("det A relative error", det, 1e-10);
  s.at_most("A^-1 relative error", inv, 1e-10);
  s.at_most("A^-1 B relative error", am, 1e-10);
}

void eigen(Suite& s) {
  std::mt19937_64 rng(3);
  const char* regimes[3] = {"generic", "H = 0", "alpha = 0"};
  double gap = 0.0;
  for (int regime = 0; regime < 3; ++regime) {
    double worst = 0.0;
    int kind_mismatch = 0;
    for (int i = 0; i < 1000;) {
      RandomState st = random_state(rng);
      if (regime == 1) st.U.H = 0.0;
      if (regime == 2) {
        st.U.alpha = 0.0;
        if (std::abs(st.U.H) < 0.1) st.U.H = 0.5;
      }
      if (std::abs(cauchy::det_A(st.r, st.phi, st.U)) < 1e-3) continue;
      ++i;
      const auto es = cauchy::eigen_system(st.r, st.phi, st.U);
      if (static_cast<int>(es.kind) != regime) ++kind_mismatch;
      const Eigen::Matrix4d a = to_eigen(cauchy::a_matrix(st.r, st.phi, st.U));
      for (const auto& p : es.pairs) {
        const Eigen::Vector4d xi(p.xi[0], p.xi[1], p.xi[2], p.xi[3]);
        worst = std::max(worst, (a * xi - p.lambda * xi).norm() / a.norm());
      }
      if (regime == 0) {
        const double sn = std::sin(st.U.theta - st.phi), cs = std::cos(st.U.theta - st.phi);
        const double al = st.U.alpha, H = st.U.H, r = st.r;
        const double sigma = sn * H / 3.0 + 2.0 * cs * al, eta = 2.0 * sn * H / 3.0 + 2.0 * cs * al;
        const double l1 = a(0, 0), l2 = a(1, 1), l3 = a(2, 2);
        const double scale = std::abs(l1) + std::abs(l2) + std::abs(l3);
        gap = std::max({gap, std::abs((l1 - l2) - 2.0 * al / (sn * r * sigma)) / scale,
                        std::abs((l3 - l2) - 2.0 * al / (sn * r * eta)) / scale,
                        std::abs((l1 - l3) - 2.0 / 3.0 * al * H / (r * sigma * eta)) / scale});
      }
    }
    s.at_most(std::string("eigen residual / |a|, ") + regimes[regime], worst, 1e-9);
    s.at_most(std::string("case detection mismatches, ") + regimes[regime], kind_mismatch, 0.0);
  }
  s.at_most("lambda gap formulas", gap, 1e-10);
}

const std::vector<Family>& families() {
  static const std::vector<Family> f{Family::ParabolaPlus, Family::ParabolaMinus, Family::TypeI,
                                     Family::TypeII};
  return f;
}

void exact(Suite& s) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Family f : families()) {
    const double limit = std::min(3.0, rotsym::blowup_radius(f, 1.0));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double r = limit * (0.02 + 0.96 * unit(rng));
      const double phi = 2.0 * kPi * unit(rng);
      const auto d = rotsym::closed_form_graph(f, 1.0, r);
      worst = std::max(worst, std::abs(jets::e1_residual(jets::radial_jet(r, phi, d.u, d.ur, d.urr))));
    }
    const std::string fam(rotsym::to_string(f));
    s.at_most(fam + " E1 residual at 1e3 points", worst, 1e-10);

    const double hi = std::min(1.5, 0.9 * limit);
    auto field = [f](double r, double phi) { return cauchy::exact_state(f, 1.0, r, phi); };
    const cauchy::IdentityGrid grid{0.3 * hi, hi, 4, 6};
    const auto coarse = cauchy::verify_identities(field, grid, 2e-3);
    const auto fine = cauchy::verify_identities(field, grid, 1e-3);
    const std::pair<const char*, std::pair<double, double>> ids[] = {
        {"iden1", {coarse.iden1, fine.iden1}},   {"iden2", {coarse.iden2, fine.iden2}},
        {"emini1", {coarse.emini1, fine.emini1}}, {"emini2", {coarse.emini2, fine.emini2}},
        {"codeq1", {coarse.codeq1, fine.codeq1}}};
    for (const auto& [id, v] : ids) {
      if (v.second < 1e-11) {
        s.at_most(fam + " " + id + " residual (roundoff floor)", v.second, 1e-11);
      } else {
        s.at_least(fam + " " + id + " FD order", std::log2(v.first / v.second), 1.8);
      }
    }
  }
}

void ode(Suite& s) {
  struct Case {
    Family f;
    double r0, r1;
  };
  for (const Case c : {Case{Family::TypeI, 0.05, 0.2}, Case{Family::TypeII, 0.1, 1.0}}) {
    const std::string fam(rotsym::to_string(c.f));
    double prev = 0.0, order = 0.0, err = 0.0;
    for (double h : {4e-3, 2e-3, 1e-3}) {
      const auto res = rotsym::integrate_w(c.r0, rotsym::closed_form_w(c.f, 1.0, c.r0), c.r1, h);
      err = std::abs(res.profile.samples.back().w - rotsym::closed_form_w(c.f, 1.0, c.r1));
      if (prev > 0.0) order = std::log2(prev / err);
      prev = err;
    }
    s.at_least(fam + " RK4 observed order", order, 3.7);
    s.at_most(fam + " final error at h = 1e-3", err, 1e-8);
  }
  for (Family f : {Family::TypeI, Family::TypeII}) {
    const double eps = f == Family::TypeI ? 1.0 : -1.0;
    const double end = f == Family::TypeI ? 0.3 : 1.0;
    auto res = rotsym::integrate_w(0.05, rotsym::closed_form_w(f, 1.0, 0.05), end, 1e-3);
    const auto p = rotsym::u_from_w(res.profile, -eps * 0.25);
    double worst = 0.0;
    for (const auto& smp : p.samples) {
      const double q = smp.r * smp.r + eps * kSqrt3 / 2.0;
      worst = std::max(worst, std::abs(q * q + 4.0 * smp.u * smp.u - 1.0));
    }
    s.at_most(std::string(rotsym::to_string(f)) + " u_from_w sphere equation", worst, 1e-7);

    const auto cls = rotsym::classify(p, 1e-6);
    s.at_most(std::string(rotsym::to_string(f)) + " classify round trip rho0 error",
              cls.family == f ? std::abs(cls.rho0 - 1.0) : 1.0, 1e-6);
  }
}

void gluing(Suite& s) {
  const auto g = rotsym::gluing_second_derivatives(1.0);
  const double h = 1e-4;
  auto ruu = [&](Family f, double rho0) {
    return (rotsym::sphere_rim_radius(f, rho0, h) - 2.0 * rotsym::sphere_rim_radius(f, rho0, 0.0) +
            rotsym::sphere_rim_radius(f, rho0, -h)) /
           (h * h);
  };
  const double rho_ii =
      rotsym::rho0_for_rim_radius(Family::TypeII, rotsym::blowup_radius(Family::TypeI, 1.0));
  s.at_most("type I r_uu relative error", std::abs(ruu(Family::TypeI, 1.0) / g.ruu_type_i - 1.0), 1e-5);
  s.at_most("type II r_uu relative error", std::abs(ruu(Family::TypeII, rho_ii) / g.ruu_type_ii - 1.0), 1e-5);
  s.at_most("ratio - (7 + 4 sqrt3)", std::abs(g.ratio - (7.0 + 4.0 * kSqrt3)), 1e-8);
}

void march(Suite& s) {
  struct Case {
    Family f;
    double c, to;
  };
  for (const Case c : {Case{Family::ParabolaPlus, 1.0, 1.5}, Case{Family::TypeI, 0.2, 0.3}}) {
    const std::string fam(rotsym::to_string(c.f));
    auto init = [c](double phi) { return cauchy::exact_state(c.f, 1.0, c.c, phi); };
    auto exact = [c](double r, double phi) { return cauchy::exact_state(c.f, 1.0, r, phi); };
    for (auto scheme : {cauchy::Scheme::LaxWendroff, cauchy::Scheme::Upwind}) {
      cauchy::MarchOptions o;
      o.scheme = scheme;
      double prev = 0.0, order = 0.0;
      for (int n : {128, 256, 512}) {
        const auto g = cauchy::march_cauchy(init, c.c, c.to, n, o);
        const double e = g.status == cauchy::HaltStatus::Completed ? cauchy::error_against(g, exact) : 1e300;
        if (prev > 0.0) order = std::log2(prev / e);
        prev = e;
      }
      const bool lw = scheme == cauchy::Scheme::LaxWendroff;
      s.at_least(fam + " " + std::string(cauchy::to_string(scheme)) + " order", order, lw ? 1.8 : 0.9);
    }
  }
  cauchy::UniquenessOptions uo;
  uo.resolutions = {128, 256, 512};
  const auto rep = cauchy::uniqueness_experiment(
      [](double phi) { return cauchy::exact_state(Family::ParabolaPlus, 1.0, 1.0, phi); }, 1.0, 1.5, uo);
  const auto& d = rep.scheme_distance;
  s.at_most("cross-scheme distance ratio 512/256", d[2] / d[1], 0.75);
  s.at_most("cross-scheme distance ratio 256/128", d[1] / d[0], 0.75);
  s.at_most("perturbation gain spread - 1", rep.gain_spread - 1.0, 1.0);
  s.at_most("repeated march differs (0 = bit identical)", rep.deterministic ? 0.0 : 1.0, 0.0);
}

void secondvar_suite(Suite& s) {
  using namespace secondvar;
  s.at_most("|measure factor - 1/2|", std::abs(measure_factor() - 0.5), 1e-15);
  double worst = 0.0, largest = -1e300;
  for (const auto& [l, q] : mode_spectrum(8)) {
    const TorusField v = TorusField::v_mode(l);
    const double expected = 3.0 * std::numbers::sqrt2 * (1.0 - 3.0 * l * l) * inner(v, v);
    worst = std::max(worst, std::abs(q - expected) / std::abs(expected));
    largest = std::max(largest, q);
  }
  s.at_most("Q(v_l) vs 3 sqrt2 (1 - 3 l^2) |v_l|^2, l = 1..8", worst, 1e-13);
  s.at_most("max Q(v_l), l = 1..8 (negative)", largest, 0.0);
  double paths = 0.0, adj = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const TorusField f = TorusField::random(seed, 4);
    const double q = second_variation(f);
    paths = std::max(paths, std::abs(assembled_second_variation(f) - q) / std::abs(q));
    const auto r = ibp_adjointness(f, TorusField::random(seed + 1000, 4));
    adj = std::max({adj, std::abs(r.residual_e1), std::abs(r.residual_T)});
  }
  s.at_most("assembled vs integrated-by-parts form, 100 fields", paths, 1e-10);
  s.at_most("integration by parts residual", adj, 1e-10);
  const TorusBackground bg = TorusBackground::clifford();
  s.at_most("|Hcr - 1/2| at the Clifford torus", std::abs(bg.Hcr - 0.5), 0.0);
  s.at_most("|Hcr| f at the Clifford torus", std::abs(hcr_f(bg)), 0.0);
  int zeros = 0, wrong = 0;
  for (int k = 1; k <= 99; ++k) {
    const double e = first_variation_density(TorusBackground::make(std::sin(k * kPi / 200.0)));
    if (std::abs(e) < 1e-14) {
      ++zeros;
      if (k != 50) ++wrong;
    }
  }
  s.at_most("|zeros of E1 on the rho1 sweep - 1|", std::abs(zeros - 1.0), 0.0);
  s.at_most("zeros away from rho1 = 1/sqrt2", wrong, 0.0);
}

void dilation(Suite& s) {
  // u = x^2 y / 3 + y^2 / 5 and its dilate l^2 u(x / l, y / l), written out.
  auto jet_at = [](double l) {
    return [l](double x, double y) {
      jets::SurfaceJet j;
      j.x = x;
      j.y = y;
      j.u = x * x * y / (3.0 * l) + 0.2 * y * y;
      j.ux = 2.0 * x * y / (3.0 * l);
      j.uy = x * x / (3.0 * l) + 0.4 * y;
      j.uxx = 2.0 * y / (3.0 * l);
      j.uxy = 2.0 * x / (3.0 * l);
      j.uyy = 0.4;
      return j;
    };
  };
  const jets::ParameterRect rect{0.5, 1.5, 0.3, 1.1};
  const double I0 = jets::integrate_E1_patch(jets::graph_sampler(jet_at(1.0)), rect, 200, 200);
  // 3 is not a power of two, so that comparison is not exact in floating point.
  for (double l : {0.5, 2.0, 3.0, 4.0}) {
    const jets::ParameterRect sc{l * rect.s0, l * rect.s1, l * rect.t0, l * rect.t1};
    const double I = jets::integrate_E1_patch(jets::graph_sampler(jet_at(l)), sc, 200, 200);
    s.at_most("patch E1 relative change, lambda = " + std::to_string(l).substr(0, 3),
              std::abs(I - I0) / std::abs(I0), 1e-6);
  }
}

const std::map<std::string, std::function<void(Suite&)>>& registry() {
  static const std::map<std::string, std::function<void(Suite&)>> r{
      {"hyperbolicity", hyperbolicity}, {"linalg", linalg},   {"eigen", eigen},
      {"exact", exact},                 {"ode", ode},         {"gluing", gluing},
      {"march", march},                 {"secondvar", secondvar_suite}, {"dilation", dilation}};
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"hyperbolicity", "linalg", "eigen",     "exact",   "ode",
                                              "gluing",        "march",  "secondvar", "dilation"};
  return names;
}

std::vector<CheckRow> run_suite(const std::string& name, double tol_scale) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorKind::InvalidArgument, "unknown suite '" + name + "'");
  if (!(tol_scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance scale must be positive");
  Suite s(name, tol_scale);
  it->second(s);
  return s.take();
}

}  // namespace e1lab::cli
