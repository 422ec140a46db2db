#include "e1lab/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "e1lab/cli/checks.hpp"
#include "e1lab/cli/expr.hpp"
#include "e1lab/cli/output.hpp"
#include "e1lab/clifford_secondvar.hpp"
#include "e1lab/errors.hpp"
#include "e1lab/hyperbolic_cauchy.hpp"

namespace e1lab::cli {

namespace {

using rotsym::Family;

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt3 = std::numbers::sqrt3;

bool is_sphere(Family f) { return f == Family::TypeI || f == Family::TypeII; }

// u(0) of the closed-form graph, which anchors integrated profiles.
double anchor_u0(Family f, double rho0) {
  if (f == Family::TypeI) return -0.25 * rho0 * rho0;
  if (f == Family::TypeII) return 0.25 * rho0 * rho0;
  return 0.0;
}

void print_kv(const char* key, double v) { std::printf("%-22s %.15g\n", key, v); }

void write_profile(CsvWriter& csv, const rotsym::RadialProfile& p) {
  const std::string label = rotsym::family_label(p);
  for (const auto& s : p.samples) csv.row({s.r, s.w, s.u, label, p.rho0});
}

void print_classification(const rotsym::ClassifyResult& c) {
  std::printf("classified as %s", std::string(rotsym::to_string(c.family)).c_str());
  if (c.reflected && c.family != Family::ParabolaMinus) std::printf("-reflected");
  if (is_sphere(c.family)) std::printf(" rho0 = %.12g", c.rho0);
  std::printf(" (max deviation %.3e)\n", c.max_deviation);
}

cauchy::Scheme parse_scheme(const std::string& s) {
  if (s == "lax-wendroff" || s == "lw") return cauchy::Scheme::LaxWendroff;
  if (s == "upwind") return cauchy::Scheme::Upwind;
  throw Error(ErrorKind::InvalidArgument, "unknown scheme '" + s + "' (lax-wendroff | upwind)");
}

}  // namespace

Family parse_family(const std::string& name) {
  if (name == "parabola+") return Family::ParabolaPlus;
  if (name == "parabola-") return Family::ParabolaMinus;
  if (name == "type1") return Family::TypeI;
  if (name == "type2") return Family::TypeII;
  return rotsym::family_from_string(name);
}

std::function<jets::SurfaceJet(double, double)> parse_surface(const std::string& spec, double rho0) {
  const std::string prefix = "custom:u=";
  if (spec.rfind(prefix, 0) == 0) {
    auto expr = std::make_shared<Expression>(spec.substr(prefix.size()));
    return [expr](double x, double y) {
      const Jet2 j = expr->evaluate(x, y);
      return jets::SurfaceJet{x, y, j.v, j.x, j.y, j.xx, j.xy, j.yy};
    };
  }
  const Family f = parse_family(spec);
  if (f == Family::Numeric || f == Family::Unknown) {
    throw Error(ErrorKind::InvalidArgument, "surface '" + spec + "' has no closed form");
  }
  return [f, rho0](double x, double y) {
    const double r = std::hypot(x, y);
    if (r == 0.0) throw Error(ErrorKind::SingularPoint, "the origin is a singular point");
    const auto d = rotsym::closed_form_graph(f, rho0, r);
    return jets::radial_jet(r, std::atan2(y, x), d.u, d.ur, d.urr);
  };
}

int cmd_invariants(const InvariantsArgs& a, RunContext& ctx) {
  const auto surface = parse_surface(a.surface, a.rho0);
  const bool polar = !std::isnan(a.r);
  const double x = polar ? a.r * std::cos(a.phi) : a.x;
  const double y = polar ? a.r * std::sin(a.phi) : a.y;
  const jets::SurfaceJet jet = surface(x, y);
  const jets::Invariants inv = jets::invariants_from_jet(jet);
  const jets::ResidualForms res = jets::e1_residual_forms(jet);
  const double hcr = jets::hcr(jet);

  print_kv("x", x);
  print_kv("y", y);
  print_kv("u", jet.u);
  print_kv("D", inv.D);
  print_kv("alpha", inv.alpha);
  print_kv("theta", inv.theta);
  print_kv("H", inv.H);
  print_kv("Hcr", hcr);
  print_kv("residual", res.graph_form);
  print_kv("residual (frame form)", res.frame_form);

  CsvWriter csv(ctx.output("invariants.csv"), {"x", "y", "u", "D", "alpha", "theta", "H", "Hcr", "residual"});
  csv.row({x, y, jet.u, inv.D, inv.alpha, inv.theta, inv.H, hcr, res.graph_form});
  return kOk;
}

int cmd_rotsym_integrate(const IntegrateArgs& a, RunContext& ctx) {
  const bool numeric = !std::isnan(a.w0);
  Family f = numeric ? Family::Numeric : parse_family(a.family);
  if (f == Family::Unknown) throw Error(ErrorKind::InvalidArgument, "cannot integrate family Unknown");
  if (f == Family::Numeric && !numeric) {
    throw Error(ErrorKind::InvalidArgument, "family Numeric needs --w0");
  }
  // The w equation is integrated for the unreflected family; the Minus
  // branch is its mirror image.
  bool mirror = a.reflect;
  if (f == Family::ParabolaMinus) {
    f = Family::ParabolaPlus;
    mirror = !mirror;
  }
  const double r_start = std::isnan(a.r_start) ? 0.05 * (is_sphere(f) ? a.rho0 : 1.0) : a.r_start;
  double r_end = a.r_end;
  if (std::isnan(r_end)) r_end = is_sphere(f) ? 0.9 * rotsym::blowup_radius(f, a.rho0) : 2.0;
  const double w_start = numeric ? a.w0 : rotsym::closed_form_w(f, a.rho0, r_start);
  ctx.manifest().parameters["r-start"] = format_double(r_start);
  ctx.manifest().parameters["r-end"] = format_double(r_end);

  rotsym::IntegrationResult res = rotsym::integrate_w(r_start, w_start, r_end, a.h);
  rotsym::RadialProfile profile = std::move(res.profile);
  profile.family = f;
  profile.rho0 = is_sphere(f) ? a.rho0 : 0.0;
  profile = rotsym::u_from_w(std::move(profile), anchor_u0(f, a.rho0));
  if (mirror) profile = rotsym::reflect(std::move(profile));

  CsvWriter csv(ctx.output("rotsym_profile.csv"), {"r", "w", "u", "family", "rho0"});
  write_profile(csv, profile);
  std::printf("integrated %s from r = %.6g to r = %.15g (%zu samples)\n",
              rotsym::family_label(profile).c_str(), r_start, res.r_reached, profile.samples.size());
  ctx.manifest().tolerances["classify_tol"] = a.tol;

  if (res.blew_up) {
    std::printf("halted: %s\n", res.halt_reason.c_str());
    ctx.halt("BlowUp: " + res.halt_reason);
    return kNumericalHalt;
  }
  if (profile.samples.size() >= 10) {
    try {
      print_classification(rotsym::classify(profile, a.tol));
    } catch (const rotsym::AmbiguousFitError& e) {
      std::printf("classification: %s\n", e.what());
    }
  }
  return kOk;
}

rotsym::RadialProfile read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::InvalidArgument, path.string() + " is empty");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      out.push_back(cell);
    }
    return out;
  };
  const auto header = split(line);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : int(it - header.begin());
  };
  const int ir = column("r"), iw = column("w"), iu = column("u");
  if (ir < 0 || iw < 0) throw Error(ErrorKind::InvalidArgument, "profile CSV needs r and w columns");
  rotsym::RadialProfile p;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (int(cells.size()) <= std::max({ir, iw, iu})) {
      throw Error(ErrorKind::InvalidArgument, "short row in " + path.string());
    }
    try {
      p.samples.push_back({std::stod(cells[ir]), std::stod(cells[iw]), iu >= 0 ? std::stod(cells[iu]) : 0.0});
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "non-numeric value in " + path.string());
    }
  }
  return p;
}

int cmd_rotsym_classify(const ClassifyArgs& a, RunContext& ctx) {
  const rotsym::RadialProfile p = read_profile_csv(a.input);
  ctx.manifest().tolerances["tol"] = a.tol;
  CsvWriter csv(ctx.output("classify.csv"), {"family", "rho0", "reflected", "max_deviation", "pass"});
  auto dump = [&](const std::vector<rotsym::FitCandidate>& fits, const std::vector<rotsym::FitCandidate>& passing) {
    for (const auto& c : fits) {
      const bool pass = std::any_of(passing.begin(), passing.end(), [&](const auto& q) {
        return q.family == c.family && q.reflected == c.reflected;
      });
      csv.row({std::string(rotsym::to_string(c.family)), c.rho0, (long long)c.reflected, c.max_deviation,
               (long long)pass});
    }
  };
  try {
    const auto result = rotsym::classify(p, a.tol);
    std::vector<rotsym::FitCandidate> passing;
    if (result.family != Family::Unknown) {
      passing.push_back({result.family, result.rho0, result.reflected, result.max_deviation});
    }
    dump(result.fits, passing);
    print_classification(result);
  } catch (const rotsym::AmbiguousFitError& e) {
    dump(e.passing(), e.passing());
    throw;
  }
  return kOk;
}

int cmd_rotsym_glue(double rho0, RunContext& ctx) {
  const auto g = rotsym::gluing_second_derivatives(rho0);
  print_kv("r_uu type I", g.ruu_type_i);
  print_kv("r_uu type II", g.ruu_type_ii);
  print_kv("ratio", g.ratio);
  print_kv("7 + 4 sqrt3", 7.0 + 4.0 * kSqrt3);
  CsvWriter csv(ctx.output("gluing.csv"), {"rho0", "ruu_type_i", "ruu_type_ii", "ratio"});
  csv.row({rho0, g.ruu_type_i, g.ruu_type_ii, g.ratio});
  return kOk;
}

int cmd_rotsym_figures(const FiguresArgs& a, RunContext& ctx) {
  if (a.n < 2) throw Error(ErrorKind::InvalidArgument, "need n >= 2");
  const double rho0 = a.rho0;
  const int n = a.n;
  const std::vector<std::string> header{"r", "w", "u", "family", "rho0"};
  const double r_par = rotsym::blowup_radius(Family::TypeII, rho0);

  auto radii = [&](Family f) {
    const double limit = is_sphere(f) ? rotsym::blowup_radius(f, rho0) : r_par;
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = limit * (i + 1) / (n + 1);
    return r;
  };

  {
    CsvWriter csv(ctx.output("fig1_w_curves.csv"), header);
    for (Family f : {Family::ParabolaPlus, Family::TypeI, Family::TypeII}) {
      for (double r : radii(f)) {
        csv.row({r, rotsym::closed_form_w(f, rho0, r), rotsym::closed_form_graph(f, rho0, r).u,
                 std::string(rotsym::to_string(f)), is_sphere(f) ? rho0 : 0.0});
      }
    }
  }
  {
    CsvWriter csv(ctx.output("fig2_graphs.csv"), header);
    for (Family f : {Family::ParabolaPlus, Family::ParabolaMinus, Family::TypeI, Family::TypeII}) {
      for (double r : radii(f)) {
        const auto d = rotsym::closed_form_graph(f, rho0, r);
        csv.row({r, d.ur / r, d.u, std::string(rotsym::to_string(f)), is_sphere(f) ? rho0 : 0.0});
      }
    }
  }
  {
    // Closed profile curves (r^2 +- k)^2 + 4u^2 = rho0^4 through
    // q = rho0^2 cos(psi), 2u = rho0^2 sin(psi); along them w = -cot(psi).
    // The half not covered by the family's graph is written as reflected.
    CsvWriter csv(ctx.output("fig3_closed_curves.csv"), header);
    const double rho2 = rho0 * rho0;
    const double k = 0.5 * kSqrt3 * rho2;
    for (Family f : {Family::TypeI, Family::TypeII}) {
      const double eps = f == Family::TypeI ? 1.0 : -1.0;
      const double psi_max = f == Family::TypeI ? kPi / 6.0 : 5.0 * kPi / 6.0;
      const int m = 2 * n;
      for (int i = 0; i < m; ++i) {
        const double psi = -psi_max + 2.0 * psi_max * (i + 0.5) / m;
        const double r2 = rho2 * std::cos(psi) - eps * k;
        const double r = std::sqrt(std::max(0.0, r2));
        const double u = 0.5 * rho2 * std::sin(psi);
        const bool own_half = eps * u < 0.0;
        std::string label(rotsym::to_string(f));
        if (!own_half) label += "-reflected";
        csv.row({r, -1.0 / std::tan(psi), u, label, rho0});
      }
    }
  }
  std::printf("wrote %zu figure files to %s\n", ctx.manifest().outputs.size(), ctx.out_dir().string().c_str());
  return kOk;
}

int cmd_cauchy_march(const MarchArgs& a, RunContext& ctx) {
  const Family f = parse_family(a.init);
  cauchy::MarchOptions o;
  o.scheme = parse_scheme(a.scheme);
  o.cfl = a.cfl;
  ctx.manifest().tolerances["det_tol"] = o.det_tol;
  ctx.manifest().tolerances["s_tol"] = o.s_tol;
  ctx.manifest().tolerances["alpha_tol"] = o.alpha_tol;
  ctx.manifest().tolerances["spectral_tail_tol"] = o.spectral_tail_tol;
  const double rho0 = a.rho0;
  const auto init = [&](double phi) { return cauchy::exact_state(f, rho0, a.c, phi); };
  const auto grid = cauchy::march_cauchy(init, a.c, a.to, a.nphi, o);

  CsvWriter csv(ctx.output("cauchy_grid.csv"), {"r", "phi", "theta", "alpha", "H", "m"});
  for (std::size_t i = 0; i < grid.states.size(); ++i) {
    for (std::size_t j = 0; j < grid.phi_values.size(); ++j) {
      const auto& U = grid.states[i][j];
      csv.row({grid.r_values[i], grid.phi_values[j], U.theta, U.alpha, U.H, U.m});
    }
  }
  const double err =
      cauchy::error_against(grid, [&](double r, double phi) { return cauchy::exact_state(f, rho0, r, phi); });
  const double rel = *std::max_element(grid.relation_residual.begin(), grid.relation_residual.end());
  std::printf("scheme %s, %d phi nodes, %zu r levels, reached r = %.15g\n",
              std::string(cauchy::to_string(grid.scheme)).c_str(), a.nphi, grid.r_values.size(),
              grid.r_values.back());
  print_kv("max error vs exact", err);
  print_kv("max E1 relation", rel);
  if (grid.status != cauchy::HaltStatus::Completed) {
    std::printf("halted (%s): %s\n", std::string(cauchy::to_string(grid.status)).c_str(),
                grid.halt_reason.c_str());
    ctx.halt(std::string(cauchy::to_string(grid.status)) + ": " + grid.halt_reason);
    return kNumericalHalt;
  }
  return kOk;
}

int cmd_cauchy_unique(const UniqueArgs& a, RunContext& ctx) {
  const Family f = parse_family(a.init);
  cauchy::UniquenessOptions o;
  o.resolutions = a.nphi;
  o.epsilons = a.eps;
  o.cfl = a.cfl;
  const double rho0 = a.rho0;
  const auto rep = cauchy::uniqueness_experiment(
      [&](double phi) { return cauchy::exact_state(f, rho0, a.c, phi); }, a.c, a.to, o);
  {
    CsvWriter csv(ctx.output("unique_schemes.csv"), {"nphi", "distance"});
    for (std::size_t i = 0; i < rep.resolutions.size(); ++i) {
      csv.row({(long long)rep.resolutions[i], rep.scheme_distance[i]});
      std::printf("nphi %5d  lax-wendroff vs upwind %.6e\n", rep.resolutions[i], rep.scheme_distance[i]);
    }
  }
  {
    CsvWriter csv(ctx.output("unique_response.csv"), {"eps", "response", "gain"});
    for (std::size_t i = 0; i < rep.epsilons.size(); ++i) {
      csv.row({rep.epsilons[i], rep.response[i], rep.gain[i]});
      std::printf("eps %.3e  response %.6e  gain %.6f\n", rep.epsilons[i], rep.response[i], rep.gain[i]);
    }
  }
  print_kv("gain spread", rep.gain_spread);
  std::printf("linear within factor 2: %s\n", rep.gain_spread <= 2.0 ? "yes" : "no");
  std::printf("repeat bit-identical: %s\n", rep.deterministic ? "yes" : "no");
  if (rep.status != cauchy::HaltStatus::Completed) {
    ctx.halt(std::string(cauchy::to_string(rep.status)));
    return kNumericalHalt;
  }
  return kOk;
}

int cmd_cauchy_eigen(const EigenArgs& a, RunContext& ctx) {
  // phi = 0, so theta - phi is the angle of (c, s).
  const double theta = std::atan2(a.s, a.c);
  const cauchy::StateVector U{theta, a.alpha, a.H, 0.0};
  const auto es = cauchy::eigen_system(a.r, 0.0, U);
  const cauchy::Mat4 am = cauchy::a_matrix(a.r, 0.0, U);
  double norm = 0.0;
  for (const auto& row : am)
    for (double v : row) norm += v * v;
  norm = std::sqrt(norm);
  const char* kinds[] = {"generic", "H = 0", "alpha = 0"};
  std::printf("case: %s\n", kinds[static_cast<int>(es.kind)]);
  CsvWriter csv(ctx.output("eigen.csv"), {"k", "lambda", "xi1", "xi2", "xi3", "xi4", "residual"});
  for (int k = 0; k < 4; ++k) {
    const auto& p = es.pairs[k];
    double res = 0.0;
    for (int i = 0; i < 4; ++i) {
      double acc = -p.lambda * p.xi[i];
      for (int j = 0; j < 4; ++j) acc += am[i][j] * p.xi[j];
      res += acc * acc;
    }
    res = std::sqrt(res) / norm;
    std::printf("lambda%d = %.15g  xi = (%.12g, %.12g, %.12g, %.12g)  residual %.3e\n", k + 1, p.lambda,
                p.xi[0], p.xi[1], p.xi[2], p.xi[3], res);
    csv.row({(long long)(k + 1), p.lambda, p.xi[0], p.xi[1], p.xi[2], p.xi[3], res});
  }
  return kOk;
}

int cmd_secondvar(const SecondvarArgs& a, RunContext& ctx) {
  using namespace secondvar;
  if (a.criticality) {
    CsvWriter csv(ctx.output("criticality.csv"), {"rho1", "H", "Hcr", "hcr_f", "E1"});
    auto one = [&](double rho1, const TorusBackground& bg) {
      const double e = first_variation_density(bg);
      csv.row({rho1, bg.H, bg.Hcr, hcr_f(bg), e});
      return e;
    };
    if (!std::isnan(a.rho1)) {
      const TorusBackground bg = TorusBackground::make(a.rho1);
      const double e = one(a.rho1, bg);
      print_kv("rho1", a.rho1);
      print_kv("H", bg.H);
      print_kv("Hcr", bg.Hcr);
      print_kv("|Hcr| f", hcr_f(bg));
      print_kv("E1 density", e);
    } else {
      int zeros = 0;
      for (int k = 1; k <= 99; ++k) {
        const double rho1 = std::sin(k * kPi / 200.0);
        const double e = one(rho1, k == 50 ? TorusBackground::clifford() : TorusBackground::make(rho1));
        if (std::abs(e) < 1e-14) {
          ++zeros;
          std::printf("E1 vanishes at rho1 = %.15g\n", rho1);
        }
      }
      std::printf("%d zero(s) on the 99-point sweep\n", zeros);
    }
    return kOk;
  }
  if (a.check_ibp) {
    if (a.fields < 1) throw Error(ErrorKind::InvalidArgument, "need at least one field");
    ctx.manifest().tolerances["ibp_tol"] = 1e-10;
    std::mt19937_64 rng(a.seed);
    CsvWriter csv(ctx.output("ibp.csv"), {"field", "adjoint_e1", "adjoint_T", "pre_ibp_rel", "assembled_rel"});
    double worst = 0.0;
    for (int i = 0; i < a.fields; ++i) {
      const TorusField f = TorusField::random(rng(), a.band);
      const TorusField g = TorusField::random(rng(), a.band);
      const double q = second_variation(f);
      const auto adj = ibp_adjointness(f, g);
      const double pre = std::abs(second_variation_pre_ibp(f) - q) / std::abs(q);
      const double asm_ = std::abs(assembled_second_variation(f) - q) / std::abs(q);
      csv.row({(long long)i, adj.residual_e1, adj.residual_T, pre, asm_});
      worst = std::max({worst, std::abs(adj.residual_e1), std::abs(adj.residual_T), pre, asm_});
    }
    print_kv("max residual", worst);
    return worst < 1e-10 ? kOk : kCheckFailed;
  }
  CsvWriter csv(ctx.output("secondvar.csv"), {"l", "Q"});
  for (const auto& [l, q] : mode_spectrum(a.lmax)) {
    csv.row({(long long)l, q});
    std::printf("l = %3d  Q = %.15g\n", l, q);
  }
  return kOk;
}

int cmd_check(const CheckArgs& a, RunContext& ctx) {
  std::vector<std::string> suites = a.all ? suite_names() : a.suites;
  if (suites.empty()) throw Error(ErrorKind::InvalidArgument, "name a suite or pass --all");
  ctx.manifest().tolerances["tol_scale"] = a.tol;
  int failed = 0;
  for (const auto& name : suites) {
    const auto rows = run_suite(name, a.tol);
    CsvWriter csv(ctx.output("check_" + name + ".csv"), {"suite", "name", "value", "cmp", "threshold", "pass"});
    for (const auto& r : rows) {
      csv.row({r.suite, r.name, r.value, r.cmp, r.threshold, (long long)r.pass});
      std::printf("%-4s %-13s %-52s %12.4e %s %.3g\n", r.pass ? "PASS" : "FAIL", r.suite.c_str(),
                  r.name.c_str(), r.value, r.cmp.c_str(), r.threshold);
      if (!r.pass) ++failed;
    }
  }
  std::printf("%d failure(s)\n", failed);
  return failed == 0 ? kOk : kCheckFailed;
}

}  // namespace e1lab::cli
