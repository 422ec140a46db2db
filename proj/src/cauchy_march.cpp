#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <sstream>

#include "e1lab/errors.hpp"
#include "e1lab/hyperbolic_cauchy.hpp"
#include "e1lab/jets_invariants.hpp"

namespace e1lab::cauchy {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Level = std::vector<StateVector>;

Vec4 sub(const StateVector& x, const StateVector& y) {
  return {jets::angle_difference(x.theta, y.theta), x.alpha - y.alpha, x.H - y.H, x.m - y.m};
}

// Midpoint of two neighbouring states, theta taken along the short arc.
StateVector midpoint(const StateVector& x, const StateVector& y) {
  return {x.theta + 0.5 * jets::angle_difference(y.theta, x.theta), 0.5 * (x.alpha + y.alpha),
          0.5 * (x.H + y.H), 0.5 * (x.m + y.m)};
}

StateVector add(const StateVector& x, const Vec4& d, double scale) {
  return {x.theta + scale * d[0], x.alpha + scale * d[1], x.H + scale * d[2], x.m + scale * d[3]};
}

Vec4 matvec(const Mat4& M, const Vec4& v) {
  Vec4 out{};
  for (int i = 0; i < 4; ++i) out[i] = M[i][0] * v[0] + M[i][1] * v[1] + M[i][2] * v[2] + M[i][3] * v[3];
  return out;
}

// dU/dr = -a U_phi - b.
Vec4 rate(double r, double phi, const StateVector& U, const Vec4& U_phi) {
  const Vec4 aU = matvec(a_matrix(r, phi, U), U_phi);
  const Vec4 b = b_vector(r, phi, U);
  return {-aU[0] - b[0], -aU[1] - b[1], -aU[2] - b[2], -aU[3] - b[3]};
}

// Solves R w = d for the unit lower triangular eigenvector matrix.
Vec4 solve_basis(const StateVector& U, const Vec4& d) {
  const double a = U.alpha, H = U.H;
  Vec4 w{};
  w[0] = d[0];
  w[1] = d[1] + H / 6.0 * w[0];
  w[2] = d[2] + 5.0 * a * w[0];
  w[3] = d[3] - 11.0 / 6.0 * a * H * w[0] + H / 3.0 * w[2];
  return w;
}

struct Degeneracy {
  HaltStatus status = HaltStatus::Completed;
  std::string reason;
};

Degeneracy check_level(double r, const std::vector<double>& phis, const Level& level,
                       const MarchOptions& o) {
  for (std::size_t j = 0; j < level.size(); ++j) {
    const StateVector& U = level[j];
    std::ostringstream msg;
    if (!std::isfinite(U.theta) || !std::isfinite(U.alpha) || !std::isfinite(U.H) ||
        !std::isfinite(U.m)) {
      msg << "non-finite state at r = " << r << ", phi = " << phis[j];
      return {HaltStatus::NonFinite, msg.str()};
    }
    if (std::abs(U.alpha) < o.alpha_tol) {
      msg << "|alpha| = " << std::abs(U.alpha) << " at r = " << r << ", phi = " << phis[j];
      return {HaltStatus::AlphaVanished, msg.str()};
    }
    const SystemMatrices M = assemble(r, phis[j], U);
    double norm = 0.0;
    for (const auto& row : M.A)
      for (double v : row) norm = std::max(norm, std::abs(v));
    const double det = det_A(r, phis[j], U);
    if (std::abs(det) < o.det_tol * (1.0 + norm) || std::abs(M.s) < o.s_tol) {
      msg << "det A = " << det << ", s = " << M.s << " at r = " << r << ", phi = " << phis[j];
      return {HaltStatus::NearCharacteristic, msg.str()};
    }
  }
  return {};
}

double max_speed(double r, const std::vector<double>& phis, const Level& level) {
  double speed = 0.0;
  for (std::size_t j = 0; j < level.size(); ++j) {
    const Mat4 a = a_matrix(r, phis[j], level[j]);
    for (int k = 0; k < 4; ++k) speed = std::max(speed, std::abs(a[k][k]));
  }
  return speed;
}

Level step_lax_wendroff(double r, double dr, double dphi, const std::vector<double>& phis,
                        const Level& U) {
  const std::size_t n = U.size();
  // Predictor on half nodes j + 1/2 at r + dr/2.
  Level half(n);
  for (std::size_t j = 0; j < n; ++j) {
    const StateVector& left = U[j];
    const StateVector& right = U[(j + 1) % n];
    const StateVector mid = midpoint(left, right);
    Vec4 d = sub(right, left);
    for (double& v : d) v /= dphi;
    half[j] = add(mid, rate(r, phis[j] + 0.5 * dphi, mid, d), 0.5 * dr);
  }
  // Corrector at r + dr with rates from the half level.
  Level next(n);
  for (std::size_t j = 0; j < n; ++j) {
    const StateVector& hl = half[(j + n - 1) % n];
    const StateVector& hr = half[j];
    const StateVector centre = midpoint(hl, hr);
    Vec4 d = sub(hr, hl);
    for (double& v : d) v /= dphi;
    next[j] = add(U[j], rate(r + 0.5 * dr, phis[j], centre, d), dr);
  }
  return next;
}

Level step_upwind(double r, double dr, double dphi, const std::vector<double>& phis,
                  const Level& U) {
  const std::size_t n = U.size();
  Level next(n);
  for (std::size_t j = 0; j < n; ++j) {
    const StateVector& Uj = U[j];
    const Mat4 a = a_matrix(r, phis[j], Uj);
    const Mat4 R = characteristic_basis(Uj);
    const Vec4 back = solve_basis(Uj, sub(Uj, U[(j + n - 1) % n]));
    const Vec4 fwd = solve_basis(Uj, sub(U[(j + 1) % n], Uj));
    Vec4 w{};
    for (int k = 0; k < 4; ++k) {
      // Information travels along dphi/dr = lambda_k; dr < 0 reverses it.
      const double speed = a[k][k] * dr;
      w[k] = (speed > 0.0 ? back[k] : fwd[k]) / dphi;
    }
    const Vec4 U_phi = matvec(R, w);
    next[j] = add(Uj, rate(r, phis[j], Uj, U_phi), dr);
  }
  return next;
}

// Continuous lift of theta along phi, starting from the stored value at j = 0.
void lift_theta(Level& level) {
  for (std::size_t j = 1; j < level.size(); ++j) {
    level[j].theta = level[j - 1].theta + jets::angle_difference(level[j].theta, level[j - 1].theta);
  }
}

// Largest Fourier magnitude with |k| > n/4 relative to the largest overall.
double spectral_tail(const std::vector<double>& v) {
  const std::size_t n = v.size();
  double peak = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -kTwoPi * double((k * j) % n) / double(n);
      acc += v[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    const double mag = std::abs(acc);
    peak = std::max(peak, mag);
    const std::size_t freq = std::min(k, n - k);
    if (freq > n / 4) tail = std::max(tail, mag);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

void check_smoothness(const Level& level, const std::vector<double>& phis, double tol) {
  const std::size_t n = level.size();
  const double winding = std::round(
      (level[n - 1].theta + jets::angle_difference(level[0].theta, level[n - 1].theta) -
       level[0].theta) /
      kTwoPi);
  const char* names[4] = {"theta", "alpha", "H", "m"};
  for (int comp = 0; comp < 4; ++comp) {
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) {
      const StateVector& U = level[j];
      v[j] = comp == 0 ? U.theta - winding * phis[j] : comp == 1 ? U.alpha : comp == 2 ? U.H : U.m;
    }
    const double tail = spectral_tail(v);
    if (tail > tol) {
      std::ostringstream msg;
      msg << "spectral tail of " << names[comp] << " is " << tail << " (limit " << tol << ")";
      throw Error(ErrorKind::NonsmoothInitialData, msg.str());
    }
  }
}

double relation_max(const Level& level) {
  double worst = 0.0;
  for (const auto& U : level) worst = std::max(worst, std::abs(e1_relation(U)));
  return worst;
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  return scheme == Scheme::LaxWendroff ? "lax-wendroff" : "upwind";
}

std::string_view to_string(HaltStatus status) {
  switch (status) {
    case HaltStatus::Completed: return "completed";
    case HaltStatus::NearCharacteristic: return "NearCharacteristic";
    case HaltStatus::AlphaVanished: return "AlphaVanished";
    case HaltStatus::NonFinite: return "NonFinite";
  }
  return "unknown";
}

CauchyGrid march_cauchy(const InitialData& f, double c, double r_target, int n_phi,
                        const MarchOptions& options) {
  if (!(options.cfl > 0.0) || options.cfl > 1.0) {
    std::ostringstream msg;
    msg << "cfl = " << options.cfl << " must lie in (0, 1]";
    throw Error(ErrorKind::CFLViolation, msg.str());
  }
  if (!(c > 0.0) || !(r_target > 0.0) || r_target == c) {
    throw Error(ErrorKind::InvalidArgument, "need positive c != r_target");
  }
  if (n_phi < 8) throw Error(ErrorKind::InvalidArgument, "need at least 8 phi nodes");

  CauchyGrid grid;
  grid.c = c;
  grid.scheme = options.scheme;
  grid.cfl = options.cfl;
  const double dphi = kTwoPi / n_phi;
  grid.phi_values.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) grid.phi_values[j] = dphi * j;

  Level level(n_phi);
  for (int j = 0; j < n_phi; ++j) level[j] = f(grid.phi_values[j]);
  lift_theta(level);
  check_smoothness(level, grid.phi_values, options.spectral_tail_tol);

  const Degeneracy initial = check_level(c, grid.phi_values, level, options);
  if (initial.status != HaltStatus::Completed) {
    throw Error(ErrorKind::NearCharacteristic, "initial circle: " + initial.reason);
  }

  grid.r_values.push_back(c);
  grid.states.push_back(level);
  grid.relation_residual.push_back(relation_max(level));

  const double direction = r_target > c ? 1.0 : -1.0;
  double r = c;
  for (long step = 0; step < options.max_steps; ++step) {
    const double remaining = std::abs(r_target - r);
    if (remaining <= 0.0) break;
    const double speed = max_speed(r, grid.phi_values, level);
    double dr_abs = speed > 0.0 ? options.cfl * dphi / speed : remaining;
    bool last = false;
    if (dr_abs >= remaining) {
      dr_abs = remaining;
      last = true;
    }
    const double dr = direction * dr_abs;
    Level next;
    try {
      next = options.scheme == Scheme::LaxWendroff
                 ? step_lax_wendroff(r, dr, dphi, grid.phi_values, level)
                 : step_upwind(r, dr, dphi, grid.phi_values, level);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NearCharacteristic) throw;
      grid.status = HaltStatus::NearCharacteristic;
      grid.halt_reason = std::string("intermediate state: ") + e.what();
      break;
    }
    const double r_next = last ? r_target : r + dr;
    lift_theta(next);
    const Degeneracy deg = check_level(r_next, grid.phi_values, next, options);
    if (deg.status != HaltStatus::Completed) {
      grid.status = deg.status;
      grid.halt_reason = deg.reason;
      break;
    }
    r = r_next;
    level = std::move(next);
    grid.r_values.push_back(r);
    grid.states.push_back(level);
    grid.relation_residual.push_back(relation_max(level));
    if (last) break;
  }
  return grid;
}

double grid_distance(const CauchyGrid& a, const CauchyGrid& b) {
  if (a.states.empty() || b.states.empty() || a.phi_values.size() != b.phi_values.size()) {
    throw Error(ErrorKind::InvalidArgument, "grids are not comparable");
  }
  const Level& x = a.states.back();
  const Level& y = b.states.back();
  double worst = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Vec4 d = sub(x[j], y[j]);
    for (double v : d) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

double error_against(const CauchyGrid& grid, const StateField& exact) {
  if (grid.states.empty()) throw Error(ErrorKind::InvalidArgument, "empty grid");
  const double r = grid.r_values.back();
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.phi_values.size(); ++j) {
    const Vec4 d = sub(grid.states.back()[j], exact(r, grid.phi_values[j]));
    for (double v : d) worst = std::max(worst, std::abs(v));
  }
  return worst;
}

namespace {

bool bit_identical(const CauchyGrid& a, const CauchyGrid& b) {
  if (a.r_values != b.r_values || a.states.size() != b.states.size()) return false;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    const Level& x = a.states[i];
    const Level& y = b.states[i];
    if (x.size() != y.size()) return false;
    if (std::memcmp(x.data(), y.data(), x.size() * sizeof(StateVector)) != 0) return false;
  }
  return true;
}

}  // namespace

UniquenessReport uniqueness_experiment(const InitialData& f, double c, double r_target,
                                       const UniquenessOptions& options) {
  if (options.resolutions.empty()) {
    throw Error(ErrorKind::InvalidArgument, "need at least one resolution");
  }
  UniquenessReport report;
  report.resolutions = options.resolutions;
  report.epsilons = options.epsilons;

  MarchOptions lw;
  lw.cfl = options.cfl;
  MarchOptions up = lw;
  up.scheme = Scheme::Upwind;

  auto note = [&](const CauchyGrid& g) {
    if (g.status != HaltStatus::Completed && report.status == HaltStatus::Completed) {
      report.status = g.status;
    }
  };

  for (int n : options.resolutions) {
    const CauchyGrid a = march_cauchy(f, c, r_target, n, lw);
    const CauchyGrid b = march_cauchy(f, c, r_target, n, up);
    note(a);
    note(b);
    report.scheme_distance.push_back(grid_distance(a, b));
  }

  const int n_fine = options.resolutions.back();
  const CauchyGrid base = march_cauchy(f, c, r_target, n_fine, lw);
  note(base);
  const CauchyGrid again = march_cauchy(f, c, r_target, n_fine, lw);
  report.deterministic = bit_identical(base, again);

  double g_min = 0.0, g_max = 0.0;
  for (double eps : options.epsilons) {
    const InitialData perturbed = [&f, eps](double phi) {
      StateVector U = f(phi);
      U.theta += eps * std::cos(phi);
      return U;
    };
    const CauchyGrid p = march_cauchy(perturbed, c, r_target, n_fine, lw);
    note(p);
    const double resp = grid_distance(base, p);
    report.response.push_back(resp);
    const double gain = resp / eps;
    report.gain.push_back(gain);
    if (report.gain.size() == 1) {
      g_min = g_max = gain;
    } else {
      g_min = std::min(g_min, gain);
      g_max = std::max(g_max, gain);
    }
  }
  report.gain_spread = g_min > 0.0 ? g_max / g_min : 0.0;
  return report;
}

}  // namespace e1lab::cauchy
