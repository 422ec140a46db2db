#include "e1lab/rotsym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace e1lab::rotsym {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kHalfSqrt3 = 0.5 * std::numbers::sqrt3;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_sphere(Family f) { return f == Family::TypeI || f == Family::TypeII; }

void require_rho0(double rho0) {
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) {
    throw Error(ErrorKind::InvalidArgument, "rho0 must be positive");
  }
}

void require_radius(Family family, double rho0, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  if (is_sphere(family)) {
    const double limit = blowup_radius(family, rho0);
    if (!(r < limit)) {
      std::ostringstream msg;
      msg << "r = " << r << " is outside (0, " << limit << ") for " << to_string(family)
          << "(rho0 = " << rho0 << ")";
      throw Error(ErrorKind::DomainExceeded, msg.str());
    }
  }
}

// q = r^2 + eps k with eps = +1 for type I and -1 for type II.
double sphere_eps(Family f) { return f == Family::TypeI ? 1.0 : -1.0; }

double rk4_step(double r, double w, double h) {
  const double k1 = w_rhs(r, w);
  const double k2 = w_rhs(r + 0.5 * h, w + 0.5 * h * k1);
  const double k3 = w_rhs(r + 0.5 * h, w + 0.5 * h * k2);
  const double k4 = w_rhs(r + h, w + h * k3);
  return w + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

double deviation(double w, double w_fit) { return std::abs(w - w_fit) / (1.0 + std::abs(w_fit)); }

double max_deviation_constant(const RadialProfile& p, double value) {
  double worst = 0.0;
  for (const auto& s : p.samples) worst = std::max(worst, deviation(s.w, value));
  return worst;
}

// Max deviation of the profile (sign applied to w) from a sphere family.
double max_deviation_sphere(const RadialProfile& p, Family family, double rho0, double sign) {
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) return kInf;
  const double limit = blowup_radius(family, rho0);
  double worst = 0.0;
  for (const auto& s : p.samples) {
    if (!(s.r < limit)) return kInf;
    worst = std::max(worst, deviation(sign * s.w, closed_form_w(family, rho0, s.r)));
  }
  return worst;
}

// Median of the per-sample rho0 estimates obtained by inverting the closed
// form for rho0; NaN when no sample gives a valid estimate.
double rho0_estimate(const RadialProfile& p, Family family, double sign) {
  std::vector<double> est;
  const std::size_t first = p.samples.size() / 2;  // larger radii carry more signal
  for (std::size_t i = first; i < p.samples.size(); ++i) {
    const auto& s = p.samples[i];
    const double w = sign * s.w;
    const double t = w / std::sqrt(1.0 + w * w);
    const double denom = family == Family::TypeI ? (2.0 * t - kSqrt3) : (kSqrt3 - 2.0 * t);
    if (denom > 0.0) {
      const double rho0 = std::sqrt(2.0 * s.r * s.r / denom);
      if (std::isfinite(rho0)) est.push_back(rho0);
    }
  }
  if (est.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::nth_element(est.begin(), est.begin() + est.size() / 2, est.end());
  return est[est.size() / 2];
}

FitCandidate fit_sphere(const RadialProfile& p, Family family, double sign) {
  FitCandidate cand{family, 0.0, sign < 0.0, kInf};
  const double guess = rho0_estimate(p, family, sign);
  if (!std::isfinite(guess)) return cand;

  // Golden-section search on log(rho0), bracket kept inside the domain.
  const double r_max = p.samples.back().r;
  const double rho_min = r_max / (blowup_radius(family, 1.0)) * (1.0 + 1e-12);
  double lo = std::log(std::max(0.5 * guess, rho_min));
  double hi = std::log(std::max(2.0 * guess, rho_min * 1.5));
  auto objective = [&](double log_rho) {
    return max_deviation_sphere(p, family, std::exp(log_rho), sign);
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double best = f1 <= f2 ? x1 : x2;
  cand.rho0 = std::exp(best);
  cand.max_deviation = std::min(f1, f2);
  return cand;
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::ParabolaPlus: return "ParabolaPlus";
    case Family::ParabolaMinus: return "ParabolaMinus";
    case Family::TypeI: return "TypeI";
    case Family::TypeII: return "TypeII";
    case Family::Numeric: return "Numeric";
    case Family::Unknown: return "Unknown";
  }
  return "Unknown";
}

Family family_from_string(std::string_view name) {
  for (Family f : {Family::ParabolaPlus, Family::ParabolaMinus, Family::TypeI, Family::TypeII,
                   Family::Numeric, Family::Unknown}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown family '" + std::string(name) + "'");
}

std::string family_label(const RadialProfile& profile) {
  std::string label(to_string(profile.family));
  const bool intrinsic = profile.family == Family::ParabolaMinus;
  if (profile.reflected && !intrinsic) label += "-reflected";
  return label;
}

double ode_residual(double r, double ur, double urr) {
  const double r2 = r * r;
  const double r4 = r2 * r2;
  const double ur2 = ur * ur;
  const double ur4 = ur2 * ur2;
  return r4 * urr * urr / 3.0 - (4.0 / 3.0 * r * ur2 * ur + 2.0 * r2 * r * ur) * urr +
         ur4 * ur2 / (3.0 * r2) + ur4 - r4;
}

double branch_rhs(double r, double ur, Branch branch) {
  const double r2 = r * r;
  const double root = kSqrt3 * std::pow(ur * ur + r2, 1.5);
  const double base = 2.0 * ur * ur * ur + 3.0 * r2 * ur;
  return (branch == Branch::Plus ? base + root : base - root) / (r2 * r);
}

double w_rhs(double r, double w) {
  return (2.0 * w * w * w + 2.0 * w - kSqrt3 * std::pow(1.0 + w * w, 1.5)) / r;
}

double blowup_radius(Family family, double rho0) {
  require_rho0(rho0);
  switch (family) {
    case Family::TypeI: return std::sqrt((2.0 - kSqrt3) / 2.0) * rho0;
    case Family::TypeII: return std::sqrt((2.0 + kSqrt3) / 2.0) * rho0;
    default: return kInf;
  }
}

double type_ii_zero_radius(double rho0) {
  require_rho0(rho0);
  return std::sqrt(kHalfSqrt3) * rho0;
}

double closed_form_w(Family family, double rho0, double r) {
  switch (family) {
    case Family::ParabolaPlus:
      if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
      return kSqrt3;
    case Family::ParabolaMinus:
      if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
      return -kSqrt3;
    case Family::TypeI:
    case Family::TypeII: {
      require_radius(family, rho0, r);
      const double eps = sphere_eps(family);
      const double rho2 = rho0 * rho0;
      const double q = r * r + eps * kHalfSqrt3 * rho2;
      const double g = (rho2 - q) * (rho2 + q);
      return eps * q / std::sqrt(g);
    }
    default:
      throw Error(ErrorKind::InvalidArgument, "no closed form for this family");
  }
}

RadialDerivatives closed_form_graph(Family family, double rho0, double r) {
  switch (family) {
    case Family::ParabolaPlus:
    case Family::ParabolaMinus: {
      if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
      const double sgn = family == Family::ParabolaPlus ? 1.0 : -1.0;
      return {sgn * kHalfSqrt3 * r * r, sgn * kSqrt3 * r, sgn * kSqrt3};
    }
    case Family::TypeI:
    case Family::TypeII: {
      require_radius(family, rho0, r);
      const double eps = sphere_eps(family);
      const double rho2 = rho0 * rho0;
      const double q = r * r + eps * kHalfSqrt3 * rho2;
      const double g = (rho2 - q) * (rho2 + q);
      const double sg = std::sqrt(g);
      const double r2 = r * r;
      RadialDerivatives d;
      d.u = -0.5 * eps * sg;
      d.ur = eps * r * q / sg;
      d.urr = eps * ((q + 2.0 * r2) / sg + 2.0 * r2 * q * q / (g * sg));
      return d;
    }
    default:
      throw Error(ErrorKind::InvalidArgument, "no closed form for this family");
  }
}

IntegrationResult integrate_w(double r_start, double w_start, double r_end, double h,
                              const IntegrationOptions& options) {
  if (!(r_start > 0.0) || !(r_end > r_start)) {
    throw Error(ErrorKind::InvalidArgument, "need 0 < r_start < r_end");
  }
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  if (!std::isfinite(w_start)) throw Error(ErrorKind::InvalidArgument, "w_start must be finite");

  IntegrationResult result;
  auto& samples = result.profile.samples;
  samples.push_back({r_start, w_start, 0.0});

  double r = r_start;
  double w = w_start;
  const double h_floor = 1e-12 * std::max(1.0, r_end);
  // Nodes sit at r_start + k h until halving starts, so the grid stays
  // uniform away from blow-up.
  long k = 0;
  bool adaptive = false;
  double adaptive_step = h;
  while (r < r_end) {
    const double r_next =
        adaptive ? std::min(r + adaptive_step, r_end) : std::min(r_start + double(k + 1) * h, r_end);
    double step = r_next - r;
    bool halved = false;
    double w_next = w;
    for (;;) {
      const double full = rk4_step(r, w, step);
      const double half = rk4_step(r + 0.5 * step, rk4_step(r, w, 0.5 * step), 0.5 * step);
      const double scale = std::max(1.0, std::abs(w));
      if (!std::isfinite(full) || !std::isfinite(half) ||
          std::abs(half - w) > options.max_relative_change * scale) {
        adaptive = true;
        halved = true;
        step *= 0.5;
        if (step < h_floor) {
          result.blew_up = true;
          std::ostringstream msg;
          msg << "step underflow near r = " << r << " with |w| = " << std::abs(w);
          result.halt_reason = msg.str();
          break;
        }
        continue;
      }
      const double estimate = std::abs(full - half) / 15.0;
      if (estimate > options.error_guard * scale) {
        std::ostringstream msg;
        msg << "local error estimate " << estimate << " at r = " << r << " with step " << step;
        throw Error(ErrorKind::StepTooLarge, msg.str());
      }
      w_next = full;
      break;
    }
    if (result.blew_up) break;
    if (adaptive) adaptive_step = step;
    r = halved ? r + step : r_next;
    w = w_next;
    ++k;
    samples.push_back({r, w, 0.0});
    if (std::abs(w) > options.blowup_threshold) {
      result.blew_up = true;
      std::ostringstream msg;
      msg << "|w| exceeded " << options.blowup_threshold << " at r = " << r;
      result.halt_reason = msg.str();
      break;
    }
  }
  result.r_reached = samples.back().r;
  result.profile = u_from_w(std::move(result.profile), 0.0);
  return result;
}

RadialProfile u_from_w(RadialProfile profile, double u0) {
  auto& s = profile.samples;
  profile.u0 = u0;
  if (s.empty()) return profile;
  if (!(s.front().r > 0.0)) throw Error(ErrorKind::InvalidArgument, "radii must be positive");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i].r > s[i - 1].r)) {
      throw Error(ErrorKind::InvalidArgument, "radii must be strictly increasing");
    }
  }

  // Head piece on [0, r_first] with w = w_lim + C s^2 + D s^4 matched to w
  // and w' at r_first; the solutions are even in r.
  const double w_lim = profile.reflected ? -kSqrt3 : kSqrt3;
  const double r_first = s.front().r;
  const double r2 = r_first * r_first;
  const double dw = s.front().w - w_lim;
  const double w_prime = profile.reflected ? -w_rhs(r_first, -s.front().w) : w_rhs(r_first, s.front().w);
  const double D4 = (w_prime * r_first - 2.0 * dw) / (2.0 * r2 * r2);
  const double C2 = (dw - D4 * r2 * r2) / r2;
  const double head = 0.5 * w_lim * r2 + 0.25 * C2 * r2 * r2 + D4 * r2 * r2 * r2 / 6.0;
  s.front().u = u0 + head;
  if (s.size() == 1) return profile;

  auto f = [&](std::size_t i) { return s[i].r * s[i].w; };

  // Length of the uniform prefix.
  const double h = s[1].r - s[0].r;
  std::size_t uniform_end = 1;  // index of the last node on the uniform grid
  while (uniform_end + 1 < s.size() &&
         std::abs((s[uniform_end + 1].r - s[uniform_end].r) - h) <= 1e-9 * h) {
    ++uniform_end;
  }

  if (uniform_end >= 2) {
    // Two interleaved Simpson chains; the odd chain is started with the
    // third-order single-interval rule.
    s[1].u = s[0].u + h / 12.0 * (5.0 * f(0) + 8.0 * f(1) - f(2));
    for (std::size_t i = 2; i <= uniform_end; ++i) {
      s[i].u = s[i - 2].u + h / 3.0 * (f(i - 2) + 4.0 * f(i - 1) + f(i));
    }
  } else {
    s[1].u = s[0].u + 0.5 * h * (f(0) + f(1));
  }
  for (std::size_t i = uniform_end + 1; i < s.size(); ++i) {
    s[i].u = s[i - 1].u + 0.5 * (s[i].r - s[i - 1].r) * (f(i - 1) + f(i));
  }
  return profile;
}

RadialProfile reflect(RadialProfile profile) {
  profile.reflected = !profile.reflected;
  if (profile.family == Family::ParabolaPlus) {
    profile.family = Family::ParabolaMinus;
  } else if (profile.family == Family::ParabolaMinus) {
    profile.family = Family::ParabolaPlus;
  }
  profile.u0 = -profile.u0;
  for (auto& s : profile.samples) {
    s.w = -s.w;
    s.u = -s.u;
  }
  return profile;
}

RadialProfile sample_family(Family family, double rho0, double r_lo, double r_hi, int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  RadialProfile p;
  p.family = family;
  p.rho0 = is_sphere(family) ? rho0 : 0.0;
  p.reflected = family == Family::ParabolaMinus;
  p.samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / (n - 1);
    const RadialDerivatives d = closed_form_graph(family, rho0, r);
    p.samples.push_back({r, d.ur / r, d.u});
  }
  p.u0 = is_sphere(family) ? -sphere_eps(family) * 0.25 * rho0 * rho0 : 0.0;
  return p;
}

ClassifyResult classify(const RadialProfile& profile, double tol) {
  if (profile.samples.size() < 10) {
    throw Error(ErrorKind::InvalidArgument, "classification needs at least 10 samples");
  }
  ClassifyResult result;
  result.fits.push_back({Family::ParabolaPlus, 0.0, false, max_deviation_constant(profile, kSqrt3)});
  result.fits.push_back({Family::ParabolaMinus, 0.0, true, max_deviation_constant(profile, -kSqrt3)});
  for (Family f : {Family::TypeI, Family::TypeII}) {
    for (double sign : {1.0, -1.0}) {
      FitCandidate c = fit_sphere(profile, f, sign);
      if (std::isfinite(c.max_deviation)) result.fits.push_back(c);
    }
  }

  std::vector<FitCandidate> passing;
  for (const auto& c : result.fits) {
    if (!(c.max_deviation < tol)) continue;
    if (is_sphere(c.family)) {
      // A sphere indistinguishable from the constant solution on this range.
      double spread = 0.0;
      for (const auto& s : profile.samples) {
        spread = std::max(spread, deviation(closed_form_w(c.family, c.rho0, s.r), kSqrt3));
      }
      if (spread < tol) continue;
    }
    passing.push_back(c);
  }

  if (passing.size() > 1) {
    std::ostringstream msg;
    msg << passing.size() << " families pass tol " << tol << ":";
    for (const auto& c : passing) {
      msg << ' ' << to_string(c.family) << (c.reflected && c.family != Family::ParabolaMinus ? "-reflected" : "");
      if (is_sphere(c.family)) msg << "(rho0=" << c.rho0 << ')';
      msg << " dev=" << c.max_deviation << ';';
    }
    throw AmbiguousFitError(msg.str(), passing);
  }
  if (passing.size() == 1) {
    result.family = passing.front().family;
    result.rho0 = passing.front().rho0;
    result.reflected = passing.front().reflected;
    result.max_deviation = passing.front().max_deviation;
  } else {
    double best = kInf;
    for (const auto& c : result.fits) best = std::min(best, c.max_deviation);
    result.max_deviation = best;
  }
  return result;
}

GluingReport gluing_second_derivatives(double rho0) {
  require_rho0(rho0);
  const double rho3 = rho0 * rho0 * rho0;
  const double r0 = blowup_radius(Family::TypeI, rho0);
  GluingReport g;
  g.ruu_type_i = -2.0 * std::numbers::sqrt2 / (std::sqrt(2.0 - kSqrt3) * rho3);
  g.ruu_type_ii = -(2.0 + kSqrt3) / (r0 * r0 * r0);
  g.ratio = g.ruu_type_ii / g.ruu_type_i;
  return g;
}

double sphere_rim_radius(Family family, double rho0, double u) {
  require_rho0(rho0);
  if (!is_sphere(family)) throw Error(ErrorKind::InvalidArgument, "sphere family required");
  const double rho2 = rho0 * rho0;
  const double disc = rho2 * rho2 - 4.0 * u * u;
  if (disc < 0.0) throw Error(ErrorKind::DomainExceeded, "height outside the sphere");
  const double r2 = std::sqrt(disc) - sphere_eps(family) * kHalfSqrt3 * rho2;
  if (r2 < 0.0) throw Error(ErrorKind::DomainExceeded, "height outside the sphere rim");
  return std::sqrt(r2);
}

double rho0_for_rim_radius(Family family, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  return radius / blowup_radius(family, 1.0);
}

std::vector<double> dilation_limit_check(double r_fixed, Family family,
                                         const std::vector<double>& rho0_sequence) {
  std::vector<double> out;
  out.reserve(rho0_sequence.size());
  for (double rho0 : rho0_sequence) {
    out.push_back(std::abs(closed_form_w(family, rho0, r_fixed) - kSqrt3));
  }
  return out;
}

}  // namespace e1lab::rotsym
