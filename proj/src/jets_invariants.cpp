#include "e1lab/jets_invariants.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "e1lab/errors.hpp"

namespace e1lab::jets {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Integrand values above this are treated as a numerical failure.
constexpr double kDensityOverflowGuard = 1e150;

struct GraphTerms {
  double P;  // u_x - y
  double Q;  // u_y + x
  double D;
  double Dx;
  double Dy;
};

GraphTerms graph_terms(const SurfaceJet& j, double d_min) {
  GraphTerms g{};
  g.P = j.ux - j.y;
  g.Q = j.uy + j.x;
  g.D = std::hypot(g.P, g.Q);
  if (!(g.D >= d_min)) {
    std::ostringstream msg;
    msg << "D = " << g.D << " at (" << j.x << ", " << j.y << ")";
    throw Error(ErrorKind::SingularPoint, msg.str());
  }
  g.Dx = (g.P * j.uxx + g.Q * (j.uxy + 1.0)) / g.D;
  g.Dy = (g.P * (j.uxy - 1.0) + g.Q * j.uyy) / g.D;
  return g;
}

double normalize_angle(double a) {
  double t = std::fmod(a, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

}  // namespace

double angle_difference(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  if (d <= -std::numbers::pi) d += kTwoPi;
  return d;
}

Invariants invariants_from_jet(const SurfaceJet& jet, double d_min) {
  const GraphTerms g = graph_terms(jet, d_min);
  const double cos_t = g.P / g.D;
  const double sin_t = g.Q / g.D;

  Invariants inv;
  inv.D = g.D;
  inv.alpha = kAlphaSign / g.D;
  inv.theta = normalize_angle(std::atan2(g.Q, g.P));
  inv.H = (g.Q * g.Q * jet.uxx - 2.0 * g.Q * g.P * jet.uxy + g.P * g.P * jet.uyy) /
          (g.D * g.D * g.D);
  inv.e1_planar = {-sin_t, cos_t};
  inv.n_comp = {cos_t, sin_t};
  inv.n_perp = {sin_t, -cos_t};
  return inv;
}

ResidualForms e1_residual_forms(const SurfaceJet& jet) {
  const GraphTerms g = graph_terms(jet, kSingularityThreshold);
  const double cos_t = g.P / g.D;
  const double sin_t = g.Q / g.D;

  const double laplacian = jet.uxx + jet.uyy;
  const double transverse = laplacian - cos_t * g.Dx - sin_t * g.Dy;
  const double graph_form = sin_t * g.Dx - cos_t * g.Dy - transverse * transverse / 6.0 - 0.5;

  const Invariants inv = invariants_from_jet(jet);
  const double DH = inv.D * inv.H;
  const double frame_form = sin_t * g.Dx - cos_t * g.Dy - DH * DH / 6.0 - 0.5;
  return {graph_form, frame_form};
}

double e1_residual(const SurfaceJet& jet) {
  const ResidualForms f = e1_residual_forms(jet);
  assert(std::abs(f.graph_form - f.frame_form) <=
         1e-12 * (1.0 + std::abs(f.graph_form) + std::abs(f.frame_form)));
  return f.graph_form;
}

double hcr(const SurfaceJet& jet) {
  const double F = e1_residual(jet);
  const double D = std::hypot(jet.ux - jet.y, jet.uy + jet.x);
  return -F / (D * D);
}

HyperbolicityWitness hyperbolicity_witness(const SurfaceJet& jet) {
  const Invariants inv = invariants_from_jet(jet);
  const double c = std::cos(inv.theta);
  const double s = std::sin(inv.theta);
  const double A = inv.D * inv.H;

  HyperbolicityWitness w{};
  w.F_uxx = s * c - A * s * s / 3.0;
  w.F_uyy = -c * s - A * c * c / 3.0;
  w.F_uxy = s * s - c * c + 2.0 * A * s * c / 3.0;
  w.discriminant = w.F_uxx * w.F_uyy - 0.25 * w.F_uxy * w.F_uxy;
  return w;
}

SurfaceJet dilate_jet(const SurfaceJet& jet, double lambda) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "dilation factor must be positive");
  }
  SurfaceJet out = jet;
  out.x = lambda * jet.x;
  out.y = lambda * jet.y;
  out.u = lambda * lambda * jet.u;
  out.ux = lambda * jet.ux;
  out.uy = lambda * jet.uy;
  // second derivatives are dilation invariant
  return out;
}

SurfaceJet radial_jet(double r, double phi, double u, double ur, double urr) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  SurfaceJet j;
  j.x = r * c;
  j.y = r * s;
  j.u = u;
  j.ux = ur * c;
  j.uy = ur * s;
  const double ur_over_r = ur / r;
  j.uxx = urr * c * c + ur_over_r * s * s;
  j.uyy = urr * s * s + ur_over_r * c * c;
  j.uxy = (urr - ur_over_r) * s * c;
  return j;
}

double pullback_area_form(const PatchSample& sample) {
  const Invariants inv = invariants_from_jet(sample.jet);
  // Planar images of the frame vectors e1 and V = T + alpha e2 (T projects
  // to zero and e2 projects to -N).
  const Vec2 e1 = inv.e1_planar;
  const Vec2 V = {-inv.alpha * inv.n_comp[0], -inv.alpha * inv.n_comp[1]};
  const double det = e1[0] * V[1] - e1[1] * V[0];

  // Lifted tangent X = a e1 + b V, so e^1(X) = a and Theta(X) = b.
  auto coframe = [&](double vx, double vy) {
    const double a = (vx * V[1] - vy * V[0]) / det;
    const double b = (e1[0] * vy - e1[1] * vx) / det;
    return std::pair{a, b};
  };
  const auto& J = sample.jacobian;
  const auto [a_s, b_s] = coframe(J[0], J[2]);
  const auto [a_t, b_t] = coframe(J[1], J[3]);
  return std::abs(b_s * a_t - b_t * a_s);
}

double e1_density(const SurfaceJet& jet) {
  const double h = std::abs(hcr(jet));
  return h * std::sqrt(h);
}

double integrate_E1_patch(const PatchSampler& sampler, const ParameterRect& rect, int n_s, int n_t) {
  if (n_s < 1 || n_t < 1) {
    throw Error(ErrorKind::InvalidArgument, "patch grid needs at least one cell per direction");
  }
  const double ds = (rect.s1 - rect.s0) / n_s;
  const double dt = (rect.t1 - rect.t0) / n_t;
  double total = 0.0;
  for (int i = 0; i < n_s; ++i) {
    const double s = rect.s0 + (i + 0.5) * ds;
    double row = 0.0;
    for (int k = 0; k < n_t; ++k) {
      const double t = rect.t0 + (k + 0.5) * dt;
      const PatchSample sample = sampler(s, t);
      const double value = e1_density(sample.jet) * pullback_area_form(sample);
      if (!std::isfinite(value) || value > kDensityOverflowGuard) {
        std::ostringstream msg;
        msg << "integrand " << value << " at (s, t) = (" << s << ", " << t << ")";
        throw Error(ErrorKind::QuadratureUnstable, msg.str());
      }
      row += value;
    }
    total += row;
  }
  return total * std::abs(ds * dt);
}

PatchSampler graph_sampler(std::function<SurfaceJet(double x, double y)> jet_at) {
  return [jet_at = std::move(jet_at)](double x, double y) {
    return PatchSample{jet_at(x, y), {1.0, 0.0, 0.0, 1.0}};
  };
}

PatchSampler polar_sampler(std::function<SurfaceJet(double r, double phi)> jet_at) {
  return [jet_at = std::move(jet_at)](double r, double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return PatchSample{jet_at(r, phi), {c, -r * s, s, r * c}};
  };
}

}  // namespace e1lab::jets
