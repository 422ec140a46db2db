#pragma once

// Pointwise pseudohermitian invariants of graphs t = u(x, y) in the
// Heisenberg group H1 with contact form  dt + x dy - y dx.

#include <array>
#include <functional>

namespace e1lab::jets {

// alpha = kAlphaSign / D. The graph is described by the defining function
// t - u, which makes the deviation function negative everywhere.
inline constexpr double kAlphaSign = -1.0;

// Jets with D below this are rejected as singular.
inline constexpr double kSingularityThreshold = 1e-12;

using Vec2 = std::array<double, 2>;

// Second-order jet of t = u(x, y) at the base point (x, y).
struct SurfaceJet {
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;
  double ux = 0.0;
  double uy = 0.0;
  double uxx = 0.0;
  double uxy = 0.0;
  double uyy = 0.0;
};

struct Invariants {
  double D = 0.0;
  double alpha = 0.0;
  double theta = 0.0;  // in [0, 2*pi)
  double H = 0.0;      // p-mean curvature
  Vec2 e1_planar{};    // projection of e1 to the xy-plane
  Vec2 n_comp{};       // N, projection of -(e2 + T/alpha)
  Vec2 n_perp{};       // N^perp, projection of -e1
};

// Characteristic-frame data of a jet.  Throws SingularPoint when D < d_min.
Invariants invariants_from_jet(const SurfaceJet& jet, double d_min = kSingularityThreshold);

struct ResidualForms {
  double graph_form;  // direct substitution into F(x, y, u, Du, D^2 u)
  double frame_form;  // sin(theta) D_x - cos(theta) D_y - D^2 H^2 / 6 - 1/2
};

ResidualForms e1_residual_forms(const SurfaceJet& jet);

// Value of F; zero exactly on vanishing-E1 graphs. Equals -D^2 * H_cr.
double e1_residual(const SurfaceJet& jet);

// H_cr = e1(alpha) + alpha^2/2 + H^2/6 on the graph (W = 0, A11 = 0 in H1).
double hcr(const SurfaceJet& jet);

struct HyperbolicityWitness {
  double F_uxx;
  double F_uxy;
  double F_uyy;
  double discriminant;  // F_uxx F_uyy - F_uxy^2 / 4, identically -1/4
};

HyperbolicityWitness hyperbolicity_witness(const SurfaceJet& jet);

// Jet of the graph transported by (x, y, t) -> (l x, l y, l^2 t).
SurfaceJet dilate_jet(const SurfaceJet& jet, double lambda);

// Jet at (r cos phi, r sin phi) of a rotationally symmetric graph u(r).
SurfaceJet radial_jet(double r, double phi, double u, double ur, double urr);

// Shortest signed distance between two angles, in (-pi, pi].
double angle_difference(double a, double b);

// ---------------------------------------------------------------------------
// Patch integrals of the E1 density |H_cr|^{3/2} Theta ^ e^1.

struct PatchSample {
  SurfaceJet jet;
  // d(x, y)/d(s, t), row major: {x_s, x_t, y_s, y_t}.
  std::array<double, 4> jacobian{1.0, 0.0, 0.0, 1.0};
};

using PatchSampler = std::function<PatchSample(double s, double t)>;

struct ParameterRect {
  double s0, s1, t0, t1;
};

// Theta ^ e^1 evaluated on the lifts of d/ds and d/dt, obtained by expanding
// each lift in the (e1, V = T + alpha e2) frame of the surface.
double pullback_area_form(const PatchSample& sample);

// Unsigned pointwise density |H_cr|^{3/2}.
double e1_density(const SurfaceJet& jet);

// Tensor-product midpoint rule on an n_s x n_t grid.  Throws SingularPoint
// on a singular sample and QuadratureUnstable if the integrand overflows the
// guard.
double integrate_E1_patch(const PatchSampler& sampler, const ParameterRect& rect, int n_s, int n_t);

// Samplers parametrised by (x, y) and by polar coordinates (r, phi).
PatchSampler graph_sampler(std::function<SurfaceJet(double x, double y)> jet_at);
PatchSampler polar_sampler(std::function<SurfaceJet(double r, double phi)> jet_at);

}  // namespace e1lab::jets
