#pragma once

// Rotationally symmetric graphs t = u(r) with vanishing E1 density: the
// second-order radial ODE, its two branches, the separable equation for
// w = u_r / r, closed-form families, and the gluing obstruction.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "e1lab/errors.hpp"

namespace e1lab::rotsym {

enum class Family { ParabolaPlus, ParabolaMinus, TypeI, TypeII, Numeric, Unknown };

std::string_view to_string(Family family);
// Inverse of to_string; throws InvalidArgument on an unknown name.
Family family_from_string(std::string_view name);

enum class Branch { Plus, Minus };

inline constexpr double kBlowUpThreshold = 1e8;

struct RadialSample {
  double r;
  double w;
  double u;
};

struct RadialProfile {
  Family family = Family::Numeric;
  double rho0 = 0.0;  // meaningful for TypeI / TypeII only
  // True for the mirror image u -> -u of a solution of the Minus branch.
  // ParabolaMinus is stored as reflected.
  bool reflected = false;
  std::vector<RadialSample> samples;
  double u0 = 0.0;
};

// Family label including the reflection, e.g. "TypeI-reflected".
std::string family_label(const RadialProfile& profile);

// Residual of the second-order radial ODE.
double ode_residual(double r, double ur, double urr);

// u_rr solving ode_residual = 0 on the chosen branch.
double branch_rhs(double r, double ur, Branch branch);

// Right-hand side of the separable equation w' = w_rhs(r, w).
double w_rhs(double r, double w);

// Radius where the sphere families blow up: r0 for TypeI, b for TypeII.
double blowup_radius(Family family, double rho0);

// The radius a at which a TypeII profile crosses w = 0.
double type_ii_zero_radius(double rho0);

// w(r) of the named family. Parabola families ignore rho0. Throws
// DomainExceeded outside (0, blowup_radius) and InvalidArgument for r <= 0.
double closed_form_w(Family family, double rho0, double r);

struct RadialDerivatives {
  double u;
  double ur;
  double urr;
};

// u, u_r, u_rr of the graph: parabolas u = +-(sqrt3/2) r^2, TypeI the lower
// half-sphere and TypeII the upper half-sphere.
RadialDerivatives closed_form_graph(Family family, double rho0, double r);

struct IntegrationOptions {
  double blowup_threshold = kBlowUpThreshold;
  // Richardson estimate per step, relative to max(1, |w|), above which the
  // step is rejected with StepTooLarge.
  double error_guard = 1e-2;
  // Relative change of w per step that triggers step halving.
  double max_relative_change = 0.1;
};

struct IntegrationResult {
  RadialProfile profile;  // family Numeric, u anchored with u(0) = 0
  bool blew_up = false;
  double r_reached = 0.0;
  std::string halt_reason;
};

// Classical RK4 on w' = w_rhs with step h, halving the step only where w
// changes by more than max_relative_change per step. Stops early (blew_up)
// when |w| passes the threshold or the step underflows.
IntegrationResult integrate_w(double r_start, double w_start, double r_end, double h,
                              const IntegrationOptions& options = {});

// Fills u(r) = u0 + int_0^r s w(s) ds. The piece on [0, r_first] uses the
// small-r expansion w = +-sqrt3 + C r^2 + D r^4 shared by every solution; the
// rest is cumulative Simpson on the uniform prefix and trapezoid on any
// nonuniform tail.
RadialProfile u_from_w(RadialProfile profile, double u0);

// Mirror image u -> -u (w -> -w).
RadialProfile reflect(RadialProfile profile);

// Samples of a closed-form family on n uniform radii in [r_lo, r_hi], with u
// from the closed form.
RadialProfile sample_family(Family family, double rho0, double r_lo, double r_hi, int n);

struct FitCandidate {
  Family family;
  double rho0;  // 0 for parabolas
  bool reflected;
  double max_deviation;
};

struct ClassifyResult {
  Family family = Family::Unknown;
  double rho0 = 0.0;
  bool reflected = false;
  double max_deviation = 0.0;
  std::vector<FitCandidate> fits;  // every family that could be fitted
};

class AmbiguousFitError : public Error {
 public:
  AmbiguousFitError(const std::string& what, std::vector<FitCandidate> passing)
      : Error(ErrorKind::AmbiguousFit, what), passing_(std::move(passing)) {}
  const std::vector<FitCandidate>& passing() const { return passing_; }

 private:
  std::vector<FitCandidate> passing_;
};

// Deviation of a sample is |w - w_fit| / (1 + |w_fit|); a family passes when
// the max deviation is below tol. Sphere fits that stay within tol of the
// constant solution on the sampled range are the parabola limit and are not
// counted separately. Throws AmbiguousFitError when more than one family
// passes, InvalidArgument for fewer than 10 samples.
ClassifyResult classify(const RadialProfile& profile, double tol = 1e-6);

struct GluingReport {
  double ruu_type_i;
  double ruu_type_ii;  // type II sphere whose outer radius equals r0 of type I
  double ratio;
};

GluingReport gluing_second_derivatives(double rho0);

// Radius of the outer rim of a sphere family at height u (|u| <= rho0^2/2),
// i.e. the closed curve written as r = r(u).
double sphere_rim_radius(Family family, double rho0, double u);

// rho0 of the sphere in the family whose rim at u = 0 has the given radius.
double rho0_for_rim_radius(Family family, double radius);

// |w(r_fixed) - sqrt3| for each rho0 in the sequence.
std::vector<double> dilation_limit_check(double r_fixed, Family family,
                                         const std::vector<double>& rho0_sequence);

}  // namespace e1lab::rotsym
