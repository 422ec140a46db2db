#pragma once

// The first-order quasi-linear system  A U_r + B U_phi + C U = 0  for
// U = (theta, alpha, H, m), m = -N^perp alpha, satisfied by graphs with
// vanishing E1 density, together with a Cauchy march from a circle r = c.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "e1lab/rotsym.hpp"

namespace e1lab::cauchy {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;

struct StateVector {
  double theta = 0.0;
  double alpha = 0.0;
  double H = 0.0;
  double m = 0.0;

  Vec4 as_array() const { return {theta, alpha, H, m}; }
  static StateVector from_array(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
};

// m + alpha^2/2 + H^2/6, which vanishes on every E1 = 0 graph (e1 = -N^perp
// on graphs, so e1(alpha) = m).
double e1_relation(const StateVector& U);

struct SystemMatrices {
  Mat4 A{};
  Mat4 B{};
  Mat4 C{};
  double s = 0.0;  // sin(theta - phi)
  double c = 0.0;  // cos(theta - phi)
  double r = 0.0;
  double phi = 0.0;
};

SystemMatrices assemble(double r, double phi, const StateVector& U);

// s^2 sigma eta with sigma = sH/3 + 2c alpha and eta = 2sH/3 + 2c alpha.
double det_A(double r, double phi, const StateVector& U);

// Closed-form inverse. Throws NearCharacteristic when |det A| is below
// 1e-12 * max(1, max|A_ij|)^4.
Mat4 inverse_A(double r, double phi, const StateVector& U);

// a = A^{-1} B in closed form (lower triangular). Throws NearCharacteristic
// when det A or s vanishes.
Mat4 a_matrix(double r, double phi, const StateVector& U);

// b = A^{-1} C U.
Vec4 b_vector(double r, double phi, const StateVector& U);

enum class EigenCase {
  Generic,    // alpha H != 0: four distinct directions, lambda2 = lambda4
  HZero,      // alpha != 0, H = 0: lambda1 = lambda3
  AlphaZero,  // alpha = 0, H != 0: a is a multiple of the identity
};

struct EigenPair {
  double lambda;
  Vec4 xi;
};

struct EigenSystem {
  EigenCase kind;
  std::array<EigenPair, 4> pairs;  // lambda_1 .. lambda_4
};

EigenSystem eigen_system(double r, double phi, const StateVector& U);

// The eigenvectors used for upwinding. They are continuous in (alpha, H) and
// reduce to the case-specific bases when alpha = 0 or H = 0.
Mat4 characteristic_basis(const StateVector& U);

// det(A dphi - B dr).
double characteristic_determinant(double dr, double dphi, double r, double phi,
                                  const StateVector& U);

// True iff |det(A dphi - B dr)| < tol * scale, scale = (max|A dphi - B dr|_ij)^4.
bool is_characteristic(double dr, double dphi, double r, double phi, const StateVector& U,
                       double tol = 1e-10);

// Closed-form state of the parabolas and the half-spheres.  Throws
// DomainExceeded outside the family's radial domain.
StateVector exact_state(rotsym::Family family, double rho0, double r, double phi);

// ---------------------------------------------------------------------------
// Identity residuals by centered finite differences.

using StateField = std::function<StateVector(double r, double phi)>;

struct IdentityResiduals {
  double iden1 = 0.0;   // N^perp theta + H
  double iden2 = 0.0;   // N^perp alpha - alpha N theta - 2 alpha^2
  double emini1 = 0.0;  // alpha (N + H N^perp / (3 alpha)) theta + N^perp alpha + alpha^2
  double emini2 = 0.0;
  double codeq1 = 0.0;  // Codazzi-like equation
};

struct IdentityGrid {
  double r_lo;
  double r_hi;
  int n_r;
  int n_phi;
};

// Max |residual| over the grid, derivatives by centered differences with
// step h in r and in phi. Throws SingularPoint if the stencil reaches r <= 0.
IdentityResiduals verify_identities(const StateField& field, const IdentityGrid& grid, double h);

// ---------------------------------------------------------------------------
// Cauchy march.

enum class Scheme { LaxWendroff, Upwind };

std::string_view to_string(Scheme scheme);

enum class HaltStatus { Completed, NearCharacteristic, AlphaVanished, NonFinite };

std::string_view to_string(HaltStatus status);

struct MarchOptions {
  Scheme scheme = Scheme::LaxWendroff;
  double cfl = 0.8;
  double det_tol = 1e-10;    // |det A| < det_tol (1 + |A|) halts
  double s_tol = 1e-8;       // |s| < s_tol halts
  double alpha_tol = 1e-8;   // |alpha| < alpha_tol halts (flagged)
  double spectral_tail_tol = 1e-6;
  long max_steps = 1000000;
};

struct CauchyGrid {
  double c = 0.0;
  std::vector<double> r_values;
  std::vector<double> phi_values;
  // states[level][j]; theta is a continuous lift along phi within a level.
  std::vector<std::vector<StateVector>> states;
  Scheme scheme = Scheme::LaxWendroff;
  double cfl = 0.0;
  HaltStatus status = HaltStatus::Completed;
  std::string halt_reason;
  // max_j |e1_relation| on every level.
  std::vector<double> relation_residual;
};

using InitialData = std::function<StateVector(double phi)>;

// Marches U_r + a U_phi + b = 0 from r = c to r_target (either direction)
// on n_phi periodic nodes. Throws CFLViolation for cfl outside (0, 1],
// NonsmoothInitialData when the spectral tail of the data is too heavy,
// NearCharacteristic when the initial circle is already degenerate. A
// degeneracy met during the march ends it with a partial grid and status.
CauchyGrid march_cauchy(const InitialData& f, double c, double r_target, int n_phi,
                        const MarchOptions& options = {});

// Max over nodes and components of the difference between the last levels of
// two grids on the same phi nodes (theta compared modulo 2 pi).
double grid_distance(const CauchyGrid& a, const CauchyGrid& b);

// Max difference between the last level of a grid and a reference field.
double error_against(const CauchyGrid& grid, const StateField& exact);

struct UniquenessOptions {
  std::vector<int> resolutions{64, 128, 256};
  std::vector<double> epsilons{1e-3, 1e-4, 1e-5};
  double cfl = 0.8;
};

struct UniquenessReport {
  std::vector<int> resolutions;
  std::vector<double> scheme_distance;  // Lax-Wendroff vs upwind per resolution
  std::vector<double> epsilons;
  std::vector<double> response;  // max |U_eps - U_0| at the finest resolution
  std::vector<double> gain;      // response / eps
  double gain_spread = 0.0;      // max gain / min gain
  bool deterministic = false;    // repeated run is bit-identical
  HaltStatus status = HaltStatus::Completed;
};

// Cross-scheme convergence and linear response to eps cos(phi) added to theta.
UniquenessReport uniqueness_experiment(const InitialData& f, double c, double r_target,
                                       const UniquenessOptions& options = {});

}  // namespace e1lab::cauchy
