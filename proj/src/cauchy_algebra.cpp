#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <sstream>

#include "e1lab/errors.hpp"
#include "e1lab/hyperbolic_cauchy.hpp"
#include "e1lab/jets_invariants.hpp"

namespace e1lab::cauchy {

namespace {

struct Trig {
  double s;
  double c;
};

Trig frame_trig(double phi, const StateVector& U) {
  return {std::sin(U.theta - phi), std::cos(U.theta - phi)};
}

double max_abs(const Mat4& M) {
  double m = 0.0;
  for (const auto& row : M)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

// Determinant by Gaussian elimination with partial pivoting.
double det4(Mat4 M) {
  double det = 1.0;
  for (int k = 0; k < 4; ++k) {
    int p = k;
    for (int i = k + 1; i < 4; ++i)
      if (std::abs(M[i][k]) > std::abs(M[p][k])) p = i;
    if (M[p][k] == 0.0) return 0.0;
    if (p != k) {
      std::swap(M[p], M[k]);
      det = -det;
    }
    det *= M[k][k];
    for (int i = k + 1; i < 4; ++i) {
      const double f = M[i][k] / M[k][k];
      for (int j = k; j < 4; ++j) M[i][j] -= f * M[k][j];
    }
  }
  return det;
}

[[maybe_unused]] Mat4 multiply(const Mat4& X, const Mat4& Y) {
  Mat4 Z{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += X[i][k] * Y[k][j];
      Z[i][j] = acc;
    }
  return Z;
}

Vec4 mat_vec(const Mat4& M, const Vec4& v) {
  Vec4 out{};
  for (int i = 0; i < 4; ++i) {
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += M[i][k] * v[k];
    out[i] = acc;
  }
  return out;
}

Mat4 build_A(double s, double c, const StateVector& U) {
  const double a = U.alpha;
  const double H = U.H;
  return Mat4{{{s * H / 3.0 + c * a, s, 0.0, 0.0},
               {-c * a, s, 0.0, 0.0},
               {0.0, 6.0 * s * a, -c * a, s},
               {2.0 * c * a * a, 2.0 * s * a, -2.0 / 3.0 * s * H - c * a, -s}}};
}

void check_invertible(double det, const Mat4& A, double r, double phi) {
  const double scale = std::pow(std::max(1.0, max_abs(A)), 4);
  if (!(std::abs(det) > 1e-12 * scale)) {
    std::ostringstream msg;
    msg << "det A = " << det << " at (r, phi) = (" << r << ", " << phi << ")";
    throw Error(ErrorKind::NearCharacteristic, msg.str());
  }
}

}  // namespace

double e1_relation(const StateVector& U) { return U.m + 0.5 * U.alpha * U.alpha + U.H * U.H / 6.0; }

SystemMatrices assemble(double r, double phi, const StateVector& U) {
  if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "r must be positive");
  const auto [s, c] = frame_trig(phi, U);
  const double a = U.alpha;
  const double H = U.H;
  SystemMatrices M;
  M.s = s;
  M.c = c;
  M.r = r;
  M.phi = phi;
  M.A = build_A(s, c, U);
  const double sr = s / r;
  const double cr = c / r;
  M.B = Mat4{{{-cr * H / 3.0 + sr * a, -cr, 0.0, 0.0},
              {-sr * a, -cr, 0.0, 0.0},
              {0.0, -6.0 * cr * a, -sr * a, -cr},
              {2.0 * sr * a * a, -2.0 * cr * a, 2.0 / 3.0 * cr * H - sr * a, cr}}};
  M.C = Mat4{{{0.0, a, 0.0, 0.0},
              {0.0, -2.0 * a, 0.0, 0.0},
              {0.0, -4.0 * a * a, -a * H, 0.0},
              {0.0, 0.0, -a * H, 0.0}}};
  return M;
}

double det_A(double r, double phi, const StateVector& U) {
  (void)r;
  const auto [s, c] = frame_trig(phi, U);
  const double sigma = s * U.H / 3.0 + 2.0 * c * U.alpha;
  const double eta = 2.0 * s * U.H / 3.0 + 2.0 * c * U.alpha;
  const double det = s * s * sigma * eta;
#ifndef NDEBUG
  {
    const Mat4 A = build_A(s, c, U);
    const double direct = det4(A);
    const double scale = std::pow(std::max(1.0, max_abs(A)), 4);
    assert(std::abs(direct - det) <= 1e-12 * scale);
  }
#endif
  return det;
}

Mat4 inverse_A(double r, double phi, const StateVector& U) {
  const auto [s, c] = frame_trig(phi, U);
  const double a = U.alpha;
  const double H = U.H;
  const double sigma = s * H / 3.0 + 2.0 * c * a;
  const double eta = 2.0 * s * H / 3.0 + 2.0 * c * a;
  check_invertible(s * s * sigma * eta, build_A(s, c, U), r, phi);

  const double ca = c * a;
  const double a2 = a * a;
  const double se = s * sigma * eta;
  Mat4 inv{};
  inv[0] = {1.0 / sigma, -1.0 / sigma, 0.0, 0.0};
  inv[1] = {ca / (s * sigma), (sigma - ca) / (s * sigma), 0.0, 0.0};
  inv[2] = {10.0 * c * a2 / (sigma * eta), (8.0 * sigma * a - 10.0 * c * a2) / (sigma * eta),
            -1.0 / eta, -1.0 / eta};
  inv[3] = {(-6.0 * eta * c * a2 + 10.0 * c * c * a2 * a) / se,
            (8.0 * sigma * c * a2 - 10.0 * c * c * a2 * a - 6.0 * sigma * eta * a +
             6.0 * eta * c * a2) /
                se,
            (eta - ca) / (s * eta), -ca / (s * eta)};
  return inv;
}

Mat4 a_matrix(double r, double phi, const StateVector& U) {
  const auto [s, c] = frame_trig(phi, U);
  const double a = U.alpha;
  const double H = U.H;
  const double sigma = s * H / 3.0 + 2.0 * c * a;
  const double eta = 2.0 * s * H / 3.0 + 2.0 * c * a;
  check_invertible(s * s * sigma * eta, build_A(s, c, U), r, phi);

  const double a2 = a * a;
  const double lambda1 = (-c * H / 3.0 + 2.0 * s * a) / (r * sigma);
  const double lambda2 = -c / (s * r);
  const double lambda3 = (-2.0 / 3.0 * c * H + 2.0 * s * a) / (r * eta);
  const double l21 = -a * H / 3.0 / (s * r * sigma);
  const double l31 = -10.0 / 3.0 * H * a2 / (r * sigma * eta);
  const double l41 = (4.0 / 3.0 * s * a2 * H * H + 2.0 / 3.0 * c * a2 * a * H) / (s * r * sigma * eta);
  const double l43 = -2.0 / 3.0 * a * H / (s * r * eta);
  Mat4 m{};
  m[0] = {lambda1, 0.0, 0.0, 0.0};
  m[1] = {l21, lambda2, 0.0, 0.0};
  m[2] = {l31, 0.0, lambda3, 0.0};
  m[3] = {l41, 0.0, l43, lambda2};
#ifndef NDEBUG
  {
    const SystemMatrices M = assemble(r, phi, U);
    const Mat4 direct = multiply(inverse_A(r, phi, U), M.B);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        assert(std::abs(direct[i][j] - m[i][j]) <= 1e-8 * (1.0 + max_abs(m)));
  }
#endif
  return m;
}

Vec4 b_vector(double r, double phi, const StateVector& U) {
  const SystemMatrices M = assemble(r, phi, U);
  return mat_vec(inverse_A(r, phi, U), mat_vec(M.C, U.as_array()));
}

Mat4 characteristic_basis(const StateVector& U) {
  const double a = U.alpha;
  const double H = U.H;
  // Columns xi^1 .. xi^4.
  Mat4 R{};
  R[0] = {1.0, 0.0, 0.0, 0.0};
  R[1] = {-H / 6.0, 1.0, 0.0, 0.0};
  R[2] = {-5.0 * a, 0.0, 1.0, 0.0};
  R[3] = {11.0 / 6.0 * a * H, 0.0, -H / 3.0, 1.0};
  return R;
}

EigenSystem eigen_system(double r, double phi, const StateVector& U) {
  const Mat4 a = a_matrix(r, phi, U);
  EigenSystem es;
  if (U.alpha == 0.0) {
    es.kind = EigenCase::AlphaZero;
  } else if (U.H == 0.0) {
    es.kind = EigenCase::HZero;
  } else {
    es.kind = EigenCase::Generic;
  }
  const double lambdas[4] = {a[0][0], a[1][1], a[2][2], a[3][3]};
  if (es.kind == EigenCase::AlphaZero) {
    for (int k = 0; k < 4; ++k) {
      Vec4 e{};
      e[k] = 1.0;
      es.pairs[k] = {lambdas[k], e};
    }
    return es;
  }
  const Mat4 R = characteristic_basis(U);
  for (int k = 0; k < 4; ++k) {
    es.pairs[k] = {lambdas[k], {R[0][k], R[1][k], R[2][k], R[3][k]}};
  }
  return es;
}

double characteristic_determinant(double dr, double dphi, double r, double phi,
                                  const StateVector& U) {
  const SystemMatrices M = assemble(r, phi, U);
  Mat4 K{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) K[i][j] = M.A[i][j] * dphi - M.B[i][j] * dr;
  return det4(K);
}

bool is_characteristic(double dr, double dphi, double r, double phi, const StateVector& U,
                       double tol) {
  if (dr == 0.0 && dphi == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "direction (dr, dphi) must be nonzero");
  }
  const SystemMatrices M = assemble(r, phi, U);
  Mat4 K{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) K[i][j] = M.A[i][j] * dphi - M.B[i][j] * dr;
  const double scale = std::pow(max_abs(K), 4);
  return std::abs(det4(K)) < tol * scale;
}

StateVector exact_state(rotsym::Family family, double rho0, double r, double phi) {
  using rotsym::Family;
  constexpr double kSqrt3 = std::numbers::sqrt3;
  constexpr double kPi = std::numbers::pi;
  switch (family) {
    case Family::ParabolaPlus:
    case Family::ParabolaMinus: {
      if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "r must be positive");
      const bool plus = family == Family::ParabolaPlus;
      return {phi + (plus ? kPi / 6.0 : 5.0 * kPi / 6.0), -0.5 / r,
              (plus ? 1.0 : -1.0) * kSqrt3 / (2.0 * r), -0.25 / (r * r)};
    }
    case Family::TypeI:
    case Family::TypeII: {
      const double limit = rotsym::blowup_radius(family, rho0);
      if (!(r > 0.0) || !(r < limit)) {
        std::ostringstream msg;
        msg << "r = " << r << " outside (0, " << limit << ")";
        throw Error(ErrorKind::DomainExceeded, msg.str());
      }
      const double eps = family == Family::TypeI ? 1.0 : -1.0;
      const double rho2 = rho0 * rho0;
      const double k = 0.5 * kSqrt3 * rho2;
      const double q = r * r + eps * k;
      const double g = (rho2 - q) * (rho2 + q);
      const double sg = std::sqrt(g);
      const double s = sg / rho2;
      const double c = eps * q / rho2;
      const double D = r * rho2 / sg;
      const double u = -0.5 * eps * sg;
      StateVector U;
      U.theta = phi + std::atan2(s, c);
      U.alpha = -1.0 / D;
      U.H = eps * (3.0 * r * r + eps * k) / (r * rho2);
      U.m = 4.0 / (rho2 * rho2) * (-u * u / (r * r) - 0.5 * q);
      return U;
    }
    default:
      throw Error(ErrorKind::InvalidArgument, "no exact state for this family");
  }
}

// ---------------------------------------------------------------------------

namespace {

struct Differ {
  const StateField& field;
  double h;

  void guard(double r) const {
    if (!(r - h > 0.0)) {
      std::ostringstream msg;
      msg << "stencil at r = " << r << " with step " << h << " reaches r <= 0";
      throw Error(ErrorKind::SingularPoint, msg.str());
    }
  }

  // Partial derivatives of every component at (r, phi); theta differences
  // are taken modulo 2 pi.
  std::pair<Vec4, Vec4> partials(double r, double phi) const {
    guard(r);
    const StateVector rp = field(r + h, phi), rm = field(r - h, phi);
    const StateVector pp = field(r, phi + h), pm = field(r, phi - h);
    const double inv = 0.5 / h;
    Vec4 dr{jets::angle_difference(rp.theta, rm.theta) * inv, (rp.alpha - rm.alpha) * inv,
            (rp.H - rm.H) * inv, (rp.m - rm.m) * inv};
    Vec4 dp{jets::angle_difference(pp.theta, pm.theta) * inv, (pp.alpha - pm.alpha) * inv,
            (pp.H - pm.H) * inv, (pp.m - pm.m) * inv};
    return {dr, dp};
  }

  // (N^perp theta, N^perp alpha) at (r, phi).
  std::pair<double, double> nperp_theta_alpha(double r, double phi) const {
    const StateVector U = field(r, phi);
    const double s = std::sin(U.theta - phi), c = std::cos(U.theta - phi);
    const auto [dr, dp] = partials(r, phi);
    return {s * dr[0] - c / r * dp[0], s * dr[1] - c / r * dp[1]};
  }
};

}  // namespace

IdentityResiduals verify_identities(const StateField& field, const IdentityGrid& grid, double h) {
  if (grid.n_r < 1 || grid.n_phi < 1 || !(h > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "identity grid needs n_r, n_phi >= 1 and h > 0");
  }
  const Differ d{field, h};
  IdentityResiduals out;
  for (int i = 0; i < grid.n_r; ++i) {
    const double r =
        grid.n_r == 1 ? grid.r_lo : grid.r_lo + (grid.r_hi - grid.r_lo) * i / (grid.n_r - 1);
    d.guard(r - h);
    for (int j = 0; j < grid.n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / grid.n_phi;
      const StateVector U = field(r, phi);
      const double s = std::sin(U.theta - phi), c = std::cos(U.theta - phi);
      const double a = U.alpha, H = U.H;
      const auto [dr, dp] = d.partials(r, phi);
      const double Np_theta = s * dr[0] - c / r * dp[0];
      const double Np_alpha = s * dr[1] - c / r * dp[1];
      const double N_theta = c * dr[0] + s / r * dp[0];
      const double N_H = c * dr[2] + s / r * dp[2];

      // Second derivatives along N^perp by differencing the first ones.
      const auto [t_rp, a_rp] = d.nperp_theta_alpha(r + h, phi);
      const auto [t_rm, a_rm] = d.nperp_theta_alpha(r - h, phi);
      const auto [t_pp, a_pp] = d.nperp_theta_alpha(r, phi + h);
      const auto [t_pm, a_pm] = d.nperp_theta_alpha(r, phi - h);
      const double inv = 0.5 / h;
      const double NpNp_theta = s * (t_rp - t_rm) * inv - c / r * (t_pp - t_pm) * inv;
      const double NpNp_alpha = s * (a_rp - a_rm) * inv - c / r * (a_pp - a_pm) * inv;

      const double iden1 = Np_theta + H;
      const double iden2 = Np_alpha - a * N_theta - 2.0 * a * a;
      const double emini1 = a * N_theta + H * Np_theta / 3.0 + Np_alpha + a * a;
      const double emini2 = -a * N_H - a * H * H + 2.0 * a * a * N_theta +
                            2.0 / 3.0 * H * NpNp_theta + NpNp_alpha + 2.0 * a * Np_alpha;
      const double codeq1 =
          -a * N_H - (NpNp_alpha - 6.0 * a * Np_alpha + 4.0 * a * a * a + a * H * H);

      out.iden1 = std::max(out.iden1, std::abs(iden1));
      out.iden2 = std::max(out.iden2, std::abs(iden2));
      out.emini1 = std::max(out.emini1, std::abs(emini1));
      out.emini2 = std::max(out.emini2, std::abs(emini2));
      out.codeq1 = std::max(out.codeq1, std::abs(codeq1));
    }
  }
  return out;
}

}  // namespace e1lab::cauchy
