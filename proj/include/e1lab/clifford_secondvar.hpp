#pragma once

// First and second variation of E1 at the tori |z1| = rho1, |z2| = rho2 in the
// CR 3-sphere, evaluated spectrally on double Fourier series in the angles
// (phi1, phi2).

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace e1lab::secondvar {

// f(phi1, phi2) = sum c_{m,n} exp(i (m phi1 + n phi2)).
class TorusField {
 public:
  using Mode = std::pair<int, int>;
  using Coeffs = std::map<Mode, std::complex<double>>;

  explicit TorusField(int n_max = 64) : n_max_(n_max) {}

  static TorusField constant(double value, int n_max = 64);
  // amplitude * cos(m phi1 + n phi2)
  static TorusField cosine(int m, int n, double amplitude = 1.0, int n_max = 64);
  // cos l (phi1 + phi2)
  static TorusField v_mode(int l, int n_max = 64);
  // Real field with independent uniform coefficients on |m|, |n| <= band.
  static TorusField random(std::uint64_t seed, int band, int n_max = 64);

  int n_max() const { return n_max_; }
  const Coeffs& coeffs() const { return coeffs_; }
  std::complex<double> coeff(int m, int n) const;

  // Adds to the coefficient of (m, n); throws InvalidArgument beyond n_max.
  void add(int m, int n, std::complex<double> c);

  double evaluate(double phi1, double phi2) const;

  // max |c_{-m,-n} - conj(c_{m,n})|
  double reality_defect() const;

  TorusField scaled(double s) const;
  TorusField operator+(const TorusField& other) const;
  TorusField operator-(const TorusField& other) const;

  // Multiplies mode (m, n) by the given function of (m, n).
  template <class F>
  TorusField map_modes(F&& symbol) const {
    TorusField out(n_max_);
    for (const auto& [mode, c] : coeffs_) {
      const std::complex<double> v = symbol(mode.first, mode.second) * c;
      if (v != 0.0) out.coeffs_[mode] = v;
    }
    return out;
  }

 private:
  int n_max_;
  Coeffs coeffs_;
};

// Clifford torus frame: e1 = -d/dphi1 + d/dphi2, T = d/dphi1 + d/dphi2.
TorusField apply_e1(const TorusField& f);
TorusField apply_T(const TorusField& f);

// (Theta ^ e^1)(d/dphi1, d/dphi2) from the frame duality on the Clifford torus.
double measure_factor();

// int_Sigma f Theta ^ e^1 and int_Sigma f g Theta ^ e^1 via Parseval.
double integral(const TorusField& f);
double inner(const TorusField& f, const TorusField& g);

// Periodic trapezoid rule on an n x n grid for int f g Theta ^ e^1.
double quadrature_inner(const TorusField& f, const TorusField& g, int n);

// (sqrt2/4) int [ (e1 e1 f)^2 + 3 (e1 T f)^2 - 7 (e1 f)^2 + 9 f TT f + 12 f^2 ].
double second_variation(const TorusField& f);

// (sqrt2/4) int [ e1^4 h + 3 e1 T e1 T h + 7 e1^2 h + 9 TT h + 12 h ] h, h = f.
double second_variation_pre_ibp(const TorusField& f);

struct AdjointnessResiduals {
  double residual_e1;  // int f1 e1 f2 + int e1 f1 f2
  double residual_T;   // int f1 T f2 + int T f1 f2
};

AdjointnessResiduals ibp_adjointness(const TorusField& f1, const TorusField& f2);

struct TorusBackground {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double H = 0.0;
  double alpha = 0.0;
  double W = 2.0;
  double Hcr = 0.0;

  // Throws InvalidArgument unless 0 < rho1 < 1.
  static TorusBackground make(double rho1);
  static TorusBackground clifford();
};

// |H_cr| f-frak on the constant background (all frame derivatives vanish).
double hcr_f(const TorusBackground& bg);

// First-variation density for a constant background:
// |Hcr|^{1/2} sign(Hcr) H (3 Hcr - H^2 / 6).
double first_variation_density(const TorusBackground& bg);

// Time derivatives at t = 0 along the normal variation f e2 of the Clifford
// torus.
struct VariationDerivatives {
  TorusField dH;        // e1 e1 f + 4 f
  TorusField dAlpha;    // T f
  TorusField dValpha;   // T T f
  TorusField dHcr;      // e1 T f
  TorusField d_e1Hcrf;  // e1^4 f / 2 + 2 e1^2 f + (3/2) e1 T e1 T f
};

VariationDerivatives ddt_quantities(const TorusField& f);

// sqrt2 int [ d_e1Hcrf / 2 + (9/4) dValpha + (3/4) dH ] f.
double assembled_second_variation(const TorusField& f);

// Q(v_l) for l = 1 .. l_max.
std::vector<std::pair<int, double>> mode_spectrum(int l_max);

}  // namespace e1lab::secondvar
