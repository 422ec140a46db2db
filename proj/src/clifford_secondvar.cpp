#include "e1lab/clifford_secondvar.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "e1lab/errors.hpp"

namespace e1lab::secondvar {

namespace {

constexpr double kPi = std::numbers::pi;
const std::complex<double> kI(0.0, 1.0);

// Frame vectors as coefficients of (d/dphi1, d/dphi2).
struct FrameVector {
  double d1;
  double d2;
};

constexpr FrameVector kE1{-1.0, 1.0};
constexpr FrameVector kT{1.0, 1.0};

}  // namespace

std::complex<double> TorusField::coeff(int m, int n) const {
  const auto it = coeffs_.find({m, n});
  return it == coeffs_.end() ? std::complex<double>(0.0) : it->second;
}

void TorusField::add(int m, int n, std::complex<double> c) {
  if (std::abs(m) > n_max_ || std::abs(n) > n_max_) {
    throw Error(ErrorKind::InvalidArgument, "mode beyond the truncation order");
  }
  coeffs_[{m, n}] += c;
}

TorusField TorusField::constant(double value, int n_max) {
  TorusField f(n_max);
  f.add(0, 0, value);
  return f;
}

TorusField TorusField::cosine(int m, int n, double amplitude, int n_max) {
  TorusField f(n_max);
  if (m == 0 && n == 0) {
    f.add(0, 0, amplitude);
    return f;
  }
  f.add(m, n, 0.5 * amplitude);
  f.add(-m, -n, 0.5 * amplitude);
  return f;
}

TorusField TorusField::v_mode(int l, int n_max) { return cosine(l, l, 1.0, n_max); }

TorusField TorusField::random(std::uint64_t seed, int band, int n_max) {
  if (band < 0 || band > n_max) throw Error(ErrorKind::InvalidArgument, "band outside [0, n_max]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  TorusField f(n_max);
  for (int m = -band; m <= band; ++m) {
    for (int n = -band; n <= band; ++n) {
      // Draw each conjugate pair once, from the half with (m, n) > (0, 0).
      if (m < 0 || (m == 0 && n < 0)) continue;
      if (m == 0 && n == 0) {
        f.add(0, 0, uni(rng));
        continue;
      }
      const double re = uni(rng);
      const double im = uni(rng);
      f.add(m, n, {re, im});
      f.add(-m, -n, {re, -im});
    }
  }
  return f;
}

double TorusField::evaluate(double phi1, double phi2) const {
  std::complex<double> acc = 0.0;
  for (const auto& [mode, c] : coeffs_) {
    const double ang = mode.first * phi1 + mode.second * phi2;
    acc += c * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc.real();
}

double TorusField::reality_defect() const {
  double worst = 0.0;
  for (const auto& [mode, c] : coeffs_) {
    worst = std::max(worst, std::abs(coeff(-mode.first, -mode.second) - std::conj(c)));
  }
  return worst;
}

TorusField TorusField::scaled(double s) const {
  return map_modes([s](int, int) { return std::complex<double>(s); });
}

TorusField TorusField::operator+(const TorusField& other) const {
  TorusField out = *this;
  out.n_max_ = std::max(n_max_, other.n_max_);
  for (const auto& [mode, c] : other.coeffs_) out.coeffs_[mode] += c;
  return out;
}

TorusField TorusField::operator-(const TorusField& other) const { return *this + other.scaled(-1.0); }

TorusField apply_e1(const TorusField& f) {
  return f.map_modes([](int m, int n) { return kI * (kE1.d1 * m + kE1.d2 * n); });
}

TorusField apply_T(const TorusField& f) {
  return f.map_modes([](int m, int n) { return kI * (kT.d1 * m + kT.d2 * n); });
}

double measure_factor() {
  // Write d/dphi_k = a_k e1 + b_k T; then Theta = b, e^1 = a.
  const double det = kE1.d1 * kT.d2 - kE1.d2 * kT.d1;
  auto coframe = [&](double v1, double v2) {
    const double a = (v1 * kT.d2 - v2 * kT.d1) / det;
    const double b = (kE1.d1 * v2 - kE1.d2 * v1) / det;
    return std::pair{a, b};
  };
  const auto [a1, b1] = coframe(1.0, 0.0);
  const auto [a2, b2] = coframe(0.0, 1.0);
  return b1 * a2 - b2 * a1;
}

double integral(const TorusField& f) { return measure_factor() * 4.0 * kPi * kPi * f.coeff(0, 0).real(); }

double inner(const TorusField& f, const TorusField& g) {
  std::complex<double> acc = 0.0;
  for (const auto& [mode, c] : f.coeffs()) acc += c * std::conj(g.coeff(mode.first, mode.second));
  return measure_factor() * 4.0 * kPi * kPi * acc.real();
}

double quadrature_inner(const TorusField& f, const TorusField& g, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "quadrature needs n >= 1");
  const double step = 2.0 * kPi / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p1 = i * step, p2 = j * step;
      row += f.evaluate(p1, p2) * g.evaluate(p1, p2);
    }
    total += row;
  }
  return measure_factor() * step * step * total;
}

double second_variation(const TorusField& f) {
  const TorusField e1f = apply_e1(f);
  const TorusField e1e1f = apply_e1(e1f);
  const TorusField e1Tf = apply_e1(apply_T(f));
  const TorusField TTf = apply_T(apply_T(f));
  const double value = inner(e1e1f, e1e1f) + 3.0 * inner(e1Tf, e1Tf) - 7.0 * inner(e1f, e1f) +
                       9.0 * inner(f, TTf) + 12.0 * inner(f, f);
  return std::numbers::sqrt2 / 4.0 * value;
}

double second_variation_pre_ibp(const TorusField& f) {
  const TorusField& h = f;
  const TorusField e1e1h = apply_e1(apply_e1(h));
  const TorusField e1e1e1e1h = apply_e1(apply_e1(e1e1h));
  const TorusField e1Te1Th = apply_e1(apply_T(apply_e1(apply_T(h))));
  const TorusField TTh = apply_T(apply_T(h));
  const TorusField bracket =
      e1e1e1e1h + e1Te1Th.scaled(3.0) + e1e1h.scaled(7.0) + TTh.scaled(9.0) + h.scaled(12.0);
  return std::numbers::sqrt2 / 4.0 * inner(bracket, h);
}

AdjointnessResiduals ibp_adjointness(const TorusField& f1, const TorusField& f2) {
  return {inner(f1, apply_e1(f2)) + inner(apply_e1(f1), f2),
          inner(f1, apply_T(f2)) + inner(apply_T(f1), f2)};
}

TorusBackground TorusBackground::make(double rho1) {
  if (!(rho1 > 0.0) || !(rho1 < 1.0)) throw Error(ErrorKind::InvalidArgument, "rho1 must lie in (0, 1)");
  TorusBackground bg;
  bg.rho1 = rho1;
  bg.rho2 = std::sqrt(1.0 - rho1 * rho1);
  bg.H = bg.rho1 / bg.rho2 - bg.rho2 / bg.rho1;
  bg.alpha = 0.0;
  bg.W = 2.0;
  // e1(alpha) = 0 and alpha = 0 on these tori.
  bg.Hcr = bg.H * bg.H / 6.0 + bg.W / 4.0;
  return bg;
}

TorusBackground TorusBackground::clifford() {
  // Set rho2 = rho1 directly; going through sqrt(1 - rho1^2) leaves H ~ 1e-16.
  TorusBackground bg = make(std::sqrt(0.5));
  bg.rho2 = bg.rho1;
  bg.H = 0.0;
  bg.Hcr = bg.W / 4.0;
  return bg;
}

double hcr_f(const TorusBackground& bg) {
  // e1(H) H_cr + (3/2) V(H_cr) + (1/2) H e1(H_cr) - alpha H H_cr with
  // constant H and H_cr.
  const double e1H = 0.0, VHcr = 0.0, e1Hcr = 0.0;
  return e1H * bg.Hcr + 1.5 * VHcr + 0.5 * bg.H * e1Hcr - bg.alpha * bg.H * bg.Hcr;
}

double first_variation_density(const TorusBackground& bg) {
  // Frame derivatives of the constants H, alpha, H_cr all vanish, which
  // removes the e1(...) terms.
  const double Valpha = 0.0;
  const double abs_hcr = std::abs(bg.Hcr);
  if (abs_hcr == 0.0) throw Error(ErrorKind::SingularPoint, "H_cr vanishes on this torus");
  const double bracket = 4.5 * Valpha + 3.0 * bg.H * bg.Hcr - bg.H * bg.H * bg.H / 6.0;
  return (1.5 * hcr_f(bg) * bg.alpha + bg.Hcr * bracket) / std::sqrt(abs_hcr);
}

VariationDerivatives ddt_quantities(const TorusField& f) {
  const TorusField e1f = apply_e1(f);
  const TorusField e1e1f = apply_e1(e1f);
  const TorusField Tf = apply_T(f);
  const TorusField e1Te1Tf = apply_e1(apply_T(apply_e1(Tf)));
  VariationDerivatives d{
      e1e1f + f.scaled(4.0),
      Tf,
      apply_T(Tf),
      apply_e1(Tf),
      apply_e1(apply_e1(e1e1f)).scaled(0.5) + e1e1f.scaled(2.0) + e1Te1Tf.scaled(1.5),
  };
  return d;
}

double assembled_second_variation(const TorusField& f) {
  const VariationDerivatives d = ddt_quantities(f);
  const TorusField bracket = d.d_e1Hcrf.scaled(0.5) + d.dValpha.scaled(2.25) + d.dH.scaled(0.75);
  return std::numbers::sqrt2 * inner(bracket, f);
}

std::vector<std::pair<int, double>> mode_spectrum(int l_max) {
  if (l_max < 1) throw Error(ErrorKind::InvalidArgument, "l_max must be at least 1");
  std::vector<std::pair<int, double>> out;
  out.reserve(l_max);
  const int n_max = std::max(64, l_max);
  for (int l = 1; l <= l_max; ++l) out.emplace_back(l, second_variation(TorusField::v_mode(l, n_max)));
  return out;
}

}  // namespace e1lab::secondvar
