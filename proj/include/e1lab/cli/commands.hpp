#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "e1lab/jets_invariants.hpp"
#include "e1lab/rotsym.hpp"

namespace e1lab::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kPrecondition = 2, kNumericalHalt = 3 };

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// "parabola+", "parabola-", "type1", "type2" or a canonical family name.
rotsym::Family parse_family(const std::string& name);

// The above, or "custom:u=<expr>". Throws InvalidArgument.
std::function<jets::SurfaceJet(double x, double y)> parse_surface(const std::string& spec, double rho0);

struct InvariantsArgs {
  std::string surface = "parabola+";
  double rho0 = 1.0;
  double x = 1.0;
  double y = 0.0;
  double r = kUnset;  // polar point when set
  double phi = 0.0;
};

struct IntegrateArgs {
  std::string family = "type2";
  double rho0 = 1.0;
  bool reflect = false;
  double h = 1e-3;
  double r_start = kUnset;  // default 0.05 rho0
  double r_end = kUnset;    // default 0.9 of the blow-up radius, 2 for parabolas
  double w0 = kUnset;       // custom start value; family becomes Numeric
  double tol = 1e-6;
};

struct ClassifyArgs {
  std::string input;
  double tol = 1e-6;
};

struct FiguresArgs {
  double rho0 = 1.0;
  int n = 400;
};

struct MarchArgs {
  std::string init = "parabola+";
  double rho0 = 1.0;
  double c = 1.0;
  double to = 1.5;
  int nphi = 256;
  std::string scheme = "lax-wendroff";
  double cfl = 0.8;
};

struct UniqueArgs {
  std::string init = "parabola+";
  double rho0 = 1.0;
  double c = 1.0;
  double to = 1.5;
  std::vector<double> eps{1e-3, 1e-4, 1e-5};
  std::vector<int> nphi{64, 128, 256};
  double cfl = 0.8;
};

struct EigenArgs {
  double alpha = -0.25;
  double H = 0.4330127018922193;
  double s = 0.5;
  double c = 0.8660254037844386;
  double r = 2.0;
};

struct SecondvarArgs {
  int lmax = 8;
  bool check_ibp = false;
  std::uint64_t seed = 7;
  int fields = 100;
  int band = 4;
  bool criticality = false;
  double rho1 = kUnset;  // sweep when unset
};

struct CheckArgs {
  bool all = false;
  std::vector<std::string> suites;
  double tol = 1.0;
};

class RunContext;

int cmd_invariants(const InvariantsArgs& a, RunContext& ctx);
int cmd_rotsym_integrate(const IntegrateArgs& a, RunContext& ctx);
int cmd_rotsym_classify(const ClassifyArgs& a, RunContext& ctx);
int cmd_rotsym_glue(double rho0, RunContext& ctx);
int cmd_rotsym_figures(const FiguresArgs& a, RunContext& ctx);
int cmd_cauchy_march(const MarchArgs& a, RunContext& ctx);
int cmd_cauchy_unique(const UniqueArgs& a, RunContext& ctx);
int cmd_cauchy_eigen(const EigenArgs& a, RunContext& ctx);
int cmd_secondvar(const SecondvarArgs& a, RunContext& ctx);
int cmd_check(const CheckArgs& a, RunContext& ctx);

// Reads the r and w columns (and u when present) of a profile CSV.
rotsym::RadialProfile read_profile_csv(const std::filesystem::path& path);

}  // namespace e1lab::cli
