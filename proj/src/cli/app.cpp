#include "e1lab/cli/app.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "e1lab/cli/commands.hpp"
#include "e1lab/cli/output.hpp"
#include "e1lab/errors.hpp"

namespace e1lab::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string env_name(const std::string& key) {
  std::string out = "E1LAB_";
  for (char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NearCharacteristic:
    case ErrorKind::BlowUp:
    case ErrorKind::StepTooLarge:
    case ErrorKind::QuadratureUnstable:
      return kNumericalHalt;
    default:
      return kPrecondition;
  }
}

// Options the user did not pass on the command line are filled from the
// environment first, then from the config file.
void apply_layers(CLI::App* app, const std::map<std::string, std::string>& config,
                  std::map<std::string, std::string>& params) {
  for (CLI::Option* opt : app->get_options()) {
    const std::string key = opt->get_single_name();
    if (key.empty() || key == "help" || key == "version" || key == "config") continue;
    if (opt->count() == 0) {
      std::string value;
      bool found = false;
      if (const char* env = std::getenv(env_name(key).c_str())) {
        value = env;
        found = true;
      } else if (const auto it = config.find(key); it != config.end()) {
        value = it->second;
        found = true;
      }
      if (found) {
        if (opt->get_type_size_max() > 1 || opt->get_expected_max() > 1) {
          for (const auto& part : CLI::detail::split(value, ',')) opt->add_result(trim(part));
        } else {
          opt->add_result(value);
        }
        opt->run_callback();
      }
    }
    std::string shown;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) shown += (shown.empty() ? "" : ",") + r;
    } else {
      shown = opt->get_default_str();
    }
    params[key] = shown;
  }
}

}  // namespace

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for vanishing-E1 surfaces in the Heisenberg group"};
  // --h is the RK4 step, so help is long-form only.
  app.set_help_flag("-?,--help", "Print this help message and exit");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", build_id());

  std::string out_dir = "e1lab_out";
  std::string config_path;
  app.add_option("--out", out_dir, "Directory for CSV files and the run manifest");
  app.add_option("--config", config_path, "key=value file; also read from E1LAB_CONFIG");

  InvariantsArgs inv;
  auto* c_inv = app.add_subcommand("invariants", "Invariants and E1 residual of a graph at one point");
  c_inv->add_option("--surface", inv.surface, "parabola+ | parabola- | type1 | type2 | custom:u=<expr>");
  c_inv->add_option("--rho0", inv.rho0, "Sphere parameter");
  c_inv->add_option("--x", inv.x);
  c_inv->add_option("--y", inv.y);
  c_inv->add_option("--r", inv.r, "Polar radius; overrides --x/--y");
  c_inv->add_option("--phi", inv.phi, "Polar angle");

  auto* c_rot = app.add_subcommand("rotsym", "Rotationally symmetric solutions");
  c_rot->require_subcommand(1);
  IntegrateArgs integ;
  auto* c_int = c_rot->add_subcommand("integrate", "RK4 on the w equation, then classify");
  c_int->add_option("--family", integ.family, "parabola+ | parabola- | type1 | type2");
  c_int->add_option("--rho0", integ.rho0);
  c_int->add_flag("--reflect", integ.reflect, "Mirror the profile, u -> -u");
  c_int->add_option("--h", integ.h, "RK4 step");
  c_int->add_option("--r-start", integ.r_start, "Default 0.05 rho0");
  c_int->add_option("--r-end", integ.r_end, "Default 0.9 of the blow-up radius");
  c_int->add_option("--w0", integ.w0, "Start value of w; integrates an unnamed solution");
  c_int->add_option("--tol", integ.tol, "Classification tolerance");
  ClassifyArgs cls;
  auto* c_cls = c_rot->add_subcommand("classify", "Fit a profile CSV to the closed-form families");
  c_cls->add_option("--input", cls.input)->required();
  c_cls->add_option("--tol", cls.tol);
  double glue_rho0 = 1.0;
  auto* c_glue = c_rot->add_subcommand("glue", "Second derivatives r_uu at the rims of the two spheres");
  c_glue->add_option("--rho0", glue_rho0);
  FiguresArgs figs;
  auto* c_fig = c_rot->add_subcommand("figures", "Plot data for w(r), u(r) and the closed profile curves");
  c_fig->add_option("--rho0", figs.rho0);
  c_fig->add_option("--n", figs.n, "Samples per curve");

  auto* c_cau = app.add_subcommand("cauchy", "Cauchy problem for the first-order system");
  c_cau->require_subcommand(1);
  MarchArgs mar;
  auto* c_mar = c_cau->add_subcommand("march", "March exact initial data from r = c");
  c_mar->add_option("--init", mar.init, "parabola+ | parabola- | type1 | type2");
  c_mar->add_option("--rho0", mar.rho0);
  c_mar->add_option("--c", mar.c, "Initial radius");
  c_mar->add_option("--to", mar.to, "Target radius");
  c_mar->add_option("--nphi", mar.nphi);
  c_mar->add_option("--scheme", mar.scheme, "lax-wendroff | upwind");
  c_mar->add_option("--cfl", mar.cfl);
  UniqueArgs uni;
  auto* c_uni = c_cau->add_subcommand("unique", "Cross-scheme convergence and perturbation response");
  c_uni->add_option("--init", uni.init);
  c_uni->add_option("--rho0", uni.rho0);
  c_uni->add_option("--c", uni.c);
  c_uni->add_option("--to", uni.to);
  c_uni->add_option("--eps", uni.eps, "Perturbation sizes")->delimiter(',');
  c_uni->add_option("--nphi", uni.nphi, "Resolutions")->delimiter(',');
  c_uni->add_option("--cfl", uni.cfl);
  EigenArgs eig;
  auto* c_eig = c_cau->add_subcommand("eigen", "Eigenvalues and eigenvectors of A^-1 B");
  c_eig->add_option("--alpha", eig.alpha);
  c_eig->add_option("--H", eig.H);
  c_eig->add_option("--s", eig.s, "sin(theta - phi)");
  c_eig->add_option("--c", eig.c, "cos(theta - phi)");
  c_eig->add_option("--r", eig.r);

  SecondvarArgs sv;
  auto* c_sv = app.add_subcommand("secondvar", "Second variation of E1 at the Clifford torus");
  c_sv->add_option("--lmax", sv.lmax);
  c_sv->add_flag("--check-ibp", sv.check_ibp, "Compare the integrated-by-parts forms on random fields");
  c_sv->add_option("--seed", sv.seed);
  c_sv->add_option("--fields", sv.fields);
  c_sv->add_option("--band", sv.band);
  c_sv->add_flag("--criticality", sv.criticality, "First variation on the tori |z1| = rho1");
  c_sv->add_option("--rho1", sv.rho1, "Single torus; sweeps 99 tori when omitted");

  CheckArgs chk;
  auto* c_chk = app.add_subcommand("check", "Run the built-in verification suites");
  c_chk->add_flag("--all", chk.all);
  c_chk->add_option("suites", chk.suites, "Suite names");
  c_chk->add_option("--tol", chk.tol, "Scale factor for every absolute or relative tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kPrecondition;
  }

  // Selected chain, outermost first.
  std::vector<CLI::App*> chain{&app};
  while (!chain.back()->get_subcommands().empty()) chain.push_back(chain.back()->get_subcommands().front());
  std::string command;
  for (std::size_t i = 1; i < chain.size(); ++i) command += (i > 1 ? " " : "") + chain[i]->get_name();

  try {
    if (config_path.empty()) {
      if (const char* env = std::getenv("E1LAB_CONFIG")) config_path = env;
    }
    const auto config = config_path.empty() ? std::map<std::string, std::string>{} : read_config(config_path);
    std::map<std::string, std::string> params;
    for (CLI::App* a : chain) apply_layers(a, config, params);

    RunContext ctx(command, out_dir);
    ctx.manifest().parameters = params;
    int code = kOk;
    const CLI::App* leaf = chain.back();
    if (leaf == c_inv) code = cmd_invariants(inv, ctx);
    else if (leaf == c_int) code = cmd_rotsym_integrate(integ, ctx);
    else if (leaf == c_cls) code = cmd_rotsym_classify(cls, ctx);
    else if (leaf == c_glue) code = cmd_rotsym_glue(glue_rho0, ctx);
    else if (leaf == c_fig) code = cmd_rotsym_figures(figs, ctx);
    else if (leaf == c_mar) code = cmd_cauchy_march(mar, ctx);
    else if (leaf == c_uni) code = cmd_cauchy_unique(uni, ctx);
    else if (leaf == c_eig) code = cmd_cauchy_eigen(eig, ctx);
    else if (leaf == c_sv) code = cmd_secondvar(sv, ctx);
    else if (leaf == c_chk) code = cmd_check(chk, ctx);
    if (code == kCheckFailed && ctx.manifest().status == "ok") ctx.halt("check failed");
    ctx.finish();
    return code;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.kind());
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kPrecondition;
  }
}

}  // namespace e1lab::cli
