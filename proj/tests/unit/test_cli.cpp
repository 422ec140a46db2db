#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "e1lab/cli/app.hpp"
#include "e1lab/cli/expr.hpp"
#include "e1lab/cli/output.hpp"
#include "e1lab/errors.hpp"

using namespace e1lab;
using namespace e1lab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("e1lab_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("expression derivatives match central differences") {
  const char* cases[] = {"x^2*y/3 + 0.2*y^2", "sin(x)*exp(y) - sqrt(1 + x^2 + y^2)", "log(2 + x*y) / (1 + y^2)",
                         "-cos(x - 2*y)^3 + tan(x/4)", "x^0.5 * y^-2 + pi"};
  const double x = 0.7, y = 1.3, h = 1e-4;
  for (const char* text : cases) {
    CAPTURE(text);
    const Expression e(text);
    auto f = [&](double a, double b) { return e.evaluate(a, b).v; };
    const Jet2 j = e.evaluate(x, y);
    CHECK(j.x == doctest::Approx((f(x + h, y) - f(x - h, y)) / (2 * h)).epsilon(1e-7));
    CHECK(j.y == doctest::Approx((f(x, y + h) - f(x, y - h)) / (2 * h)).epsilon(1e-7));
    CHECK(j.xx == doctest::Approx((f(x + h, y) - 2 * f(x, y) + f(x - h, y)) / (h * h)).epsilon(1e-5));
    CHECK(j.yy == doctest::Approx((f(x, y + h) - 2 * f(x, y) + f(x, y - h)) / (h * h)).epsilon(1e-5));
    const double fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h);
    CHECK(j.xy == doctest::Approx(fxy).epsilon(1e-5));
  }
}

TEST_CASE("expression precedence and syntax errors") {
  CHECK(Expression("2^3^2").evaluate(0, 0).v == 512.0);
  CHECK(Expression("-2^2").evaluate(0, 0).v == -4.0);
  CHECK(Expression("1 - 2 - 3").evaluate(0, 0).v == -4.0);
  CHECK(Expression("8 / 2 / 2").evaluate(0, 0).v == 2.0);
  for (const char* bad : {"", "x +", "(x", "foo(x)", "x ^ y", "1 2", "x $ y"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Expression{bad}, Error);
  }
}

TEST_CASE("csv writer quotes and round-trips doubles") {
  const fs::path dir = scratch("csv");
  {
    CsvWriter w(dir / "t.csv", {"a", "b", "c"});
    w.row({0.1, 3LL, std::string("x,y")});
    w.row({-1e-300, -7LL, std::string("say \"hi\"")});
  }
  const std::string text = slurp(dir / "t.csv");
  CHECK(text == "a,b,c\n0.10000000000000001,3,\"x,y\"\n-1e-300,-7,\"say \"\"hi\"\"\"\n");
  CHECK(std::stod(format_double(0.1)) == 0.1);
  CHECK(std::stod(format_double(std::nextafter(1.0, 2.0))) == std::nextafter(1.0, 2.0));
  fs::remove_all(dir);
}

TEST_CASE("config files") {
  const fs::path dir = scratch("config");
  {
    std::ofstream(dir / "ok.cfg") << "# comment\n\nlmax = 12\n--cfl=0.5  # trailing\n";
    std::ofstream(dir / "bad.cfg") << "lmax 12\n";
  }
  const auto cfg = read_config((dir / "ok.cfg").string());
  CHECK(cfg.size() == 2);
  CHECK(cfg.at("lmax") == "12");
  CHECK(cfg.at("cfl") == "0.5");
  CHECK_THROWS_AS(read_config((dir / "bad.cfg").string()), Error);
  CHECK_THROWS_AS(read_config((dir / "missing.cfg").string()), Error);
  fs::remove_all(dir);
}

TEST_CASE("manifest lists outputs and halt status") {
  const fs::path dir = scratch("manifest");
  RunContext ctx("cauchy march", dir);
  ctx.manifest().parameters["n-phi"] = "256";
  std::ofstream(ctx.output("grid.csv")) << "r\n";
  ctx.halt("NearCharacteristic at r = 1.2");
  const fs::path path = ctx.finish();
  CHECK(path.filename() == "cauchy-march.manifest.json");
  const auto j = nlohmann::json::parse(slurp(path));
  CHECK(j["schema"] == "e1lab-manifest/1");
  CHECK(j["command"] == "cauchy march");
  CHECK(j["parameters"]["n-phi"] == "256");
  CHECK(j["outputs"].size() == 1);
  CHECK(j["status"]["halted"] == "NearCharacteristic at r = 1.2");
  fs::remove_all(dir);
}
