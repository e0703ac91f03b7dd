#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cone_spectra/cli.hpp"
#include "cone_spectra/core.hpp"

using namespace cone_spectra;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("angle tokens") {
  CHECK(cli::parse_angle("pi") == kPi);
  CHECK(cli::parse_angle("pi/2") == kPi / 2);
  CHECK(cli::parse_angle("3pi/4") == 3 * kPi / 4);
  CHECK(cli::parse_angle("pi-1e-3") == kPi - 1e-3);
  CHECK(cli::parse_angle(" 1.25 ") == 1.25);
  CHECK_THROWS_AS(cli::parse_angle("pie"), DomainError);
  CHECK_THROWS_AS(cli::parse_angle("1.2x"), DomainError);
  CHECK_THROWS_AS(cli::parse_angle("pi/0"), DomainError);
}

TEST_CASE("alpha specs") {
  const auto g = cli::parse_alpha_spec("geometric:pi,1e-4,1e-2,9");
  REQUIRE(g.size() == 9);
  CHECK(kPi - g.back() == doctest::Approx(1e-4));
  const auto l = cli::parse_alpha_spec("linear:0.3,3.0,10");
  REQUIRE(l.size() == 10);
  CHECK(l[9] == doctest::Approx(3.0));
  CHECK_THROWS_AS(cli::parse_alpha_spec("geometric:2,1e-4,1e-2,9"), DomainError);
  CHECK_THROWS_AS(cli::parse_alpha_spec("random:1"), DomainError);
}

TEST_CASE("solve writes JSON with lambda") {
  const auto r = run({"solve", "--p", "2", "--n", "3", "--alpha", "1.5707963267948966", "--branch",
                      "fundamental"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(std::abs(doc["records"][0]["lambda"].get<double>() - 1.0) < 1e-8);
  CHECK(doc["meta"]["command"] == "solve");
}

TEST_CASE("anchors include the exterior half-space value") {
  const auto r = run({"anchors", "--p", "3", "--n", "3", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("alpha,p,n,branch,lambda_exact,lambda,abs_error,status,provenance", 0) == 0);
  CHECK(r.out.find("1.5707963267948966,3,3,exterior,-1,-1") != std::string::npos);
}

TEST_CASE("fit reports the gap exponent") {
  const auto r = run({"fit", "--p", "3", "--n", "3", "--eps-min", "1e-4", "--eps-max", "1e-2"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["fit"]["theoretical_exponent"].get<double>() == doctest::Approx(0.5));
  CHECK(std::abs(doc["fit"]["fitted_exponent"].get<double>() - 0.5) < 0.05);
}

TEST_CASE("sweep CSV schema and determinism across thread counts") {
  const std::vector<std::string> base{"sweep", "--p", "3", "--n", "3", "--alphas",
                                      "pi-1e-2,0.5,pi/2,2.5", "--format", "csv"};
  auto one = base, four = base;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  const auto a = run(one), b = run(four);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  std::istringstream lines(a.out);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "alpha,p,n,branch,lambda,residual_alpha,residual_ode,status\r");
  CHECK(first.rfind("0.5,3,3,fundamental,", 0) == 0);  // sorted by alpha
}

TEST_CASE("environment overrides the thread flag") {
  setenv("CONE_SPECTRA_THREADS", "0", 1);
  const auto bad = run({"sweep", "--p", "2", "--n", "2", "--alphas", "1,2"});
  unsetenv("CONE_SPECTRA_THREADS");
  CHECK(bad.code == cli::kUsage);
  setenv("CONE_SPECTRA_THREADS", "3", 1);
  const auto good = run({"sweep", "--p", "2", "--n", "2", "--alphas", "1,2"});
  unsetenv("CONE_SPECTRA_THREADS");
  CHECK(good.code == 0);
}

TEST_CASE("JSON output round-trips bit-exactly") {
  const auto path = std::filesystem::temp_directory_path() / "cone_spectra_roundtrip.json";
  const auto r = run({"sweep", "--p", "2.5", "--n", "3", "--alpha-spec", "linear:0.3,3.0,7",
                      "--output", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const json doc = json::parse(in);
  const std::string again = doc.dump(2) + "\n";
  std::ifstream in2(path);
  const std::string raw((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
  CHECK(again == raw);
  for (const auto& rec : doc["records"]) {
    const double lam = rec["lambda"].get<double>();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", lam);
    CHECK(std::strtod(buf, nullptr) == lam);
    CHECK(json::parse(json(lam).dump()).get<double>() == lam);
  }
  std::filesystem::remove(path);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"solve", "--p", "2"}).code == cli::kUsage);
  CHECK(run({"bogus"}).code == cli::kUsage);
  CHECK(run({"solve", "--p", "2", "--n", "3", "--alpha", "1", "--format", "xml"}).code ==
        cli::kUsage);
  CHECK(run({"solve", "--p", "2", "--n", "4", "--alpha", "pi"}).code == cli::kDomainError);
  CHECK(run({"solve", "--p", "0.5", "--n", "4", "--alpha", "1"}).code == cli::kDomainError);
  CHECK(run({"solve", "--p", "2", "--n", "3", "--alpha", "1", "--branch", "up"}).code ==
        cli::kDomainError);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("profile and validate commands") {
  const auto prof = run({"profile", "--p", "2", "--n", "3", "--alpha", "pi/2", "--stride", "100",
                         "--format", "csv"});
  REQUIRE(prof.code == 0);
  CHECK(prof.out.rfind("theta,phi,dphi", 0) == 0);
  const auto val = run({"validate", "--p", "2", "--n", "3", "--alpha", "pi/2", "--nr", "16",
                        "--ntheta", "16"});
  REQUIRE(val.code == 0);
  const json doc = json::parse(val.out);
  CHECK(doc["records"][0]["max_rel_deviation"].get<double>() < 0.05);
}
