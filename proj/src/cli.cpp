#include "cone_spectra/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "cone_spectra/asymptotics.hpp"
#include "cone_spectra/eigensolver.hpp"
#include "cone_spectra/pdevalidate.hpp"
#include "cone_spectra/profile.hpp"
#include "cone_spectra/reference.hpp"
#include "cone_spectra/shooting.hpp"

namespace cone_spectra::cli {

using nlohmann::json;

namespace {

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw DomainError("not a number: '" + text + "'");
  return value;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
      os << "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

struct Common {
  double p = 2.0;
  int n = 2;
  std::string branch = "fundamental";
  std::string format = "json";
  std::string output;
  int threads = 1;
  Tolerances tol;
};

void add_common(CLI::App* cmd, Common& c, bool needs_exponents = true) {
  if (needs_exponents) {
    cmd->add_option("--p", c.p, "exponent p > 1")->required();
    cmd->add_option("--n", c.n, "dimension n >= 2")->required();
  }
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", c.output, "output file (default stdout)");
  cmd->add_option("--lambda-tol", c.tol.lambda_tol)->capture_default_str();
  cmd->add_option("--alpha-tol", c.tol.alpha_tol)->capture_default_str();
  cmd->add_option("--ode-rtol", c.tol.ode_rel_tol)->capture_default_str();
  cmd->add_option("--ode-atol", c.tol.ode_abs_tol)->capture_default_str();
  cmd->add_option("--blowup-threshold", c.tol.psi_blowup_threshold)->capture_default_str();
  cmd->add_option("--theta-start", c.tol.theta_start)->capture_default_str();
  cmd->add_option("--sample-step", c.tol.sample_step)->capture_default_str();
}

json tolerances_json(const Tolerances& t) {
  return {{"lambda_tol", t.lambda_tol},
          {"alpha_tol", t.alpha_tol},
          {"ode_rel_tol", t.ode_rel_tol},
          {"ode_abs_tol", t.ode_abs_tol},
          {"psi_blowup_threshold", t.psi_blowup_threshold},
          {"theta_start", t.theta_start},
          {"sample_step", t.sample_step}};
}

json meta_json(const std::string& command, const Common& c, Branch branch) {
  return {{"command", command},
          {"p", c.p},
          {"n", c.n},
          {"branch", std::string(to_string(branch))},
          {"tolerances", tolerances_json(c.tol)}};
}

int resolve_threads(int flag) {
  if (const char* env = std::getenv("CONE_SPECTRA_THREADS"); env && *env) {
    const double v = parse_number(env);
    if (!(v >= 1.0) || v != std::floor(v) || v > 4096)
      throw CLI::ValidationError("CONE_SPECTRA_THREADS", "must be a positive integer");
    return static_cast<int>(v);
  }
  return flag;
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.output, std::ios::binary);
  if (!file) throw DomainError("cannot open output file '" + c.output + "'");
  file << text;
  if (!file) throw DomainError("failed writing '" + c.output + "'");
}

std::string render(const Common& c, const json& doc, const Table& table) {
  if (c.format == "csv") return table.csv();
  return doc.dump(2) + "\n";
}

const std::vector<std::string> kRecordHeader = {
    "alpha", "p", "n", "branch", "lambda", "residual_alpha", "residual_ode", "status"};

std::string status_of(const SweepRecord& rec) {
  if (rec.ok) return "ok";
  return rec.error_kind == 1 ? "domain_error" : "numerical_error";
}

std::vector<std::string> record_row(const SweepRecord& rec, const Common& c, Branch b) {
  return {fmt17(rec.alpha),        fmt17(c.p),
          std::to_string(c.n),     std::string(to_string(b)),
          fmt17(rec.lambda),       fmt17(rec.residual_alpha),
          fmt17(rec.residual_ode), status_of(rec)};
}

json record_json(const SweepRecord& rec, const Common& c, Branch b) {
  json j = {{"alpha", rec.alpha},
            {"p", c.p},
            {"n", c.n},
            {"branch", std::string(to_string(b))},
            {"lambda", rec.ok ? number(rec.lambda) : json(nullptr)},
            {"residual_alpha", rec.ok ? number(rec.residual_alpha) : json(nullptr)},
            {"residual_ode", rec.ok ? number(rec.residual_ode) : json(nullptr)},
            {"status", status_of(rec)}};
  if (!rec.ok) j["error"] = rec.error;
  return j;
}

// --- commands -------------------------------------------------------------

int cmd_solve(const Common& c, const std::string& alpha_text, std::ostream& out) {
  const Branch b = parse_branch(c.branch);
  const double alpha = parse_angle(alpha_text);
  const EigenResult r = solve_lambda(ConeProblem{c.p, c.n, alpha, b}, c.tol);
  json rec = {{"alpha", alpha},
              {"p", c.p},
              {"n", c.n},
              {"branch", std::string(to_string(b))},
              {"lambda", r.lambda},
              {"residual_alpha", number(r.residual_alpha)},
              {"residual_ode", number(r.residual_ode)},
              {"status", "ok"},
              {"alpha_achieved", number(r.alpha_achieved)},
              {"bracket", {r.bracket.first, r.bracket.second}},
              {"iterations", r.iterations}};
  json doc = {{"meta", meta_json("solve", c, b)}, {"records", json::array({rec})}};
  Table t{kRecordHeader,
          {{fmt17(alpha), fmt17(c.p), std::to_string(c.n), std::string(to_string(b)),
            fmt17(r.lambda), fmt17(r.residual_alpha), fmt17(r.residual_ode), "ok"}}};
  emit(c, render(c, doc, t), out);
  return kOk;
}

std::vector<double> collect_alphas(const std::string& list, const std::string& spec) {
  if (list.empty() == spec.empty())
    throw CLI::ValidationError("alphas", "give exactly one of --alphas or --alpha-spec");
  std::vector<double> alphas;
  if (!spec.empty()) {
    alphas = parse_alpha_spec(spec);
  } else {
    for (const auto& tok : split(list, ',')) alphas.push_back(parse_angle(tok));
  }
  std::sort(alphas.begin(), alphas.end());
  return alphas;
}

int cmd_sweep(const Common& c, const std::vector<double>& alphas, std::ostream& out) {
  const Branch b = parse_branch(c.branch);
  validate_exponents(c.p, c.n);
  validate(c.tol);
  const auto records = sweep(c.p, c.n, b, alphas, c.tol, resolve_threads(c.threads));
  json doc = {{"meta", meta_json("sweep", c, b)}, {"records", json::array()}};
  Table t{kRecordHeader, {}};
  for (const auto& rec : records) {
    doc["records"].push_back(record_json(rec, c, b));
    t.rows.push_back(record_row(rec, c, b));
  }
  emit(c, render(c, doc, t), out);
  return kOk;
}

int cmd_fit(const Common& c, double eps_min, double eps_max, int count, std::ostream& out) {
  validate_exponents(c.p, c.n);
  validate(c.tol);
  const Branch b = Branch::Fundamental;
  const auto alphas = geometric_gaps(eps_min, eps_max, count);
  const auto records = sweep(c.p, c.n, b, alphas, c.tol, resolve_threads(c.threads));
  const FitResult fit = fit_exponent(records, c.p, c.n, {eps_min, eps_max});

  json fit_json = {{"law", std::string(to_string(fit.law.kind))},
                   {"fitted_exponent", fit.fitted_exponent},
                   {"theoretical_exponent", fit.theoretical_exponent},
                   {"fitted_prefactor", fit.fitted_prefactor},
                   {"r_squared", fit.r_squared},
                   {"window", {fit.window.first, fit.window.second}},
                   {"records_used", fit.records_used},
                   {"flagged", fit.flagged}};
  if (fit.law.kind == AsymptoticLaw::Kind::Gap) fit_json["limit"] = fit.law.limit;
  json doc = {{"meta", meta_json("fit", c, b)}, {"fit", fit_json}, {"records", json::array()}};
  for (const auto& rec : records) doc["records"].push_back(record_json(rec, c, b));

  Table t{{"law", "fitted_exponent", "theoretical_exponent", "fitted_prefactor", "r_squared",
           "eps_min", "eps_max", "records_used", "flagged"},
          {{std::string(to_string(fit.law.kind)), fmt17(fit.fitted_exponent),
            fmt17(fit.theoretical_exponent), fmt17(fit.fitted_prefactor), fmt17(fit.r_squared),
            fmt17(eps_min), fmt17(eps_max), std::to_string(fit.records_used),
            fit.flagged ? "true" : "false"}}};
  emit(c, render(c, doc, t), out);
  return kOk;
}

int cmd_anchors(const Common& c, std::ostream& out) {
  validate_exponents(c.p, c.n);
  validate(c.tol);
  const auto anchors = anchor_table(c.p, c.n);
  json doc = {{"meta", {{"command", "anchors"}, {"p", c.p}, {"n", c.n},
                        {"tolerances", tolerances_json(c.tol)}}},
              {"records", json::array()}};
  Table t{{"alpha", "p", "n", "branch", "lambda_exact", "lambda", "abs_error", "status",
           "provenance"},
          {}};
  int code = kOk;
  for (const auto& a : anchors) {
    double lambda = std::nan("");
    std::string status = "ok", error;
    try {
      lambda = solve_lambda(a.problem, c.tol).lambda;
    } catch (const DomainError& e) {
      status = "domain_error";
      error = e.what();
      code = std::max<int>(code, kDomainError);
    } catch (const Error& e) {
      status = "numerical_error";
      error = e.what();
      code = kNumericalError;
    }
    const double diff = std::abs(lambda - a.lambda_exact);
    json rec = {{"alpha", a.problem.alpha},
                {"p", a.problem.p},
                {"n", a.problem.n},
                {"branch", std::string(to_string(a.problem.branch))},
                {"lambda_exact", a.lambda_exact},
                {"lambda", number(lambda)},
                {"abs_error", number(diff)},
                {"status", status},
                {"provenance", a.provenance}};
    if (!error.empty()) rec["error"] = error;
    doc["records"].push_back(rec);
    t.rows.push_back({fmt17(a.problem.alpha), fmt17(a.problem.p), std::to_string(a.problem.n),
                      std::string(to_string(a.problem.branch)), fmt17(a.lambda_exact),
                      fmt17(lambda), fmt17(diff), status, a.provenance});
  }
  emit(c, render(c, doc, t), out);
  return code;
}

int cmd_profile(const Common& c, const std::string& alpha_text, int stride, std::ostream& out) {
  const Branch b = parse_branch(c.branch);
  const double alpha = parse_angle(alpha_text);
  if (stride < 1) throw CLI::ValidationError("--stride", "must be at least 1");
  const EigenResult r = solve_lambda(ConeProblem{c.p, c.n, alpha, b}, c.tol);
  const Profile prof = reconstruct_phi(integrate_psi(r.lambda, c.p, c.n, c.tol));
  json doc = {{"meta", meta_json("profile", c, b)}, {"records", json::array()}};
  doc["meta"]["alpha"] = alpha;
  doc["meta"]["lambda"] = r.lambda;
  Table t{{"theta", "phi", "dphi"}, {}};
  const auto size = prof.theta.size();
  for (Eigen::Index i = 0; i < size; i += stride) {
    doc["records"].push_back(
        {{"theta", prof.theta[i]}, {"phi", prof.phi[i]}, {"dphi", number(prof.dphi[i])}});
    t.rows.push_back({fmt17(prof.theta[i]), fmt17(prof.phi[i]), fmt17(prof.dphi[i])});
  }
  emit(c, render(c, doc, t), out);
  return kOk;
}

struct ValidateArgs {
  std::string alpha = "pi/2";
  int nr = 32, ntheta = 32;
  double r_min = 1.0, r_max = 2.0, collar = 0.05;
};

int cmd_validate(const Common& c, const ValidateArgs& v, std::ostream& out) {
  const Branch b = parse_branch(c.branch);
  const double alpha = parse_angle(v.alpha);
  const EigenResult r = solve_lambda(ConeProblem{c.p, c.n, alpha, b}, c.tol);
  const Profile prof = reconstruct_phi(integrate_psi(r.lambda, c.p, c.n, c.tol));
  const MeridianGrid grid(v.r_min, v.r_max, alpha - v.collar, v.nr, v.ntheta, c.n);
  const ValidationReport rep = minimize_energy(grid, r.lambda, prof, c.p, c.n);
  json rec = {{"alpha", alpha},
              {"lambda", r.lambda},
              {"nr", v.nr},
              {"ntheta", v.ntheta},
              {"r_min", v.r_min},
              {"r_max", v.r_max},
              {"theta_cap", grid.theta_range.second},
              {"max_rel_deviation", rep.max_rel_deviation},
              {"max_abs_deviation", rep.max_abs_deviation},
              {"energy", rep.energy},
              {"iterations", rep.iterations},
              {"gradient_reduction", rep.gradient_reduction}};
  json doc = {{"meta", meta_json("validate", c, b)}, {"records", json::array({rec})}};
  Table t{{"alpha", "lambda", "nr", "ntheta", "max_rel_deviation", "max_abs_deviation", "energy",
           "iterations"},
          {{fmt17(alpha), fmt17(r.lambda), std::to_string(v.nr), std::to_string(v.ntheta),
            fmt17(rep.max_rel_deviation), fmt17(rep.max_abs_deviation), fmt17(rep.energy),
            std::to_string(rep.iterations)}}};
  emit(c, render(c, doc, t), out);
  return kOk;
}

}  // namespace

double parse_angle(std::string_view token) {
  const std::string s = trim(token);
  static const std::regex closed(R"(^([0-9.]*)\*?pi(?:/([0-9.]+))?(?:([+-])(.+))?$)");
  std::smatch m;
  if (std::regex_match(s, m, closed)) {
    double value = kPi;
    if (m[1].length() > 0) value *= parse_number(m[1].str());
    if (m[2].matched) {
      const double d = parse_number(m[2].str());
      if (d == 0.0) throw DomainError("division by zero in angle '" + s + "'");
      value /= d;
    }
    if (m[3].matched) {
      const double off = parse_number(m[4].str());
      value += m[3].str() == "+" ? off : -off;
    }
    return value;
  }
  if (s.find("pi") != std::string::npos) throw DomainError("malformed angle '" + s + "'");
  return parse_number(s);
}

std::vector<double> parse_alpha_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw DomainError("alpha spec needs 'kind:args'");
  const std::string kind = trim(spec.substr(0, colon));
  const auto args = split(spec.substr(colon + 1), ',');
  auto count_of = [](const std::string& s) {
    const double v = parse_number(s);
    if (!(v >= 1.0) || v != std::floor(v)) throw DomainError("count must be a positive integer");
    return static_cast<int>(v);
  };
  std::vector<double> alphas;
  if (kind == "geometric") {
    if (args.size() != 4) throw DomainError("geometric spec is geometric:pi,eps_min,eps_max,count");
    if (parse_angle(args[0]) != kPi) throw DomainError("geometric spec is centred at pi");
    alphas = geometric_gaps(parse_number(args[1]), parse_number(args[2]), count_of(args[3]));
  } else if (kind == "linear") {
    if (args.size() != 3) throw DomainError("linear spec is linear:a,b,count");
    const double a = parse_angle(args[0]), b = parse_angle(args[1]);
    const int k = count_of(args[2]);
    for (int i = 0; i < k; ++i) alphas.push_back(k == 1 ? a : a + (b - a) * i / (k - 1));
    std::sort(alphas.begin(), alphas.end());
  } else {
    throw DomainError("unknown alpha spec kind '" + kind + "'");
  }
  return alphas;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homogeneity exponents of p-harmonic functions in circular cones",
               "cone_spectra"};
  app.require_subcommand(1);
  Common c;

  std::string alpha = "pi/2", alphas, alpha_spec;
  double eps_min = 1e-4, eps_max = 1e-2;
  int count = 9, stride = 1;
  ValidateArgs v;

  auto* solve = app.add_subcommand("solve", "solve for one exponent");
  add_common(solve, c);
  solve->add_option("--alpha", alpha, "half-aperture (number or pi form)")->required();
  solve->add_option("--branch", c.branch)->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "solve over a list of angles");
  add_common(sweep_cmd, c);
  sweep_cmd->add_option("--branch", c.branch)->capture_default_str();
  sweep_cmd->add_option("--alphas", alphas, "comma-separated angles");
  sweep_cmd->add_option("--alpha-spec", alpha_spec,
                        "geometric:pi,EPS_MIN,EPS_MAX,COUNT or linear:A,B,COUNT");
  sweep_cmd->add_option("--threads", c.threads)->check(CLI::PositiveNumber)->capture_default_str();

  auto* fit = app.add_subcommand("fit", "fit the asymptotic law as alpha -> pi");
  add_common(fit, c);
  fit->add_option("--eps-min", eps_min)->capture_default_str();
  fit->add_option("--eps-max", eps_max)->capture_default_str();
  fit->add_option("--count", count)->check(CLI::Range(4, 1000))->capture_default_str();
  fit->add_option("--threads", c.threads)->check(CLI::PositiveNumber)->capture_default_str();

  auto* anchors = app.add_subcommand("anchors", "check exactly known exponents");
  add_common(anchors, c);

  auto* profile = app.add_subcommand("profile", "angular profile of a solution");
  add_common(profile, c);
  profile->add_option("--alpha", alpha)->required();
  profile->add_option("--branch", c.branch)->capture_default_str();
  profile->add_option("--stride", stride)->capture_default_str();

  auto* validate_cmd = app.add_subcommand("validate", "compare against a discrete energy minimizer");
  add_common(validate_cmd, c);
  validate_cmd->add_option("--alpha", v.alpha)->capture_default_str();
  validate_cmd->add_option("--branch", c.branch)->capture_default_str();
  validate_cmd->add_option("--nr", v.nr)->capture_default_str();
  validate_cmd->add_option("--ntheta", v.ntheta)->capture_default_str();
  validate_cmd->add_option("--r-min", v.r_min)->capture_default_str();
  validate_cmd->add_option("--r-max", v.r_max)->capture_default_str();
  validate_cmd->add_option("--collar", v.collar)->capture_default_str();

  std::vector<std::string> storage{"cone_spectra"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(c, alpha, out);
    if (*sweep_cmd) return cmd_sweep(c, collect_alphas(alphas, alpha_spec), out);
    if (*fit) return cmd_fit(c, eps_min, eps_max, count, out);
    if (*anchors) return cmd_anchors(c, out);
    if (*profile) return cmd_profile(c, alpha, stride, out);
    if (*validate_cmd) return cmd_validate(c, v, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomainError;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  }
  err << app.help();
  return kUsage;
}

}  // namespace cone_spectra::cli
