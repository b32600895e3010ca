#include "zlab/cli.hpp"

#include "zlab/claims_lab.hpp"
#include "zlab/report_io.hpp"
#include "zlab/special_functions.hpp"
#include "zlab/spiral_trace.hpp"
#include "zlab/zero_finder.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace zlab::cli {

namespace {

struct RunConfig {
  std::string command;
  // tolerance
  double rel_tol = 1e-10;
  double abs_floor = 1e-30;
  int max_terms = 150;
  // point
  double sigma = 0.5;
  double t = 14.134725;
  double sigma2 = 0.7;
  std::string strategy = "reg";
  std::string quantity = "f";
  // region
  RegionGrid grid;
  // zeros
  double t_lo = 1.0;
  double t_hi = 50.0;
  double step = 0.05;
  double tol = 1e-10;
  // trace
  std::string kind = "j";
  std::string anchor = "q";
  std::string series = "j";
  int max_m = 100;
  double theta = 1.0;
  double side = 1.0;
  double ratio = 0.5;
  // bounds / claims
  std::vector<double> xs = {0.25, 0.5, 1, 2, 5, 10, 50};
  std::string claim = "case1";
  // output
  std::string output;
  std::string format = "csv";
  int jobs = 0;
};

class Emitter {
 public:
  Emitter(const RunConfig& config, int sign) : config_(config), sign_(sign) {}

  void echo(const std::string& key, const std::string& value) { echo_.emplace_back(key, value); }
  void echo(const std::string& key, double value) { echo(key, io::format_number(value)); }
  void echo(const std::string& key, int value) { echo(key, std::to_string(value)); }

  void echo_budget() {
    echo("rel_tol", config_.rel_tol);
    echo("abs_floor", config_.abs_floor);
    echo("max_terms", config_.max_terms);
  }

  void echo_grid() {
    const RegionGrid& g = config_.grid;
    echo("sigma_min", g.sigma_min);
    echo("sigma_max", g.sigma_max);
    echo("t_min", g.t_min);
    echo("t_max", g.t_max);
    echo("sigma_steps", g.sigma_steps);
    echo("t_steps", g.t_steps);
    echo("exclude_critical_line", g.exclude_critical_line ? "true" : "false");
  }

  std::string csv(const std::string& body) const {
    io::Header header;
    header.add("command", config_.command);
    for (const auto& [k, v] : echo_) header.add(k, v);
    header.add("sign_constant", std::to_string(sign_));
    return header.render() + body;
  }

  std::string json(const std::string& result) const {
    std::string out = "{\n\"command\": " + io::json_quote(config_.command) + ",\n\"config\": {";
    for (std::size_t i = 0; i < echo_.size(); ++i) {
      out += (i ? ", " : "") + io::json_quote(echo_[i].first) + ": " +
             io::json_quote(echo_[i].second);
    }
    out += "},\n\"sign_constant\": " + std::to_string(sign_) + ",\n\"result\": " + result;
    if (out.back() != '\n') out += '\n';
    return out + "}\n";
  }

  std::string render(const std::string& csv_body, const std::string& json_result) const {
    return config_.format == "json" ? json(json_result) : csv(csv_body);
  }

 private:
  const RunConfig& config_;
  int sign_;
  std::vector<std::pair<std::string, std::string>> echo_;
};

ToleranceBudget budget_of(const RunConfig& c) {
  ToleranceBudget b;
  b.rel_tol = Real(c.rel_tol);
  b.abs_floor = Real(c.abs_floor);
  b.max_terms = c.max_terms;
  b.validate();
  return b;
}

std::string complex_json(const Complex& z) {
  return "{\"re\": " + io::format_number(z.real()) + ", \"im\": " + io::format_number(z.imag()) +
         "}";
}

std::string eval_json(const EvalResult& r) {
  return "{\"value\": " + complex_json(r.value) +
         ", \"error_estimate\": " + io::format_number(r.error_estimate) +
         ", \"terms_used\": " + std::to_string(r.terms_used) +
         ", \"converged\": " + (r.converged ? "true" : "false") +
         ", \"partial_sum_drift\": " + io::format_number(r.partial_sum_drift) + "}";
}

std::vector<std::string> eval_cells(const EvalResult& r) {
  return {io::format_number(r.value.real()), io::format_number(r.value.imag()),
          io::format_number(abs(r.value)),   io::format_number(r.error_estimate),
          std::to_string(r.terms_used),      r.converged ? "1" : "0",
          io::format_number(r.partial_sum_drift)};
}

const std::vector<std::string> kEvalColumns = {"re",         "im",        "abs",
                                               "error_estimate", "terms_used", "converged",
                                               "partial_sum_drift"};

EvalResult evaluate_quantity(const std::string& quantity, const Complex& s, Strategy strategy,
                             const ToleranceBudget& budget, const CoefficientTable& table,
                             int sign) {
  if (quantity == "f") return eval_f(s, strategy, budget, table);
  if (quantity == "J") return eval_J(s, strategy, budget, table);
  if (quantity == "G") return eval_G(s, budget);
  if (quantity == "lambda") return lambda_series(s, budget);
  if (quantity == "xi") return eval_xi(s, budget);
  if (quantity == "omega") return eval_omega(s, OmegaRoute::G_ROUTE, budget, table, sign);
  if (quantity == "oracle") return omega_oracle(s, budget);
  throw PreconditionError("unknown quantity '" + quantity + "'");
}

std::string cmd_eval(const RunConfig& c, Emitter& e, const CoefficientTable& table, int sign) {
  const ToleranceBudget budget = budget_of(c);
  const Strategy strategy = strategy_from_string(c.strategy);
  e.echo("quantity", c.quantity);
  e.echo("strategy", std::string(to_string(strategy)));
  e.echo("sigma", c.sigma);
  e.echo("t", c.t);
  e.echo_budget();
  const Complex s(Real(c.sigma), Real(c.t));
  EvalResult r = evaluate_quantity(c.quantity, s, strategy, budget, table, sign);
  io::CsvTable csv;
  csv.columns = {"quantity", "sigma", "t"};
  csv.columns.insert(csv.columns.end(), kEvalColumns.begin(), kEvalColumns.end());
  std::vector<std::string> row = {c.quantity, io::format_number(c.sigma), io::format_number(c.t)};
  auto cells = eval_cells(r);
  row.insert(row.end(), cells.begin(), cells.end());
  csv.rows.push_back(row);
  return e.render(csv.render(), eval_json(r));
}

std::string cmd_omega(const RunConfig& c, Emitter& e, const CoefficientTable& table, int sign) {
  const ToleranceBudget budget = budget_of(c);
  e.echo("sigma", c.sigma);
  e.echo("t", c.t);
  e.echo_budget();
  const Complex s(Real(c.sigma), Real(c.t));
  EvalResult oracle = omega_oracle(s, budget);
  EvalResult g = eval_omega(s, OmegaRoute::G_ROUTE, budget, table, sign);
  EvalResult f = eval_omega(s, OmegaRoute::F_ROUTE, budget, table, sign);
  auto residual = [&](const EvalResult& r) {
    return io::format_number(abs(r.value - oracle.value) / abs(oracle.value));
  };
  io::CsvTable csv;
  csv.columns = {"route", "re", "im", "error_estimate", "relative_residual_vs_oracle"};
  for (auto [name, r] : {std::pair<const char*, const EvalResult*>{"G_ROUTE", &g},
                         {"F_ROUTE", &f}, {"ORACLE", &oracle}}) {
    csv.rows.push_back({name, io::format_number(r->value.real()),
                        io::format_number(r->value.imag()), io::format_number(r->error_estimate),
                        residual(*r)});
  }
  std::string json = "{\"G_ROUTE\": " + eval_json(g) + ",\n \"F_ROUTE\": " + eval_json(f) +
                     ",\n \"ORACLE\": " + eval_json(oracle) +
                     ",\n \"residual_G\": " + residual(g) + ", \"residual_F\": " + residual(f) +
                     "}";
  return e.render(csv.render(), json);
}

std::string cmd_zeros(const RunConfig& c, Emitter& e, const CoefficientTable& table) {
  const ToleranceBudget budget = budget_of(c);
  e.echo("t_min", c.t_lo);
  e.echo("t_max", c.t_hi);
  e.echo("step", c.step);
  e.echo("tol", c.tol);
  e.echo_budget();
  auto brackets = scan_brackets(Real(c.t_lo), Real(c.t_hi), Real(c.step), budget, table, c.jobs);
  auto zeros = io::parallel_map(brackets, c.jobs, [&](const Bracket& b) {
    return refine_zero(b, Real(c.tol), budget, table);
  });
  return e.render(zeros_csv(zeros), zeros_json(zeros));
}

std::string cmd_scan(const RunConfig& c, Emitter& e, const CoefficientTable& table, int sign) {
  const ToleranceBudget budget = budget_of(c);
  const Strategy strategy = strategy_from_string(c.strategy);
  c.grid.validate();
  e.echo("quantity", c.quantity);
  e.echo("strategy", std::string(to_string(strategy)));
  e.echo_grid();
  e.echo_budget();
  std::vector<std::pair<double, double>> points;
  for (double t : c.grid.ts()) {
    for (double s : c.grid.sigmas()) points.emplace_back(s, t);
  }
  auto results = io::parallel_map(points, c.jobs, [&](const std::pair<double, double>& p) {
    const Complex s(Real(p.first), Real(p.second));
    try {
      return evaluate_quantity(c.quantity, s, strategy, budget, table, sign);
    } catch (const NumericError& err) {
      throw NumericError(std::string(err.what()) + " [scan at s=" + describe(s) + "]");
    }
  });
  io::CsvTable csv;
  csv.columns = {"sigma", "t"};
  csv.columns.insert(csv.columns.end(), kEvalColumns.begin(), kEvalColumns.end());
  std::string json = "[\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<std::string> row = {io::format_number(points[i].first),
                                    io::format_number(points[i].second)};
    auto cells = eval_cells(results[i]);
    row.insert(row.end(), cells.begin(), cells.end());
    csv.rows.push_back(row);
    json += "  {\"sigma\": " + io::format_number(points[i].first) +
            ", \"t\": " + io::format_number(points[i].second) +
            ", \"result\": " + eval_json(results[i]) + "}" +
            (i + 1 < points.size() ? ",\n" : "\n");
  }
  json += "]";
  return e.render(csv.render(), json);
}

std::string cmd_trace(const RunConfig& c, Emitter& e, const CoefficientTable& table) {
  e.echo("kind", c.kind);
  e.echo("max_m", c.max_m);
  SpiralTrace trace;
  if (c.kind == "j") {
    const ToleranceBudget budget = budget_of(c);
    e.echo("sigma", c.sigma);
    e.echo("t", c.t);
    e.echo("anchor", to_string(anchor_from_string(c.anchor)));
    e.echo("series", c.series);
    e.echo_budget();
    TraceSeries series;
    if (c.series == "j") {
      series = TraceSeries::J;
    } else if (c.series == "negf") {
      series = TraceSeries::NEG_F;
    } else {
      throw PreconditionError("unknown series '" + c.series + "' (j, negf)");
    }
    trace = trace_J(Complex(Real(c.sigma), Real(c.t)), c.max_m, anchor_from_string(c.anchor),
                    budget, table, series);
  } else if (c.kind == "u") {
    e.echo("theta", c.theta);
    e.echo("side", c.side);
    trace = generate_U(Real(c.theta), Real(c.side), c.max_m);
  } else if (c.kind == "mu") {
    e.echo("theta", c.theta);
    e.echo("side", c.side);
    e.echo("ratio", c.ratio);
    trace = generate_mu(Real(c.theta), Real(c.side), Real(c.ratio), c.max_m);
  } else {
    throw PreconditionError("unknown trace kind '" + c.kind + "' (j, u, mu)");
  }
  e.echo("label", trace.label);
  return e.render(trace_csv(trace), trace_json(trace));
}

std::string reports_json(const std::vector<ClaimReport>& reports) {
  if (reports.size() == 1) return report_json(reports.front());
  std::string out = "[\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out += report_json(reports[i]);
    if (i + 1 < reports.size()) {
      out.back() = ',';
      out += '\n';
    }
  }
  return out + "]";
}

std::string reports_csv(const std::vector<ClaimReport>& reports) {
  std::string out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out += "# report: " + to_string(r.claim_id) + (r.label.empty() ? "" : " " + r.label) +
           " verdict=" + to_string(r.verdict) + "\n";
    out += report_csv(r);
  }
  return out;
}

std::string cmd_bounds(const RunConfig& c, Emitter& e) {
  std::string xs;
  for (double x : c.xs) xs += (xs.empty() ? "" : ",") + io::format_number(x);
  e.echo("x", xs);
  SandwichReports r = check_appendix_sandwich(c.xs);
  std::vector<ClaimReport> reports = {r.paper_literal, r.corrected};
  return e.render(reports_csv(reports), reports_json(reports));
}

std::string cmd_claims(const RunConfig& c, Emitter& e, const CoefficientTable& table, int sign) {
  const ToleranceBudget budget = budget_of(c);
  const Complex s(Real(c.sigma), Real(c.t));
  e.echo("claim", c.claim);
  std::vector<ClaimReport> reports;
  auto point = [&] {
    e.echo("sigma", c.sigma);
    e.echo("t", c.t);
  };
  if (c.claim == "case1" || c.claim == "case2" || c.claim == "lambda-grid" ||
      c.claim == "reconstruction") {
    e.echo_grid();
    e.echo_budget();
    if (c.claim == "case1") reports.push_back(check_case1(c.grid, budget, table, c.jobs));
    if (c.claim == "case2") reports.push_back(check_case2(c.grid, budget, table, c.jobs));
    if (c.claim == "lambda-grid") {
      e.echo("max_m", c.max_m);
      reports.push_back(check_lambda_dominance_grid(c.grid, c.max_m, budget, table, c.jobs));
    }
    if (c.claim == "reconstruction") {
      reports.push_back(check_reconstruction(c.grid, sign, budget, table, c.jobs));
    }
  } else if (c.claim == "termwise") {
    point();
    e.echo("sigma2", c.sigma2);
    e.echo("max_m", c.max_m);
    reports.push_back(check_termwise(s, Complex(Real(c.sigma2), Real(c.t)), c.max_m, table));
  } else if (c.claim == "ratio") {
    point();
    e.echo("max_m", c.max_m);
    reports.push_back(check_ratio(s, c.max_m, table));
  } else if (c.claim == "lambda") {
    point();
    e.echo("max_m", c.max_m);
    e.echo_budget();
    reports.push_back(check_lambda_dominance(s, c.max_m, budget, table));
  } else if (c.claim == "radial") {
    point();
    e.echo("max_m", c.max_m);
    e.echo("anchor", to_string(anchor_from_string(c.anchor)));
    e.echo_budget();
    reports.push_back(check_monotone_radial(s, c.max_m, anchor_from_string(c.anchor), budget,
                                            table));
  } else if (c.claim == "sandwich") {
    return cmd_bounds(c, e);
  } else {
    throw PreconditionError("unknown claim '" + c.claim +
                            "' (case1, case2, termwise, ratio, lambda, lambda-grid, sandwich, "
                            "reconstruction, radial)");
  }
  return e.render(reports_csv(reports), reports_json(reports));
}

std::string cmd_selftest(const RunConfig& c, Emitter& e, const CoefficientTable& table,
                         const SignCalibration& cal, bool& ok) {
  const ToleranceBudget budget = budget_of(c);
  e.echo_budget();
  e.echo("probe", describe(cal.probe));
  e.echo("residual_plus", io::format_number(cal.residual_plus));
  e.echo("residual_minus", io::format_number(cal.residual_minus));
  std::vector<std::pair<double, double>> grid;
  for (double sigma : {0.2, 0.35, 0.5, 0.65, 0.8}) {
    for (double t : {0.5, 5.0, 14.134725, 21.02204, 30.0}) grid.emplace_back(sigma, t);
  }
  auto residuals = io::parallel_map(grid, c.jobs, [&](const std::pair<double, double>& p) {
    const Complex s(Real(p.first), Real(p.second));
    Complex g = eval_omega(s, OmegaRoute::G_ROUTE, budget, table, cal.sign).value;
    Complex o = omega_oracle(s, budget).value;
    return abs(g - o) / abs(o);
  });
  io::CsvTable csv;
  csv.columns = {"sigma", "t", "relative_residual"};
  Real worst = 0;
  std::string json = "{\"points\": [\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, residuals[i]);
    csv.rows.push_back({io::format_number(grid[i].first), io::format_number(grid[i].second),
                        io::format_number(residuals[i])});
    json += "  {\"sigma\": " + io::format_number(grid[i].first) +
            ", \"t\": " + io::format_number(grid[i].second) +
            ", \"relative_residual\": " + io::format_number(residuals[i]) + "}" +
            (i + 1 < grid.size() ? ",\n" : "\n");
  }
  ok = worst <= Real(1e-8);
  e.echo("max_relative_residual", io::format_number(worst));
  e.echo("status", ok ? "PASS" : "FAIL");
  json += "], \"max_relative_residual\": " + io::format_number(worst) +
          ", \"status\": " + (ok ? "\"PASS\"" : "\"FAIL\"") + "}";
  return e.render(csv.render(), json);
}

void add_budget(CLI::App* app, RunConfig& c) {
  app->add_option("--rel-tol", c.rel_tol, "target relative error")->capture_default_str();
  app->add_option("--abs-floor", c.abs_floor, "absolute error floor")->capture_default_str();
  app->add_option("--max-terms", c.max_terms, "m-ordered term budget")->capture_default_str();
}

void add_point(CLI::App* app, RunConfig& c) {
  app->add_option("--sigma", c.sigma, "real part of s")->capture_default_str();
  app->add_option("--t", c.t, "imaginary part of s")->capture_default_str();
}

void add_grid(CLI::App* app, RunConfig& c) {
  RegionGrid& g = c.grid;
  app->add_option("--sigma-min", g.sigma_min)->capture_default_str();
  app->add_option("--sigma-max", g.sigma_max)->capture_default_str();
  app->add_option("--t-min", g.t_min)->capture_default_str();
  app->add_option("--t-max", g.t_max)->capture_default_str();
  app->add_option("--sigma-steps", g.sigma_steps)->capture_default_str();
  app->add_option("--t-steps", g.t_steps)->capture_default_str();
  app->add_flag("!--include-critical-line", g.exclude_critical_line,
                "keep grid columns on sigma = 1/2");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Series laboratory for the completed zeta function", "zlab"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("-o,--output", c.output, "write to this file instead of stdout");
  app.add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--jobs", c.jobs, "worker threads (default: available parallelism)");

  CLI::App* eval = app.add_subcommand("eval", "evaluate one quantity at s");
  add_point(eval, c);
  add_budget(eval, c);
  eval->add_option("--strategy", c.strategy, "m, n or reg")->capture_default_str();
  eval->add_option("--quantity", c.quantity, "f, J, G, lambda, xi, omega, oracle")
      ->capture_default_str();

  CLI::App* omega = app.add_subcommand("omega", "Omega by both routes against the oracle");
  add_point(omega, c);
  add_budget(omega, c);

  CLI::App* zeros = app.add_subcommand("zeros", "zeros on the critical line");
  zeros->add_option("--t-min", c.t_lo)->capture_default_str();
  zeros->add_option("--t-max", c.t_hi)->capture_default_str();
  zeros->add_option("--step", c.step)->capture_default_str();
  zeros->add_option("--tol", c.tol, "final bracket width")->capture_default_str();
  add_budget(zeros, c);

  CLI::App* scan = app.add_subcommand("scan", "evaluate a quantity over a grid");
  add_grid(scan, c);
  add_budget(scan, c);
  scan->add_option("--strategy", c.strategy)->capture_default_str();
  scan->add_option("--quantity", c.quantity)->capture_default_str();

  CLI::App* trace = app.add_subcommand("trace", "partial-sum polyline");
  trace->add_option("--kind", c.kind, "j, u or mu")->capture_default_str();
  add_point(trace, c);
  add_budget(trace, c);
  trace->add_option("--max-m", c.max_m)->capture_default_str();
  trace->add_option("--anchor", c.anchor, "origin, reg or q")->capture_default_str();
  trace->add_option("--series", c.series, "j or negf")->capture_default_str();
  trace->add_option("--theta", c.theta)->capture_default_str();
  trace->add_option("--side", c.side, "first term magnitude")->capture_default_str();
  trace->add_option("--ratio", c.ratio)->capture_default_str();

  CLI::App* bounds = app.add_subcommand("bounds", "integral-test bounds on Lambda(x)");
  bounds->add_option("--x", c.xs)->delimiter(',')->capture_default_str();

  CLI::App* claims = app.add_subcommand("claims", "claim reports");
  claims->add_option("--claim", c.claim)->capture_default_str();
  add_point(claims, c);
  add_grid(claims, c);
  add_budget(claims, c);
  claims->add_option("--sigma2", c.sigma2, "second abscissa for termwise")->capture_default_str();
  claims->add_option("--max-m", c.max_m)->capture_default_str();
  claims->add_option("--anchor", c.anchor)->capture_default_str();
  claims->add_option("--x", c.xs)->delimiter(',');

  CLI::App* selftest = app.add_subcommand("selftest", "sign determination and oracle grid");
  add_budget(selftest, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? 0 : 1;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (c.jobs <= 0) c.jobs = io::default_jobs();

  std::ofstream file;
  if (!c.output.empty()) {
    file.open(c.output, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "error: cannot write '" << c.output << "'\n";
      return 1;
    }
  }

  try {
    int order = std::clamp(std::max({c.max_terms, c.max_m, 200}), 1, kMaxCoefficientOrder);
    const CoefficientTable table = CoefficientTable::build(order);
    const ToleranceBudget budget = budget_of(c);
    const SignCalibration cal = calibrate_sign(budget, table);
    Emitter e(c, cal.sign);
    std::string text;
    bool ok = true;
    if (c.command == "eval") text = cmd_eval(c, e, table, cal.sign);
    if (c.command == "omega") text = cmd_omega(c, e, table, cal.sign);
    if (c.command == "zeros") text = cmd_zeros(c, e, table);
    if (c.command == "scan") text = cmd_scan(c, e, table, cal.sign);
    if (c.command == "trace") text = cmd_trace(c, e, table);
    if (c.command == "bounds") text = cmd_bounds(c, e);
    if (c.command == "claims") text = cmd_claims(c, e, table, cal.sign);
    if (c.command == "selftest") text = cmd_selftest(c, e, table, cal, ok);
    (c.output.empty() ? out : file) << text;
    if (c.command == "selftest") {
      err << "sign constant " << cal.sign << ", oracle grid " << (ok ? "PASS" : "FAIL") << "\n";
      if (!ok) return 2;
    }
    return 0;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace zlab::cli
