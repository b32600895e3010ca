#include "zlab/claims_lab.hpp"

#include "zlab/report_io.hpp"
#include "zlab/special_functions.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace zlab {

// ---------------------------------------------------------------------------
// Grid

void RegionGrid::validate() const {
  if (!(sigma_min > 0 && sigma_min < sigma_max && sigma_max < 1)) {
    throw PreconditionError("grid needs 0 < sigma_min < sigma_max < 1");
  }
  if (!(t_min < t_max)) throw PreconditionError("grid needs t_min < t_max");
  if (sigma_steps < 2 || t_steps < 2) throw PreconditionError("grid step counts must be >= 2");
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(lo + (hi - lo) * k / (n - 1));
  return out;
}

}  // namespace

std::vector<double> RegionGrid::sigmas() const {
  std::vector<double> all = linspace(sigma_min, sigma_max, sigma_steps);
  if (!exclude_critical_line) return all;
  std::vector<double> out;
  for (double s : all) {
    if (std::abs(s - 0.5) >= kCriticalLineOffset) out.push_back(s);
  }
  return out;
}

std::vector<double> RegionGrid::ts() const { return linspace(t_min, t_max, t_steps); }

// ---------------------------------------------------------------------------
// Names

namespace {

constexpr std::array<std::pair<ClaimId, const char*>, 8> kClaimNames = {{
    {ClaimId::CASE1_NONVANISHING, "CASE1_NONVANISHING"},
    {ClaimId::CASE2_MONOTONE, "CASE2_MONOTONE"},
    {ClaimId::TERMWISE_ORDER, "TERMWISE_ORDER"},
    {ClaimId::RATIO_LT1, "RATIO_LT1"},
    {ClaimId::LAMBDA_DOMINANCE, "LAMBDA_DOMINANCE"},
    {ClaimId::APPENDIX_SANDWICH, "APPENDIX_SANDWICH"},
    {ClaimId::RECONSTRUCTION_SIGN, "RECONSTRUCTION_SIGN"},
    {ClaimId::MONOTONE_RADIAL, "MONOTONE_RADIAL"},
}};

constexpr std::array<std::pair<Verdict, const char*>, 3> kVerdictNames = {{
    {Verdict::HOLDS_ON_GRID, "HOLDS_ON_GRID"},
    {Verdict::VIOLATED, "VIOLATED"},
    {Verdict::MEASURED_ONLY, "MEASURED_ONLY"},
}};

}  // namespace

std::string to_string(ClaimId id) {
  for (auto [k, name] : kClaimNames) {
    if (k == id) return name;
  }
  return "?";
}

std::string to_string(Verdict verdict) {
  for (auto [k, name] : kVerdictNames) {
    if (k == verdict) return name;
  }
  return "?";
}

ClaimId claim_id_from_string(const std::string& name) {
  for (auto [k, n] : kClaimNames) {
    if (name == n) return k;
  }
  throw PreconditionError("unknown claim id '" + name + "'");
}

Verdict verdict_from_string(const std::string& name) {
  for (auto [k, n] : kVerdictNames) {
    if (name == n) return k;
  }
  throw PreconditionError("unknown verdict '" + name + "'");
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string num(double x) { return std::isfinite(x) ? io::format_number(x) : "null"; }

std::string num_array(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += num(xs[i]);
  }
  return out + "]";
}

double as_double(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string report_json(const ClaimReport& r) {
  std::string out = "{\n";
  out += "  \"claim_id\": " + io::json_quote(to_string(r.claim_id)) + ",\n";
  out += "  \"label\": " + io::json_quote(r.label) + ",\n";
  out += "  \"region\": {\"grid\": ";
  if (r.region.grid) {
    const RegionGrid& g = *r.region.grid;
    out += "{\"sigma_min\": " + num(g.sigma_min) + ", \"sigma_max\": " + num(g.sigma_max) +
           ", \"t_min\": " + num(g.t_min) + ", \"t_max\": " + num(g.t_max) +
           ", \"sigma_steps\": " + std::to_string(g.sigma_steps) +
           ", \"t_steps\": " + std::to_string(g.t_steps) + ", \"exclude_critical_line\": " +
           (g.exclude_critical_line ? "true" : "false") + "}";
  } else {
    out += "null";
  }
  out += ", \"points\": [";
  for (std::size_t i = 0; i < r.region.points.size(); ++i) {
    if (i) out += ", ";
    out += "[" + num(r.region.points[i].first) + ", " + num(r.region.points[i].second) + "]";
  }
  out += "]},\n";
  out += "  \"verdict\": " + io::json_quote(to_string(r.verdict)) + ",\n";
  out += "  \"witness\": ";
  if (r.witness) {
    out += "{\"sigma\": " + num(r.witness->sigma) + ", \"t\": " + num(r.witness->t) +
           ", \"value\": " + num(r.witness->value) + "}";
  } else {
    out += "null";
  }
  out += ",\n  \"metrics\": {";
  bool first = true;
  for (const auto& [name, value] : r.metrics) {
    out += std::string(first ? "\n" : ",\n") + "    " + io::json_quote(name) + ": " + num(value);
    first = false;
  }
  out += r.metrics.empty() ? "},\n" : "\n  },\n";
  out += "  \"failures\": [";
  for (std::size_t i = 0; i < r.failures.size(); ++i) {
    const auto& f = r.failures[i];
    out += std::string(i ? ",\n" : "\n") + "    {\"sigma\": " + num(f.sigma) +
           ", \"t\": " + num(f.t) + ", \"message\": " + io::json_quote(f.message) + "}";
  }
  out += r.failures.empty() ? "],\n" : "\n  ],\n";
  out += "  \"sweep\": {\"columns\": [";
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out += ", ";
    out += io::json_quote(r.columns[i]);
  }
  out += "], \"rows\": [";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    out += std::string(i ? ",\n" : "\n") + "    " + num_array(r.rows[i]);
  }
  out += r.rows.empty() ? "]}\n" : "\n  ]}\n";
  return out + "}\n";
}

ClaimReport report_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ClaimReport r;
  r.claim_id = claim_id_from_string(j.at("claim_id").get<std::string>());
  r.label = j.at("label").get<std::string>();
  const auto& region = j.at("region");
  if (!region.at("grid").is_null()) {
    const auto& g = region.at("grid");
    RegionGrid grid;
    grid.sigma_min = as_double(g.at("sigma_min"));
    grid.sigma_max = as_double(g.at("sigma_max"));
    grid.t_min = as_double(g.at("t_min"));
    grid.t_max = as_double(g.at("t_max"));
    grid.sigma_steps = g.at("sigma_steps").get<int>();
    grid.t_steps = g.at("t_steps").get<int>();
    grid.exclude_critical_line = g.at("exclude_critical_line").get<bool>();
    r.region.grid = grid;
  }
  for (const auto& p : region.at("points")) {
    r.region.points.emplace_back(as_double(p.at(0)), as_double(p.at(1)));
  }
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  if (!j.at("witness").is_null()) {
    const auto& w = j.at("witness");
    r.witness = Witness{as_double(w.at("sigma")), as_double(w.at("t")), as_double(w.at("value"))};
  }
  for (const auto& [name, value] : j.at("metrics").items()) r.metrics[name] = as_double(value);
  for (const auto& f : j.at("failures")) {
    r.failures.push_back(
        {as_double(f.at("sigma")), as_double(f.at("t")), f.at("message").get<std::string>()});
  }
  const auto& sweep = j.at("sweep");
  for (const auto& c : sweep.at("columns")) r.columns.push_back(c.get<std::string>());
  for (const auto& row : sweep.at("rows")) {
    std::vector<double> values;
    for (const auto& v : row) values.push_back(as_double(v));
    r.rows.push_back(std::move(values));
  }
  return r;
}

std::string report_csv(const ClaimReport& report) {
  io::CsvTable table;
  table.columns = report.columns;
  for (const auto& row : report.rows) {
    std::vector<std::string> cells;
    for (double v : row) cells.push_back(std::isfinite(v) ? io::format_number(v) : "");
    table.rows.push_back(std::move(cells));
  }
  return table.render();
}

// ---------------------------------------------------------------------------
// Shared evaluation plumbing

namespace {

using Point = std::pair<double, double>;

Complex at(const Point& p) { return Complex(Real(p.first), Real(p.second)); }

struct PointEval {
  bool ok = false;
  EvalResult result;
  std::string message;
};

template <class Fn>
std::vector<PointEval> evaluate_points(const std::vector<Point>& points, int jobs, Fn&& fn) {
  return io::parallel_map(points, jobs, [&](const Point& p) {
    PointEval e;
    try {
      e.result = fn(at(p));
      e.ok = true;
    } catch (const NumericError& err) {
      e.message = err.what();
    }
    return e;
  });
}

std::vector<Point> grid_points(const RegionGrid& grid) {
  std::vector<Point> out;
  for (double t : grid.ts()) {
    for (double s : grid.sigmas()) out.emplace_back(s, t);
  }
  return out;
}

double d(const Real& x) { return to_double(x); }

void require_order(int M, const CoefficientTable& table, int extra = 0) {
  if (M < 1 || M + extra > table.max_order()) {
    throw PreconditionError("term count " + std::to_string(M) +
                            " outside the coefficient table (order " +
                            std::to_string(table.max_order()) + ")");
  }
}

std::vector<Complex> m_ordered_partials(const Complex& s, int M, const CoefficientTable& table) {
  const Complex a = s / Real(2);
  if (abs(a) < kPoleGuard) throw PoleError("s/2 is at a pole, s=" + describe(s));
  std::vector<Complex> out;
  out.reserve(M);
  Complex term = exp(table.log_value(1)) / a;
  Complex sum(0);
  for (int m = 1; m <= M; ++m) {
    sum += term;
    out.push_back(sum);
    if (m == M) break;
    Complex factor = a + Real(m);
    if (abs(factor) < kPoleGuard) throw PoleError("rising factorial vanishes at s=" + describe(s));
    term *= table.ratio(m) / factor;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Case 1

Case1Geometry case1_geometry(const Complex& s, const CoefficientTable& table) {
  Real inv = 1 / abs(s);
  return {inv, inv + 2 * exp(table.log_value(1)) * inv};
}

ClaimReport check_case1(const RegionGrid& grid, const ToleranceBudget& budget,
                        const CoefficientTable& table, int jobs) {
  grid.validate();
  budget.validate();
  if (!grid.exclude_critical_line) {
    throw PreconditionError("case-1 check requires the critical line to be excluded");
  }
  std::vector<Point> points = grid_points(grid);
  auto evals = evaluate_points(points, jobs, [&](const Complex& s) {
    return eval_f(s, Strategy::REGULARIZED, budget, table);
  });

  ClaimReport r;
  r.claim_id = ClaimId::CASE1_NONVANISHING;
  r.region.grid = grid;
  r.columns = {"sigma", "t", "abs_f", "error_estimate", "qo", "qa"};
  double min_abs = std::numeric_limits<double>::infinity();
  double max_abs = 0;
  bool qo_lt_qa = true;
  int evaluated = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& [sigma, t] = points[i];
    if (!evals[i].ok) {
      r.failures.push_back({sigma, t, evals[i].message});
      continue;
    }
    ++evaluated;
    Case1Geometry g = case1_geometry(at(points[i]), table);
    qo_lt_qa = qo_lt_qa && g.qo < g.qa;
    double abs_f = d(abs(evals[i].result.value));
    r.rows.push_back({sigma, t, abs_f, d(evals[i].result.error_estimate), d(g.qo), d(g.qa)});
    if (abs_f < min_abs) {
      min_abs = abs_f;
      r.witness = Witness{sigma, t, abs_f};
    }
    max_abs = std::max(max_abs, abs_f);
  }
  if (evaluated == 0) throw NumericError("case-1 check: no grid point could be evaluated");

  r.metrics["points_total"] = static_cast<double>(points.size());
  r.metrics["points_evaluated"] = evaluated;
  r.metrics["points_failed"] = static_cast<double>(r.failures.size());
  r.metrics["min_abs_f"] = min_abs;
  r.metrics["max_abs_f"] = max_abs;
  r.metrics["qo_lt_qa_everywhere"] = qo_lt_qa ? 1 : 0;
  r.metrics["two_c1"] = d(2 * exp(table.log_value(1)));
  r.verdict = Real(min_abs) > budget.abs_floor ? Verdict::HOLDS_ON_GRID : Verdict::VIOLATED;
  return r;
}

// ---------------------------------------------------------------------------
// Case 2

ClaimReport check_case2(const RegionGrid& grid, const ToleranceBudget& budget,
                        const CoefficientTable& table, int jobs) {
  grid.validate();
  budget.validate();
  constexpr double kSame = 1e-9;
  const std::vector<double> sigmas = grid.sigmas();
  const std::vector<double> ts = grid.ts();

  // Distinct alpha = |sigma - 1/2| > 0 provided by the grid columns.
  std::vector<double> alphas;
  for (double s : sigmas) {
    double alpha = std::abs(s - 0.5);
    if (alpha < kSame) continue;
    bool seen = std::any_of(alphas.begin(), alphas.end(),
                            [&](double a) { return std::abs(a - alpha) < kSame; });
    if (!seen) alphas.push_back(alpha);
  }
  std::sort(alphas.begin(), alphas.end());

  // Every abscissa needed: the grid columns and both sides of each pair.
  std::vector<double> needed = sigmas;
  for (double a : alphas) {
    needed.push_back(0.5 - a);
    needed.push_back(0.5 + a);
  }
  std::sort(needed.begin(), needed.end());
  std::vector<double> columns;
  for (double s : needed) {
    if (columns.empty() || s - columns.back() >= kSame) columns.push_back(s);
  }
  auto column_of = [&](double s) {
    auto it = std::lower_bound(columns.begin(), columns.end(), s - kSame);
    return static_cast<std::size_t>(it - columns.begin());
  };

  std::vector<Point> points;
  for (double t : ts) {
    for (double s : columns) points.emplace_back(s, t);
  }
  auto evals = evaluate_points(points, jobs, [&](const Complex& s) {
    return eval_f(s, Strategy::REGULARIZED, budget, table);
  });
  auto cell = [&](std::size_t row, double sigma) -> const PointEval& {
    return evals[row * columns.size() + column_of(sigma)];
  };

  ClaimReport r;
  r.claim_id = ClaimId::CASE2_MONOTONE;
  r.region.grid = grid;
  r.columns = {"t", "alpha", "abs_f_left", "abs_f_right", "gap", "combined_error"};
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!evals[i].ok) r.failures.push_back({points[i].first, points[i].second, evals[i].message});
  }

  double min_gap = std::numeric_limits<double>::infinity();
  double max_gap = -std::numeric_limits<double>::infinity();
  double worst_excess = std::numeric_limits<double>::infinity();
  int pairs = 0, violated = 0, rows_monotone = 0, monotone_breaks = 0;
  std::optional<Witness> violation, tightest;

  for (std::size_t row = 0; row < ts.size(); ++row) {
    const double t = ts[row];
    bool monotone = true;
    for (std::size_t k = 0; k + 1 < sigmas.size(); ++k) {
      const PointEval& a = cell(row, sigmas[k]);
      const PointEval& b = cell(row, sigmas[k + 1]);
      if (!a.ok || !b.ok) continue;
      if (!(abs(b.result.value) < abs(a.result.value))) {
        monotone = false;
        ++monotone_breaks;
      }
    }
    if (monotone) ++rows_monotone;

    for (double alpha : alphas) {
      const PointEval& left = cell(row, 0.5 - alpha);
      const PointEval& right = cell(row, 0.5 + alpha);
      if (!left.ok || !right.ok) continue;
      ++pairs;
      double abs_left = d(abs(left.result.value));
      double abs_right = d(abs(right.result.value));
      double gap = abs_left - abs_right;
      double err = d(left.result.error_estimate + right.result.error_estimate);
      r.rows.push_back({t, alpha, abs_left, abs_right, gap, err});
      if (gap < min_gap) {
        min_gap = gap;
        tightest = Witness{0.5 - alpha, t, gap};
      }
      max_gap = std::max(max_gap, gap);
      if (gap < -err) {
        ++violated;
        if (gap + err < worst_excess) {
          worst_excess = gap + err;
          violation = Witness{0.5 - alpha, t, gap};
        }
      }
    }
  }
  if (pairs == 0) throw NumericError("case-2 check: no sigma pair could be evaluated");

  r.metrics["pairs"] = pairs;
  r.metrics["violated_pairs"] = violated;
  r.metrics["min_gap"] = min_gap;
  r.metrics["max_gap"] = max_gap;
  r.metrics["rows"] = static_cast<double>(ts.size());
  r.metrics["rows_monotone_in_sigma"] = rows_monotone;
  r.metrics["monotone_breaks"] = monotone_breaks;
  r.metrics["points_failed"] = static_cast<double>(r.failures.size());
  r.verdict = violated ? Verdict::VIOLATED : Verdict::HOLDS_ON_GRID;
  r.witness = violated ? violation : tightest;
  return r;
}

// ---------------------------------------------------------------------------
// Term-wise orderings

Real theta_arctan_sum(const Complex& s, int m) {
  const Real half_t = abs(s.imag()) / 2;
  Real sum = 0;
  for (int k = 0; k < m; ++k) sum += atan(half_t / (s.real() / 2 + Real(k)));
  return sum;
}

ClaimReport check_termwise(const Complex& s1, const Complex& s2, int M,
                           const CoefficientTable& table) {
  if (!(s1.real() > 0 && s1.real() < s2.real())) {
    throw PreconditionError("termwise check needs 0 < Re s1 < Re s2");
  }
  if (s1.imag() != s2.imag() || s1.imag() == 0) {
    throw PreconditionError("termwise check needs Im s1 = Im s2 != 0");
  }
  require_order(M, table);

  ClaimReport r;
  r.claim_id = ClaimId::TERMWISE_ORDER;
  r.region.points = {{d(s1.real()), d(s1.imag())}, {d(s2.real()), d(s2.imag())}};
  r.columns = {"m", "log_abs_t1", "log_abs_t2", "theta1", "theta2"};

  const Complex a1 = s1 / Real(2), a2 = s2 / Real(2);
  const Real half_pi = kPi / 2;
  Real log_rf1 = 0, log_rf2 = 0, log_gap = 0;
  Real theta1 = 0, theta2 = 0;
  Real theta1_first = 0, theta2_first = 0;
  Real min_log_gap = std::numeric_limits<Real>::infinity();
  Real min_theta_gap = std::numeric_limits<Real>::infinity();
  int order_fail = 0, increment_fail = 0, bound_fail = 0, witness_m = 0;

  for (int m = 1; m <= M; ++m) {
    const Real k(m - 1);
    Complex f1 = a1 + k, f2 = a2 + k;
    log_rf1 += log(abs(f1));
    log_rf2 += log(abs(f2));
    // |T_m(s1)| / |T_m(s2)| = prod |a2 + k| / |a1 + k|, a sum of positive logs
    log_gap += log(abs(f2) / abs(f1));
    Real inc1 = atan(abs(s1.imag()) / 2 / f1.real());
    Real inc2 = atan(abs(s2.imag()) / 2 / f2.real());
    theta1 += inc1;
    theta2 += inc2;
    if (m == 1) {
      theta1_first = theta1;
      theta2_first = theta2;
    } else {
      if (!(inc1 > 0 && inc1 < half_pi && inc2 > 0 && inc2 < half_pi)) ++increment_fail;
      if (!(theta1 < Real(m) * theta1_first && theta2 < Real(m) * theta2_first)) ++bound_fail;
    }
    if (!(log_gap > 0 && theta1 > theta2)) ++order_fail;
    if (log_gap < min_log_gap) {
      min_log_gap = log_gap;
      witness_m = m;
    }
    min_theta_gap = std::min(min_theta_gap, theta1 - theta2);
    Real log_c = table.log_value(m);
    r.rows.push_back({double(m), d(log_c - log_rf1), d(log_c - log_rf2), d(theta1), d(theta2)});
  }

  r.metrics["terms"] = M;
  r.metrics["ordering_failures"] = order_fail;
  r.metrics["increment_failures"] = increment_fail;
  r.metrics["theta_bound_failures"] = bound_fail;
  r.metrics["min_log_magnitude_gap"] = d(min_log_gap);
  r.metrics["min_theta_gap"] = d(min_theta_gap);
  r.metrics["witness_m"] = witness_m;
  const bool holds = order_fail == 0 && increment_fail == 0 && bound_fail == 0;
  r.verdict = holds ? Verdict::HOLDS_ON_GRID : Verdict::VIOLATED;
  // provable facts: a failure means the arithmetic, not the claim, is suspect
  r.metrics["precision_investigation"] = holds ? 0 : 1;
  r.witness = Witness{d(s1.real()), d(s1.imag()), d(min_log_gap)};
  return r;
}

// ---------------------------------------------------------------------------
// Ratio of consecutive terms

ClaimReport check_ratio(const Complex& s, int M, const CoefficientTable& table) {
  require_order(M, table, 1);
  ClaimReport r;
  r.claim_id = ClaimId::RATIO_LT1;
  r.region.points = {{d(s.real()), d(s.imag())}};
  r.columns = {"m", "rho"};
  const Complex a = s / Real(2);
  Real max_rho = 0;
  int argmax = 0, violations = 0;
  std::optional<int> first;
  Real first_rho = 0;
  for (int m = 1; m <= M; ++m) {
    Real rho = table.ratio(m) / abs(a + Real(m));
    r.rows.push_back({double(m), d(rho)});
    if (rho > max_rho) {
      max_rho = rho;
      argmax = m;
    }
    if (rho >= 1) {
      ++violations;
      if (!first) {
        first = m;
        first_rho = rho;
      }
    }
  }
  r.metrics["terms"] = M;
  r.metrics["max_rho"] = d(max_rho);
  r.metrics["argmax_rho"] = argmax;
  r.metrics["violations"] = violations;
  if (first) {
    r.verdict = Verdict::VIOLATED;
    r.metrics["first_violation_m"] = *first;
    r.witness = Witness{d(s.real()), d(s.imag()), d(first_rho)};
  } else {
    r.verdict = Verdict::HOLDS_ON_GRID;
    r.witness = Witness{d(s.real()), d(s.imag()), d(max_rho)};
  }
  return r;
}

// ---------------------------------------------------------------------------
// Lambda dominance

ClaimReport check_lambda_dominance(const Complex& s, int M, const ToleranceBudget& budget,
                                   const CoefficientTable& table) {
  budget.validate();
  EvalResult lambda = lambda_series(s / Real(2), budget);
  require_order(M, table);
  std::vector<Complex> partials = m_ordered_partials(s, M, table);
  EvalResult j_reg = eval_J(s, Strategy::REGULARIZED, budget, table);

  ClaimReport r;
  r.claim_id = ClaimId::LAMBDA_DOMINANCE;
  r.region.points = {{d(s.real()), d(s.imag())}};
  r.columns = {"m", "abs_partial", "log_abs_term", "log_termwise_bound"};

  const Complex a = s / Real(2);
  const Real log_abs_a = log(abs(a));
  Real log_rf = 0;
  int holds = 0, fails = 0;
  for (int m = 1; m <= M; ++m) {
    log_rf += log(abs(a + Real(m - 1)));
    Real log_term = table.log_value(m) - log_rf;
    // c_m |s/2|^{m-1} / (m-1)!
    Real log_bound = table.log_value(m) + Real(m - 1) * log_abs_a - log_gamma_real(Real(m));
    (log_term <= log_bound ? holds : fails)++;
    r.rows.push_back({double(m), d(abs(partials[m - 1])), d(log_term), d(log_bound)});
  }

  const Real abs_lambda = abs(lambda.value);
  r.metrics["abs_lambda_half_s"] = d(abs_lambda);
  r.metrics["abs_j_regularized"] = d(abs(j_reg.value));
  r.metrics["abs_j_partial_M"] = d(abs(partials.back()));
  for (int checkpoint : {10, 50, 100, 150}) {
    if (checkpoint <= M) {
      r.metrics["abs_j_partial_m" + std::to_string(checkpoint)] =
          d(abs(partials[checkpoint - 1]));
    }
  }
  r.metrics["margin_vs_regularized"] = d(abs_lambda - abs(j_reg.value));
  r.metrics["margin_vs_partial_M"] = d(abs_lambda - abs(partials.back()));
  r.metrics["partial_sum_drift"] = d(last_quarter_drift(partials));
  r.metrics["termwise_bound_holds"] = holds;
  r.metrics["termwise_bound_fails"] = fails;
  r.metrics["terms"] = M;
  r.verdict = Verdict::MEASURED_ONLY;
  r.witness = Witness{d(s.real()), d(s.imag()), d(abs_lambda - abs(j_reg.value))};
  return r;
}

ClaimReport check_lambda_dominance_grid(const RegionGrid& grid, int M,
                                        const ToleranceBudget& budget,
                                        const CoefficientTable& table, int jobs) {
  grid.validate();
  budget.validate();
  require_order(M, table);
  std::vector<Point> points = grid_points(grid);

  struct Row {
    bool ok = false;
    std::string message;
    Real lambda{0}, j_reg{0}, j_m{0}, drift{0};
  };
  auto rows = io::parallel_map(points, jobs, [&](const Point& p) {
    Row row;
    try {
      Complex s = at(p);
      row.lambda = abs(lambda_series(s / Real(2), budget).value);
      row.j_reg = abs(eval_J(s, Strategy::REGULARIZED, budget, table).value);
      std::vector<Complex> partials = m_ordered_partials(s, M, table);
      row.j_m = abs(partials.back());
      row.drift = last_quarter_drift(partials);
      row.ok = true;
    } catch (const NumericError& e) {
      row.message = e.what();
    }
    return row;
  });

  ClaimReport r;
  r.claim_id = ClaimId::LAMBDA_DOMINANCE;
  r.label = "grid";
  r.region.grid = grid;
  r.columns = {"sigma", "t", "abs_lambda_half_s", "abs_j_regularized", "abs_j_partial_M",
               "partial_sum_drift"};
  int evaluated = 0, dominated = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double max_drift = 0, max_rel_drift = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& [sigma, t] = points[i];
    if (!rows[i].ok) {
      r.failures.push_back({sigma, t, rows[i].message});
      continue;
    }
    ++evaluated;
    const Row& row = rows[i];
    r.rows.push_back({sigma, t, d(row.lambda), d(row.j_reg), d(row.j_m), d(row.drift)});
    double margin = d(row.lambda - row.j_reg);
    if (margin > 0) ++dominated;
    if (margin < min_margin) {
      min_margin = margin;
      r.witness = Witness{sigma, t, margin};
    }
    max_drift = std::max(max_drift, d(row.drift));
    if (row.j_m > 0) max_rel_drift = std::max(max_rel_drift, d(row.drift / row.j_m));
  }
  if (evaluated == 0) throw NumericError("lambda-dominance sweep: no grid point evaluated");
  r.metrics["points_evaluated"] = evaluated;
  r.metrics["points_failed"] = static_cast<double>(r.failures.size());
  r.metrics["points_lambda_dominates"] = dominated;
  r.metrics["min_margin_vs_regularized"] = min_margin;
  r.metrics["max_partial_sum_drift"] = max_drift;
  r.metrics["max_relative_drift"] = max_rel_drift;
  r.metrics["terms"] = M;
  r.verdict = Verdict::MEASURED_ONLY;
  return r;
}

// ---------------------------------------------------------------------------
// Integral-test sandwich

SandwichReports check_appendix_sandwich(const std::vector<double>& x_grid) {
  if (x_grid.empty()) throw PreconditionError("sandwich check needs at least one x");
  for (double x : x_grid) {
    if (!(x > 0)) throw PreconditionError("sandwich check needs x > 0");
  }
  ToleranceBudget tight;
  tight.rel_tol = Real(1e-30);
  tight.abs_floor = Real(0);

  SandwichReports out;
  ClaimReport* reports[2] = {&out.paper_literal, &out.corrected};
  out.paper_literal.label = "paper_literal";
  out.corrected.label = "integral_test";
  for (ClaimReport* r : reports) {
    r->claim_id = ClaimId::APPENDIX_SANDWICH;
    for (double x : x_grid) r->region.points.emplace_back(x, 0.0);
    r->columns = {"x", "lambda", "lower", "upper", "holds"};
  }

  const Real erfc_one = erfc_real(Real(1));
  for (int which = 0; which < 2; ++which) {
    ClaimReport& r = *reports[which];
    int violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    std::optional<Witness> first_violation, tightest;
    double w_lower = 0, w_upper = 0, t_lower = 0, t_upper = 0;
    for (double xd : x_grid) {
      const Real x(xd);
      EvalResult lambda = lambda_series(Complex(x), tight);
      const Real value = lambda.value.real();
      const Real head = which == 0 ? erfc_one : erfc_real(sqrt(kPi * x));
      const Real lower = head / (2 * sqrt(x));
      const Real upper = exp(-kPi * x) + lower;
      const Real slop = lambda.error_estimate + 64 * kEpsilon * value;
      const bool holds = value >= lower - slop && value <= upper + slop;
      r.rows.push_back({xd, d(value), d(lower), d(upper), holds ? 1.0 : 0.0});
      if (!holds) {
        ++violations;
        if (!first_violation) {
          first_violation = Witness{xd, 0.0, d(value)};
          w_lower = d(lower);
          w_upper = d(upper);
        }
      }
      double slack = d(std::min(value - lower, upper - value) / value);
      if (slack < min_slack) {
        min_slack = slack;
        tightest = Witness{xd, 0.0, d(value)};
        t_lower = d(lower);
        t_upper = d(upper);
      }
    }
    r.metrics["points"] = static_cast<double>(x_grid.size());
    r.metrics["violations"] = violations;
    r.metrics["min_relative_slack"] = min_slack;
    if (violations) {
      r.verdict = Verdict::VIOLATED;
      r.witness = first_violation;
      r.metrics["witness_lower"] = w_lower;
      r.metrics["witness_upper"] = w_upper;
    } else {
      r.verdict = Verdict::HOLDS_ON_GRID;
      r.witness = tightest;
      r.metrics["witness_lower"] = t_lower;
      r.metrics["witness_upper"] = t_upper;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reconstruction

namespace {

struct Reconstruction {
  Real omega_abs{0};
  Real residual{0};
  Real f_rel_tol{0};
};

Reconstruction reconstruct(const Complex& s, int sign, const ToleranceBudget& budget,
                           const CoefficientTable& table) {
  EvalResult omega = eval_omega(s, OmegaRoute::G_ROUTE, budget, table, sign);
  const Real omega_abs = abs(omega.value);

  // f(s) + f(1-s) cancels down to |Omega|; |f| <= |1/s| + |J| with |J| = O(1) in
  // the strip, so ask for 1e-3 of the 1e-8 target against that scale.
  ToleranceBudget f_budget = budget;
  const Real scale = 1 / abs(s) + 1 / abs(Complex(1) - s) + 2;
  const Real needed = std::max(Real(1e-11) * omega_abs / scale, Real(1e-30));
  if (needed < f_budget.rel_tol) f_budget.rel_tol = needed;
  EvalResult a = eval_f(s, Strategy::REGULARIZED, f_budget, table);
  EvalResult b = eval_f(Complex(1) - s, Strategy::REGULARIZED, f_budget, table);
  Complex rebuilt = Real(sign) * (a.value + b.value);
  return {omega_abs, abs(rebuilt - omega.value), f_budget.rel_tol};
}

}  // namespace

ClaimReport check_reconstruction(const std::vector<Complex>& points, int sign,
                                 const ToleranceBudget& budget, const CoefficientTable& table,
                                 int jobs) {
  if (sign != 1 && sign != -1) throw PreconditionError("sign must be +1 or -1");
  if (points.empty()) throw PreconditionError("reconstruction check needs points");
  budget.validate();
  std::vector<Point> pts;
  for (const auto& p : points) pts.emplace_back(d(p.real()), d(p.imag()));

  struct Row {
    bool ok = false;
    std::string message;
    Reconstruction value;
  };
  auto rows = io::parallel_map(pts, jobs, [&](const Point& p) {
    Row row;
    try {
      row.value = reconstruct(at(p), sign, budget, table);
      row.ok = true;
    } catch (const NumericError& e) {
      row.message = e.what();
    }
    return row;
  });

  ClaimReport r;
  r.claim_id = ClaimId::RECONSTRUCTION_SIGN;
  r.region.points = pts;
  r.columns = {"sigma", "t", "abs_omega_g", "residual", "relative_residual", "f_rel_tol"};
  int evaluated = 0, violations = 0;
  double worst = -1;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& [sigma, t] = pts[i];
    if (!rows[i].ok) {
      r.failures.push_back({sigma, t, rows[i].message});
      continue;
    }
    ++evaluated;
    const Reconstruction& v = rows[i].value;
    const Real allowed = std::max(Real(1e-8) * v.omega_abs, budget.abs_floor);
    const double relative = v.omega_abs > 0 ? d(v.residual / v.omega_abs) : d(v.residual);
    if (v.residual > allowed) ++violations;
    r.rows.push_back({sigma, t, d(v.omega_abs), d(v.residual), relative, d(v.f_rel_tol)});
    if (relative > worst) {
      worst = relative;
      r.witness = Witness{sigma, t, relative};
    }
  }
  if (evaluated == 0) throw NumericError("reconstruction check: no point evaluated");
  r.metrics["sign"] = sign;
  r.metrics["points_evaluated"] = evaluated;
  r.metrics["points_failed"] = static_cast<double>(r.failures.size());
  r.metrics["violations"] = violations;
  r.metrics["max_relative_residual"] = worst;
  r.verdict = violations ? Verdict::VIOLATED : Verdict::HOLDS_ON_GRID;
  return r;
}

ClaimReport check_reconstruction(const RegionGrid& grid, int sign, const ToleranceBudget& budget,
                                 const CoefficientTable& table, int jobs) {
  grid.validate();
  std::vector<Complex> points;
  for (const auto& p : grid_points(grid)) points.push_back(at(p));
  ClaimReport r = check_reconstruction(points, sign, budget, table, jobs);
  r.region.points.clear();
  r.region.grid = grid;
  return r;
}

// ---------------------------------------------------------------------------
// Radial distances along the trace

ClaimReport check_monotone_radial(const Complex& s, int M, AnchorMode anchor,
                                  const ToleranceBudget& budget, const CoefficientTable& table) {
  SpiralTrace trace = trace_J(s, M, anchor, budget, table);
  ClaimReport r;
  r.claim_id = ClaimId::MONOTONE_RADIAL;
  r.label = to_string(anchor);
  r.region.points = {{d(s.real()), d(s.imag())}};
  r.columns = {"m", "radial"};
  int increases = 0, decreases = 0, changes = 0;
  int previous = 0;
  std::optional<int> first_change;
  for (std::size_t m = 0; m < trace.radial.size(); ++m) {
    r.rows.push_back({double(m), d(trace.radial[m])});
    if (m == 0) continue;
    int dir = trace.radial[m] > trace.radial[m - 1] ? 1 : -1;
    (dir > 0 ? increases : decreases)++;
    if (previous != 0 && dir != previous) {
      ++changes;
      if (!first_change) first_change = static_cast<int>(m);
    }
    previous = dir;
  }
  r.metrics["increases"] = increases;
  r.metrics["decreases"] = decreases;
  r.metrics["direction_changes"] = changes;
  r.metrics["final_radial"] = d(trace.radial.back());
  r.metrics["min_radial"] = d(*std::min_element(trace.radial.begin(), trace.radial.end()));
  if (first_change) r.metrics["first_direction_change_m"] = *first_change;
  r.verdict = Verdict::MEASURED_ONLY;
  r.witness = Witness{d(s.real()), d(s.imag()), d(trace.radial.back())};
  return r;
}

}  // namespace zlab
