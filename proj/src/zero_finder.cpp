#include "zlab/zero_finder.hpp"

#include "zlab/report_io.hpp"
#include "zlab/special_functions.hpp"

#include <algorithm>

namespace zlab {

ToleranceBudget line_budget(const ToleranceBudget& budget) {
  ToleranceBudget out = budget;
  if (out.rel_tol > kLineRelTol) out.rel_tol = kLineRelTol;
  return out;
}

namespace {

Complex on_line(const Real& t) { return Complex(Real(0.5), t); }

Real g_exact(const Real& t, const ToleranceBudget& tight, const CoefficientTable& table) {
  return eval_f(on_line(t), Strategy::REGULARIZED, tight, table).value.real();
}

int sign_of(const Real& v) { return v > 0 ? 1 : -1; }

}  // namespace

Real critical_line_g(const Real& t, const ToleranceBudget& budget, const CoefficientTable& table) {
  return g_exact(t, line_budget(budget), table);
}

std::vector<Bracket> scan_brackets(const Real& t_lo, const Real& t_hi, const Real& step,
                                   const ToleranceBudget& budget, const CoefficientTable& table,
                                   int jobs) {
  if (!(t_lo > 0 && t_lo < t_hi)) throw PreconditionError("scan needs 0 < t_lo < t_hi");
  if (!(step > 0)) throw PreconditionError("scan step must be positive");
  budget.validate();
  const ToleranceBudget tight = line_budget(budget);

  std::vector<Real> grid;
  for (long k = 0;; ++k) {
    Real t = t_lo + Real(k) * step;
    if (t >= t_hi) break;
    grid.push_back(t);
  }
  grid.push_back(t_hi);

  std::vector<Real> values = io::parallel_map(grid, jobs, [&](const Real& t) {
    try {
      return g_exact(t, tight, table);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " [scan at t=" + io::format_number(t) + "]");
    }
  });

  std::vector<Bracket> out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (sign_of(values[i]) != sign_of(values[i + 1])) out.push_back({grid[i], grid[i + 1]});
  }
  return out;
}

ZeroRecord refine_zero(const Bracket& bracket, const Real& tol, const ToleranceBudget& budget,
                       const CoefficientTable& table) {
  if (!(bracket.lo < bracket.hi)) throw PreconditionError("bracket must have lo < hi");
  if (!(tol > 0)) throw PreconditionError("refinement tolerance must be positive");
  budget.validate();
  const ToleranceBudget tight = line_budget(budget);

  Real lo = bracket.lo, hi = bracket.hi;
  Real g_lo = g_exact(lo, tight, table);
  Real g_hi = g_exact(hi, tight, table);
  if (sign_of(g_lo) == sign_of(g_hi)) {
    throw BracketError("no sign change of Re f(1/2+it) on [" + io::format_number(lo) + ", " +
                       io::format_number(hi) + "]");
  }

  ZeroRecord rec;
  bool last_secant_ok = true;
  while (hi - lo > tol) {
    ++rec.iterations;
    const Real width = hi - lo;
    Real c = (lo + hi) / 2;
    if (last_secant_ok && g_hi != g_lo) {
      Real proposal = hi - g_hi * (hi - lo) / (g_hi - g_lo);
      Real margin = width / 64;
      if (proposal > lo + margin && proposal < hi - margin) c = proposal;
    }
    Real g_c = g_exact(c, tight, table);
    if (g_c == 0) {
      lo = c - tol / 4;
      hi = c + tol / 4;
      break;
    }
    if (sign_of(g_c) == sign_of(g_lo)) {
      lo = c;
      g_lo = g_c;
    } else {
      hi = c;
      g_hi = g_c;
    }
    // fall back to bisection whenever a step failed to halve the bracket
    last_secant_ok = (hi - lo) <= width / 2;
  }

  rec.bracket = {lo, hi};
  rec.ordinate = (lo + hi) / 2;
  const Complex s = on_line(rec.ordinate);
  rec.residual_ref = abs(g_exact(rec.ordinate, tight, table));
  rec.residual_omega = abs(eval_omega(s, OmegaRoute::G_ROUTE, tight, table, -1).value);
  return rec;
}

bool verify_zero(const ZeroRecord& record, const ToleranceBudget& budget,
                 const CoefficientTable& table) {
  const Real tol = record.bracket.hi - record.bracket.lo;
  if (!(tol > 0)) return false;
  if (!(record.bracket.lo < record.ordinate && record.ordinate < record.bracket.hi)) return false;
  const ToleranceBudget tight = line_budget(budget);
  const Complex s = on_line(record.ordinate);

  EvalResult omega = eval_omega(s, OmegaRoute::G_ROUTE, tight, table, -1);
  Real re_f = abs(g_exact(record.ordinate, tight, table));
  ZetaEvaluation zeta = zeta_reference_detailed(s, tight);
  Real prefactor = abs(completed_prefactor(s));

  Real abs_omega = abs(omega.value);
  Real abs_zeta = abs(zeta.value);
  // |zeta| = |Omega| / |pi^{-s/2} Gamma(s/2)| up to both error estimates
  Real zeta_bound = (abs_omega + omega.error_estimate) / prefactor * (1 + Real(1e-6)) +
                    zeta.error_bound + Real(1e-25);
  return abs_omega <= 10 * tol && re_f <= 10 * tol && abs_zeta <= zeta_bound &&
         abs_zeta <= 10 * tol;
}

ZeroRecord conjugate_record(const ZeroRecord& record) {
  ZeroRecord out = record;
  out.ordinate = -record.ordinate;
  out.bracket = {-record.bracket.hi, -record.bracket.lo};
  return out;
}

std::string zeros_csv(const std::vector<ZeroRecord>& zeros) {
  io::CsvTable table;
  table.columns = {"ordinate", "residual_omega", "residual_ref", "iterations"};
  for (const auto& z : zeros) {
    table.rows.push_back({io::format_number(z.ordinate), io::format_number(z.residual_omega),
                          io::format_number(z.residual_ref), std::to_string(z.iterations)});
  }
  return table.render();
}

std::string zeros_json(const std::vector<ZeroRecord>& zeros) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const auto& z = zeros[i];
    out += "  {\"ordinate\": " + io::format_number(z.ordinate) +
           ", \"residual_omega\": " + io::format_number(z.residual_omega) +
           ", \"residual_ref\": " + io::format_number(z.residual_ref) +
           ", \"iterations\": " + std::to_string(z.iterations) +
           ", \"bracket\": [" + io::format_number(z.bracket.lo) + ", " +
           io::format_number(z.bracket.hi) + "]}";
    out += i + 1 < zeros.size() ? ",\n" : "\n";
  }
  return out + "]\n";
}

}  // namespace zlab
