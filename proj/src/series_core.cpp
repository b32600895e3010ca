#include "zlab/series_core.hpp"

#include "zlab/special_functions.hpp"

#include <algorithm>
#include <string>

namespace zlab {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::M_ORDERED: return "M_ORDERED";
    case Strategy::N_ORDERED: return "N_ORDERED";
    case Strategy::REGULARIZED: return "REGULARIZED";
  }
  return "?";
}

Strategy strategy_from_string(std::string_view name) {
  if (name == "M_ORDERED" || name == "m") return Strategy::M_ORDERED;
  if (name == "N_ORDERED" || name == "n") return Strategy::N_ORDERED;
  if (name == "REGULARIZED" || name == "reg") return Strategy::REGULARIZED;
  throw PreconditionError("unknown strategy '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Coefficient table

CoefficientTable CoefficientTable::build(int max_order, Real n_tol) {
  if (max_order < 1 || max_order > kMaxCoefficientOrder) {
    throw PreconditionError("coefficient table order must be in [1, 500]");
  }
  if (!(n_tol > 0)) throw PreconditionError("n_tol must be positive");

  CoefficientTable table;
  table.n_tol_ = n_tol;
  table.log_values_.reserve(max_order);
  table.values_.reserve(max_order);

  const Real log_tol = log(n_tol);
  const Real log_max = log(std::numeric_limits<Real>::max());

  for (int m = 1; m <= max_order; ++m) {
    // log-sum-exp over l_n = -lambda_n + (m-1) log lambda_n, lambda_n = n^2 pi
    auto log_term = [m](int n) {
      Real lambda = Real(n) * n * kPi;
      return -lambda + Real(m - 1) * log(lambda);
    };
    Real pivot = log_term(1);
    Real scaled = 1;  // sum of exp(l_n - pivot)
    for (int n = 2; n <= kMaxThetaTerms; ++n) {
      Real l = log_term(n);
      Real log_acc = pivot + log(scaled);
      if (l < log_tol + log_acc) break;
      if (l > pivot) {
        scaled = scaled * exp(pivot - l) + 1;
        pivot = l;
      } else {
        scaled += exp(l - pivot);
      }
    }
    Real log_c = pivot + log(scaled);
    table.log_values_.push_back(log_c);
    table.values_.push_back(log_c < log_max ? exp(log_c)
                                            : std::numeric_limits<Real>::quiet_NaN());
  }

  table.ratios_.reserve(max_order > 1 ? max_order - 1 : 0);
  for (int m = 1; m < max_order; ++m) {
    table.ratios_.push_back(exp(table.log_values_[m] - table.log_values_[m - 1]));
  }
  table.ratios_increasing_ = true;
  for (std::size_t i = 2; i < table.ratios_.size(); ++i) {
    if (!(table.ratios_[i] > table.ratios_[i - 1])) {
      table.ratios_increasing_ = false;
      break;
    }
  }
  return table;
}

std::optional<Real> CoefficientTable::value(int m) const {
  const Real& v = values_.at(m - 1);
  if (isnan(v)) return std::nullopt;
  return v;
}

// ---------------------------------------------------------------------------
// Building blocks

RisingFactorial rising_factorial(const Complex& z, int m) {
  if (m < 1) throw PreconditionError("rising_factorial requires m >= 1");
  RisingFactorial out;
  out.value = Complex(1);
  for (int k = 0; k < m; ++k) {
    Complex factor = z + Real(k);
    Real mag = abs(factor);
    if (mag < kPoleGuard) {
      throw PoleError("rising_factorial: factor z+" + std::to_string(k) + " vanishes at z=" +
                      describe(z));
    }
    out.value *= factor;
    out.log_abs += log(mag);
    out.arg += arg(factor);
  }
  out.representable = isfinite(out.value.real()) && isfinite(out.value.imag());
  return out;
}

Real last_quarter_drift(const std::vector<Complex>& partial_sums) {
  const std::size_t n = partial_sums.size();
  if (n == 0) return 0;
  if (n == 1) return abs(partial_sums.front());
  const std::size_t window = std::min(n, std::max<std::size_t>(2, n / 4));
  Real drift = 0;
  for (std::size_t i = n - window; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      drift = std::max(drift, Real(abs(partial_sums[i] - partial_sums[j])));
    }
  }
  return drift;
}

namespace {

constexpr int kLambdaMaxTerms = 4096;

Complex theta_weight(int n, const Complex& a) {
  // (n^2 pi)^{-a}
  return exp(-a * log(Real(n) * n * kPi));
}

struct NSum {
  Complex value;
  std::vector<Complex> partial_sums;
  Real omitted{0};  // magnitude of the first term not added
  bool truncated = false;
};

// sum_{n=1}^{64} term(n), stopping once |term| < rel_tol |accumulated|.
template <class Term>
NSum sum_over_n(const Real& rel_tol, Term&& term) {
  NSum out;
  out.value = Complex(0);
  for (int n = 1; n <= kMaxThetaTerms; ++n) {
    Complex t = term(n);
    if (n > 1 && abs(t) < rel_tol * abs(out.value)) {
      out.omitted = abs(t);
      out.truncated = true;
      return out;
    }
    out.value += t;
    out.partial_sums.push_back(out.value);
  }
  out.omitted = abs(out.partial_sums.back() - out.partial_sums[out.partial_sums.size() - 2]);
  return out;
}

EvalResult g_with_tolerance(const Complex& s, const Real& rel_tol, const ToleranceBudget& budget) {
  const Complex a = s / Real(2);
  NSum sum = sum_over_n(rel_tol, [&](int n) {
    return theta_weight(n, a) * upper_incomplete_gamma(a, Real(n) * n * kPi);
  });
  EvalResult r;
  r.value = sum.value;
  r.terms_used = static_cast<int>(sum.partial_sums.size());
  r.error_estimate = sum.omitted;
  r.partial_sum_drift = last_quarter_drift(sum.partial_sums);
  r.converged = sum.truncated && r.error_estimate <= budget.tolerance_for(abs(r.value));
  return r;
}

void guard_not_at(const Complex& s, const Real& point, const char* who) {
  if (abs(s - point) < kPoleGuard) {
    throw PoleError(std::string(who) + ": s=" + describe(s) + " is at a pole");
  }
}

// G(s) + G(1-s) evaluated until its error is small relative to
// |scale + G(s) + G(1-s)|; the sum cancels against `scale` near zeros of zeta.
struct GPair {
  Complex value;
  Real error{0};
  int terms = 0;
  bool converged = false;
};

GPair g_pair_against(const Complex& s, const Complex& scale, const ToleranceBudget& budget) {
  Real rel = budget.rel_tol;
  GPair out;
  for (int attempt = 0; attempt < 4; ++attempt) {
    EvalResult a = g_with_tolerance(s, rel, budget);
    EvalResult b = g_with_tolerance(Complex(1) - s, rel, budget);
    out.value = a.value + b.value;
    out.error = a.error_estimate + b.error_estimate;
    out.terms = a.terms_used + b.terms_used;
    Real total = abs(scale + out.value);
    Real target = budget.tolerance_for(total);
    out.converged = out.error <= target;
    if (out.converged || rel <= 16 * kEpsilon) break;
    Real parts = std::max({Real(abs(scale)), Real(abs(a.value)), Real(abs(b.value))});
    Real tighter = rel * target / out.error / 100;
    if (parts > 0 && total > 0) tighter = std::min(tighter, budget.rel_tol * total / parts / 100);
    rel = std::max(tighter, Real(16 * kEpsilon));
  }
  return out;
}

}  // namespace

EvalResult lambda_series(const Complex& x, const ToleranceBudget& budget) {
  if (!(x.real() > 0)) {
    throw DomainError("lambda_series requires Re x > 0, got " + describe(x));
  }
  EvalResult r;
  r.value = Complex(0);
  Real magnitude = 0;
  for (int n = 1; n <= kLambdaMaxTerms; ++n) {
    Complex term = exp(-Real(n) * n * kPi * x);
    Real t = abs(term);
    if (n > 1 && (t <= budget.rel_tol * magnitude || t == 0)) {
      r.error_estimate = t;
      r.converged = true;
      return r;
    }
    r.value += term;
    magnitude += t;
    r.terms_used = n;
  }
  r.error_estimate = abs(exp(-Real(kLambdaMaxTerms + 1) * (kLambdaMaxTerms + 1) * kPi * x));
  r.converged = r.error_estimate <= budget.tolerance_for(magnitude);
  return r;
}

Real jacobi_theta(const Real& x, const ToleranceBudget& budget) {
  if (!(x > 0)) throw DomainError("jacobi_theta requires x > 0");
  return 1 + 2 * lambda_series(Complex(x), budget).value.real();
}

EvalResult eval_G(const Complex& s, const ToleranceBudget& budget) {
  budget.validate();
  return g_with_tolerance(s, budget.rel_tol, budget);
}

Complex direct_J_term(const Complex& s, int m, const CoefficientTable& table) {
  RisingFactorial rf = rising_factorial(s / Real(2), m);
  return exp(Complex(table.log_value(m) - rf.log_abs, -rf.arg));
}

namespace {

EvalResult j_m_ordered(const Complex& s, const ToleranceBudget& budget,
                       const CoefficientTable& table) {
  const int terms = budget.max_terms;
  if (table.max_order() < terms) {
    throw PreconditionError("M_ORDERED needs a coefficient table of order >= max_terms (" +
                            std::to_string(terms) + ")");
  }
  const Complex a = s / Real(2);
  std::vector<Complex> partial;
  partial.reserve(terms);
  if (abs(a) < kPoleGuard) throw PoleError("eval_J: s/2 is at a pole, s=" + describe(s));
  Complex term = exp(table.log_value(1)) / a;
  Complex sum(0);
  for (int m = 1; m <= terms; ++m) {
    sum += term;
    partial.push_back(sum);
    if (m == terms) break;
    Complex next_factor = a + Real(m);
    if (abs(next_factor) < kPoleGuard) {
      throw PoleError("eval_J: rising factorial vanishes at s=" + describe(s));
    }
    term *= table.ratio(m) / next_factor;
  }
  EvalResult r;
  r.value = sum;
  r.strategy = Strategy::M_ORDERED;
  r.terms_used = terms;
  r.partial_sum_drift = last_quarter_drift(partial);
  r.error_estimate = r.partial_sum_drift;
  r.converged = terms > 1 && r.partial_sum_drift <= budget.tolerance_for(abs(sum));
  return r;
}

EvalResult j_n_ordered(const Complex& s, const ToleranceBudget& budget) {
  const Complex a = s / Real(2);
  const Complex gamma_a = gamma_complex(a);
  NSum sum = sum_over_n(budget.rel_tol, [&](int n) {
    Real lambda = Real(n) * n * kPi;
    return theta_weight(n, a) * (gamma_a - upper_incomplete_gamma(a, lambda));
  });
  EvalResult r;
  r.value = sum.value;
  r.strategy = Strategy::N_ORDERED;
  r.terms_used = static_cast<int>(sum.partial_sums.size());
  r.partial_sum_drift = last_quarter_drift(sum.partial_sums);
  r.error_estimate = std::max(sum.omitted, r.partial_sum_drift);
  r.converged = sum.truncated && r.error_estimate <= budget.tolerance_for(abs(sum.value));
  return r;
}

EvalResult j_regularized(const Complex& s, const ToleranceBudget& budget) {
  ZetaEvaluation zeta = zeta_reference_detailed(s, budget);
  Complex prefactor = completed_prefactor(s);
  EvalResult g = g_with_tolerance(s, budget.rel_tol, budget);
  EvalResult r;
  r.value = prefactor * zeta.value - g.value;
  r.strategy = Strategy::REGULARIZED;
  r.terms_used = g.terms_used;
  r.error_estimate = abs(prefactor) * zeta.error_bound + g.error_estimate;
  r.partial_sum_drift = g.partial_sum_drift;
  r.converged = g.converged;
  return r;
}

}  // namespace

EvalResult eval_J(const Complex& s, Strategy strategy, const ToleranceBudget& budget,
                  const CoefficientTable& table) {
  budget.validate();
  switch (strategy) {
    case Strategy::M_ORDERED: return j_m_ordered(s, budget, table);
    case Strategy::N_ORDERED: return j_n_ordered(s, budget);
    case Strategy::REGULARIZED: return j_regularized(s, budget);
  }
  throw PreconditionError("unknown strategy");
}

EvalResult eval_f(const Complex& s, Strategy strategy, const ToleranceBudget& budget,
                  const CoefficientTable& table) {
  guard_not_at(s, Real(0), "eval_f");
  EvalResult r = eval_J(s, strategy, budget, table);
  r.value = -(Complex(1) / s + r.value);
  return r;
}

EvalResult omega_oracle(const Complex& s, const ToleranceBudget& budget) {
  ZetaEvaluation zeta = zeta_reference_detailed(s, budget);
  Complex prefactor = completed_prefactor(s);
  EvalResult r;
  r.value = prefactor * zeta.value;
  r.terms_used = zeta.order;
  r.error_estimate = abs(prefactor) * zeta.error_bound;
  r.converged = true;
  return r;
}

EvalResult eval_omega(const Complex& s, OmegaRoute route, const ToleranceBudget& budget,
                      const CoefficientTable& table, int sign) {
  budget.validate();
  guard_not_at(s, Real(0), "eval_omega");
  guard_not_at(s, Real(1), "eval_omega");
  EvalResult r;
  if (route == OmegaRoute::G_ROUTE) {
    const Complex polar_part = Complex(1) / (s * (s - Real(1)));
    GPair pair = g_pair_against(s, polar_part, budget);
    r.value = polar_part + pair.value;
    r.error_estimate = pair.error;
    r.terms_used = pair.terms;
    r.converged = pair.converged;
    return r;
  }
  if (sign != 1 && sign != -1) throw PreconditionError("decomposition sign must be +1 or -1");
  EvalResult a = eval_f(s, Strategy::REGULARIZED, budget, table);
  EvalResult b = eval_f(Complex(1) - s, Strategy::REGULARIZED, budget, table);
  r.value = Real(sign) * (a.value + b.value);
  r.error_estimate = a.error_estimate + b.error_estimate;
  r.terms_used = a.terms_used + b.terms_used;
  r.converged = a.converged && b.converged;
  return r;
}

EvalResult eval_xi(const Complex& s, const ToleranceBudget& budget) {
  budget.validate();
  const Complex half_product = s * (s - Real(1)) / Real(2);
  // xi = 1/2 + s(s-1)/2 (G(s) + G(1-s)); the pair cancels against 1/(s(s-1)).
  EvalResult r;
  if (abs(half_product) < kEpsilon) {
    r.value = Complex(Real(0.5));
    r.converged = true;
    return r;
  }
  GPair pair = g_pair_against(s, Complex(Real(0.5)) / half_product, budget);
  r.value = Complex(Real(0.5)) + half_product * pair.value;
  r.error_estimate = abs(half_product) * pair.error;
  r.terms_used = pair.terms;
  r.converged = pair.converged;
  return r;
}

SignCalibration calibrate_sign(const ToleranceBudget& budget, const CoefficientTable& table) {
  SignCalibration cal;
  cal.probe = Complex(Real(0.3), Real(5));
  Complex sum = eval_f(cal.probe, Strategy::REGULARIZED, budget, table).value +
                eval_f(Complex(1) - cal.probe, Strategy::REGULARIZED, budget, table).value;
  Complex oracle = omega_oracle(cal.probe, budget).value;
  cal.residual_plus = abs(sum - oracle) / abs(oracle);
  cal.residual_minus = abs(-sum - oracle) / abs(oracle);
  cal.sign = cal.residual_plus <= cal.residual_minus ? 1 : -1;
  Real best = std::min(cal.residual_plus, cal.residual_minus);
  if (!(best < Real(1e-6))) {
    throw NumericError("sign calibration failed: neither sign reproduces Omega at " +
                       describe(cal.probe));
  }
  return cal;
}

}  // namespace zlab
