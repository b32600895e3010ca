#pragma once

// The decomposition of the completed zeta function
//
//   Omega(s) = 1/(s(s-1)) + G(s) + G(1-s),
//   G(s)     = sum_n (n^2 pi)^{-s/2} Gamma(s/2, n^2 pi),
//
// together with the m-ordered series
//
//   J(s) = sum_{m>=1} c_m / (s/2)^(m),   c_m = sum_{n>=1} e^{-n^2 pi} (n^2 pi)^{m-1},
//
// and f(s) = -(1/s + J(s)). J is exposed under three summation strategies so
// that its convergence can be measured rather than assumed.

#include "zlab/precision.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace zlab {

enum class Strategy { M_ORDERED, N_ORDERED, REGULARIZED };

std::string_view to_string(Strategy strategy);
Strategy strategy_from_string(std::string_view name);

struct EvalResult {
  Complex value;
  std::optional<Strategy> strategy;  // empty for G, Lambda, Omega, xi
  int terms_used = 0;
  Real error_estimate{0};
  bool converged = false;
  // max |P_k - P_k'| over the last quarter of recorded partial sums
  Real partial_sum_drift{0};
};

// c_1..c_M with consecutive ratios and natural logs. Immutable once built.
class CoefficientTable {
 public:
  // Sums each c_m over n until the next n-term is below n_tol times the
  // accumulated sum (n <= 64). Requires 1 <= max_order <= 500.
  static CoefficientTable build(int max_order, Real n_tol = Real(1e-32));

  int max_order() const { return static_cast<int>(log_values_.size()); }
  Real n_tol() const { return n_tol_; }

  // 1-based accessors.
  Real log_value(int m) const { return log_values_.at(m - 1); }
  // Empty past the overflow horizon of the working type.
  std::optional<Real> value(int m) const;
  Real ratio(int m) const { return ratios_.at(m - 1); }

  // r_m = c_{m+1}/c_m strictly increasing for m >= 2 (measured at build).
  bool ratios_strictly_increasing() const { return ratios_increasing_; }

 private:
  CoefficientTable() = default;

  Real n_tol_{0};
  std::vector<Real> log_values_;
  std::vector<Real> values_;  // NaN where not representable
  std::vector<Real> ratios_;
  bool ratios_increasing_ = false;
};

inline constexpr int kMaxCoefficientOrder = 500;
inline constexpr int kMaxThetaTerms = 64;

struct RisingFactorial {
  Complex value;     // product; may be non-finite when beyond range
  Real log_abs{0};   // sum of log |z + k|
  Real arg{0};       // unwrapped sum of arg(z + k)
  bool representable = true;
};

// z (z+1) ... (z+m-1). Throws PoleError if any factor is within kPoleGuard of 0.
RisingFactorial rising_factorial(const Complex& z, int m);

// Lambda(x) = sum_{n>=1} e^{-n^2 pi x}, Re x > 0.
EvalResult lambda_series(const Complex& x, const ToleranceBudget& budget);

// Jacobi theta: 1 + 2 Lambda(x), x > 0.
Real jacobi_theta(const Real& x, const ToleranceBudget& budget = default_budget());

EvalResult eval_G(const Complex& s, const ToleranceBudget& budget);

EvalResult eval_J(const Complex& s, Strategy strategy, const ToleranceBudget& budget,
                  const CoefficientTable& table);

EvalResult eval_f(const Complex& s, Strategy strategy, const ToleranceBudget& budget,
                  const CoefficientTable& table);

enum class OmegaRoute { G_ROUTE, F_ROUTE };

// F_ROUTE returns sign * (f(s) + f(1-s)) with f under the REGULARIZED strategy.
EvalResult eval_omega(const Complex& s, OmegaRoute route, const ToleranceBudget& budget,
                      const CoefficientTable& table, int sign);

// pi^{-s/2} Gamma(s/2) zeta(s) from the reference zeta.
EvalResult omega_oracle(const Complex& s, const ToleranceBudget& budget);

// xi(s) = s(s-1)/2 * Omega(s), with the 1/(s(s-1)) term cancelled analytically
// so s = 0 and s = 1 are admissible.
EvalResult eval_xi(const Complex& s, const ToleranceBudget& budget);

// Startup determination of the constant linking f(s) + f(1-s) to Omega(s).
struct SignCalibration {
  int sign = 0;
  Complex probe;
  Real residual_plus{0};   // |+(f(s)+f(1-s)) - Omega_oracle| / |Omega_oracle|
  Real residual_minus{0};  // |-(f(s)+f(1-s)) - Omega_oracle| / |Omega_oracle|
};

SignCalibration calibrate_sign(const ToleranceBudget& budget, const CoefficientTable& table);

// Term m (1-based) of the m-ordered series evaluated directly as
// c_m / (s/2)^(m) in log form; independent of the ratio recurrence.
Complex direct_J_term(const Complex& s, int m, const CoefficientTable& table);

// Drift of a partial-sum sequence over its last quarter (at least two entries).
Real last_quarter_drift(const std::vector<Complex>& partial_sums);

}  // namespace zlab
