#pragma once

// Reference special functions the series laboratory is checked against.
// All functions are pure and thread-safe.

#include "zlab/precision.hpp"

namespace zlab {

// Gamma(z) via a g=7, 9-term Lanczos sum, with reflection for Re z < 1/2.
// Throws PoleError within kPoleGuard of 0, -1, -2, ...
Complex gamma_complex(const Complex& z);

// Continuous branch of log Gamma(z) for Re z >= 1/2 (Lanczos form).
Complex log_gamma_complex(const Complex& z);

// log Gamma(x) for real x > 0.
Real log_gamma_real(const Real& x);

// Gamma(a, x) = int_x^inf u^{a-1} e^{-u} du for real x >= 1e-6.
//
// Legendre continued fraction evaluated with the modified Lentz scheme.
// The fraction converges quickly for x >= pi, which covers every use in the
// series kernels (x = n^2 pi). Throws ConvergenceError if it has not settled
// within max_iterations.
Complex upper_incomplete_gamma(const Complex& a, const Real& x, int max_iterations = 500);

// gamma(a, x) = Gamma(a) - Gamma(a, x).
Complex lower_incomplete_gamma(const Complex& a, const Real& x);

// Complementary error function of a real argument.
Real erfc_real(const Real& x);

struct ZetaEvaluation {
  Complex value;
  int order = 0;       // number of alternating-series terms used
  Real error_bound{0}; // a-priori bound on |computed - zeta(s)|
};

// zeta(s) for Re s > 0 from the alternating (eta) series with
// Cohen-Villegas-Zagier acceleration:
//   zeta(s) = eta(s) / (1 - 2^{1-s}).
// The order n is the smallest one whose a-priori bound
//   2 Gamma(sigma) / (|Gamma(s)| d_n |1 - 2^{1-s}|),  d_n ~ (3+sqrt 8)^n / 2
// is below max(rel_tol |zeta|, abs_floor); capped at kMaxZetaOrder.
inline constexpr int kMaxZetaOrder = 120;

ZetaEvaluation zeta_reference_detailed(const Complex& s, const ToleranceBudget& budget);

inline Complex zeta_reference(const Complex& s, const ToleranceBudget& budget) {
  return zeta_reference_detailed(s, budget).value;
}

// Fixed-order evaluation; no cap, used for self-consistency checks.
Complex zeta_with_order(const Complex& s, int order);

Real zeta_error_bound(const Complex& s, int order);

// pi^{-s/2} Gamma(s/2), the prefactor of the completed zeta function.
Complex completed_prefactor(const Complex& s);

}  // namespace zlab
