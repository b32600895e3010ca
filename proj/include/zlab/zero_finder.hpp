#pragma once

// Zeros on the critical line as sign changes of g(t) = Re f(1/2 + it).
// On the line 1 - s = conj(s), so f(s) + f(1-s) = 2 Re f(s) is real and
// proportional to Omega; g vanishes exactly where f is purely imaginary.

#include "zlab/series_core.hpp"

#include <string>
#include <vector>

namespace zlab {

struct Bracket {
  Real lo{0};
  Real hi{0};
};

struct ZeroRecord {
  Real ordinate{0};
  Real residual_omega{0};  // |Omega_G(1/2 + i t*)|
  Real residual_ref{0};    // |Re f(1/2 + i t*)|
  int iterations = 0;
  Bracket bracket;         // final bracket, lo < t* < hi
};

// g is evaluated at rel_tol <= kLineRelTol whatever the caller's budget:
// |g'| is ~1e-5 near the first zeros, so a 1e-10 relative f would move
// the root by ~1e-6.
inline const Real kLineRelTol = Real(1e-22);

ToleranceBudget line_budget(const ToleranceBudget& budget);

Real critical_line_g(const Real& t, const ToleranceBudget& budget, const CoefficientTable& table);

// Grid t_lo, t_lo + step, ..., t_hi (the last cell may be shorter). Any
// evaluation failure aborts the scan; the exception names the failing t.
std::vector<Bracket> scan_brackets(const Real& t_lo, const Real& t_hi, const Real& step,
                                   const ToleranceBudget& budget, const CoefficientTable& table,
                                   int jobs = 1);

// Bisection with secant proposals kept strictly inside the bracket. Stops
// once the bracket is no wider than tol. BracketError if g does not change
// sign on entry.
ZeroRecord refine_zero(const Bracket& bracket, const Real& tol, const ToleranceBudget& budget,
                       const CoefficientTable& table);

// tol is taken as the record's bracket width.
bool verify_zero(const ZeroRecord& record, const ToleranceBudget& budget,
                 const CoefficientTable& table);

// Same record reflected to -t*.
ZeroRecord conjugate_record(const ZeroRecord& record);

std::string zeros_csv(const std::vector<ZeroRecord>& zeros);
std::string zeros_json(const std::vector<ZeroRecord>& zeros);

}  // namespace zlab
