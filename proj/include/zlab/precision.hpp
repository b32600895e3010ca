#pragma once

// Working precision and tolerance plumbing shared by every module.
//
// All series kernels run in IEEE binary128 (113-bit significand). Near the
// zeros on the critical line the completed zeta is the sum of O(1e-3) terms
// cancelling to O(1e-14); binary64 cannot resolve that to the accuracy the
// oracle comparisons need. Reports are emitted as binary64.

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>
#include <boost/math/constants/constants.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zlab {

using Real = boost::multiprecision::float128;
using Complex = boost::multiprecision::complex128;

inline const Real kPi = boost::math::constants::pi<Real>();
inline const Real kEpsilon = std::numeric_limits<Real>::epsilon();

// Distance from a pole of Gamma or zeta below which evaluation is refused.
inline const Real kPoleGuard = Real(1e-8);

inline double to_double(const Real& x) { return static_cast<double>(x); }

struct ToleranceBudget {
  Real rel_tol = Real(1e-10);
  Real abs_floor = Real(1e-30);
  int max_terms = 150;

  // Throws std::invalid_argument unless rel_tol > 0, abs_floor >= 0, max_terms >= 1.
  void validate() const;

  Real tolerance_for(const Real& magnitude) const {
    Real r = rel_tol * magnitude;
    return r > abs_floor ? r : abs_floor;
  }
};

inline ToleranceBudget default_budget() { return ToleranceBudget{}; }

// Error hierarchy. NumericError covers every failure of a numerical
// evaluation (the CLI maps it to exit status 2); PreconditionError is a
// caller mistake.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PoleError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

class MonotonicityError : public NumericError {
 public:
  MonotonicityError(const std::string& what, int index)
      : NumericError(what), index_(index) {}
  // First term index (1-based) whose magnitude fails to decrease.
  int index() const { return index_; }

 private:
  int index_;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void ToleranceBudget::validate() const {
  if (!(rel_tol > 0)) throw PreconditionError("rel_tol must be positive");
  if (abs_floor < 0) throw PreconditionError("abs_floor must be non-negative");
  if (max_terms < 1) throw PreconditionError("max_terms must be at least 1");
}

std::string describe(const Complex& z);

}  // namespace zlab
