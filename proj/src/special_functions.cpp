#include "zlab/special_functions.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <array>
#include <sstream>

namespace zlab {

std::string describe(const Complex& z) {
  std::ostringstream out;
  out.precision(17);
  out << to_double(z.real()) << (z.imag() < 0 ? "" : "+") << to_double(z.imag()) << "i";
  return out.str();
}

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

const Real kHalfLog2Pi = log(2 * kPi) / 2;

void guard_nonpositive_integer(const Complex& z, const char* who) {
  if (z.real() > kPoleGuard) return;
  Real nearest = round(z.real());
  if (abs(Complex(z.real() - nearest, z.imag())) < kPoleGuard) {
    throw PoleError(std::string(who) + ": argument " + describe(z) + " is at a pole");
  }
}

// log of the Lanczos sum; requires Re z >= 1/2.
Complex lanczos_log(const Complex& z) {
  Complex w = z - Real(1);
  Complex sum(kLanczosCoefficients[0]);
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    sum += Real(kLanczosCoefficients[i]) / (w + Real(i));
  }
  Complex t = w + Real(kLanczosG + 0.5);
  return kHalfLog2Pi + (w + Real(0.5)) * log(t) - t + log(sum);
}

}  // namespace

Complex gamma_complex(const Complex& z) {
  guard_nonpositive_integer(z, "gamma_complex");
  if (z.real() < Real(0.5)) {
    // Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return kPi / (sin(kPi * z) * gamma_complex(Complex(1) - z));
  }
  return exp(lanczos_log(z));
}

Complex log_gamma_complex(const Complex& z) {
  if (z.real() < Real(0.5)) {
    throw PreconditionError("log_gamma_complex requires Re z >= 1/2");
  }
  return lanczos_log(z);
}

Real log_gamma_real(const Real& x) {
  if (!(x > 0)) throw PreconditionError("log_gamma_real requires x > 0");
  if (x < Real(0.5)) {
    // Gamma(x) = Gamma(x+1)/x keeps the argument inside the Lanczos window.
    return lanczos_log(Complex(x + 1)).real() - log(x);
  }
  return lanczos_log(Complex(x)).real();
}

Complex upper_incomplete_gamma(const Complex& a, const Real& x, int max_iterations) {
  if (x < Real(1e-6)) {
    throw PreconditionError("upper_incomplete_gamma requires x >= 1e-6");
  }
  const Real tiny(1e-30);
  const Real eps = 4 * kEpsilon;

  auto rescue = [&](Complex v) { return abs(v) < tiny ? Complex(tiny) : v; };

  Complex b = rescue(x + Real(1) - a);
  Complex c = Complex(1) / tiny;
  Complex d = Complex(1) / b;
  Complex h = d;
  for (int i = 1; i <= max_iterations; ++i) {
    Complex an = -Real(i) * (Real(i) - a);
    b += Real(2);
    d = rescue(an * d + b);
    c = rescue(b + an / c);
    d = Complex(1) / d;
    Complex delta = d * c;
    h *= delta;
    if (abs(delta - Real(1)) <= eps) {
      return exp(a * log(x) - x) * h;
    }
  }
  throw ConvergenceError("upper_incomplete_gamma: continued fraction did not converge for a=" +
                         describe(a) + ", x=" + std::to_string(to_double(x)));
}

Complex lower_incomplete_gamma(const Complex& a, const Real& x) {
  return gamma_complex(a) - upper_incomplete_gamma(a, x);
}

Real erfc_real(const Real& x) { return boost::math::erfc(x); }

Complex completed_prefactor(const Complex& s) {
  Complex half = s / Real(2);
  return exp(-half * log(kPi)) * gamma_complex(half);
}

namespace {

Complex one_minus_two_pow(const Complex& s) {
  return Complex(1) - exp((Complex(1) - s) * log(Real(2)));
}

Real chebyshev_denominator(int order) {
  Real q = pow(3 + sqrt(Real(8)), order);
  return (q + 1 / q) / 2;
}

// Gamma(sigma) / |Gamma(s)|: the L1 norm of the moment density of (k+1)^{-s}.
Real moment_norm(const Complex& s) {
  Real num = exp(log_gamma_real(s.real()));
  return num / abs(gamma_complex(s));
}

Real error_bound_with(int order, const Real& norm, const Real& denom_abs) {
  return 2 * norm / (chebyshev_denominator(order) * denom_abs);
}

void check_zeta_domain(const Complex& s) {
  if (!(s.real() > 0)) {
    throw DomainError("zeta_reference requires Re s > 0, got " + describe(s));
  }
  if (abs(s - Real(1)) < kPoleGuard) {
    throw PoleError("zeta_reference: s=" + describe(s) + " is at the pole s=1");
  }
}

}  // namespace

Real zeta_error_bound(const Complex& s, int order) {
  check_zeta_domain(s);
  return error_bound_with(order, moment_norm(s), abs(one_minus_two_pow(s)));
}

Complex zeta_with_order(const Complex& s, int order) {
  check_zeta_domain(s);
  if (order < 1) throw PreconditionError("zeta_with_order requires order >= 1");
  Complex denom = one_minus_two_pow(s);
  if (abs(denom) < kPoleGuard) {
    throw PoleError("zeta_reference: 1 - 2^{1-s} vanishes at s=" + describe(s));
  }
  const Real n(order);
  Real d = chebyshev_denominator(order);
  Real b = -1;
  Real c = -d;
  Complex sum(0);
  for (int k = 0; k < order; ++k) {
    const Real kr(k);
    c = b - c;
    sum += c * exp(-s * log(kr + 1));
    b = (kr + n) * (kr - n) * b / ((kr + Real(0.5)) * (kr + 1));
  }
  return sum / d / denom;
}

ZetaEvaluation zeta_reference_detailed(const Complex& s, const ToleranceBudget& budget) {
  check_zeta_domain(s);
  const Real norm = moment_norm(s);
  const Real denom_abs = abs(one_minus_two_pow(s));
  if (denom_abs < kPoleGuard) {
    throw PoleError("zeta_reference: 1 - 2^{1-s} vanishes at s=" + describe(s));
  }

  auto order_for = [&](const Real& target) {
    for (int n = 1; n <= kMaxZetaOrder; ++n) {
      if (error_bound_with(n, norm, denom_abs) <= target) return n;
    }
    throw ConvergenceError("zeta_reference: acceleration order " + std::to_string(kMaxZetaOrder) +
                           " insufficient at s=" + describe(s));
  };

  const Real first_target = budget.rel_tol > budget.abs_floor ? budget.rel_tol : budget.abs_floor;
  int order = order_for(first_target);
  Complex value = zeta_with_order(s, order);

  // Tighten to a relative target once the magnitude is known.
  const Real target = budget.tolerance_for(abs(value) / 2);
  if (error_bound_with(order, norm, denom_abs) > target) {
    order = order_for(target);
    value = zeta_with_order(s, order);
  }
  return ZetaEvaluation{value, order, error_bound_with(order, norm, denom_abs)};
}

}  // namespace zlab
