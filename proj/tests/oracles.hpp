#pragma once

// Test-only oracles. Nothing here calls into the library.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using Quad = long double;
using CQuad = std::complex<long double>;

// Adaptive 61-point Gauss-Kronrod on [a, b], real and imaginary parts separately.
inline CQuad integrate(const std::function<CQuad(Quad)>& f, Quad a, Quad b,
                       Quad tol = 1e-15L) {
  using boost::math::quadrature::gauss_kronrod;
  auto re = [&](Quad x) { return f(x).real(); };
  auto im = [&](Quad x) { return f(x).imag(); };
  Quad r = gauss_kronrod<Quad, 61>::integrate(re, a, b, 20, tol);
  Quad i = gauss_kronrod<Quad, 61>::integrate(im, a, b, 20, tol);
  return {r, i};
}

// int_x^inf u^{a-1} e^{-u} du, via u = x + v on a truncated range.
inline CQuad upper_gamma(CQuad a, Quad x) {
  auto f = [&](Quad v) {
    Quad u = x + v;
    return std::exp((a - 1.0L) * std::log(u) - u);
  };
  Quad upper = 120.0L + 4.0L * std::abs(a);
  return integrate(f, 0.0L, upper, 1e-16L);
}

// int_0^x u^{a-1} e^{-u} du = x^a int_0^inf e^{-a w} exp(-x e^{-w}) dw.
inline CQuad lower_gamma(CQuad a, Quad x) {
  auto f = [&](Quad w) { return std::exp(-a * w - x * std::exp(-w)); };
  Quad span = 100.0L / a.real();
  CQuad total = 0;
  // split the oscillatory range so each panel sees a few periods
  const int panels = 64;
  for (int k = 0; k < panels; ++k) {
    total += integrate(f, span * k / panels, span * (k + 1) / panels, 1e-16L);
  }
  return std::exp(a * std::log(CQuad(x))) * total;
}

// Euler integral Gamma(a) for real a > 0.
inline Quad gamma_euler(Quad a) {
  boost::math::quadrature::exp_sinh<Quad> integrator;
  auto f = [&](Quad t) { return std::pow(t, a - 1) * std::exp(-t); };
  return integrator.integrate(f, 0.0L, std::numeric_limits<Quad>::infinity());
}

// erfc(x) = 2/sqrt(pi) int_x^inf e^{-t^2} dt
inline Quad erfc_tail(Quad x) {
  boost::math::quadrature::exp_sinh<Quad> integrator;
  auto f = [](Quad t) { return std::exp(-t * t); };
  Quad tail = integrator.integrate(f, x, std::numeric_limits<Quad>::infinity());
  return 2 * tail / std::sqrt(3.141592653589793238462643383279502884L);
}

}  // namespace oracle
