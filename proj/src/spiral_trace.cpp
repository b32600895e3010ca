#include "zlab/spiral_trace.hpp"

#include "zlab/report_io.hpp"

#include <algorithm>
#include <functional>

namespace zlab {

AnchorMode anchor_from_string(const std::string& name) {
  if (name == "origin" || name == "ORIGIN") return AnchorMode::ORIGIN;
  if (name == "reg" || name == "REGULARIZED_LIMIT") return AnchorMode::REGULARIZED_LIMIT;
  if (name == "q" || name == "MINUS_1_OVER_S") return AnchorMode::MINUS_1_OVER_S;
  throw PreconditionError("unknown anchor '" + name + "' (origin, reg, q)");
}

std::string to_string(AnchorMode mode) {
  switch (mode) {
    case AnchorMode::ORIGIN: return "ORIGIN";
    case AnchorMode::REGULARIZED_LIMIT: return "REGULARIZED_LIMIT";
    case AnchorMode::MINUS_1_OVER_S: return "MINUS_1_OVER_S";
  }
  return "?";
}

namespace {

const Real kTwoPi = 2 * kPi;

// Points and radial distances from a term list.
void accumulate(SpiralTrace& trace, const std::vector<Complex>& terms) {
  trace.points.assign(1, Complex(0));
  for (const auto& t : terms) trace.points.push_back(trace.points.back() + t);
  trace.radial.clear();
  for (const auto& p : trace.points) trace.radial.push_back(abs(p - trace.anchor));
}

}  // namespace

SpiralTrace trace_J(const Complex& s, int M, AnchorMode anchor, const ToleranceBudget& budget,
                    const CoefficientTable& table, TraceSeries series) {
  if (M < 1 || M > kMaxTraceTerms) throw PreconditionError("trace length must be in [1, 150]");
  if (M > table.max_order()) throw PreconditionError("coefficient table shorter than trace");
  if (s.imag() == 0) throw PreconditionError("trace_J needs t != 0");

  const Complex a = s / Real(2);
  const int j_terms = series == TraceSeries::J ? M : M - 1;

  std::vector<Complex> terms;
  std::vector<Real> args;
  terms.reserve(M);
  if (series == TraceSeries::NEG_F) {
    terms.push_back(Complex(1) / s);
    args.push_back(arg(terms.back()));
  }
  if (j_terms >= 1) {
    Complex term = exp(table.log_value(1)) / a;
    Real theta = -arg(a);
    if (series == TraceSeries::NEG_F) {
      // continue the unwrapped argument from 1/s
      Real step = arg(term / terms.back());
      theta = args.back() + step;
    }
    for (int m = 1; m <= j_terms; ++m) {
      terms.push_back(term);
      args.push_back(theta);
      if (m == j_terms) break;
      Complex factor = a + Real(m);
      term *= table.ratio(m) / factor;
      theta -= arg(factor);
    }
  }

  SpiralTrace trace;
  trace.label = std::string(series == TraceSeries::J ? "J" : "-f") + " at s=" + describe(s);
  switch (anchor) {
    case AnchorMode::ORIGIN: trace.anchor = Complex(0); break;
    case AnchorMode::MINUS_1_OVER_S: trace.anchor = -Complex(1) / s; break;
    case AnchorMode::REGULARIZED_LIMIT: {
      Complex j = eval_J(s, Strategy::REGULARIZED, budget, table).value;
      trace.anchor = series == TraceSeries::J ? j : Complex(1) / s + j;
      break;
    }
  }
  accumulate(trace, terms);
  for (std::size_t i = 0; i < terms.size(); ++i) trace.term_abs.push_back(abs(terms[i]));
  trace.term_arg = args;

  trace.unfasten.assign(M, std::nullopt);
  if (series == TraceSeries::J) {
    const Real half_t = abs(s.imag()) / 2;
    for (int m = 2; m <= M; ++m) {
      trace.unfasten[m - 1] = atan(half_t / (s.real() / 2 + Real(m - 1)));
    }
  }
  return trace;
}

PolygonGeometry polygon_geometry(const Real& theta, const Real& side) {
  if (!(theta > 0 && theta < kPi)) throw PreconditionError("polygon turn must be in (0, pi)");
  if (!(side > 0)) throw PreconditionError("polygon side must be positive");
  PolygonGeometry g;
  Complex turn = exp(Complex(Real(0), theta));
  g.center = side * turn / (Complex(1) - turn);
  g.circumradius = side / (2 * sin(theta / 2));
  Real k = kTwoPi / theta;
  Real nearest = round(k);
  g.closes = abs(k - nearest) <= Real(1e-12) * k;
  g.sectors = g.closes ? static_cast<int>(nearest) : static_cast<int>(ceil(k));
  if (!g.closes) g.beta = kTwoPi - Real(g.sectors - 1) * theta;
  return g;
}

SpiralTrace generate_U(const Real& theta, const Real& side, int M) {
  PolygonGeometry g = polygon_geometry(theta, side);
  if (M < 1) throw PreconditionError("generate_U needs M >= 1");
  SpiralTrace trace;
  trace.label = "U theta=" + io::format_number(theta);
  trace.anchor = g.center;
  std::vector<Complex> terms;
  for (int m = 1; m <= M; ++m) {
    terms.push_back(side * exp(Complex(Real(0), Real(m) * theta)));
    trace.term_abs.push_back(side);
    trace.term_arg.push_back(Real(m) * theta);
  }
  trace.unfasten.assign(M, std::nullopt);
  accumulate(trace, terms);
  return trace;
}

namespace {

SpiralTrace mu_from(const Real& theta, const Real& first_abs, int M,
                    const std::function<Real(int)>& ratio_at) {
  if (!(theta > 0 && theta < kPi / 2)) throw PreconditionError("mu turn must be in (0, pi/2)");
  if (!(first_abs > 0)) throw PreconditionError("mu first term must be positive");
  if (M < 1) throw PreconditionError("generate_mu needs M >= 1");
  SpiralTrace trace;
  std::vector<Complex> terms;
  Real magnitude = first_abs;
  for (int m = 1; m <= M; ++m) {
    terms.push_back(magnitude * exp(Complex(Real(0), Real(m) * theta)));
    trace.term_abs.push_back(magnitude);
    trace.term_arg.push_back(Real(m) * theta);
    if (m < M) magnitude *= ratio_at(m);
  }
  trace.unfasten.assign(M, std::nullopt);
  accumulate(trace, terms);
  return trace;
}

void reanchor(SpiralTrace& trace, const Complex& anchor) {
  trace.anchor = anchor;
  trace.radial.clear();
  for (const auto& p : trace.points) trace.radial.push_back(abs(p - anchor));
}

}  // namespace

Complex mu_limit(const Real& theta, const Real& first_abs, const Real& ratio) {
  Complex turn = exp(Complex(Real(0), theta));
  return first_abs * turn / (Complex(1) - ratio * turn);
}

SpiralTrace generate_mu(const Real& theta, const Real& first_abs, const Real& ratio, int M) {
  if (!(ratio > 0 && ratio < 1)) throw PreconditionError("mu ratio must be in (0, 1)");
  SpiralTrace trace = mu_from(theta, first_abs, M, [&](int) { return ratio; });
  trace.label = "mu theta=" + io::format_number(theta) + " ratio=" + io::format_number(ratio);
  reanchor(trace, mu_limit(theta, first_abs, ratio));
  return trace;
}

SpiralTrace generate_mu(const Real& theta, const Real& first_abs, const std::vector<Real>& ratios,
                        int M) {
  if (static_cast<int>(ratios.size()) < M - 1) {
    throw PreconditionError("mu schedule needs M - 1 ratios");
  }
  for (const auto& r : ratios) {
    if (!(r > 0 && r <= 1)) throw PreconditionError("mu schedule ratios must be in (0, 1]");
  }
  SpiralTrace trace = mu_from(theta, first_abs, M, [&](int m) { return ratios[m - 1]; });
  trace.label = "mu theta=" + io::format_number(theta) + " schedule";
  reanchor(trace, trace.points.back());
  return trace;
}

PartialCircleSeq try_enclosing_radii(const SpiralTrace& trace) {
  const int n = trace.terms();
  if (n < 2) throw PreconditionError("enclosing circles need at least two terms");
  Real turn = abs(trace.term_arg[1] - trace.term_arg[0]);
  if (!(turn > 0 && turn < kPi)) {
    throw PreconditionError("first turn of the trace must lie in (0, pi)");
  }
  // U circumcircle through P_0 and P_1 for the first side, turning the same way
  Real direction = trace.term_arg[1] > trace.term_arg[0] ? 1 : -1;
  Complex first = trace.points[1] - trace.points[0];
  Complex rotation = exp(Complex(Real(0), direction * turn));

  PartialCircleSeq out;
  out.circles.centers.push_back(trace.points[0] + first / (Complex(1) - rotation));
  out.circles.radii.push_back(trace.term_abs[0] / (2 * sin(turn / 2)));
  for (int k = 1; k < n; ++k) {
    const Real& prev = trace.term_abs[k - 1];
    const Real& next = trace.term_abs[k];
    if (!(next < prev)) {
      out.first_non_decreasing = k + 1;
      break;
    }
    Real scale = next / prev;
    const Complex& pivot = trace.points[k];
    out.circles.tangency.push_back(pivot);
    out.circles.centers.push_back(pivot + (out.circles.centers.back() - pivot) * scale);
    out.circles.radii.push_back(out.circles.radii.back() * scale);
  }
  return out;
}

CircleSeq enclosing_radii(const SpiralTrace& trace) {
  PartialCircleSeq partial = try_enclosing_radii(trace);
  if (partial.first_non_decreasing) {
    int k = *partial.first_non_decreasing;
    throw MonotonicityError("term magnitudes stop decreasing at m=" + std::to_string(k) +
                                " in trace '" + trace.label + "'",
                            k);
  }
  return partial.circles;
}

std::vector<Real> curvature_profile(const SpiralTrace& trace) {
  const auto& p = trace.points;
  if (p.size() < 3) throw PreconditionError("curvature needs at least three points");
  std::vector<Real> out;
  out.reserve(p.size() - 2);
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    Complex u = p[i] - p[i - 1];
    Complex v = p[i + 1] - p[i];
    Complex w = p[i + 1] - p[i - 1];
    Real cross = u.real() * v.imag() - u.imag() * v.real();
    Real denom = abs(u) * abs(v) * abs(w);
    out.push_back(denom == 0 || cross == 0 ? Real(0) : 2 * abs(cross) / denom);
  }
  return out;
}

TraceConsistency check_consistency(const SpiralTrace& trace) {
  TraceConsistency out;
  for (int m = 1; m <= trace.terms(); ++m) {
    const Complex& a = trace.points[m - 1];
    const Complex& b = trace.points[m];
    const Real& want = trace.term_abs[m - 1];
    Real gap = abs(abs(b - a) - want);
    if (want > 0) out.max_relative_error = std::max(out.max_relative_error, gap / want);
    Real allowed = Real(1e-12) * want + 8 * kEpsilon * (abs(a) + abs(b));
    if (gap > allowed) out.ok = false;
  }
  return out;
}

namespace {

std::string opt(const std::optional<Real>& v) { return v ? io::format_number(*v) : ""; }

std::string opt_json(const std::optional<Real>& v) {
  return v ? io::format_number(*v) : "null";
}

}  // namespace

std::string trace_csv(const SpiralTrace& trace) {
  io::CsvTable table;
  table.columns = {"m", "re_partial", "im_partial", "term_abs", "theta_cum", "radial",
                   "unfasten_angle"};
  for (std::size_t m = 0; m < trace.points.size(); ++m) {
    std::optional<Real> abs_m, arg_m, unf;
    if (m > 0) {
      abs_m = trace.term_abs[m - 1];
      arg_m = trace.term_arg[m - 1];
      unf = trace.unfasten[m - 1];
    }
    table.rows.push_back({std::to_string(m), io::format_number(trace.points[m].real()),
                          io::format_number(trace.points[m].imag()), opt(abs_m), opt(arg_m),
                          io::format_number(trace.radial[m]), opt(unf)});
  }
  return table.render();
}

std::string trace_json(const SpiralTrace& trace) {
  std::string out = "{\n  \"label\": " + io::json_quote(trace.label) + ",\n";
  out += "  \"anchor\": {\"re\": " + io::format_number(trace.anchor.real()) +
         ", \"im\": " + io::format_number(trace.anchor.imag()) + "},\n";
  out += "  \"rows\": [\n";
  for (std::size_t m = 0; m < trace.points.size(); ++m) {
    std::optional<Real> abs_m, arg_m, unf;
    if (m > 0) {
      abs_m = trace.term_abs[m - 1];
      arg_m = trace.term_arg[m - 1];
      unf = trace.unfasten[m - 1];
    }
    out += "    {\"m\": " + std::to_string(m) +
           ", \"re_partial\": " + io::format_number(trace.points[m].real()) +
           ", \"im_partial\": " + io::format_number(trace.points[m].imag()) +
           ", \"term_abs\": " + opt_json(abs_m) + ", \"theta_cum\": " + opt_json(arg_m) +
           ", \"radial\": " + io::format_number(trace.radial[m]) +
           ", \"unfasten_angle\": " + opt_json(unf) + "}";
    out += m + 1 < trace.points.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

}  // namespace zlab
