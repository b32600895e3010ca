#pragma once

// Partial-sum polylines of the m-ordered series and of the model spirals U
// (equal sides, constant turn) and mu (shrinking sides, constant turn).

#include "zlab/series_core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zlab {

struct SpiralTrace {
  std::string label;
  Complex anchor;
  std::vector<Complex> points;    // P_0 = 0, P_1, ..., P_M
  std::vector<Real> term_abs;     // |T_m|, m = 1..M
  std::vector<Real> term_arg;     // cumulative argument of T_m, unwrapped
  std::vector<Real> radial;       // |P_m - anchor|, m = 0..M
  std::vector<std::optional<Real>> unfasten;  // per term; empty where undefined

  int terms() const { return static_cast<int>(term_abs.size()); }
};

enum class AnchorMode { ORIGIN, REGULARIZED_LIMIT, MINUS_1_OVER_S };
enum class TraceSeries { J, NEG_F };

AnchorMode anchor_from_string(const std::string& name);
std::string to_string(AnchorMode mode);

inline constexpr int kMaxTraceTerms = 150;

// M_ORDERED partial sums. For NEG_F the first term is 1/s and the rest are
// the J terms, so the polyline is the J polyline translated by 1/s.
// The unfastening channel u_m = arctan((|t|/2)/(sigma/2 + m - 1)), m >= 2,
// is attached for J traces. Requires t != 0 and 1 <= M <= 150.
SpiralTrace trace_J(const Complex& s, int M, AnchorMode anchor, const ToleranceBudget& budget,
                    const CoefficientTable& table, TraceSeries series = TraceSeries::J);

// Circle through every vertex of the equal-sided polygon with turn theta.
struct PolygonGeometry {
  Complex center;
  Real circumradius{0};
  bool closes = false;       // 2 pi / theta is an integer
  int sectors = 0;           // ceil(2 pi / theta)
  std::optional<Real> beta;  // 2 pi - (sectors - 1) theta when it does not close
};

PolygonGeometry polygon_geometry(const Real& theta, const Real& side);

// T_m = side e^{i m theta}. theta in (0, pi); anchored at the circumcenter.
SpiralTrace generate_U(const Real& theta, const Real& side, int M);

// T_1 = first_abs e^{i theta}, T_{m+1} = ratio_m e^{i theta} T_m, theta in (0, pi/2).
SpiralTrace generate_mu(const Real& theta, const Real& first_abs, const Real& ratio, int M);
SpiralTrace generate_mu(const Real& theta, const Real& first_abs, const std::vector<Real>& ratios,
                        int M);

// first_abs e^{i theta} / (1 - ratio e^{i theta})
Complex mu_limit(const Real& theta, const Real& first_abs, const Real& ratio);

struct CircleSeq {
  std::vector<Complex> centers;
  std::vector<Real> radii;
  std::vector<Complex> tangency;  // P_k, where circle k+1 touches circle k
};

// Nested circles: C_1 is the U circumcircle for the first side and the first
// turn; C_{k+1} is C_k shrunk about P_k by |T_{k+1}| / |T_k|.
// Throws MonotonicityError at the first term that does not shrink.
CircleSeq enclosing_radii(const SpiralTrace& trace);

struct PartialCircleSeq {
  CircleSeq circles;
  std::optional<int> first_non_decreasing;  // 1-based term index
};

PartialCircleSeq try_enclosing_radii(const SpiralTrace& trace);

// Inverse circumradius of each consecutive point triple (0 if collinear).
std::vector<Real> curvature_profile(const SpiralTrace& trace);

struct TraceConsistency {
  Real max_relative_error{0};  // max | |P_m - P_{m-1}| - |T_m| | / |T_m|
  bool ok = true;              // within 1e-12 |T_m| + 8 eps (|P_m| + |P_{m-1}|)
};

TraceConsistency check_consistency(const SpiralTrace& trace);

std::string trace_csv(const SpiralTrace& trace);
std::string trace_json(const SpiralTrace& trace);

}  // namespace zlab
