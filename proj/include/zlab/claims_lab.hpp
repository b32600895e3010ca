#pragma once

// Each check turns one statement about the series into numbers over a grid
// or a point list. Term-wise facts are asserted; statements about whole sums
// are measured and reported with witnesses.

#include "zlab/series_core.hpp"
#include "zlab/spiral_trace.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zlab {

struct RegionGrid {
  double sigma_min = 0.05;
  double sigma_max = 0.95;
  double t_min = 0.5;
  double t_max = 45.0;
  int sigma_steps = 19;  // points, endpoints included
  int t_steps = 179;
  bool exclude_critical_line = true;

  // Throws PreconditionError unless 0 < sigma_min < sigma_max < 1,
  // t_min < t_max and both step counts >= 2.
  void validate() const;

  // Columns within 1e-3 of sigma = 1/2 are dropped when excluding the line.
  std::vector<double> sigmas() const;
  std::vector<double> ts() const;

  bool operator==(const RegionGrid&) const = default;
};

inline constexpr double kCriticalLineOffset = 1e-3;

enum class ClaimId {
  CASE1_NONVANISHING,
  CASE2_MONOTONE,
  TERMWISE_ORDER,
  RATIO_LT1,
  LAMBDA_DOMINANCE,
  APPENDIX_SANDWICH,
  RECONSTRUCTION_SIGN,
  MONOTONE_RADIAL
};

enum class Verdict { HOLDS_ON_GRID, VIOLATED, MEASURED_ONLY };

std::string to_string(ClaimId id);
std::string to_string(Verdict verdict);
ClaimId claim_id_from_string(const std::string& name);
Verdict verdict_from_string(const std::string& name);

struct Region {
  std::optional<RegionGrid> grid;
  std::vector<std::pair<double, double>> points;  // (sigma, t) when not a grid

  bool operator==(const Region&) const = default;
};

struct Witness {
  double sigma = 0;
  double t = 0;
  double value = 0;

  bool operator==(const Witness&) const = default;
};

struct PointFailure {
  double sigma = 0;
  double t = 0;
  std::string message;

  bool operator==(const PointFailure&) const = default;
};

struct ClaimReport {
  ClaimId claim_id = ClaimId::CASE1_NONVANISHING;
  std::string label;
  Region region;
  Verdict verdict = Verdict::MEASURED_ONLY;
  std::optional<Witness> witness;
  std::map<std::string, double> metrics;
  std::vector<PointFailure> failures;
  // per-point sweep, also the CSV body
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  bool operator==(const ClaimReport&) const = default;
};

std::string report_json(const ClaimReport& report);
ClaimReport report_from_json(const std::string& text);
std::string report_csv(const ClaimReport& report);

// |f| over the grid (REGULARIZED) with the point-Q geometry: QO = 1/|s| and
// QA = QO + 2 c_1/|s|. Holds iff min |f| > abs_floor. Requires the line excluded.
ClaimReport check_case1(const RegionGrid& grid, const ToleranceBudget& budget,
                        const CoefficientTable& table, int jobs = 1);

struct Case1Geometry {
  Real qo{0};
  Real qa{0};
};
Case1Geometry case1_geometry(const Complex& s, const CoefficientTable& table);

// Per t-row: strict decrease of |f| in sigma (measured) and the pairing
// |f(1/2 - alpha + it)| > |f(1/2 + alpha + it)| for every alpha the row
// provides; f at 1 - sigma is evaluated directly. VIOLATED only if a gap is
// below minus the combined error estimates.
ClaimReport check_case2(const RegionGrid& grid, const ToleranceBudget& budget,
                        const CoefficientTable& table, int jobs = 1);

// theta_{m,J}(s) = sum_{k<m} arctan((|t|/2) / (sigma/2 + k)).
Real theta_arctan_sum(const Complex& s, int m);

// |T_m(s1)| > |T_m(s2)| and theta_m(s1) > theta_m(s2) for m <= M, plus the
// increment facts 0 < theta_{m+1} - theta_m < pi/2 and theta_m < m theta_1.
ClaimReport check_termwise(const Complex& s1, const Complex& s2, int M,
                           const CoefficientTable& table);

// rho_m = c_{m+1} / (c_m |s/2 + m|) < 1 for m <= M.
ClaimReport check_ratio(const Complex& s, int M, const CoefficientTable& table);

// |Lambda(s/2)| against the m-ordered partial sums of J; measured only.
ClaimReport check_lambda_dominance(const Complex& s, int M, const ToleranceBudget& budget,
                                   const CoefficientTable& table);

// Grid sweep of |Lambda(s/2)| - |J_reg(s)| and the m-ordered drift at M terms.
ClaimReport check_lambda_dominance_grid(const RegionGrid& grid, int M,
                                        const ToleranceBudget& budget,
                                        const CoefficientTable& table, int jobs = 1);

struct SandwichReports {
  ClaimReport paper_literal;  // erfc(1) / (2 sqrt x)
  ClaimReport corrected;      // erfc(sqrt(pi x)) / (2 sqrt x)
};

// lower <= Lambda(x) <= e^{-pi x} + lower for each x > 0.
SandwichReports check_appendix_sandwich(const std::vector<double>& x_grid);

// |sign (f(s) + f(1-s)) - Omega_G(s)| <= max(1e-8 |Omega_G|, abs_floor).
// The f pair is evaluated at a budget tightened to the size of Omega, since
// f(s) + f(1-s) cancels to Omega.
ClaimReport check_reconstruction(const std::vector<Complex>& points, int sign,
                                 const ToleranceBudget& budget, const CoefficientTable& table,
                                 int jobs = 1);
ClaimReport check_reconstruction(const RegionGrid& grid, int sign, const ToleranceBudget& budget,
                                 const CoefficientTable& table, int jobs = 1);

// Radial distances of the J trace from its anchor: counts of direction changes.
ClaimReport check_monotone_radial(const Complex& s, int M, AnchorMode anchor,
                                  const ToleranceBudget& budget, const CoefficientTable& table);

}  // namespace zlab
