#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinbell/chsh.hpp"
#include "spinbell/geometry.hpp"
#include "spinbell/lattice.hpp"

namespace spinbell {

enum class ParameterKind { field, coupling, beta };

/// One free dimension of a search. A field parameter sets h on every listed
/// site (and, with mirror tying, on their mirror images).
struct FreeParameter {
  std::string name;
  ParameterKind kind = ParameterKind::coupling;
  std::vector<Site> sites;
  double lower = 0.0;
  double upper = 1.0;
};

enum class Objective { fixed_convention, max_convention };

struct SearchProblem {
  LatticeSpec base;
  std::vector<FreeParameter> params;
  bool mirror_tied = false;
  Objective objective = Objective::fixed_convention;
  SignConvention convention = SignConvention::minus_mm;
};

/// Throws Error(input) for empty, non-finite or inverted bounds and for a
/// field parameter naming no sites.
void validate(const SearchProblem& problem);

/// base with the parameter values substituted.
LatticeSpec apply_parameters(const SearchProblem& problem, const std::vector<double>& values);

/// X_BI of the substituted spec under the problem's objective.
double evaluate_objective(const SearchProblem& problem, const std::vector<double>& values);

struct SweepRow {
  std::size_t grid_index = 0;
  std::vector<double> values;
  double x_bi = 0.0;
  double mi = 0.0;
  double oi = 0.0;
  double pi = 0.0;
  double factorability = 0.0;
};

inline constexpr std::size_t kDefaultSweepBudget = 250000;

/// Exhaustive evaluation on a `resolution`-point grid per parameter (bounds
/// inclusive). Rows are sorted by x_bi descending, ties by grid index.
/// Deviations use the full hidden set (0 when there is none).
std::vector<SweepRow> grid_sweep(const SearchProblem& problem, std::size_t resolution,
                                 std::size_t budget = kDefaultSweepBudget);

struct TracePoint {
  std::vector<double> values;
  double objective = 0.0;
  double step = 0.0;
};

struct MaximizeResult {
  std::vector<double> values;
  double objective = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
  std::vector<TracePoint> trace;  // accepted points, objective non-decreasing
};

struct MaximizeOptions {
  double initial_step = 0.1;
  double tolerance = 1e-6;
  std::size_t max_iterations = 10000;
};

/// Compass search: try +/- step on each coordinate in order, move to the first
/// improvement, halve the step when none improves; stop when step < tolerance.
MaximizeResult local_maximize(const SearchProblem& problem, const std::vector<double>& start,
                              const MaximizeOptions& options = {});

struct GeometryResult {
  std::string geometry;
  double x_point1 = 0.0;
  double best_h7 = 0.0;
  double x_point2 = 0.0;           // at best_h7 (closest to the target)
  double x_point2_max = 0.0;       // largest value seen over the h7 sweep
  double x_point2_local_max = 0.0; // best of the compass searches over h7
};

struct ReproductionReport {
  static constexpr double kTarget1 = 2.24;
  static constexpr double kTarget2 = 2.883;

  double tolerance = 0.05;
  std::vector<GeometryResult> geometries;
  bool no_admissible_geometry = false;
  bool reproduced = false;          // some geometry within tolerance of both
  std::size_t best_index = 0;       // geometry with the smallest max(|d1|, |d2|)
  std::vector<std::string> matching;
};

struct ReproductionOptions {
  double tolerance = 0.05;
  double h7_lower = 0.0;
  double h7_upper = 3.0;
  std::size_t h7_steps = 61;
};

/// Evaluates both published parameter sets on every geometry of `family`.
ReproductionReport reproduce_paper_points(const std::vector<Geometry>& family, const ReproductionOptions& options = {});

}  // namespace spinbell
