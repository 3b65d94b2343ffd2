#include "spinbell/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinbell/error.hpp"
#include "spinbell/gibbs.hpp"
#include "spinbell/independence.hpp"
#include "spinbell/parallel.hpp"

namespace spinbell {

void validate(const SearchProblem& problem) {
  if (problem.params.empty()) throw_input("search needs at least one free parameter");
  for (const auto& p : problem.params) {
    if (!std::isfinite(p.lower) || !std::isfinite(p.upper) || p.lower > p.upper)
      throw_input("parameter '" + p.name + "' has invalid bounds");
    if (p.kind == ParameterKind::field && p.sites.empty())
      throw_input("field parameter '" + p.name + "' names no sites");
    if (p.kind == ParameterKind::beta && !(p.lower > 0.0))
      throw_input("beta parameter '" + p.name + "' must have a positive lower bound");
    for (Site s : p.sites)
      if (s >= problem.base.n_sites) throw_input("parameter '" + p.name + "' names a site outside the lattice");
  }
}

LatticeSpec apply_parameters(const SearchProblem& problem, const std::vector<double>& values) {
  if (values.size() != problem.params.size()) throw_input("parameter vector has the wrong length");
  LatticeSpec spec = problem.base;
  const bool tie = problem.mirror_tied && spec.mirror_map.size() == spec.n_sites;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto& p = problem.params[k];
    const double v = values[k];
    switch (p.kind) {
      case ParameterKind::field:
        for (Site s : p.sites) {
          spec.fields[s] = v;
          if (tie) spec.fields[spec.mirror_map[s]] = v;
        }
        break;
      case ParameterKind::coupling:
        for (auto& e : spec.edges) e.coupling = v;
        break;
      case ParameterKind::beta:
        spec.beta = v;
        break;
    }
  }
  return spec;
}

double evaluate_objective(const SearchProblem& problem, const std::vector<double>& values) {
  const LatticeSpec spec = apply_parameters(problem, values);
  const auto dist = build_distribution(spec);
  const auto conv = problem.objective == Objective::max_convention ? SignConvention::max : problem.convention;
  return chsh(dist, spec.roles, conv).x_bi;
}

std::vector<SweepRow> grid_sweep(const SearchProblem& problem, std::size_t resolution, std::size_t budget) {
  validate(problem);
  require_valid(problem.base);
  if (resolution == 0) throw_input("resolution must be positive");
  const std::size_t dims = problem.params.size();
  std::size_t total = 1;
  for (std::size_t d = 0; d < dims; ++d) {
    if (total > budget / resolution) throw_cap("grid exceeds the evaluation budget of " + std::to_string(budget));
    total *= resolution;
  }
  if (total > budget) throw_cap("grid exceeds the evaluation budget of " + std::to_string(budget));

  std::vector<SweepRow> rows(total);
  parallel_for(total, [&](std::size_t b, std::size_t e) {
    for (std::size_t g = b; g < e; ++g) {
      SweepRow& row = rows[g];
      row.grid_index = g;
      row.values.resize(dims);
      std::size_t rem = g;
      for (std::size_t d = dims; d-- > 0;) {
        const std::size_t k = rem % resolution;
        rem /= resolution;
        const auto& p = problem.params[d];
        row.values[d] = resolution == 1 ? p.lower
                                        : p.lower + (p.upper - p.lower) * static_cast<double>(k) /
                                                        static_cast<double>(resolution - 1);
      }
      const LatticeSpec spec = apply_parameters(problem, row.values);
      const auto dist = build_distribution(spec);
      const auto conv = problem.objective == Objective::max_convention ? SignConvention::max : problem.convention;
      row.x_bi = chsh(dist, spec.roles, conv).x_bi;
      if (!spec.roles.hidden.empty()) {
        const auto rep = diagnose(dist, spec.roles);
        row.mi = rep.mi.value;
        row.oi = rep.oi.value;
        row.pi = rep.pi.value;
        row.factorability = rep.factorability.value;
      }
    }
  });
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.x_bi > b.x_bi; });
  return rows;
}

MaximizeResult local_maximize(const SearchProblem& problem, const std::vector<double>& start,
                              const MaximizeOptions& options) {
  validate(problem);
  if (start.size() != problem.params.size()) throw_input("start vector has the wrong length");
  for (std::size_t k = 0; k < start.size(); ++k)
    if (!(start[k] >= problem.params[k].lower && start[k] <= problem.params[k].upper))
      throw_input("start value for '" + problem.params[k].name + "' is outside its bounds");
  if (!(options.initial_step > 0.0) || !(options.tolerance > 0.0)) throw_input("step and tolerance must be positive");

  MaximizeResult res;
  res.values = start;
  res.objective = evaluate_objective(problem, start);
  res.evaluations = 1;
  double step = options.initial_step;
  res.trace.push_back({res.values, res.objective, step});

  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    bool improved = false;
    for (std::size_t k = 0; k < res.values.size(); ++k) {
      const auto& p = problem.params[k];
      for (double dir : {1.0, -1.0}) {
        std::vector<double> cand = res.values;
        cand[k] = std::clamp(cand[k] + dir * step, p.lower, p.upper);
        if (cand[k] == res.values[k]) continue;
        const double f = evaluate_objective(problem, cand);
        ++res.evaluations;
        if (f > res.objective) {
          res.values = std::move(cand);
          res.objective = f;
          res.trace.push_back({res.values, res.objective, step});
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      if (step < options.tolerance) {
        res.converged = true;
        break;
      }
    }
  }
  return res;
}

namespace {

GeometryResult evaluate_geometry(const Geometry& g, const ReproductionOptions& opt) {
  GeometryResult r;
  r.geometry = g.name;
  {
    const LatticeSpec spec = with_uniform(g, 1.0, 1.4);
    r.x_point1 = chsh(build_distribution(spec), spec.roles).x_bi;
  }
  auto consider = [&](double h7, double x) {
    if (std::abs(x - ReproductionReport::kTarget2) < std::abs(r.x_point2 - ReproductionReport::kTarget2)) {
      r.x_point2 = x;
      r.best_h7 = h7;
    }
  };
  r.x_point2 = std::numeric_limits<double>::infinity();
  r.x_point2_max = -std::numeric_limits<double>::infinity();
  const std::size_t steps = std::max<std::size_t>(opt.h7_steps, 2);
  for (std::size_t k = 0; k < steps; ++k) {
    const double h7 = opt.h7_lower + (opt.h7_upper - opt.h7_lower) * static_cast<double>(k) / double(steps - 1);
    const LatticeSpec spec = second_parameter_set(g, h7);
    const double x = chsh(build_distribution(spec), spec.roles).x_bi;
    consider(h7, x);
    r.x_point2_max = std::max(r.x_point2_max, x);
  }

  SearchProblem problem;
  problem.base = second_parameter_set(g, 0.0);
  const auto site7 = problem.base.find_site("7");
  if (!site7) throw_input("geometry '" + g.name + "' has no site labelled 7");
  problem.params.push_back({"h7", ParameterKind::field, {*site7}, opt.h7_lower, opt.h7_upper});
  r.x_point2_local_max = -std::numeric_limits<double>::infinity();
  for (double start : {0.4, 1.9}) {
    if (start < opt.h7_lower || start > opt.h7_upper) continue;
    const auto m = local_maximize(problem, {start});
    r.x_point2_local_max = std::max(r.x_point2_local_max, m.objective);
    consider(m.values[0], m.objective);
  }
  return r;
}

}  // namespace

ReproductionReport reproduce_paper_points(const std::vector<Geometry>& family, const ReproductionOptions& options) {
  ReproductionReport rep;
  rep.tolerance = options.tolerance;
  if (family.empty()) {
    rep.no_admissible_geometry = true;
    return rep;
  }
  rep.geometries.resize(family.size());
  parallel_for(family.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) rep.geometries[i] = evaluate_geometry(family[i], options);
  });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.geometries.size(); ++i) {
    const auto& g = rep.geometries[i];
    const double d1 = std::abs(g.x_point1 - ReproductionReport::kTarget1);
    const double d2 = std::abs(g.x_point2 - ReproductionReport::kTarget2);
    if (std::max(d1, d2) < best) {
      best = std::max(d1, d2);
      rep.best_index = i;
    }
    if (d1 <= options.tolerance && d2 <= options.tolerance) {
      rep.reproduced = true;
      rep.matching.push_back(g.geometry);
    }
  }
  return rep;
}

}  // namespace spinbell
