#include "spinbell/chsh.hpp"

#include <algorithm>
#include <cmath>

#include "spinbell/error.hpp"
#include "spinbell/parallel.hpp"

namespace spinbell {

const char* to_string(SignConvention c) {
  switch (c) {
    case SignConvention::minus_mm:
      return "mm";
    case SignConvention::minus_mp:
      return "mp";
    case SignConvention::minus_pm:
      return "pm";
    case SignConvention::minus_pp:
      return "pp";
    case SignConvention::max:
      return "max";
  }
  return "?";
}

SignConvention parse_convention(const std::string& s) {
  if (s == "mm" || s == "eq4" || s == "default") return SignConvention::minus_mm;
  if (s == "mp") return SignConvention::minus_mp;
  if (s == "pm") return SignConvention::minus_pm;
  if (s == "pp") return SignConvention::minus_pp;
  if (s == "max") return SignConvention::max;
  throw_input("unknown sign convention '" + s + "' (expected mm, mp, pm, pp or max)");
}

double correlator(const DistributionTable& dist, const RoleAssignment& roles, int a, int b) {
  PartialAssignment given;
  given.set(roles.setting_a, a).set(roles.setting_b, b);
  double m = 0.0;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) {
      PartialAssignment target;
      target.set(roles.outcome1, s1).set(roles.outcome2, s2);
      m += s1 * s2 * conditional(dist, target, given);
    }
  return m;
}

double correlator_from_configurations(const DistributionTable& dist, const RoleAssignment& roles, int a, int b) {
  double num = 0.0, den = 0.0;
  for (std::uint64_t i = 0; i < dist.size(); ++i) {
    if (spin_of(i, roles.setting_a) != a || spin_of(i, roles.setting_b) != b) continue;
    const double p = dist.prob(i);
    num += spin_of(i, roles.outcome1) * spin_of(i, roles.outcome2) * p;
    den += p;
  }
  return num / den;
}

double chsh_value(const std::array<double, 4>& m, SignConvention convention) {
  auto with_minus = [&](std::size_t k) {
    double x = 0.0;
    for (std::size_t t = 0; t < 4; ++t) x += t == k ? -m[t] : m[t];
    return x;
  };
  switch (convention) {
    case SignConvention::minus_pp:
      return with_minus(0);
    case SignConvention::minus_mp:
      return with_minus(1);
    case SignConvention::minus_pm:
      return with_minus(2);
    case SignConvention::minus_mm:
      return with_minus(3);
    case SignConvention::max:
      return std::max({with_minus(0), with_minus(1), with_minus(2), with_minus(3)});
  }
  return with_minus(3);
}

ChshReport chsh(const DistributionTable& dist, const RoleAssignment& roles, SignConvention convention) {
  ChshReport rep;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto [a, b] = kSettingPairs[k];
    rep.m[k] = correlator(dist, roles, a, b);
    PartialAssignment s;
    s.set(roles.setting_a, a).set(roles.setting_b, b);
    rep.setting_probs[k] = marginal(dist, s);
  }
  if (convention == SignConvention::max) {
    rep.max_mode = true;
    // Placement order matches kSettingPairs; first maximum wins.
    constexpr SignConvention order[] = {SignConvention::minus_pp, SignConvention::minus_mp,
                                        SignConvention::minus_pm, SignConvention::minus_mm};
    rep.convention = order[0];
    rep.x_bi = chsh_value(rep.m, order[0]);
    for (auto c : order) {
      const double x = chsh_value(rep.m, c);
      if (x > rep.x_bi) {
        rep.x_bi = x;
        rep.convention = c;
      }
    }
  } else {
    rep.convention = convention;
    rep.x_bi = chsh_value(rep.m, convention);
  }
  return rep;
}

PairwiseCorrelation pairwise_correlations(const DistributionTable& dist, double threshold) {
  const std::size_t n = dist.n_sites();
  PairwiseCorrelation out;
  out.n = n;
  out.threshold = threshold;
  out.matrix.assign(n * n, 0.0);

  std::vector<double> up(n, 0.0);
  for (Site s = 0; s < n; ++s) {
    PartialAssignment e;
    e.set(s, 1);
    up[s] = marginal(dist, e);
  }
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (Site i = b; i < e; ++i)
      for (Site j = 0; j < n; ++j) {
        double worst = 0.0;
        for (int ei : {1, -1})
          for (int dj : {1, -1}) {
            double joint;
            if (i == j) {
              joint = ei == dj ? (ei == 1 ? up[i] : 1.0 - up[i]) : 0.0;
            } else {
              PartialAssignment pa;
              pa.set(i, ei).set(j, dj);
              joint = marginal(dist, pa);
            }
            const double pi = ei == 1 ? up[i] : 1.0 - up[i];
            const double pj = dj == 1 ? up[j] : 1.0 - up[j];
            worst = std::max(worst, std::abs(joint - pi * pj));
          }
        out.matrix[i * n + j] = worst;
      }
  });
  out.fully_correlated = n > 1;
  for (Site i = 0; i < n; ++i)
    for (Site j = 0; j < n; ++j)
      if (i != j && !(out.matrix[i * n + j] > threshold)) out.fully_correlated = false;
  return out;
}

}  // namespace spinbell
