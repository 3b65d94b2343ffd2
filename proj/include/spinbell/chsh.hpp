#pragma once

#include <array>
#include <string>
#include <vector>

#include "spinbell/gibbs.hpp"
#include "spinbell/lattice.hpp"

namespace spinbell {

/// Which of the four correlators carries the minus sign in
/// X = M(+,+) + M(-,+) + M(+,-) + M(-,-) with one term negated.
/// `minus_mm` is the textbook placement with a = b = +1, a' = b' = -1.
enum class SignConvention { minus_mm, minus_mp, minus_pm, minus_pp, max };

const char* to_string(SignConvention c);
SignConvention parse_convention(const std::string& s);

/// Setting pairs in the fixed order used by every array below:
/// (+,+), (-,+), (+,-), (-,-) as (setting_a, setting_b).
inline constexpr std::array<std::array<int, 2>, 4> kSettingPairs{{{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};

struct ChshReport {
  std::array<double, 4> m{};              // M(a,b) in kSettingPairs order
  std::array<double, 4> setting_probs{};  // P(sigma_a = a, sigma_b = b)
  double x_bi = 0.0;
  SignConvention convention = SignConvention::minus_mm;  // placement actually used
  bool max_mode = false;
};

/// Post-selected correlator: sum over sigma1, sigma2 of sigma1*sigma2*P(sigma1, sigma2 | a, b).
double correlator(const DistributionTable& dist, const RoleAssignment& roles, int a, int b);

/// Same quantity from the raw definition sum_theta sigma1 sigma2 P(theta | a, b).
double correlator_from_configurations(const DistributionTable& dist, const RoleAssignment& roles, int a, int b);

double chsh_value(const std::array<double, 4>& m, SignConvention convention);

ChshReport chsh(const DistributionTable& dist, const RoleAssignment& roles,
                SignConvention convention = SignConvention::minus_mm);

struct PairwiseCorrelation {
  std::size_t n = 0;
  std::vector<double> matrix;  // row-major n x n
  double threshold = 1e-9;
  bool fully_correlated = false;

  double at(Site i, Site j) const { return matrix[i * n + j]; }
};

/// Entry (i,j) = max over eps, delta of |P(s_i=eps, s_j=delta) - P(s_i=eps) P(s_j=delta)|.
PairwiseCorrelation pairwise_correlations(const DistributionTable& dist, double threshold = 1e-9);

}  // namespace spinbell
