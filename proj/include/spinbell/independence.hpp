#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinbell/gibbs.hpp"
#include "spinbell/lattice.hpp"

namespace spinbell {

/// P(sigma1, sigma2, sigma_a, sigma_b, lambda) for one hidden-site subset.
/// Bit n of a lambda index is set iff subset[n] is +1.
class BellJointTable {
 public:
  BellJointTable(std::vector<Site> subset, std::vector<double> cells);

  const std::vector<Site>& subset() const { return subset_; }
  std::uint64_t lambda_count() const { return std::uint64_t{1} << subset_.size(); }
  double at(int s1, int s2, int a, int b, std::uint64_t lambda) const {
    return cells_[offset(s1, s2, a, b) + lambda];
  }
  /// Marginalises onto a subset given by positions into subset().
  BellJointTable project(const std::vector<std::size_t>& positions) const;

  static std::uint64_t block(int s1, int s2, int a, int b) {
    return ((((s1 > 0) * 2u + (s2 > 0)) * 2u + (a > 0)) * 2u + (b > 0));
  }

 private:
  std::uint64_t offset(int s1, int s2, int a, int b) const { return block(s1, s2, a, b) << subset_.size(); }

  std::vector<Site> subset_;
  std::vector<double> cells_;
};

BellJointTable collect_joint(const DistributionTable& dist, const RoleAssignment& roles,
                             const std::vector<Site>& lambda_subset);

/// The assignment that attains a deviation. Unused fields stay 0.
struct Witness {
  int sigma1 = 0;
  int sigma2 = 0;
  int a = 0;
  int b = 0;
  int a_alt = 0;
  int b_alt = 0;
  std::uint64_t lambda = 0;
  std::string term;
};

struct Deviation {
  double value = 0.0;
  Witness witness;
};

/// max over setting pairs s, s' and lambda of |P(lambda|s) - P(lambda|s')|.
Deviation mi_deviation(const BellJointTable& t);
/// Largest total-variation distance between P(lambda|s) and P(lambda|s').
double mi_total_variation(const BellJointTable& t);
/// max |P(s1|s2,a,b,l) - P(s1|a,b,l)|, both directions.
Deviation oi_deviation(const BellJointTable& t);
/// max |P(s2|a,b,l) - P(s2|b,l)| and |P(s1|a,b,l) - P(s1|a,l)|.
Deviation pi_deviation(const BellJointTable& t);
/// max |P(s1,s2|a,b,l) - P(s1|a,l) P(s2|b,l)|.
Deviation factorability_deviation(const BellJointTable& t);

struct IndependenceReport {
  std::vector<Site> lambda_subset;
  Deviation mi;
  Deviation oi;
  Deviation pi;
  Deviation factorability;
  double mi_total_variation = 0.0;
};

IndependenceReport diagnose(const BellJointTable& t);
/// Empty subsets and sites outside the hidden set are input errors.
IndependenceReport diagnose(const DistributionTable& dist, const RoleAssignment& roles,
                            const std::vector<Site>& lambda_subset);
inline IndependenceReport diagnose(const DistributionTable& dist, const RoleAssignment& roles) {
  return diagnose(dist, roles, roles.hidden);
}

inline constexpr std::size_t kMaxSweepHidden = 8;

/// Every non-empty subset of roles.hidden, ordered by subset bitmask (bit k
/// selects roles.hidden[k]). More than kMaxSweepHidden hidden sites is a
/// resource-cap error.
std::vector<IndependenceReport> sweep_subsets(const DistributionTable& dist, const RoleAssignment& roles);

}  // namespace spinbell
