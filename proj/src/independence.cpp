#include "spinbell/independence.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "spinbell/error.hpp"
#include "spinbell/parallel.hpp"

namespace spinbell {
namespace {

constexpr int kSpins[] = {1, -1};

// Sums over the chosen index dimensions of the joint table.
struct Marginals {
  const BellJointTable& t;

  double ab(int a, int b, std::uint64_t l) const {
    double s = 0.0;
    for (int s1 : kSpins)
      for (int s2 : kSpins) s += t.at(s1, s2, a, b, l);
    return s;
  }
  double ab(int a, int b) const {
    double s = 0.0;
    for (std::uint64_t l = 0; l < t.lambda_count(); ++l) s += ab(a, b, l);
    return s;
  }
  double s1_ab(int s1, int a, int b, std::uint64_t l) const { return t.at(s1, 1, a, b, l) + t.at(s1, -1, a, b, l); }
  double s2_ab(int s2, int a, int b, std::uint64_t l) const { return t.at(1, s2, a, b, l) + t.at(-1, s2, a, b, l); }
  // P(s1 | a, l): b and s2 summed out.
  double p1_given_a(int s1, int a, std::uint64_t l) const {
    return (s1_ab(s1, a, 1, l) + s1_ab(s1, a, -1, l)) / (ab(a, 1, l) + ab(a, -1, l));
  }
  double p2_given_b(int s2, int b, std::uint64_t l) const {
    return (s2_ab(s2, 1, b, l) + s2_ab(s2, -1, b, l)) / (ab(1, b, l) + ab(-1, b, l));
  }
};

void consider(Deviation& best, double value, const Witness& w) {
  if (value > best.value || best.witness.term.empty()) {
    best.value = value;
    best.witness = w;
  }
}

}  // namespace

BellJointTable::BellJointTable(std::vector<Site> subset, std::vector<double> cells)
    : subset_(std::move(subset)), cells_(std::move(cells)) {
  if (subset_.size() > 40 || cells_.size() != (std::uint64_t{16} << subset_.size()))
    throw_input("joint table size does not match subset");
}

BellJointTable BellJointTable::project(const std::vector<std::size_t>& positions) const {
  std::vector<Site> sub;
  for (auto p : positions) {
    if (p >= subset_.size()) throw_input("projection position out of range");
    sub.push_back(subset_[p]);
  }
  const std::size_t k = sub.size();
  std::vector<double> out(std::uint64_t{16} << k, 0.0);
  const std::uint64_t full_count = lambda_count();
  for (std::uint64_t blk = 0; blk < 16; ++blk)
    for (std::uint64_t l = 0; l < full_count; ++l) {
      std::uint64_t lp = 0;
      for (std::size_t n = 0; n < k; ++n)
        if ((l >> positions[n]) & 1u) lp |= std::uint64_t{1} << n;
      out[(blk << k) + lp] += cells_[(blk << subset_.size()) + l];
    }
  return BellJointTable(std::move(sub), std::move(out));
}

BellJointTable collect_joint(const DistributionTable& dist, const RoleAssignment& roles,
                             const std::vector<Site>& lambda_subset) {
  const std::size_t k = lambda_subset.size();
  if (k > 30) throw_cap("lambda subset too large");
  for (Site s : lambda_subset)
    if (s >= dist.n_sites()) throw_input("lambda site outside the lattice");
  std::vector<double> sum(std::uint64_t{16} << k, 0.0);
  std::vector<double> comp(sum.size(), 0.0);
  for (std::uint64_t i = 0; i < dist.size(); ++i) {
    std::uint64_t l = 0;
    for (std::size_t n = 0; n < k; ++n)
      if ((i >> lambda_subset[n]) & 1u) l |= std::uint64_t{1} << n;
    const std::uint64_t cell =
        (BellJointTable::block(spin_of(i, roles.outcome1), spin_of(i, roles.outcome2), spin_of(i, roles.setting_a),
                               spin_of(i, roles.setting_b))
         << k) +
        l;
    const double p = dist.prob(i);
    const double t = sum[cell] + p;
    comp[cell] += std::abs(sum[cell]) >= p ? (sum[cell] - t) + p : (p - t) + sum[cell];
    sum[cell] = t;
  }
  for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += comp[c];
  return BellJointTable(lambda_subset, std::move(sum));
}

Deviation mi_deviation(const BellJointTable& t) {
  Marginals m{t};
  std::array<double, 4> p_s{};
  for (std::size_t k = 0; k < 4; ++k) {
    const int a = k & 1 ? -1 : 1;
    const int b = k & 2 ? -1 : 1;
    p_s[k] = m.ab(a, b);
  }
  Deviation best;
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t r = s + 1; r < 4; ++r) {
      const int a = s & 1 ? -1 : 1, b = s & 2 ? -1 : 1;
      const int a2 = r & 1 ? -1 : 1, b2 = r & 2 ? -1 : 1;
      for (std::uint64_t l = 0; l < t.lambda_count(); ++l) {
        const double d = std::abs(m.ab(a, b, l) / p_s[s] - m.ab(a2, b2, l) / p_s[r]);
        consider(best, d, {0, 0, a, b, a2, b2, l, "P(l|a,b) vs P(l|a',b')"});
      }
    }
  return best;
}

double mi_total_variation(const BellJointTable& t) {
  Marginals m{t};
  double worst = 0.0;
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t r = s + 1; r < 4; ++r) {
      const int a = s & 1 ? -1 : 1, b = s & 2 ? -1 : 1;
      const int a2 = r & 1 ? -1 : 1, b2 = r & 2 ? -1 : 1;
      const double ps = m.ab(a, b), pr = m.ab(a2, b2);
      double tv = 0.0;
      for (std::uint64_t l = 0; l < t.lambda_count(); ++l) tv += std::abs(m.ab(a, b, l) / ps - m.ab(a2, b2, l) / pr);
      worst = std::max(worst, 0.5 * tv);
    }
  return worst;
}

Deviation oi_deviation(const BellJointTable& t) {
  Marginals m{t};
  Deviation best;
  for (std::uint64_t l = 0; l < t.lambda_count(); ++l)
    for (int a : kSpins)
      for (int b : kSpins) {
        const double pab = m.ab(a, b, l);
        for (int s1 : kSpins)
          for (int s2 : kSpins) {
            const double joint = t.at(s1, s2, a, b, l);
            const double d1 = std::abs(joint / m.s2_ab(s2, a, b, l) - m.s1_ab(s1, a, b, l) / pab);
            consider(best, d1, {s1, s2, a, b, 0, 0, l, "P(s1|s2,a,b,l) vs P(s1|a,b,l)"});
            const double d2 = std::abs(joint / m.s1_ab(s1, a, b, l) - m.s2_ab(s2, a, b, l) / pab);
            consider(best, d2, {s1, s2, a, b, 0, 0, l, "P(s2|s1,a,b,l) vs P(s2|a,b,l)"});
          }
      }
  return best;
}

Deviation pi_deviation(const BellJointTable& t) {
  Marginals m{t};
  Deviation best;
  for (std::uint64_t l = 0; l < t.lambda_count(); ++l)
    for (int a : kSpins)
      for (int b : kSpins) {
        const double pab = m.ab(a, b, l);
        for (int s : kSpins) {
          const double d2 = std::abs(m.s2_ab(s, a, b, l) / pab - m.p2_given_b(s, b, l));
          consider(best, d2, {0, s, a, b, 0, 0, l, "P(s2|a,b,l) vs P(s2|b,l)"});
          const double d1 = std::abs(m.s1_ab(s, a, b, l) / pab - m.p1_given_a(s, a, l));
          consider(best, d1, {s, 0, a, b, 0, 0, l, "P(s1|a,b,l) vs P(s1|a,l)"});
        }
      }
  return best;
}

Deviation factorability_deviation(const BellJointTable& t) {
  Marginals m{t};
  Deviation best;
  for (std::uint64_t l = 0; l < t.lambda_count(); ++l)
    for (int a : kSpins)
      for (int b : kSpins) {
        const double pab = m.ab(a, b, l);
        for (int s1 : kSpins)
          for (int s2 : kSpins) {
            const double d = std::abs(t.at(s1, s2, a, b, l) / pab - m.p1_given_a(s1, a, l) * m.p2_given_b(s2, b, l));
            consider(best, d, {s1, s2, a, b, 0, 0, l, "P(s1,s2|a,b,l) vs P(s1|a,l)P(s2|b,l)"});
          }
      }
  return best;
}

IndependenceReport diagnose(const BellJointTable& t) {
  IndependenceReport r;
  r.lambda_subset = t.subset();
  r.mi = mi_deviation(t);
  r.oi = oi_deviation(t);
  r.pi = pi_deviation(t);
  r.factorability = factorability_deviation(t);
  r.mi_total_variation = mi_total_variation(t);
  return r;
}

IndependenceReport diagnose(const DistributionTable& dist, const RoleAssignment& roles,
                            const std::vector<Site>& lambda_subset) {
  if (lambda_subset.empty()) throw_input("lambda subset must not be empty");
  for (std::size_t i = 0; i < lambda_subset.size(); ++i) {
    if (std::find(roles.hidden.begin(), roles.hidden.end(), lambda_subset[i]) == roles.hidden.end())
      throw_input("lambda site " + std::to_string(lambda_subset[i]) + " is not a hidden site");
    if (std::find(lambda_subset.begin(), lambda_subset.begin() + i, lambda_subset[i]) != lambda_subset.begin() + i)
      throw_input("lambda site " + std::to_string(lambda_subset[i]) + " listed twice");
  }
  return diagnose(collect_joint(dist, roles, lambda_subset));
}

std::vector<IndependenceReport> sweep_subsets(const DistributionTable& dist, const RoleAssignment& roles) {
  const std::size_t h = roles.hidden.size();
  if (h == 0) throw_input("no hidden sites to sweep");
  if (h > kMaxSweepHidden)
    throw_cap("subset sweep supports at most " + std::to_string(kMaxSweepHidden) + " hidden sites");
  const BellJointTable full = collect_joint(dist, roles, roles.hidden);
  const std::size_t count = (std::size_t{1} << h) - 1;
  std::vector<IndependenceReport> out(count);
  parallel_for(count, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const std::size_t mask = i + 1;
      std::vector<std::size_t> pos;
      for (std::size_t k = 0; k < h; ++k)
        if (mask & (std::size_t{1} << k)) pos.push_back(k);
      out[i] = diagnose(full.project(pos));
    }
  });
  return out;
}

}  // namespace spinbell
