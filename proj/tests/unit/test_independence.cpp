#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracle.hpp"
#include "spinbell/error.hpp"
#include "spinbell/geometry.hpp"
#include "spinbell/independence.hpp"

using namespace spinbell;

namespace {

// P(s1, s2, a, b, lambda) by direct summation over the oracle table.
double joint(const LatticeSpec& spec, const std::vector<double>& p, int s1, int s2, int a, int b,
             const std::vector<Site>& subset, std::uint64_t lambda) {
  const auto& r = spec.roles;
  double total = 0.0;
  for (std::uint64_t i = 0; i < p.size(); ++i) {
    if (oracle::sp(i, r.outcome1) != s1 || oracle::sp(i, r.outcome2) != s2) continue;
    if (oracle::sp(i, r.setting_a) != a || oracle::sp(i, r.setting_b) != b) continue;
    bool match = true;
    for (std::size_t n = 0; n < subset.size(); ++n)
      if (oracle::sp(i, subset[n]) != ((lambda >> n) & 1u ? 1 : -1)) match = false;
    if (match) total += p[i];
  }
  return total;
}

}  // namespace

TEST(Independence, JointTableMatchesOracle) {
  const auto spec = named_spec("fig1-point2");
  const auto p = oracle::probabilities(spec);
  const auto d = build_distribution(spec);
  const std::vector<Site> subset = {spec.roles.hidden[0], spec.roles.hidden[3]};
  const auto t = collect_joint(d, spec.roles, subset);
  for (int s1 : {1, -1})
    for (int s2 : {1, -1})
      for (int a : {1, -1})
        for (int b : {1, -1})
          for (std::uint64_t l = 0; l < 4; ++l)
            EXPECT_NEAR(t.at(s1, s2, a, b, l), joint(spec, p, s1, s2, a, b, subset, l), 1e-13);
}

TEST(Independence, ProjectionEqualsDirectCollection) {
  const auto spec = named_spec("fig1-default");
  const auto d = build_distribution(spec);
  const auto full = collect_joint(d, spec.roles, spec.roles.hidden);
  const auto proj = full.project({1, 4});
  const auto direct = collect_joint(d, spec.roles, {spec.roles.hidden[1], spec.roles.hidden[4]});
  EXPECT_EQ(proj.subset(), direct.subset());
  for (int s1 : {1, -1})
    for (int s2 : {1, -1})
      for (int a : {1, -1})
        for (int b : {1, -1})
          for (std::uint64_t l = 0; l < 4; ++l)
            EXPECT_NEAR(proj.at(s1, s2, a, b, l), direct.at(s1, s2, a, b, l), 1e-15);
}

TEST(Independence, Fig1DefaultIsLocalButNotMeasurementIndependent) {
  const auto spec = named_spec("fig1-default");
  const auto r = diagnose(build_distribution(spec), spec.roles);
  EXPECT_LT(r.factorability.value, 1e-10);
  EXPECT_LT(r.oi.value, 1e-10);
  EXPECT_LT(r.pi.value, 1e-10);
  EXPECT_GT(r.mi.value, 1e-3);
  EXPECT_GE(r.mi_total_variation, r.mi.value - 1e-15);
}

TEST(Independence, ExtraLeftRightEdgeBreaksFactorability) {
  for (const char* name : {"broken-cut-12", "broken-cut-1b", "broken-cut-a2"}) {
    const auto spec = named_spec(name);
    const auto r = diagnose(build_distribution(spec), spec.roles);
    EXPECT_GT(r.factorability.value, 1e-3) << name;
  }
}

TEST(Independence, SettingSettingEdgeLeavesFactorabilityIntact) {
  // Conditioning on (a, b) absorbs a direct a-b coupling, so the
  // conditional factorisation survives this particular edge.
  const auto spec = named_spec("broken-cut-ab");
  const auto r = diagnose(build_distribution(spec), spec.roles);
  EXPECT_LT(r.factorability.value, 1e-10);
}

TEST(Independence, IndependentProductHasNoDeviations) {
  auto spec = with_uniform(fig1_geometry(), 0.7, 0.0);
  const auto r = diagnose(build_distribution(spec), spec.roles);
  EXPECT_LT(r.mi.value, 1e-14);
  EXPECT_LT(r.oi.value, 1e-14);
  EXPECT_LT(r.pi.value, 1e-14);
  EXPECT_LT(r.factorability.value, 1e-14);
}

TEST(Independence, WitnessAttainsReportedValue) {
  const auto spec = named_spec("broken-cut-12");
  const auto d = build_distribution(spec);
  const auto t = collect_joint(d, spec.roles, spec.roles.hidden);
  const auto f = factorability_deviation(t);
  const auto& w = f.witness;
  auto pab = [&](int a, int b, std::uint64_t l) {
    double s = 0;
    for (int x : {1, -1})
      for (int y : {1, -1}) s += t.at(x, y, a, b, l);
    return s;
  };
  double p1 = 0, n1 = 0, p2 = 0, n2 = 0;
  for (int b : {1, -1}) {
    n1 += pab(w.a, b, w.lambda);
    for (int y : {1, -1}) p1 += t.at(w.sigma1, y, w.a, b, w.lambda);
  }
  for (int a : {1, -1}) {
    n2 += pab(a, w.b, w.lambda);
    for (int x : {1, -1}) p2 += t.at(x, w.sigma2, a, w.b, w.lambda);
  }
  const double value =
      std::abs(t.at(w.sigma1, w.sigma2, w.a, w.b, w.lambda) / pab(w.a, w.b, w.lambda) - (p1 / n1) * (p2 / n2));
  EXPECT_NEAR(value, f.value, 1e-12);
}

TEST(Independence, SubsetSweepOrderAndContent) {
  const auto spec = named_spec("fig1-default");
  const auto d = build_distribution(spec);
  const auto all = sweep_subsets(d, spec.roles);
  ASSERT_EQ(all.size(), 63u);
  EXPECT_EQ(all[0].lambda_subset, std::vector<Site>{spec.roles.hidden[0]});
  EXPECT_EQ(all.back().lambda_subset, spec.roles.hidden);
  const auto direct = diagnose(d, spec.roles, all[5].lambda_subset);
  EXPECT_NEAR(all[5].factorability.value, direct.factorability.value, 1e-14);
  EXPECT_NEAR(all[5].mi.value, direct.mi.value, 1e-14);
}

TEST(Independence, InputErrors) {
  const auto spec = named_spec("fig1-default");
  const auto d = build_distribution(spec);
  auto expect_input = [&](const std::vector<Site>& subset) {
    try {
      diagnose(d, spec.roles, subset);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::input);
    }
  };
  expect_input({});
  expect_input({spec.roles.outcome1});
  expect_input({spec.roles.hidden[0], spec.roles.hidden[0]});
}

TEST(Independence, TooManyHiddenSitesForSweepIsCap) {
  auto spec = chain_spec(13, 0.5, 0.2);
  const auto d = build_distribution(spec);
  try {
    sweep_subsets(d, spec.roles);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource_cap);
  }
}
