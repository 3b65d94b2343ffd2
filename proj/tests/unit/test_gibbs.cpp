#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "spinbell/error.hpp"
#include "spinbell/geometry.hpp"
#include "spinbell/gibbs.hpp"

using namespace spinbell;

namespace {

LatticeSpec single(double h, double beta) {
  LatticeSpec s;
  s.n_sites = 1;
  s.fields = {h};
  s.beta = beta;
  return s;
}

LatticeSpec pair(double j, double h0, double h1, double beta = 1.0) {
  LatticeSpec s;
  s.n_sites = 2;
  s.edges = {{0, 1, j}};
  s.fields = {h0, h1};
  s.beta = beta;
  return s;
}

}  // namespace

TEST(Gibbs, SingleSiteClosedForm) {
  const auto d = build_distribution(single(1.0, 1.0));
  EXPECT_NEAR(std::exp(d.log_z()), 2.0 * std::cosh(1.0), 1e-12);
  EXPECT_NEAR(std::exp(d.log_z()), 3.0861612696304874, 1e-12);
  EXPECT_NEAR(marginal(d, {{0, 1}}), 0.8807970779778823, 1e-12);
  for (double h : {-2.0, 0.3, 5.0})
    for (double beta : {0.1, 1.0, 3.0}) {
      const auto t = build_distribution(single(h, beta));
      EXPECT_NEAR(t.log_z(), std::log(2.0 * std::cosh(beta * h)), 1e-12);
      EXPECT_NEAR(marginal(t, {{0, 1}}), 1.0 / (1.0 + std::exp(-2.0 * beta * h)), 1e-12);
    }
}

TEST(Gibbs, PairFourTermTable) {
  const auto d = build_distribution(pair(1.0, 0.0, 0.0));
  const double e = std::exp(1.0);
  const double aligned = e / (2.0 * e + 2.0 / e);
  EXPECT_NEAR(aligned, 0.44039853898894116, 1e-15);
  EXPECT_NEAR(d.prob(0b00), aligned, 1e-12);
  EXPECT_NEAR(d.prob(0b11), aligned, 1e-12);
  EXPECT_NEAR(d.prob(0b01), 0.5 - aligned, 1e-12);
  EXPECT_NEAR(d.prob(0b10), 0.5 - aligned, 1e-12);
  EXPECT_NEAR(std::exp(d.log_z()), 2.0 * e + 2.0 / e, 1e-12);
}

TEST(Gibbs, PairLogisticMarginalAndConditional) {
  const auto free_pair = build_distribution(pair(0.0, 1.0, 0.0));
  EXPECT_NEAR(marginal(free_pair, {{0, 1}}), 0.8807970779778823, 1e-12);
  const auto coupled = build_distribution(pair(1.0, 0.0, 0.0));
  EXPECT_NEAR(conditional(coupled, {{1, 1}}, {{0, 1}}), 0.8807970779778823, 1e-12);
  // General logistic form P(s1 = + | s0) = 1 / (1 + exp(-2 beta (J s0 + h1))).
  const double j = 0.7, h0 = -0.4, h1 = 1.3, beta = 0.9;
  const auto d = build_distribution(pair(j, h0, h1, beta));
  for (int s0 : {1, -1})
    EXPECT_NEAR(conditional(d, {{1, 1}}, {{0, s0}}), 1.0 / (1.0 + std::exp(-2.0 * beta * (j * s0 + h1))), 1e-12);
}

TEST(Gibbs, ThreeSiteChainClosedForms) {
  for (double j : {0.5, 1.0, 2.0}) {
    const auto d = build_distribution(chain_spec(3, j, 0.0));
    EXPECT_NEAR(d.log_z(), std::log(2.0) + 2.0 * std::log(2.0 * std::cosh(j)), 1e-12);
    const double t = std::tanh(j);
    EXPECT_NEAR(conditional(d, {{2, 1}}, {{0, 1}}), 0.5 * (1.0 + t * t), 1e-12);
    EXPECT_NEAR(marginal(d, {{0, 1}, {1, 1}, {2, 1}}), std::exp(2.0 * j - d.log_z()), 1e-12);
  }
}

TEST(Gibbs, MatchesBruteForceOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const auto spec = oracle::random_spec(rng, 1 + trial % 9);
    const auto d = build_distribution(spec);
    const auto p = oracle::probabilities(spec);
    for (std::uint64_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d.prob(i), p[i], 1e-12);
  }
}

TEST(Gibbs, NormalisedAndPositive) {
  const auto d = build_distribution(named_spec("fig1-default"));
  double total = 0.0;
  for (double p : d.probs()) {
    EXPECT_GT(p, 0.0);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Gibbs, LargeEnergiesStayFinite) {
  auto spec = chain_spec(8, 300.0, 50.0);
  spec.beta = 4.0;
  try {
    const auto d = build_distribution(spec);
    EXPECT_TRUE(std::isfinite(d.log_z()));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numerical);
  }
}

TEST(Gibbs, ZeroFieldGlobalFlipSymmetry) {
  auto spec = named_spec("fig1-default");
  for (auto& h : spec.fields) h = 0.0;
  const auto d = build_distribution(spec);
  const std::uint64_t full = d.size() - 1;
  for (std::uint64_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d.prob(i), d.prob(full ^ i), 1e-15);
}

TEST(Gibbs, ChainRule) {
  const auto d = build_distribution(named_spec("fig1-default"));
  const PartialAssignment a{{0, 1}}, b{{3, -1}}, c{{6, 1}};
  const double joint = marginal(d, a.merged(b).merged(c));
  const double chained = marginal(d, a) * conditional(d, b, a) * conditional(d, c, a.merged(b));
  EXPECT_NEAR(joint, chained, 1e-12);
}

TEST(Gibbs, MarkovPropertyAcrossSeparator) {
  // On a chain 0-1-2-3-4, site 2 separates {0,1} from {3,4}.
  auto spec = chain_spec(5, 0.8, 0.3);
  spec.fields = {0.3, -0.2, 0.5, 0.1, -0.7};
  const auto d = build_distribution(spec);
  for (int s0 : {1, -1})
    for (int s2 : {1, -1})
      EXPECT_NEAR(conditional(d, {{4, 1}}, {{0, s0}, {2, s2}}), conditional(d, {{4, 1}}, {{2, s2}}), 1e-12);
}

TEST(Gibbs, EmptyAssignmentMarginalIsOne) {
  const auto d = build_distribution(chain_spec(4, 1.0, 0.2));
  EXPECT_NEAR(marginal(d, PartialAssignment{}), 1.0, 1e-12);
}

TEST(Gibbs, OverlappingConditionalIsInputError) {
  const auto d = build_distribution(chain_spec(4, 1.0, 0.2));
  try {
    conditional(d, {{1, 1}}, {{1, -1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::input);
  }
  PartialAssignment p;
  p.set(0, 1);
  EXPECT_THROW(p.set(0, -1), Error);
  EXPECT_THROW(p.set(1, 0), Error);
}

TEST(Gibbs, TableConstructorRejectsBadInput) {
  EXPECT_THROW(DistributionTable(1, {0.5, 0.6}, 0.0, DistributionSource::classical_boltzmann), Error);
  EXPECT_THROW(DistributionTable(1, {1.0, 0.0}, 0.0, DistributionSource::classical_boltzmann), Error);
  EXPECT_THROW(DistributionTable(2, {0.5, 0.5}, 0.0, DistributionSource::classical_boltzmann), Error);
}

TEST(Gibbs, CsvHasOneRowPerConfiguration) {
  const auto spec = named_spec("pair2");
  const auto d = build_distribution(spec);
  std::ostringstream os;
  write_distribution_csv(os, d, spec);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "index,s0,s1,energy,probability");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}
