#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "spinbell/error.hpp"
#include "spinbell/geometry.hpp"
#include "spinbell/mc.hpp"
#include "spinbell/parallel.hpp"

using namespace spinbell;

TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAndUnitRange) {
  const Philox4x32 a(42, 0), b(42, 1), c(42, 0, 1);
  EXPECT_EQ(a.draw(5), Philox4x32(42, 0).draw(5));
  EXPECT_NE(a.draw(5), b.draw(5));
  EXPECT_NE(a.draw(5), c.draw(5));
  EXPECT_EQ(Philox4x32::to_unit(0, 0), 0.0);
  EXPECT_LT(Philox4x32::to_unit(0xffffffff, 0xffffffff), 1.0);
  EXPECT_EQ(Philox4x32::to_range(0xffffffff, 10), 9u);
}

TEST(Metropolis, IncrementalDeltaMatchesFullEnergy) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = oracle::random_spec(rng, 8);
    MetropolisChain mc(spec, 99, trial);
    for (int step = 0; step < 200; ++step) {
      mc.step();
      const Site s = step % spec.n_sites;
      const std::uint64_t before = mc.index();
      const double full = energy(spec, before ^ (std::uint64_t{1} << s)) - energy(spec, before);
      EXPECT_NEAR(mc.delta_energy(s), full, 1e-12);
    }
  }
}

TEST(Metropolis, ClampedSitesNeverMove) {
  const auto spec = named_spec("fig1-default");
  MetropolisChain mc(spec, 1, 0, 3, {{spec.roles.setting_a, -1}, {spec.roles.setting_b, -1}});
  for (int k = 0; k < 1000; ++k) {
    mc.sweep();
    ASSERT_EQ(mc.spin(spec.roles.setting_a), -1);
    ASSERT_EQ(mc.spin(spec.roles.setting_b), -1);
  }
}

TEST(Metropolis, DetailedBalanceOnSmallSpecs) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    const auto spec = oracle::random_spec(rng, 4 + trial);
    const auto exact = oracle::probabilities(spec);
    const std::size_t batches = 40, per_batch = 5000;
    std::vector<std::vector<double>> freq(exact.size(), std::vector<double>(batches, 0.0));
    MetropolisChain mc(spec, 1234, trial);
    for (int k = 0; k < 1000; ++k) mc.sweep();
    for (std::size_t b = 0; b < batches; ++b)
      for (std::size_t k = 0; k < per_batch; ++k) {
        mc.sweep();
        freq[mc.index()][b] += 1.0 / per_batch;
      }
    for (std::size_t i = 0; i < exact.size(); ++i) {
      double mean = 0, ss = 0;
      for (double f : freq[i]) mean += f / batches;
      for (double f : freq[i]) ss += (f - mean) * (f - mean);
      const double se = std::max(std::sqrt(ss / (batches - 1) / batches), 1e-4);
      EXPECT_LT(std::abs(mean - exact[i]), 5.0 * se) << "trial " << trial << " config " << i;
    }
  }
}

namespace {

McConfig small_config() {
  McConfig c;
  c.sweeps = 21000;
  c.burn_in = 1000;
  c.batch_count = 20;
  c.chains = 2;
  return c;
}

}  // namespace

TEST(Metropolis, FreeSpinsMatchTanh) {
  const auto spec = named_spec("j0-control");
  const auto r = metropolis_run(spec, small_config());
  const double p_up = 1.0 / (1.0 + std::exp(-2.0));
  EXPECT_NEAR(2.0 * p_up - 1.0, 0.7615941559557649, 1e-15);
  for (const auto& m : r.marginals) EXPECT_LT(std::abs(m.value - p_up), 3.0 * m.std_error + 1e-12);
  EXPECT_LT(std::abs(r.x_bi.value - 2.0 * std::tanh(1.0) * std::tanh(1.0)), 3.0 * r.x_bi.std_error);
}

TEST(Metropolis, HighTemperatureLimit) {
  auto spec = named_spec("fig1-default");
  spec.beta = 1e-12;
  const auto r = metropolis_run(spec, small_config());
  EXPECT_GT(r.acceptance_rate, 0.999);
  for (const auto& m : r.marginals) EXPECT_LT(std::abs(m.value - 0.5), 3.0 * m.std_error);
}

TEST(Metropolis, CountsModeMatchesClampedWhereSettingsAreCommon) {
  const auto spec = with_uniform(fig1_geometry(), 0.2, 0.5);
  auto cfg = small_config();
  const auto clamped = metropolis_run(spec, cfg);
  cfg.postselect = PostSelection::counts;
  const auto counts = metropolis_run(spec, cfg);
  const double se = std::hypot(clamped.x_bi.std_error, counts.x_bi.std_error);
  EXPECT_LT(std::abs(clamped.x_bi.value - counts.x_bi.value), 4.0 * se);
}

TEST(Metropolis, CountsModeReportsEmptySubensemble) {
  auto cfg = small_config();
  cfg.postselect = PostSelection::counts;
  try {
    metropolis_run(named_spec("fig1-default"), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numerical);
  }
}

TEST(Metropolis, ReproducibleAcrossThreadCaps) {
  const auto spec = named_spec("fig1-point2");
  const unsigned saved = thread_cap();
  set_thread_cap(1);
  const auto a = metropolis_run(spec, small_config());
  set_thread_cap(5);
  const auto b = metropolis_run(spec, small_config());
  set_thread_cap(saved);
  EXPECT_EQ(a.x_bi.value, b.x_bi.value);
  EXPECT_EQ(a.x_bi.std_error, b.x_bi.std_error);
  for (std::size_t s = 0; s < a.marginals.size(); ++s) EXPECT_EQ(a.marginals[s].value, b.marginals[s].value);
  auto other = small_config();
  other.seed = 43;
  EXPECT_NE(metropolis_run(spec, other).x_bi.value, a.x_bi.value);
}

TEST(Metropolis, ConfigValidation) {
  auto expect_input = [](McConfig c) {
    try {
      validate(c);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::input);
    }
  };
  McConfig c = small_config();
  c.burn_in = c.sweeps;
  expect_input(c);
  c = small_config();
  c.thinning = 0;
  expect_input(c);
  c = small_config();
  c.batch_count = 7;
  expect_input(c);
  c = small_config();
  c.chains = 0;
  expect_input(c);
  EXPECT_NO_THROW(validate(McConfig{}));
  EXPECT_EQ(parse_postselection("counts"), PostSelection::counts);
  EXPECT_THROW(parse_postselection("both"), Error);
}
