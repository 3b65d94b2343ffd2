#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "spinbell/chsh.hpp"
#include "spinbell/error.hpp"
#include "spinbell/geometry.hpp"
#include "spinbell/quantum.hpp"

using namespace spinbell;

TEST(Quantum, HamiltonianIsSymmetricAndTraceless) {
  const QuantumModel m{chain_spec(4, 1.0, 0.0), {1.3, 0.6, 1.0}};
  const auto h = build_hamiltonian(m);
  EXPECT_EQ(h.rows(), 16);
  EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(h.trace(), 0.0, 1e-12);
}

TEST(Quantum, TwoSiteSpectrum) {
  const double j = 1.2, h = 0.7;
  const QuantumModel m{chain_spec(2, 1.0, 0.0), {j, h, 1.0}};
  const auto s = diagonalize(m);
  const double r = j * std::sqrt(1.0 + 4.0 * h * h);
  EXPECT_NEAR(s.eigenvalues(0), -r, 1e-12);
  EXPECT_NEAR(s.eigenvalues(1), -j, 1e-12);
  EXPECT_NEAR(s.eigenvalues(2), j, 1e-12);
  EXPECT_NEAR(s.eigenvalues(3), r, 1e-12);
}

TEST(Quantum, ZeroTransverseFieldEqualsClassical) {
  std::mt19937_64 rng(17);
  for (std::size_t n = 1; n <= 8; ++n) {
    for (double j : {0.4, 1.0, 2.0}) {
      for (double beta : {0.5, 1.0}) {
        auto lat = oracle::random_spec(rng, n, 0.4);
        for (auto& e : lat.edges) e.coupling = j;
        for (auto& f : lat.fields) f = 0.0;
        lat.beta = beta;
        const auto q = thermal_z_distribution(QuantumModel{lat, {j, 0.0, beta}});
        const auto c = build_distribution(lat);
        for (std::uint64_t i = 0; i < q.size(); ++i) EXPECT_NEAR(q.prob(i), c.prob(i), 1e-10) << n;
        EXPECT_NEAR(q.log_z(), c.log_z(), 1e-10);
      }
    }
  }
}

TEST(Quantum, ThermalDistributionIsFlipSymmetric) {
  const QuantumModel m{named_spec("chain4"), {1.0, 0.5, 1.0}};
  const auto d = thermal_z_distribution(m);
  for (std::uint64_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d.prob(i), d.prob(15 ^ i), 1e-12);
  const auto r = chsh(d, m.lattice.roles);
  EXPECT_NEAR(r.m[0], r.m[3], 1e-12);
  EXPECT_LE(std::abs(r.x_bi), 2.0);
}

TEST(Quantum, LogZMatchesTraceOfExponential) {
  const QuantumModel m{chain_spec(3, 1.0, 0.0), {0.9, 1.1, 0.7}};
  const auto s = diagonalize(m);
  double z = 0.0;
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) z += std::exp(-0.7 * s.eigenvalues(k));
  EXPECT_NEAR(thermal_z_distribution(m).log_z(), std::log(z), 1e-12);
}

TEST(Quantum, GroundStateNeedsTransverseField) {
  const QuantumModel classical{chain_spec(4, 1.0, 0.0), {1.0, 0.0, 1.0}};
  try {
    z_distribution(classical, QuantumState::ground);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numerical);
  }
  const QuantumModel mixed{chain_spec(4, 1.0, 0.0), {1.0, 0.5, 1.0}};
  const auto d = z_distribution(mixed, QuantumState::ground);
  EXPECT_GT(d.prob(0), d.prob(0b0101));
}

TEST(Quantum, LowTemperatureApproachesGroundState) {
  QuantumModel cold{chain_spec(4, 1.0, 0.0), {1.0, 0.5, 1.0}};
  const auto s = diagonalize(cold);
  cold.params.beta = 40.0 / (s.eigenvalues(1) - s.eigenvalues(0));
  const auto thermal = thermal_z_distribution(cold);
  const auto ground = z_distribution(cold, QuantumState::ground);
  for (std::uint64_t i = 0; i < 16; ++i) EXPECT_NEAR(thermal.prob(i), ground.prob(i), 1e-9);
}

TEST(Quantum, CapAndInputErrors) {
  try {
    build_hamiltonian(QuantumModel{chain_spec(13, 1.0, 0.0), {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource_cap);
  }
  try {
    build_hamiltonian(QuantumModel{chain_spec(3, 1.0, 0.0), {1.0, 0.5, 0.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::input);
  }
}
