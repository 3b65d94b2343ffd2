#pragma once

#include <Eigen/Dense>

#include "spinbell/gibbs.hpp"
#include "spinbell/lattice.hpp"

namespace spinbell {

inline constexpr std::size_t kDefaultQuantumCap = 12;

/// H = -J sum_<ij> sz_i sz_j - h J sum_i sx_i
struct QuantumParams {
  double coupling = 1.0;    // J
  double transverse = 0.0;  // h (dimensionless; the transverse term is h*J)
  double beta = 1.0;

  bool operator==(const QuantumParams&) const = default;
};

/// Geometry and roles come from `lattice`; its per-edge couplings and fields
/// are ignored in favour of the uniform parameters.
struct QuantumModel {
  LatticeSpec lattice;
  QuantumParams params;

  std::size_t dimension() const { return std::size_t{1} << lattice.n_sites; }
};

enum class QuantumState { thermal, ground };

Eigen::MatrixXd build_hamiltonian(const QuantumModel& model, std::size_t cap = kDefaultQuantumCap);

struct QuantumSpectrum {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns
};

QuantumSpectrum diagonalize(const QuantumModel& model, std::size_t cap = kDefaultQuantumCap);

/// P(theta) = <theta| exp(-beta H) |theta> / Tr exp(-beta H).
DistributionTable thermal_z_distribution(const QuantumModel& model, std::size_t cap = kDefaultQuantumCap);
DistributionTable thermal_z_distribution(const QuantumSpectrum& spectrum, std::size_t n_sites, double beta);

/// |<theta|psi_0>|^2 averaged over the lowest eigenspace. Throws
/// Error(numerical) if some configuration gets zero weight.
DistributionTable ground_z_distribution(const QuantumSpectrum& spectrum, std::size_t n_sites);

DistributionTable z_distribution(const QuantumModel& model, QuantumState state,
                                 std::size_t cap = kDefaultQuantumCap);

}  // namespace spinbell
