#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "spinbell/lattice.hpp"

namespace spinbell {

enum class DistributionSource { classical_boltzmann, quantum_thermal_diagonal, quantum_ground_diagonal };

const char* to_string(DistributionSource s);

/// Exact probability mass over all 2^N configurations. Entries are strictly
/// positive and sum to 1 within 1e-12; the constructor enforces both.
class DistributionTable {
 public:
  DistributionTable(std::size_t n_sites, std::vector<double> probs, double log_z, DistributionSource source);

  std::size_t n_sites() const { return n_sites_; }
  std::uint64_t size() const { return probs_.size(); }
  std::span<const double> probs() const { return probs_; }
  double prob(std::uint64_t index) const { return probs_[index]; }
  double log_z() const { return log_z_; }
  DistributionSource source() const { return source_; }

 private:
  std::size_t n_sites_;
  std::vector<double> probs_;
  double log_z_;
  DistributionSource source_;
};

/// P(theta) = exp(-beta H(theta)) / Z, accumulated in the log domain with the
/// minimum energy subtracted. Only the physical part of the spec is validated.
DistributionTable build_distribution(const LatticeSpec& spec, std::size_t cap = kDefaultEnumerationCap);

/// Builds a table from unnormalised log-weights (log w = -beta E).
DistributionTable distribution_from_log_weights(std::size_t n_sites, std::span<const double> log_weights,
                                                DistributionSource source);

/// Fixed spin values on a subset of sites (an m-spin configuration).
class PartialAssignment {
 public:
  PartialAssignment() = default;
  PartialAssignment(std::initializer_list<std::pair<Site, int>> constraints);

  /// Throws Error(input) if the site is already constrained or spin is not +/-1.
  PartialAssignment& set(Site site, int spin);

  bool empty() const { return mask_ == 0; }
  std::size_t size() const;
  std::uint64_t mask() const { return mask_; }
  /// Bits of the constrained sites that are +1.
  std::uint64_t values() const { return values_; }
  bool overlaps(const PartialAssignment& other) const { return (mask_ & other.mask_) != 0; }
  PartialAssignment merged(const PartialAssignment& other) const;

 private:
  std::uint64_t mask_ = 0;
  std::uint64_t values_ = 0;
};

/// Sum of probabilities over configurations consistent with `eta`.
double marginal(const DistributionTable& dist, const PartialAssignment& eta);

/// marginal(target + given) / marginal(given); overlapping constraints are an input error.
double conditional(const DistributionTable& dist, const PartialAssignment& target, const PartialAssignment& given);

/// CSV with columns index, s0..s{N-1}, energy, probability. Energies come from
/// `spec` and are only meaningful for classical tables.
void write_distribution_csv(std::ostream& os, const DistributionTable& dist, const LatticeSpec& spec);

}  // namespace spinbell
