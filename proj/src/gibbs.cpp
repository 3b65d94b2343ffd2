#include "spinbell/gibbs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "spinbell/error.hpp"
#include "spinbell/parallel.hpp"

namespace spinbell {

const char* to_string(DistributionSource s) {
  switch (s) {
    case DistributionSource::classical_boltzmann:
      return "classical-boltzmann";
    case DistributionSource::quantum_thermal_diagonal:
      return "quantum-thermal-diagonal";
    case DistributionSource::quantum_ground_diagonal:
      return "quantum-ground-diagonal";
  }
  return "unknown";
}

DistributionTable::DistributionTable(std::size_t n_sites, std::vector<double> probs, double log_z,
                                     DistributionSource source)
    : n_sites_(n_sites), probs_(std::move(probs)), log_z_(log_z), source_(source) {
  if (n_sites > 40 || probs_.size() != (std::uint64_t{1} << n_sites))
    throw_input("distribution table size does not match 2^N");
  for (double p : probs_)
    if (!(p > 0.0) || !std::isfinite(p))
      throw_numerical("distribution has a non-positive or non-finite entry (weight underflow?)");
  const double total = pairwise_sum(probs_);
  if (std::abs(total - 1.0) > 1e-12) throw_numerical("distribution is not normalised");
  if (!std::isfinite(log_z_)) throw_numerical("log partition function is not finite");
}

DistributionTable distribution_from_log_weights(std::size_t n_sites, std::span<const double> log_weights,
                                                DistributionSource source) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  if (!std::isfinite(top)) throw_numerical("non-finite Boltzmann exponent");
  std::vector<double> w(log_weights.size());
  parallel_for(
      w.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) w[i] = std::exp(log_weights[i] - top);
      },
      4096);
  const double z_scaled = pairwise_sum(w);
  for (double& x : w) x /= z_scaled;
  return DistributionTable(n_sites, std::move(w), top + std::log(z_scaled), source);
}

DistributionTable build_distribution(const LatticeSpec& spec, std::size_t cap) {
  require_valid(spec, cap, /*check_roles=*/false);
  const std::uint64_t count = std::uint64_t{1} << spec.n_sites;
  std::vector<double> lw(count);
  parallel_for(
      count,
      [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          const double h = energy(spec, static_cast<std::uint64_t>(i));
          if (!std::isfinite(h)) throw_numerical("non-finite energy");
          lw[i] = -spec.beta * h;
        }
      },
      4096);
  return distribution_from_log_weights(spec.n_sites, lw, DistributionSource::classical_boltzmann);
}

PartialAssignment::PartialAssignment(std::initializer_list<std::pair<Site, int>> constraints) {
  for (auto [s, v] : constraints) set(s, v);
}

PartialAssignment& PartialAssignment::set(Site site, int spin) {
  if (site >= 63) throw_input("site index out of range");
  if (spin != 1 && spin != -1) throw_input("spin value must be +1 or -1");
  const std::uint64_t bit = std::uint64_t{1} << site;
  if (mask_ & bit) throw_input("site " + std::to_string(site) + " constrained twice");
  mask_ |= bit;
  if (spin == 1) values_ |= bit;
  return *this;
}

std::size_t PartialAssignment::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

PartialAssignment PartialAssignment::merged(const PartialAssignment& other) const {
  if (overlaps(other)) throw_input("overlapping constraints");
  PartialAssignment out;
  out.mask_ = mask_ | other.mask_;
  out.values_ = values_ | other.values_;
  return out;
}

double marginal(const DistributionTable& dist, const PartialAssignment& eta) {
  const std::uint64_t full = dist.size() - 1;
  if (eta.mask() & ~full) throw_input("constraint on a site outside the lattice");
  const std::uint64_t free = full & ~eta.mask();
  const std::uint64_t base = eta.values();
  // Neumaier-compensated sum over the free bits in ascending index order.
  double sum = 0.0, comp = 0.0;
  std::uint64_t sub = 0;
  do {
    const double p = dist.prob(base | sub);
    const double t = sum + p;
    comp += std::abs(sum) >= std::abs(p) ? (sum - t) + p : (p - t) + sum;
    sum = t;
    sub = (sub - free) & free;
  } while (sub != 0);
  return sum + comp;
}

double conditional(const DistributionTable& dist, const PartialAssignment& target, const PartialAssignment& given) {
  if (target.overlaps(given)) throw_input("target and given constrain the same site");
  return marginal(dist, target.merged(given)) / marginal(dist, given);
}

void write_distribution_csv(std::ostream& os, const DistributionTable& dist, const LatticeSpec& spec) {
  const std::size_t n = dist.n_sites();
  os << "index";
  for (Site s = 0; s < n; ++s) os << ",s" << s;
  os << ",energy,probability\n";
  os << std::setprecision(17);
  for (std::uint64_t i = 0; i < dist.size(); ++i) {
    os << i;
    for (Site s = 0; s < n; ++s) os << ',' << spin_of(i, s);
    os << ',' << energy(spec, i) << ',' << dist.prob(i) << '\n';
  }
}

}  // namespace spinbell
