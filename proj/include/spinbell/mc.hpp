#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spinbell/chsh.hpp"
#include "spinbell/lattice.hpp"
#include "spinbell/philox.hpp"

namespace spinbell {

/// How M(a,b) is estimated. `counts` keeps the samples of the unconstrained
/// run that happen to show (a,b). `clamped` runs separate chains with the two
/// setting spins held at (a,b), which samples P(theta | a, b) directly and
/// stays usable when a setting pair is rare.
enum class PostSelection { clamped, counts };

const char* to_string(PostSelection p);
PostSelection parse_postselection(const std::string& s);

struct McConfig {
  std::uint64_t seed = 42;
  std::uint64_t sweeps = 200000;
  std::uint64_t burn_in = 10000;
  std::uint64_t thinning = 1;
  std::uint64_t batch_count = 50;  // per chain
  unsigned chains = 4;
  PostSelection postselect = PostSelection::clamped;

  /// Retained samples per chain: (sweeps - burn_in) / thinning.
  std::uint64_t retained() const { return (sweeps - burn_in) / thinning; }
};

/// Throws Error(input) unless sweeps > burn_in, thinning > 0, chains > 0 and
/// batch_count divides the retained-sample count.
void validate(const McConfig& cfg);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  double n_effective = 0.0;
};

struct McResult {
  std::vector<Estimate> marginals;  // P(sigma_i = +1)
  std::array<Estimate, 4> correlators;  // kSettingPairs order
  Estimate x_bi;
  SignConvention convention = SignConvention::minus_mm;
  PostSelection postselect = PostSelection::clamped;
  std::array<std::uint64_t, 4> subensemble_counts{};
  std::uint64_t samples = 0;  // all chains
  double acceptance_rate = 0.0;
};

/// Single-spin-flip Metropolis chain with random site selection among the
/// unclamped sites. Draw n of Philox stream (chain, substream) picks the site
/// (word 0) and the acceptance uniform (words 1, 2); the first draws seed the
/// initial configuration.
class MetropolisChain {
 public:
  MetropolisChain(const LatticeSpec& spec, std::uint64_t seed, std::uint32_t chain, std::uint32_t substream = 0,
                  std::vector<std::pair<Site, int>> clamp = {});

  bool step();
  /// One attempted flip per unclamped site.
  std::uint64_t sweep();

  int spin(Site s) const { return spins_[s]; }
  const std::vector<int>& spins() const { return spins_; }
  /// Configuration index; only valid for N <= 63.
  std::uint64_t index() const;
  /// Energy change from flipping `s`, using only its neighbourhood.
  double delta_energy(Site s) const;
  void set_spins(std::vector<int> spins);

 private:
  const LatticeSpec* spec_;
  std::vector<std::vector<std::pair<Site, double>>> neighbours_;
  std::vector<int> spins_;
  std::vector<Site> free_;
  Philox4x32 rng_;
  std::uint64_t draws_ = 1;
};

/// Runs cfg.chains independent chains (stream = chain index) and pools them.
/// Standard errors come from batch means over chains * batch_count batches.
/// Clamped correlators use substream k + 1 for setting pair k.
McResult metropolis_run(const LatticeSpec& spec, const McConfig& cfg,
                        SignConvention convention = SignConvention::minus_mm);

}  // namespace spinbell
