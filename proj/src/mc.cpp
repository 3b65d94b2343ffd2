#include "spinbell/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinbell/error.hpp"
#include "spinbell/parallel.hpp"

namespace spinbell {

const char* to_string(PostSelection p) { return p == PostSelection::clamped ? "clamped" : "counts"; }

PostSelection parse_postselection(const std::string& s) {
  if (s == "clamped") return PostSelection::clamped;
  if (s == "counts") return PostSelection::counts;
  throw_input("unknown post-selection mode '" + s + "'; use clamped or counts");
}

void validate(const McConfig& cfg) {
  if (cfg.sweeps <= cfg.burn_in) throw_input("sweeps must exceed burn_in");
  if (cfg.thinning == 0) throw_input("thinning must be positive");
  if (cfg.batch_count == 0) throw_input("batch_count must be positive");
  if (cfg.chains == 0) throw_input("chains must be positive");
  if (cfg.retained() == 0 || cfg.retained() % cfg.batch_count != 0)
    throw_input("batch_count (" + std::to_string(cfg.batch_count) + ") must divide the retained sample count (" +
                std::to_string(cfg.retained()) + ")");
  if (cfg.retained() / cfg.batch_count < 2) throw_input("batches must hold at least two samples");
}

MetropolisChain::MetropolisChain(const LatticeSpec& spec, std::uint64_t seed, std::uint32_t chain,
                                 std::uint32_t substream, std::vector<std::pair<Site, int>> clamp)
    : spec_(&spec), neighbours_(neighbour_lists(spec)), spins_(spec.n_sites, 1), rng_(seed, chain, substream) {
  // Initial configuration from draws 0, 1, ... as needed (32 sites per word).
  std::uint64_t n = 0;
  for (Site s = 0; s < spec.n_sites; s += 128, ++n) {
    const auto words = rng_.draw(n);
    for (Site t = s; t < std::min<Site>(s + 128, spec.n_sites); ++t)
      spins_[t] = ((words[(t - s) / 32] >> ((t - s) % 32)) & 1u) ? 1 : -1;
  }
  draws_ = n;
  std::vector<bool> fixed(spec.n_sites, false);
  for (const auto& [site, value] : clamp) {
    if (site >= spec.n_sites || (value != 1 && value != -1)) throw_input("invalid clamp");
    spins_[site] = value;
    fixed[site] = true;
  }
  for (Site t = 0; t < spec.n_sites; ++t)
    if (!fixed[t]) free_.push_back(t);
  if (free_.empty()) throw_input("every site is clamped");
}

double MetropolisChain::delta_energy(Site s) const {
  double local = spec_->fields[s];
  for (const auto& [t, j] : neighbours_[s]) local += j * spins_[t];
  return 2.0 * spins_[s] * local;
}

bool MetropolisChain::step() {
  const auto w = rng_.draw(draws_++);
  const auto n = static_cast<std::uint32_t>(free_.size());
  const Site s = free_[Philox4x32::to_range(w[0], n)];
  const double de = delta_energy(s);
  if (de > 0.0) {
    const double u = Philox4x32::to_unit(w[1], w[2]);
    if (!(u < std::exp(-spec_->beta * de))) return false;
  }
  spins_[s] = -spins_[s];
  return true;
}

std::uint64_t MetropolisChain::sweep() {
  std::uint64_t accepted = 0;
  for (std::size_t k = 0; k < free_.size(); ++k) accepted += step() ? 1 : 0;
  return accepted;
}

std::uint64_t MetropolisChain::index() const {
  if (spins_.size() > 63) throw_input("configuration index needs N <= 63");
  std::uint64_t idx = 0;
  for (std::size_t s = 0; s < spins_.size(); ++s)
    if (spins_[s] == 1) idx |= std::uint64_t{1} << s;
  return idx;
}

void MetropolisChain::set_spins(std::vector<int> spins) {
  if (spins.size() != spins_.size()) throw_input("spin vector length does not match the lattice");
  for (int v : spins)
    if (v != 1 && v != -1) throw_input("spin values must be +1 or -1");
  spins_ = std::move(spins);
}

namespace {

struct BatchAccumulator {
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> up;
  std::array<std::uint64_t, 4> sub_count{};
  std::array<std::int64_t, 4> sub_product{};
};

struct ChainOutput {
  std::vector<BatchAccumulator> batches;
  std::uint64_t accepted = 0;
  std::uint64_t attempts = 0;
};

// Per-batch sums of sigma1*sigma2 from one clamped chain.
struct ClampedOutput {
  std::vector<std::int64_t> product;
  std::uint64_t per_batch = 0;
};

ClampedOutput run_clamped(const LatticeSpec& spec, const McConfig& cfg, std::uint32_t chain, std::size_t pair) {
  const auto& roles = spec.roles;
  MetropolisChain mc(spec, cfg.seed, chain, static_cast<std::uint32_t>(pair + 1),
                     {{roles.setting_a, kSettingPairs[pair][0]}, {roles.setting_b, kSettingPairs[pair][1]}});
  ClampedOutput out;
  out.product.assign(cfg.batch_count, 0);
  out.per_batch = cfg.retained() / cfg.batch_count;
  std::uint64_t kept = 0;
  for (std::uint64_t sweep = 1; sweep <= cfg.sweeps; ++sweep) {
    mc.sweep();
    if (sweep <= cfg.burn_in || (sweep - cfg.burn_in) % cfg.thinning != 0) continue;
    if (kept >= cfg.retained()) break;
    out.product[kept / out.per_batch] += mc.spin(roles.outcome1) * mc.spin(roles.outcome2);
    ++kept;
  }
  return out;
}

std::size_t setting_slot(int a, int b) {
  for (std::size_t k = 0; k < 4; ++k)
    if (kSettingPairs[k][0] == a && kSettingPairs[k][1] == b) return k;
  return 0;
}

ChainOutput run_chain(const LatticeSpec& spec, const McConfig& cfg, std::uint32_t chain) {
  const auto& roles = spec.roles;
  MetropolisChain mc(spec, cfg.seed, chain);
  ChainOutput out;
  out.batches.resize(cfg.batch_count);
  for (auto& b : out.batches) b.up.assign(spec.n_sites, 0);
  const std::uint64_t per_batch = cfg.retained() / cfg.batch_count;
  std::uint64_t kept = 0;
  for (std::uint64_t sweep = 1; sweep <= cfg.sweeps; ++sweep) {
    out.accepted += mc.sweep();
    out.attempts += spec.n_sites;
    if (sweep <= cfg.burn_in || (sweep - cfg.burn_in) % cfg.thinning != 0) continue;
    if (kept >= cfg.retained()) break;
    auto& acc = out.batches[kept / per_batch];
    ++kept;
    ++acc.samples;
    for (Site s = 0; s < spec.n_sites; ++s)
      if (mc.spin(s) == 1) ++acc.up[s];
    const std::size_t slot = setting_slot(mc.spin(roles.setting_a), mc.spin(roles.setting_b));
    ++acc.sub_count[slot];
    acc.sub_product[slot] += mc.spin(roles.outcome1) * mc.spin(roles.outcome2);
  }
  return out;
}

Estimate batch_estimate(double value, const std::vector<double>& batch_values, double per_sample_variance,
                        double samples) {
  const double b = static_cast<double>(batch_values.size());
  double mean = 0.0;
  for (double v : batch_values) mean += v;
  mean /= b;
  double ss = 0.0;
  for (double v : batch_values) ss += (v - mean) * (v - mean);
  Estimate e;
  e.value = value;
  e.std_error = std::sqrt(ss / (b - 1.0) / b);
  e.n_effective = e.std_error > 0.0 ? per_sample_variance / (e.std_error * e.std_error) : samples;
  return e;
}

}  // namespace

McResult metropolis_run(const LatticeSpec& spec, const McConfig& cfg, SignConvention convention) {
  require_valid(spec, std::numeric_limits<std::size_t>::max());
  validate(cfg);

  std::vector<ChainOutput> chains(cfg.chains);
  parallel_for(cfg.chains, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) chains[c] = run_chain(spec, cfg, static_cast<std::uint32_t>(c));
  });

  // Merge in chain order.
  std::vector<const BatchAccumulator*> batches;
  for (const auto& c : chains)
    for (const auto& b : c.batches) batches.push_back(&b);

  const std::size_t n = spec.n_sites;
  McResult res;
  res.convention = convention;
  res.postselect = cfg.postselect;
  std::uint64_t accepted = 0, attempts = 0;
  for (const auto& c : chains) {
    accepted += c.accepted;
    attempts += c.attempts;
  }
  res.acceptance_rate = attempts ? static_cast<double>(accepted) / static_cast<double>(attempts) : 0.0;

  std::vector<std::uint64_t> up_total(n, 0);
  std::array<std::int64_t, 4> prod_total{};
  for (const auto* b : batches) {
    res.samples += b->samples;
    for (Site s = 0; s < n; ++s) up_total[s] += b->up[s];
    for (std::size_t k = 0; k < 4; ++k) {
      res.subensemble_counts[k] += b->sub_count[k];
      prod_total[k] += b->sub_product[k];
    }
  }
  const double total = static_cast<double>(res.samples);

  for (Site s = 0; s < n; ++s) {
    std::vector<double> values;
    for (const auto* b : batches) values.push_back(static_cast<double>(b->up[s]) / static_cast<double>(b->samples));
    const double p = static_cast<double>(up_total[s]) / total;
    res.marginals.push_back(batch_estimate(p, values, p * (1.0 - p), total));
  }

  std::array<double, 4> m_pooled{};
  std::vector<std::array<double, 4>> m_batches;
  std::array<double, 4> iid_variance{};
  if (cfg.postselect == PostSelection::clamped) {
    const std::size_t tasks = 4 * std::size_t{cfg.chains};
    std::vector<ClampedOutput> runs(tasks);
    parallel_for(tasks, [&](std::size_t b, std::size_t e) {
      for (std::size_t t = b; t < e; ++t) runs[t] = run_clamped(spec, cfg, static_cast<std::uint32_t>(t % cfg.chains), t / cfg.chains);
    });
    const std::size_t nb = std::size_t{cfg.chains} * cfg.batch_count;
    m_batches.resize(nb);
    for (std::size_t k = 0; k < 4; ++k) {
      std::int64_t sum = 0;
      std::vector<double> values;
      for (unsigned c = 0; c < cfg.chains; ++c) {
        const auto& run = runs[k * cfg.chains + c];
        for (std::size_t i = 0; i < run.product.size(); ++i) {
          sum += run.product[i];
          values.push_back(static_cast<double>(run.product[i]) / static_cast<double>(run.per_batch));
          m_batches[c * cfg.batch_count + i][k] = values.back();
        }
      }
      const std::uint64_t count = runs[k * cfg.chains].per_batch * nb;
      res.subensemble_counts[k] = count;
      m_pooled[k] = static_cast<double>(sum) / static_cast<double>(count);
      iid_variance[k] = 1.0 - m_pooled[k] * m_pooled[k];
      res.correlators[k] = batch_estimate(m_pooled[k], values, iid_variance[k], static_cast<double>(count));
    }
  } else {
    m_batches.resize(batches.size());
    for (std::size_t k = 0; k < 4; ++k) {
      if (res.subensemble_counts[k] == 0) throw_numerical("a setting subensemble received no samples");
      m_pooled[k] = static_cast<double>(prod_total[k]) / static_cast<double>(res.subensemble_counts[k]);
      std::vector<double> values;
      for (std::size_t i = 0; i < batches.size(); ++i) {
        const auto* b = batches[i];
        if (b->sub_count[k] == 0)
          throw_numerical("a setting subensemble is empty within a batch; use longer batches or clamped post-selection");
        m_batches[i][k] = static_cast<double>(b->sub_product[k]) / static_cast<double>(b->sub_count[k]);
        values.push_back(m_batches[i][k]);
      }
      const double frac = static_cast<double>(res.subensemble_counts[k]) / total;
      iid_variance[k] = (1.0 - m_pooled[k] * m_pooled[k]) / frac;
      res.correlators[k] = batch_estimate(m_pooled[k], values, iid_variance[k], total);
    }
  }

  std::vector<double> x_values;
  for (const auto& m : m_batches) x_values.push_back(chsh_value(m, convention));
  double naive = 0.0;
  for (double v : iid_variance) naive += v;
  res.x_bi = batch_estimate(chsh_value(m_pooled, convention), x_values, naive, total);
  return res;
}

}  // namespace spinbell
