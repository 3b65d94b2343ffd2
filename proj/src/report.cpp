#include "spinbell/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace spinbell {
namespace {

std::string join_sites(const std::vector<Site>& sites, const LatticeSpec& spec, char sep) {
  std::string out;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (k) out += sep;
    out += spec.label(sites[k]);
  }
  return out;
}

std::string lambda_bits(const std::vector<Site>& subset, std::uint64_t lambda, const LatticeSpec& spec) {
  std::string out;
  for (std::size_t n = 0; n < subset.size(); ++n) {
    if (n) out += ' ';
    out += spec.label(subset[n]) + ((lambda >> n) & 1u ? "=+" : "=-");
  }
  return out;
}

const char* sign(int s) { return s > 0 ? "+" : s < 0 ? "-" : "."; }

std::string witness_text(const Witness& w, const std::vector<Site>& subset, const LatticeSpec& spec) {
  std::ostringstream os;
  os << w.term << " at s1=" << sign(w.sigma1) << " s2=" << sign(w.sigma2) << " a=" << sign(w.a)
     << " b=" << sign(w.b);
  if (w.a_alt || w.b_alt) os << " a'=" << sign(w.a_alt) << " b'=" << sign(w.b_alt);
  os << " lambda=[" << lambda_bits(subset, w.lambda, spec) << "]";
  return os.str();
}

const char* kSettingNames[4] = {"pp", "mp", "pm", "mm"};

}  // namespace

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string manifest_text(const RunManifest& m) {
  std::ostringstream os;
  os << "command=" << m.command << "\n"
     << "spec=" << m.spec_path << "\n";
  os << "overrides=";
  for (std::size_t k = 0; k < m.overrides.size(); ++k) os << (k ? ";" : "") << m.overrides[k];
  os << "\n"
     << "out=" << m.out_dir << "\n";
  if (m.seed) os << "seed=" << *m.seed << "\n";
  os << "version=" << m.version << "\n";
  if (m.threads) os << "threads=" << m.threads << "\n";
  os << "timestamp=" << m.timestamp << "\n";
  return os.str();
}

std::string manifest_csv_header(const RunManifest& m) {
  std::ostringstream os;
  os << "# command=" << m.command << "\n# spec=" << m.spec_path << "\n# overrides=";
  for (std::size_t k = 0; k < m.overrides.size(); ++k) os << (k ? ";" : "") << m.overrides[k];
  os << "\n";
  if (m.seed) os << "# seed=" << *m.seed << "\n";
  os << "# version=" << m.version << "\n";
  return os.str();
}

std::string chsh_text(const ChshReport& r) {
  std::ostringstream os;
  os << "CHSH\n";
  for (std::size_t k = 0; k < 4; ++k)
    os << "  M(" << sign(kSettingPairs[k][0]) << "," << sign(kSettingPairs[k][1]) << ") = " << format_real(r.m[k])
       << "  P(a,b) = " << format_real(r.setting_probs[k]) << "\n";
  os << "  convention = " << to_string(r.convention) << (r.max_mode ? " (max over placements)" : "") << "\n";
  os << "  x_bi = " << format_real(r.x_bi) << (std::abs(r.x_bi) > 2.0 ? "  violates |X| <= 2" : "") << "\n";
  return os.str();
}

std::string chsh_csv(const ChshReport& r) {
  std::ostringstream os;
  os << "m_pp,m_mp,m_pm,m_mm,x_bi,convention\n";
  for (std::size_t k = 0; k < 4; ++k) os << format_real(r.m[k]) << ",";
  os << format_real(r.x_bi) << "," << to_string(r.convention) << "\n";
  return os.str();
}

std::string independence_text(const std::vector<IndependenceReport>& reports, const LatticeSpec& spec) {
  std::ostringstream os;
  for (const auto& r : reports) {
    os << "lambda = {" << join_sites(r.lambda_subset, spec, ',') << "}\n";
    os << "  mi_dev   = " << format_real(r.mi.value) << "  " << witness_text(r.mi.witness, r.lambda_subset, spec)
       << "\n";
    os << "  mi_tv    = " << format_real(r.mi_total_variation) << "\n";
    os << "  oi_dev   = " << format_real(r.oi.value) << "  " << witness_text(r.oi.witness, r.lambda_subset, spec)
       << "\n";
    os << "  pi_dev   = " << format_real(r.pi.value) << "  " << witness_text(r.pi.witness, r.lambda_subset, spec)
       << "\n";
    os << "  fact_dev = " << format_real(r.factorability.value) << "  "
       << witness_text(r.factorability.witness, r.lambda_subset, spec) << "\n";
  }
  return os.str();
}

std::string independence_csv(const std::vector<IndependenceReport>& reports, const LatticeSpec& spec) {
  std::ostringstream os;
  os << "lambda_subset,mi_dev,oi_dev,pi_dev,fact_dev,mi_tv\n";
  for (const auto& r : reports)
    os << join_sites(r.lambda_subset, spec, ' ') << "," << format_real(r.mi.value) << "," << format_real(r.oi.value)
       << "," << format_real(r.pi.value) << "," << format_real(r.factorability.value) << ","
       << format_real(r.mi_total_variation) << "\n";
  return os.str();
}

std::string pairwise_csv(const PairwiseCorrelation& p) {
  std::ostringstream os;
  os << "i,j,deviation\n";
  for (std::size_t i = 0; i < p.n; ++i)
    for (std::size_t j = i + 1; j < p.n; ++j) os << i << "," << j << "," << format_real(p.at(i, j)) << "\n";
  return os.str();
}

std::string sweep_csv(const std::vector<std::string>& param_names, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  for (const auto& n : param_names) os << n << ",";
  os << "x_bi,mi_dev,oi_dev,pi_dev,fact_dev\n";
  for (const auto& r : rows) {
    for (double v : r.values) os << format_real(v) << ",";
    os << format_real(r.x_bi) << "," << format_real(r.mi) << "," << format_real(r.oi) << "," << format_real(r.pi)
       << "," << format_real(r.factorability) << "\n";
  }
  return os.str();
}

std::string sweep_text(const std::vector<std::string>& param_names, const std::vector<SweepRow>& rows,
                       std::size_t top) {
  std::ostringstream os;
  std::size_t violating = 0;
  for (const auto& r : rows) violating += std::abs(r.x_bi) > 2.0;
  os << "grid points: " << rows.size() << ", with |x_bi| > 2: " << violating << "\n";
  os << "top " << std::min(top, rows.size()) << " by x_bi:\n";
  for (std::size_t k = 0; k < rows.size() && k < top; ++k) {
    os << " ";
    for (std::size_t d = 0; d < param_names.size(); ++d) os << " " << param_names[d] << "=" << format_real(rows[k].values[d]);
    os << "  x_bi=" << format_real(rows[k].x_bi) << " fact_dev=" << format_real(rows[k].factorability)
       << " mi_dev=" << format_real(rows[k].mi) << "\n";
  }
  return os.str();
}

std::string maximize_csv(const std::vector<std::string>& param_names, const MaximizeResult& r) {
  std::ostringstream os;
  os << "step_index,";
  for (const auto& n : param_names) os << n << ",";
  os << "step,x_bi\n";
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    os << k << ",";
    for (double v : r.trace[k].values) os << format_real(v) << ",";
    os << format_real(r.trace[k].step) << "," << format_real(r.trace[k].objective) << "\n";
  }
  return os.str();
}

std::string maximize_text(const std::vector<std::string>& param_names, const MaximizeResult& r) {
  std::ostringstream os;
  os << "local maximum" << (r.converged ? "" : " (NOT CONVERGED, best so far)") << "\n";
  for (std::size_t d = 0; d < param_names.size(); ++d)
    os << "  " << param_names[d] << " = " << format_real(r.values[d]) << "\n";
  os << "  x_bi = " << format_real(r.objective) << "\n";
  os << "  evaluations = " << r.evaluations << ", accepted moves = " << (r.trace.empty() ? 0 : r.trace.size() - 1)
     << "\n";
  return os.str();
}

std::string reproduction_text(const ReproductionReport& r) {
  std::ostringstream os;
  os << "Published-value reproduction\n";
  os << "  point 1: h=1, J=1.4, beta=1, target " << format_real(ReproductionReport::kTarget1) << "\n";
  os << "  point 2: h(1,2,6,8)=1.9, h(3,4,5,a,b)=0.4, J=2.0, beta=1, h7 free, target "
     << format_real(ReproductionReport::kTarget2) << "\n";
  os << "  tolerance " << format_real(r.tolerance) << "\n\n";
  if (r.no_admissible_geometry) {
    os << "NO ADMISSIBLE GEOMETRY: the candidate family is empty after validation.\n";
    return os.str();
  }
  std::size_t width = 10;
  for (const auto& g : r.geometries) width = std::max(width, g.geometry.size() + 2);
  const int w = static_cast<int>(width);
  os << std::left << std::setw(w) << "geometry" << std::setw(12) << "x_point1" << std::setw(10) << "best_h7"
     << std::setw(12) << "x_point2" << "x_point2_max\n";
  for (const auto& g : r.geometries) {
    os << std::setw(w) << g.geometry << std::setw(12) << std::setprecision(6) << std::fixed << g.x_point1
       << std::setw(10) << std::setprecision(4) << g.best_h7 << std::setw(12) << std::setprecision(6) << g.x_point2
       << g.x_point2_max << "\n";
  }
  os << std::defaultfloat << "\n";
  const auto& best = r.geometries[r.best_index];
  os << "best geometry: " << best.geometry << " (x_point1 = " << format_real(best.x_point1)
     << ", x_point2 = " << format_real(best.x_point2) << " at h7 = " << format_real(best.best_h7) << ")\n";
  if (r.reproduced) {
    os << "REPRODUCED: " << r.matching.size() << " geometr" << (r.matching.size() == 1 ? "y" : "ies")
       << " within tolerance of both targets:";
    for (const auto& m : r.matching) os << " " << m;
    os << "\n";
  } else {
    os << "NOT REPRODUCED: no geometry lands within " << format_real(r.tolerance)
       << " of both published values. Falling back to the violation-with-MI-failure property and the best-achieved "
          "table above.\n";
  }
  return os.str();
}

std::string reproduction_csv(const ReproductionReport& r) {
  std::ostringstream os;
  os << "geometry,x_point1,best_h7,x_point2,x_point2_max,x_point2_local_max,within_tolerance\n";
  for (const auto& g : r.geometries) {
    const bool ok = std::abs(g.x_point1 - ReproductionReport::kTarget1) <= r.tolerance &&
                    std::abs(g.x_point2 - ReproductionReport::kTarget2) <= r.tolerance;
    os << g.geometry << "," << format_real(g.x_point1) << "," << format_real(g.best_h7) << ","
       << format_real(g.x_point2) << "," << format_real(g.x_point2_max) << "," << format_real(g.x_point2_local_max)
       << "," << (ok ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string mc_csv(const McResult& r, const LatticeSpec& spec) {
  std::ostringstream os;
  os << "estimator,value,std_error,n_effective\n";
  auto row = [&](const std::string& name, const Estimate& e) {
    os << name << "," << format_real(e.value) << "," << format_real(e.std_error) << "," << format_real(e.n_effective)
       << "\n";
  };
  for (Site s = 0; s < r.marginals.size(); ++s) row("p_up_" + spec.label(s), r.marginals[s]);
  for (std::size_t k = 0; k < 4; ++k) row(std::string("m_") + kSettingNames[k], r.correlators[k]);
  row("x_bi", r.x_bi);
  return os.str();
}

std::string mc_text(const McResult& r, const LatticeSpec& spec) {
  std::ostringstream os;
  os << "Metropolis estimates (" << r.samples << " samples, acceptance " << format_real(r.acceptance_rate) << ")\n";
  for (Site s = 0; s < r.marginals.size(); ++s)
    os << "  P(" << spec.label(s) << "=+) = " << format_real(r.marginals[s].value) << " +/- "
       << format_real(r.marginals[s].std_error) << "\n";
  for (std::size_t k = 0; k < 4; ++k)
    os << "  M(" << sign(kSettingPairs[k][0]) << "," << sign(kSettingPairs[k][1])
       << ") = " << format_real(r.correlators[k].value) << " +/- " << format_real(r.correlators[k].std_error)
       << "  (" << r.subensemble_counts[k] << " samples)\n";
  os << "  x_bi = " << format_real(r.x_bi.value) << " +/- " << format_real(r.x_bi.std_error) << "  convention "
     << to_string(r.convention) << ", post-selection " << to_string(r.postselect) << "\n";
  return os.str();
}

std::string eigenvalues_csv(const QuantumSpectrum& s) {
  std::ostringstream os;
  os << "k,energy\n";
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) os << k << "," << format_real(s.eigenvalues(k)) << "\n";
  return os.str();
}

}  // namespace spinbell
