#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinbell/chsh.hpp"
#include "spinbell/independence.hpp"
#include "spinbell/lattice.hpp"
#include "spinbell/mc.hpp"
#include "spinbell/quantum.hpp"
#include "spinbell/search.hpp"

namespace spinbell {

struct RunManifest {
  std::string command;
  std::string spec_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string version = SPINBELL_VERSION;
  std::string timestamp;  // ISO 8601 UTC
  unsigned threads = 0;
};

std::string utc_timestamp();

/// Shortest decimal string that parses back to the same double.
std::string format_real(double v);

/// key=value lines, timestamp included.
std::string manifest_text(const RunManifest& m);
/// "# key=value" lines for CSV files. The timestamp is left out so that
/// reruns produce identical files.
std::string manifest_csv_header(const RunManifest& m);

std::string chsh_text(const ChshReport& r);
std::string chsh_csv(const ChshReport& r);

std::string independence_text(const std::vector<IndependenceReport>& reports, const LatticeSpec& spec);
std::string independence_csv(const std::vector<IndependenceReport>& reports, const LatticeSpec& spec);

std::string pairwise_csv(const PairwiseCorrelation& p);

std::string sweep_csv(const std::vector<std::string>& param_names, const std::vector<SweepRow>& rows);
std::string sweep_text(const std::vector<std::string>& param_names, const std::vector<SweepRow>& rows,
                       std::size_t top = 10);

std::string maximize_csv(const std::vector<std::string>& param_names, const MaximizeResult& r);
std::string maximize_text(const std::vector<std::string>& param_names, const MaximizeResult& r);

std::string reproduction_text(const ReproductionReport& r);
std::string reproduction_csv(const ReproductionReport& r);

std::string mc_csv(const McResult& r, const LatticeSpec& spec);
std::string mc_text(const McResult& r, const LatticeSpec& spec);

std::string eigenvalues_csv(const QuantumSpectrum& s);

}  // namespace spinbell
