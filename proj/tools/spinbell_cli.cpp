#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinbell/spinbell.h"

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::optional<double> beta;
  std::optional<double> coupling;
  std::optional<double> field;
  std::vector<std::string> fields;  // SITE=VALUE
  std::vector<std::string> edges;   // I,J,VALUE
};

struct Globals {
  std::string spec = "fig1-default";
  std::string out = "out";
  unsigned threads = 0;
  std::string format = "text";
};

class Failure {
 public:
  Failure(int code, std::string message) : code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

void check(sb_status st) {
  if (st != SB_OK) throw Failure(st, sb_last_error());
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Failure(SB_ERR_INPUT, what + ": '" + s + "' is not a number");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--beta", o.beta, "Inverse temperature (must be > 0)");
  cmd->add_option("--J", o.coupling, "Set every coupling");
  cmd->add_option("--h", o.field, "Set every field");
  cmd->add_option("--field", o.fields, "Set one field, SITE=VALUE (repeatable)");
  cmd->add_option("--add-edge", o.edges, "Add an edge, I,J,VALUE (repeatable)");
}

struct SpecHandle {
  sb_spec* ptr = nullptr;
  ~SpecHandle() { sb_spec_free(ptr); }
};

struct ReportHandle {
  sb_report* ptr = nullptr;
  ~ReportHandle() { sb_report_free(ptr); }
};

// A path that exists wins; otherwise the name of a bundled spec is accepted.
void load(const std::string& spec, SpecHandle& h) {
  if (fs::exists(spec)) {
    check(sb_spec_load(spec.c_str(), &h.ptr));
    return;
  }
  if (sb_spec_named(spec.c_str(), &h.ptr) == SB_OK) return;
  throw Failure(SB_ERR_INPUT, "cannot read spec file '" + spec + "'");
}

std::vector<std::string> apply(const Overrides& o, sb_spec* spec) {
  std::vector<std::string> applied;
  if (o.coupling) {
    check(sb_spec_set_uniform_coupling(spec, *o.coupling));
    applied.push_back("J=" + std::to_string(*o.coupling));
  }
  if (o.field) {
    check(sb_spec_set_uniform_field(spec, *o.field));
    applied.push_back("h=" + std::to_string(*o.field));
  }
  for (const auto& f : o.fields) {
    const auto eq = f.find('=');
    if (eq == std::string::npos) throw Failure(SB_ERR_INPUT, "--field expects SITE=VALUE, got '" + f + "'");
    check(sb_spec_set_field(spec, f.substr(0, eq).c_str(), parse_real(f.substr(eq + 1), "--field")));
    applied.push_back("field:" + f);
  }
  for (const auto& e : o.edges) {
    const auto parts = split(e, ',');
    if (parts.size() != 3) throw Failure(SB_ERR_INPUT, "--add-edge expects I,J,VALUE, got '" + e + "'");
    check(sb_spec_add_edge(spec, parts[0].c_str(), parts[1].c_str(), parse_real(parts[2], "--add-edge")));
    applied.push_back("edge:" + e);
  }
  if (o.beta) {
    check(sb_spec_set_beta(spec, *o.beta));
    applied.push_back("beta=" + std::to_string(*o.beta));
  }
  return applied;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Failure(SB_ERR_INPUT, "cannot write '" + path.string() + "'");
}

void emit(const Globals& g, const sb_report* r) {
  std::error_code ec;
  fs::create_directories(g.out, ec);
  if (ec) throw Failure(SB_ERR_INPUT, "cannot create output directory '" + g.out + "': " + ec.message());
  write_file(fs::path(g.out) / "manifest.txt", sb_report_manifest(r));
  const std::size_t n = sb_report_artifact_count(r);
  std::string first_csv;
  for (std::size_t i = 0; i < n; ++i) {
    write_file(fs::path(g.out) / sb_report_artifact_name(r, i), sb_report_artifact_content(r, i));
    if (first_csv.empty() && sb_report_artifact_format(r, i) == SB_FORMAT_CSV)
      first_csv = sb_report_artifact_content(r, i);
  }
  std::cout << (g.format == "csv" && !first_csv.empty() ? first_csv : std::string(sb_report_summary(r)));
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell-CHSH experiments on classical and quantum Ising lattices"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--spec", g.spec, "Spec file, or the name of a bundled spec")->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker thread cap (default: SPINBELL_THREADS or all cores)");
  app.add_option("--format", g.format, "Terminal output format")
      ->check(CLI::IsMember({"csv", "text"}))
      ->capture_default_str();
  app.set_version_flag("--version", std::string(sb_version()));

  Overrides ov;
  std::string convention = "mm";
  std::string lambda_subset;
  bool sweep_subsets = false;

  auto* chsh = app.add_subcommand("chsh", "CHSH value and independence diagnostics");
  auto* diag = app.add_subcommand("diagnose", "Independence diagnostics and pairwise correlations");
  for (auto* cmd : {chsh, diag}) {
    add_overrides(cmd, ov);
    cmd->add_option("--convention", convention, "Minus-sign placement: mm, mp, pm, pp or max");
    cmd->add_option("--lambda-subset", lambda_subset, "Comma-separated hidden sites to condition on");
    cmd->add_flag("--sweep-subsets", sweep_subsets, "Diagnose every non-empty hidden subset");
  }

  sb_search_options search_opt;
  sb_search_options_default(&search_opt);
  std::vector<std::string> params;
  std::vector<double> start;
  bool symmetric = false;
  auto* sweep = app.add_subcommand("sweep", "Exhaustive grid over free parameters");
  auto* search = app.add_subcommand("search", "Compass-search local maximum of X_BI");
  for (auto* cmd : {sweep, search}) {
    add_overrides(cmd, ov);
    cmd->add_option("--param", params, "NAME:LOWER:UPPER with NAME in J, beta, h, h<site>[+<site>...]")
        ->required();
    cmd->add_option("--convention", convention, "Minus-sign placement, or max for the best placement");
    cmd->add_flag("--symmetric", symmetric, "Tie mirrored fields");
  }
  sweep->add_option("--resolution", search_opt.resolution, "Grid points per parameter")->capture_default_str();
  sweep->add_option("--budget", search_opt.budget, "Maximum grid points")->capture_default_str();
  search->add_option("--start", start, "Start values (default: current spec values)");
  search->add_option("--step", search_opt.initial_step, "Initial step")->capture_default_str();
  search->add_option("--tolerance", search_opt.tolerance, "Stop when the step drops below this")
      ->capture_default_str();
  search->add_option("--max-iterations", search_opt.max_iterations, "Iteration cap")->capture_default_str();

  double tolerance = 0.05;
  std::size_t h7_steps = 61;
  auto* repro = app.add_subcommand("reproduce", "Evaluate the published parameter sets over the geometry family");
  repro->add_option("--tolerance", tolerance, "Match tolerance")->capture_default_str();
  repro->add_option("--h7-steps", h7_steps, "Grid points for the h7 sweep")->capture_default_str();

  std::optional<double> qj, qh, qbeta;
  std::string mode = "thermal";
  auto* quantum = app.add_subcommand("quantum", "Transverse-field Ising model, z-basis statistics");
  quantum->add_option("--J", qj, "Coupling (default: spec quantum block, else 1)");
  quantum->add_option("--hx", qh, "Transverse field in units of J (default: spec quantum block, else 0)");
  quantum->add_option("--beta", qbeta, "Inverse temperature (default: spec quantum block, else spec beta)");
  quantum->add_option("--mode", mode, "thermal or ground")->check(CLI::IsMember({"thermal", "ground"}));
  quantum->add_option("--convention", convention, "Minus-sign placement: mm, mp, pm, pp or max");

  sb_mc_config mc_cfg;
  sb_mc_config_default(&mc_cfg);
  auto* mc = app.add_subcommand("mc", "Metropolis estimates of marginals, correlators and X_BI");
  add_overrides(mc, ov);
  mc->add_option("--seed", mc_cfg.seed, "RNG seed")->capture_default_str();
  mc->add_option("--sweeps", mc_cfg.sweeps, "Sweeps per chain")->capture_default_str();
  mc->add_option("--burn-in", mc_cfg.burn_in, "Discarded sweeps per chain")->capture_default_str();
  mc->add_option("--thinning", mc_cfg.thinning, "Keep every k-th sweep")->capture_default_str();
  mc->add_option("--batches", mc_cfg.batch_count, "Batches per chain")->capture_default_str();
  mc->add_option("--chains", mc_cfg.chains, "Independent chains")->capture_default_str();
  std::string postselect = "clamped";
  mc->add_option("--postselect", postselect, "Correlator estimator: clamped or counts")
      ->check(CLI::IsMember({"clamped", "counts"}))
      ->capture_default_str();
  mc->add_option("--convention", convention, "Minus-sign placement: mm, mp, pm, pp or max");

  auto* dump = app.add_subcommand("dump", "Full Boltzmann table and normalised spec");
  add_overrides(dump, ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return SB_ERR_INPUT;
  }

  try {
    if (g.threads) sb_set_thread_cap(g.threads);
    std::string command = app.get_subcommands().front()->get_name();
    ReportHandle report;

    if (command == "reproduce") {
      const sb_run_context ctx{"reproduce", "", nullptr, 0, g.out.c_str()};
      check(sb_run_reproduce(&ctx, tolerance, h7_steps, &report.ptr));
      emit(g, report.ptr);
      return 0;
    }

    SpecHandle spec;
    load(g.spec, spec);
    const auto applied = apply(ov, spec.ptr);
    auto c_applied = c_strings(applied);
    const sb_run_context ctx{command.c_str(), g.spec.c_str(), c_applied.data(), c_applied.size(), g.out.c_str()};

    if (command == "chsh" || command == "diagnose") {
      std::vector<std::size_t> subset;
      if (!lambda_subset.empty()) {
        for (const auto& tok : split(lambda_subset, ',')) {
          std::size_t s = 0;
          check(sb_spec_find_site(spec.ptr, tok.c_str(), &s));
          subset.push_back(s);
        }
      }
      const sb_chsh_options opt{convention.c_str(), subset.empty() ? nullptr : subset.data(), subset.size(),
                                sweep_subsets ? 1 : 0};
      check(command == "chsh" ? sb_run_chsh(spec.ptr, &ctx, &opt, &report.ptr)
                              : sb_run_diagnose(spec.ptr, &ctx, &opt, &report.ptr));
    } else if (command == "sweep" || command == "search") {
      auto c_params = c_strings(params);
      search_opt.params = c_params.data();
      search_opt.n_params = c_params.size();
      search_opt.mirror_tied = symmetric ? 1 : 0;
      search_opt.convention = convention.c_str();
      if (!start.empty()) {
        if (start.size() != params.size()) throw Failure(SB_ERR_INPUT, "--start needs one value per --param");
        search_opt.start = start.data();
      }
      check(command == "sweep" ? sb_run_sweep(spec.ptr, &ctx, &search_opt, &report.ptr)
                               : sb_run_search(spec.ptr, &ctx, &search_opt, &report.ptr));
    } else if (command == "quantum") {
      double j = 1.0, h = 0.0, beta = sb_spec_beta(spec.ptr);
      sb_spec_quantum(spec.ptr, &j, &h, &beta);
      if (qj) j = *qj;
      if (qh) h = *qh;
      if (qbeta) beta = *qbeta;
      std::vector<std::string> q = {"J=" + std::to_string(j), "hx=" + std::to_string(h),
                                    "beta=" + std::to_string(beta), "mode=" + mode};
      auto c_q = c_strings(q);
      const sb_run_context qctx{"quantum", g.spec.c_str(), c_q.data(), c_q.size(), g.out.c_str()};
      const sb_quantum_options opt{j, h, beta, mode == "ground" ? 1 : 0, convention.c_str()};
      check(sb_run_quantum(spec.ptr, &qctx, &opt, &report.ptr));
    } else if (command == "mc") {
      mc_cfg.postselect_counts = postselect == "counts" ? 1 : 0;
      check(sb_run_mc(spec.ptr, &ctx, &mc_cfg, convention.c_str(), &report.ptr));
    } else if (command == "dump") {
      check(sb_run_dump(spec.ptr, &ctx, &report.ptr));
    }
    emit(g, report.ptr);
    return 0;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message() << "\n";
    return f.code();
  }
}
