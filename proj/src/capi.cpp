#include "spinbell/spinbell.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "spinbell/chsh.hpp"
#include "spinbell/error.hpp"
#include "spinbell/geometry.hpp"
#include "spinbell/gibbs.hpp"
#include "spinbell/independence.hpp"
#include "spinbell/mc.hpp"
#include "spinbell/parallel.hpp"
#include "spinbell/quantum.hpp"
#include "spinbell/report.hpp"
#include "spinbell/search.hpp"
#include "spinbell/spec_io.hpp"

using namespace spinbell;

struct sb_spec {
  SpecDocument doc;
};

struct sb_distribution {
  DistributionTable table;
};

struct sb_mc_result {
  McResult result;
};

struct sb_report {
  struct Artifact {
    std::string name;
    sb_format format;
    std::string content;
  };
  std::string summary;
  std::string manifest;
  std::vector<Artifact> artifacts;
};

namespace {

thread_local std::string g_last_error;

template <class F>
sb_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<sb_status>(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SB_ERR_CAP;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return SB_ERR_INTERNAL;
  }
}

void require_arg(const void* p, const char* name) {
  if (!p) throw_input(std::string(name) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Site resolve(const LatticeSpec& spec, const char* token) {
  require_arg(token, "site");
  const auto s = spec.find_site(token);
  if (!s) throw_input(std::string("unknown site '") + token + "'");
  return *s;
}

PartialAssignment assignment(const size_t* sites, const int* spins, size_t count) {
  PartialAssignment eta;
  if (count) {
    require_arg(sites, "sites");
    require_arg(spins, "spins");
  }
  for (size_t k = 0; k < count; ++k) eta.set(sites[k], spins[k]);
  return eta;
}

SignConvention convention_of(const char* c) { return c ? parse_convention(c) : SignConvention::minus_mm; }

RunManifest manifest_of(const sb_run_context* ctx, const char* fallback_command) {
  RunManifest m;
  m.command = fallback_command;
  if (ctx) {
    if (ctx->command) m.command = ctx->command;
    if (ctx->spec_path) m.spec_path = ctx->spec_path;
    if (ctx->out_dir) m.out_dir = ctx->out_dir;
    for (size_t k = 0; k < ctx->n_overrides; ++k)
      if (ctx->overrides && ctx->overrides[k]) m.overrides.emplace_back(ctx->overrides[k]);
  }
  m.timestamp = utc_timestamp();
  m.threads = thread_cap();
  return m;
}

struct ReportBuilder {
  RunManifest manifest;
  sb_report* report = new sb_report;

  explicit ReportBuilder(RunManifest m) : manifest(std::move(m)) {}
  ~ReportBuilder() { delete report; }

  void text(std::string name, const std::string& body) {
    report->artifacts.push_back({std::move(name), SB_FORMAT_TEXT, manifest_text(manifest) + "\n" + body});
  }
  void csv(std::string name, const std::string& body) {
    report->artifacts.push_back({std::move(name), SB_FORMAT_CSV, manifest_csv_header(manifest) + body});
  }
  void raw(std::string name, std::string body) {
    report->artifacts.push_back({std::move(name), SB_FORMAT_TEXT, std::move(body)});
  }
  sb_report* release(std::string summary) {
    report->summary = std::move(summary);
    report->manifest = manifest_text(manifest);
    sb_report* out = report;
    report = nullptr;
    return out;
  }
};

std::vector<IndependenceReport> independence_for(const DistributionTable& dist, const LatticeSpec& spec,
                                                 const sb_chsh_options* opt) {
  if (spec.roles.hidden.empty()) return {};
  if (opt && opt->sweep_subsets) return sweep_subsets(dist, spec.roles);
  if (opt && opt->lambda_count) {
    require_arg(opt->lambda_subset, "lambda_subset");
    return {diagnose(dist, spec.roles, std::vector<Site>(opt->lambda_subset, opt->lambda_subset + opt->lambda_count))};
  }
  return {diagnose(dist, spec.roles)};
}

FreeParameter parse_parameter(const LatticeSpec& spec, const std::string& text) {
  const auto hi = text.rfind(':');
  const auto lo = hi == std::string::npos || hi == 0 ? std::string::npos : text.rfind(':', hi - 1);
  if (lo == std::string::npos) throw_input("parameter '" + text + "' must look like NAME:LOWER:UPPER");
  FreeParameter p;
  p.name = text.substr(0, lo);
  try {
    std::size_t used = 0;
    const std::string a = text.substr(lo + 1, hi - lo - 1), b = text.substr(hi + 1);
    p.lower = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    p.upper = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
  } catch (const std::exception&) {
    throw_input("parameter '" + text + "' has non-numeric bounds");
  }
  if (p.name == "J") {
    p.kind = ParameterKind::coupling;
  } else if (p.name == "beta") {
    p.kind = ParameterKind::beta;
  } else if (p.name == "h") {
    p.kind = ParameterKind::field;
    for (Site s = 0; s < spec.n_sites; ++s) p.sites.push_back(s);
  } else if (p.name.size() > 1 && p.name[0] == 'h') {
    p.kind = ParameterKind::field;
    std::stringstream ss(p.name.substr(1));
    std::string tok;
    while (std::getline(ss, tok, '+')) p.sites.push_back(resolve(spec, tok.c_str()));
  } else {
    throw_input("unknown parameter '" + p.name + "'; use J, beta, h or h<site>[+<site>...]");
  }
  return p;
}

SearchProblem problem_of(const LatticeSpec& spec, const sb_search_options* opt) {
  require_arg(opt, "options");
  SearchProblem problem;
  problem.base = spec;
  for (size_t k = 0; k < opt->n_params; ++k) {
    require_arg(opt->params[k], "param");
    problem.params.push_back(parse_parameter(spec, opt->params[k]));
  }
  problem.mirror_tied = opt->mirror_tied != 0;
  if (opt->convention && std::string(opt->convention) == "max") {
    problem.objective = Objective::max_convention;
  } else {
    problem.convention = convention_of(opt->convention);
  }
  validate(problem);
  return problem;
}

double current_value(const LatticeSpec& spec, const FreeParameter& p) {
  switch (p.kind) {
    case ParameterKind::coupling:
      return spec.edges.empty() ? 0.5 * (p.lower + p.upper) : spec.edges.front().coupling;
    case ParameterKind::beta:
      return spec.beta;
    case ParameterKind::field:
      return spec.fields[p.sites.front()];
  }
  return 0.0;
}

std::vector<std::string> names_of(const SearchProblem& problem) {
  std::vector<std::string> names;
  for (const auto& p : problem.params) names.push_back(p.name);
  return names;
}

McConfig config_of(const sb_mc_config& cfg) {
  return {cfg.seed,        cfg.sweeps, cfg.burn_in,
          cfg.thinning,    cfg.batch_count, cfg.chains,
          cfg.postselect_counts ? PostSelection::counts : PostSelection::clamped};
}

std::string distribution_csv(const DistributionTable& dist) {
  std::ostringstream os;
  os << "index";
  for (std::size_t s = 0; s < dist.n_sites(); ++s) os << ",s" << s;
  os << ",probability\n";
  for (std::uint64_t i = 0; i < dist.size(); ++i) {
    os << i;
    for (std::size_t s = 0; s < dist.n_sites(); ++s) os << "," << spin_of(i, s);
    os << "," << format_real(dist.prob(i)) << "\n";
  }
  return os.str();
}

}  // namespace

extern "C" {

const char* sb_version(void) { return SPINBELL_VERSION; }

const char* sb_last_error(void) { return g_last_error.c_str(); }

void sb_string_free(char* s) { delete[] s; }

void sb_set_thread_cap(unsigned n) { set_thread_cap(n); }

unsigned sb_thread_cap(void) { return thread_cap(); }

sb_status sb_spec_load(const char* path, sb_spec** out) {
  return guard([&] {
    require_arg(path, "path");
    require_arg(out, "out");
    *out = new sb_spec{load_spec(path)};
  });
}

sb_status sb_spec_parse(const char* text, sb_spec** out) {
  return guard([&] {
    require_arg(text, "text");
    require_arg(out, "out");
    *out = new sb_spec{parse_spec(text)};
  });
}

sb_status sb_spec_named(const char* name, sb_spec** out) {
  return guard([&] {
    require_arg(name, "name");
    require_arg(out, "out");
    *out = new sb_spec{named_document(name)};
  });
}

sb_status sb_spec_named_list(char** out) {
  return guard([&] {
    require_arg(out, "out");
    std::string s;
    for (const auto& n : named_spec_names()) s += n + "\n";
    *out = dup_string(s);
  });
}

sb_status sb_spec_clone(const sb_spec* spec, sb_spec** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(out, "out");
    *out = new sb_spec{spec->doc};
  });
}

sb_status sb_spec_save(const sb_spec* spec, const char* path) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(path, "path");
    save_spec(spec->doc, path);
  });
}

sb_status sb_spec_to_string(const sb_spec* spec, char** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(out, "out");
    *out = dup_string(dump_spec(spec->doc));
  });
}

void sb_spec_free(sb_spec* spec) { delete spec; }

size_t sb_spec_n_sites(const sb_spec* spec) { return spec ? spec->doc.lattice.n_sites : 0; }

double sb_spec_beta(const sb_spec* spec) { return spec ? spec->doc.lattice.beta : 0.0; }

int sb_spec_equal(const sb_spec* a, const sb_spec* b) { return a && b && a->doc == b->doc; }

sb_status sb_spec_find_site(const sb_spec* spec, const char* token, size_t* out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(out, "out");
    *out = resolve(spec->doc.lattice, token);
  });
}

sb_status sb_spec_set_beta(sb_spec* spec, double beta) {
  return guard([&] {
    require_arg(spec, "spec");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw_input("beta must be a positive finite number");
    spec->doc.lattice.beta = beta;
  });
}

sb_status sb_spec_set_uniform_coupling(sb_spec* spec, double coupling) {
  return guard([&] {
    require_arg(spec, "spec");
    if (!std::isfinite(coupling)) throw_input("coupling must be finite");
    for (auto& e : spec->doc.lattice.edges) e.coupling = coupling;
  });
}

sb_status sb_spec_set_uniform_field(sb_spec* spec, double field) {
  return guard([&] {
    require_arg(spec, "spec");
    if (!std::isfinite(field)) throw_input("field must be finite");
    for (auto& h : spec->doc.lattice.fields) h = field;
  });
}

sb_status sb_spec_set_field(sb_spec* spec, const char* site, double field) {
  return guard([&] {
    require_arg(spec, "spec");
    if (!std::isfinite(field)) throw_input("field must be finite");
    auto& lat = spec->doc.lattice;
    const Site s = resolve(lat, site);
    if (s >= lat.fields.size()) throw_input("spec has no field entry for that site");
    lat.fields[s] = field;
  });
}

sb_status sb_spec_add_edge(sb_spec* spec, const char* site_i, const char* site_j, double coupling) {
  return guard([&] {
    require_arg(spec, "spec");
    if (!std::isfinite(coupling)) throw_input("coupling must be finite");
    auto& lat = spec->doc.lattice;
    lat.edges.push_back({resolve(lat, site_i), resolve(lat, site_j), coupling});
  });
}

sb_status sb_spec_set_quantum(sb_spec* spec, double coupling, double transverse, double beta) {
  return guard([&] {
    require_arg(spec, "spec");
    if (!std::isfinite(coupling) || !std::isfinite(transverse)) throw_input("quantum couplings must be finite");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw_input("beta must be a positive finite number");
    spec->doc.quantum = QuantumParams{coupling, transverse, beta};
  });
}

int sb_spec_quantum(const sb_spec* spec, double* coupling, double* transverse, double* beta) {
  if (!spec || !spec->doc.quantum) return 0;
  if (coupling) *coupling = spec->doc.quantum->coupling;
  if (transverse) *transverse = spec->doc.quantum->transverse;
  if (beta) *beta = spec->doc.quantum->beta;
  return 1;
}

sb_status sb_spec_validate(const sb_spec* spec, char** report) {
  if (report) *report = nullptr;
  return guard([&] {
    require_arg(spec, "spec");
    const auto rep = validate_spec(spec->doc.lattice);
    if (report) *report = dup_string(rep.describe());
    require_valid(spec->doc.lattice);
  });
}

sb_status sb_distribution_build(const sb_spec* spec, sb_distribution** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(out, "out");
    *out = new sb_distribution{build_distribution(spec->doc.lattice)};
  });
}

sb_status sb_distribution_quantum(const sb_spec* spec, double coupling, double transverse, double beta, int ground,
                                  sb_distribution** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(out, "out");
    const QuantumModel model{spec->doc.lattice, {coupling, transverse, beta}};
    *out = new sb_distribution{z_distribution(model, ground ? QuantumState::ground : QuantumState::thermal)};
  });
}

void sb_distribution_free(sb_distribution* dist) { delete dist; }

uint64_t sb_distribution_size(const sb_distribution* dist) { return dist ? dist->table.size() : 0; }

double sb_distribution_prob(const sb_distribution* dist, uint64_t index) {
  return dist && index < dist->table.size() ? dist->table.prob(index) : 0.0;
}

double sb_distribution_log_z(const sb_distribution* dist) { return dist ? dist->table.log_z() : 0.0; }

sb_status sb_marginal(const sb_distribution* dist, const size_t* sites, const int* spins, size_t count, double* out) {
  return guard([&] {
    require_arg(dist, "dist");
    require_arg(out, "out");
    *out = marginal(dist->table, assignment(sites, spins, count));
  });
}

sb_status sb_conditional(const sb_distribution* dist, const size_t* target_sites, const int* target_spins,
                         size_t target_count, const size_t* given_sites, const int* given_spins, size_t given_count,
                         double* out) {
  return guard([&] {
    require_arg(dist, "dist");
    require_arg(out, "out");
    *out = conditional(dist->table, assignment(target_sites, target_spins, target_count),
                       assignment(given_sites, given_spins, given_count));
  });
}

sb_status sb_distribution_write_csv(const sb_distribution* dist, const sb_spec* spec, const char* path) {
  return guard([&] {
    require_arg(dist, "dist");
    require_arg(spec, "spec");
    require_arg(path, "path");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw_input(std::string("cannot write '") + path + "'");
    write_distribution_csv(os, dist->table, spec->doc.lattice);
  });
}

sb_status sb_chsh(const sb_distribution* dist, const sb_spec* spec, const char* convention, sb_chsh_result* out) {
  return guard([&] {
    require_arg(dist, "dist");
    require_arg(spec, "spec");
    require_arg(out, "out");
    require_valid(spec->doc.lattice);
    const auto r = chsh(dist->table, spec->doc.lattice.roles, convention_of(convention));
    for (int k = 0; k < 4; ++k) {
      out->m[k] = r.m[k];
      out->setting_probs[k] = r.setting_probs[k];
    }
    out->x_bi = r.x_bi;
    std::snprintf(out->convention, sizeof out->convention, "%s", to_string(r.convention));
  });
}

sb_status sb_diagnose(const sb_distribution* dist, const sb_spec* spec, const size_t* subset, size_t count,
                      sb_deviations* out) {
  return guard([&] {
    require_arg(dist, "dist");
    require_arg(spec, "spec");
    require_arg(out, "out");
    const auto& roles = spec->doc.lattice.roles;
    if (count) require_arg(subset, "subset");
    const auto r = count ? diagnose(dist->table, roles, std::vector<Site>(subset, subset + count))
                         : diagnose(dist->table, roles);
    *out = {r.mi.value, r.oi.value, r.pi.value, r.factorability.value, r.mi_total_variation};
  });
}

void sb_mc_config_default(sb_mc_config* cfg) {
  if (!cfg) return;
  const McConfig d;
  *cfg = {d.seed, d.sweeps, d.burn_in, d.thinning, d.batch_count, d.chains, d.postselect == PostSelection::counts};
}

sb_status sb_mc_run(const sb_spec* spec, const sb_mc_config* cfg, const char* convention, sb_mc_result** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(cfg, "cfg");
    require_arg(out, "out");
    const McConfig c = config_of(*cfg);
    *out = new sb_mc_result{metropolis_run(spec->doc.lattice, c, convention_of(convention))};
  });
}

void sb_mc_result_free(sb_mc_result* r) { delete r; }

sb_estimate sb_mc_marginal(const sb_mc_result* r, size_t site) {
  if (!r || site >= r->result.marginals.size()) return {0, 0, 0};
  const auto& e = r->result.marginals[site];
  return {e.value, e.std_error, e.n_effective};
}

sb_estimate sb_mc_correlator(const sb_mc_result* r, size_t setting_pair) {
  if (!r || setting_pair >= 4) return {0, 0, 0};
  const auto& e = r->result.correlators[setting_pair];
  return {e.value, e.std_error, e.n_effective};
}

sb_estimate sb_mc_x_bi(const sb_mc_result* r) {
  if (!r) return {0, 0, 0};
  const auto& e = r->result.x_bi;
  return {e.value, e.std_error, e.n_effective};
}

void sb_search_options_default(sb_search_options* opt) {
  if (!opt) return;
  const MaximizeOptions m;
  *opt = {};
  opt->resolution = 21;
  opt->budget = kDefaultSweepBudget;
  opt->initial_step = m.initial_step;
  opt->tolerance = m.tolerance;
  opt->max_iterations = m.max_iterations;
}

sb_status sb_run_chsh(const sb_spec* spec, const sb_run_context* ctx, const sb_chsh_options* opt, sb_report** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(out, "out");
    const auto& lat = spec->doc.lattice;
    require_valid(lat);
    ReportBuilder rb(manifest_of(ctx, "chsh"));
    const auto dist = build_distribution(lat);
    const auto c = chsh(dist, lat.roles, convention_of(opt ? opt->convention : nullptr));
    const auto ind = independence_for(dist, lat, opt);
    rb.text("chsh.txt", chsh_text(c));
    rb.csv("chsh.csv", chsh_csv(c));
    rb.text("independence.txt", independence_text(ind, lat));
    rb.csv("independence.csv", independence_csv(ind, lat));
    *out = rb.release(chsh_text(c) + independence_text(ind, lat));
  });
}

sb_status sb_run_diagnose(const sb_spec* spec, const sb_run_context* ctx, const sb_chsh_options* opt,
                          sb_report** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(out, "out");
    const auto& lat = spec->doc.lattice;
    require_valid(lat);
    if (lat.roles.hidden.empty()) throw_input("spec has no hidden sites to diagnose");
    ReportBuilder rb(manifest_of(ctx, "diagnose"));
    const auto dist = build_distribution(lat);
    const auto ind = independence_for(dist, lat, opt);
    const auto pc = pairwise_correlations(dist);
    rb.csv("independence.csv", independence_csv(ind, lat));
    rb.text("independence.txt", independence_text(ind, lat));
    rb.csv("pairwise.csv", pairwise_csv(pc));
    std::string summary = independence_text(ind, lat);
    summary += std::string("pairwise: ") + (pc.fully_correlated ? "every pair correlated" : "some pair independent") +
               " (threshold " + format_real(pc.threshold) + ")\n";
    *out = rb.release(summary);
  });
}

sb_status sb_run_sweep(const sb_spec* spec, const sb_run_context* ctx, const sb_search_options* opt,
                       sb_report** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(out, "out");
    const auto problem = problem_of(spec->doc.lattice, opt);
    ReportBuilder rb(manifest_of(ctx, "sweep"));
    const auto rows = grid_sweep(problem, opt->resolution, opt->budget ? opt->budget : kDefaultSweepBudget);
    const auto names = names_of(problem);
    rb.csv("sweep.csv", sweep_csv(names, rows));
    rb.text("sweep.txt", sweep_text(names, rows));
    *out = rb.release(sweep_text(names, rows));
  });
}

sb_status sb_run_search(const sb_spec* spec, const sb_run_context* ctx, const sb_search_options* opt,
                        sb_report** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(out, "out");
    const auto problem = problem_of(spec->doc.lattice, opt);
    require_valid(problem.base);
    std::vector<double> start;
    for (std::size_t k = 0; k < problem.params.size(); ++k)
      start.push_back(opt->start ? opt->start[k] : current_value(problem.base, problem.params[k]));
    ReportBuilder rb(manifest_of(ctx, "search"));
    const auto res = local_maximize(problem, start, {opt->initial_step, opt->tolerance, opt->max_iterations});
    const auto names = names_of(problem);
    rb.text("search.txt", maximize_text(names, res));
    rb.csv("search_trace.csv", maximize_csv(names, res));
    rb.raw("search_best.json", dump_spec({apply_parameters(problem, res.values), spec->doc.quantum}));
    *out = rb.release(maximize_text(names, res));
  });
}

sb_status sb_run_reproduce(const sb_run_context* ctx, double tolerance, size_t h7_steps, sb_report** out) {
  return guard([&] {
    require_arg(out, "out");
    ReproductionOptions options;
    if (tolerance > 0.0) options.tolerance = tolerance;
    if (h7_steps > 0) options.h7_steps = h7_steps;
    ReportBuilder rb(manifest_of(ctx, "reproduce"));
    const auto family = default_geometry_family();
    const auto rep = reproduce_paper_points(family, options);
    std::string text = reproduction_text(rep);
    if (!rep.no_admissible_geometry) {
      const auto& g = family[rep.best_index];
      const LatticeSpec spec = with_uniform(g, 1.0, 1.4);
      const auto dist = build_distribution(spec);
      const double x = chsh(dist, spec.roles).x_bi;
      const auto d = diagnose(dist, spec.roles);
      const bool holds = x > 2.0 && d.factorability.value < 1e-10 && d.mi.value > 1e-3;
      text += "\nproperty check on " + g.name + " at h=1, J=1.4: x_bi = " + format_real(x) +
              ", fact_dev = " + format_real(d.factorability.value) + ", mi_dev = " + format_real(d.mi.value) +
              (holds ? "  (violation with factorability intact and MI broken)\n" : "  (property NOT shown)\n");
    }
    rb.text("reproduce.txt", text);
    rb.csv("reproduce.csv", reproduction_csv(rep));
    *out = rb.release(text);
  });
}

sb_status sb_run_quantum(const sb_spec* spec, const sb_run_context* ctx, const sb_quantum_options* opt,
                         sb_report** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(opt, "options");
    require_arg(out, "out");
    const auto& lat = spec->doc.lattice;
    require_valid(lat);
    if (!(opt->beta > 0.0) || !std::isfinite(opt->beta)) throw_input("beta must be a positive finite number");
    ReportBuilder rb(manifest_of(ctx, "quantum"));
    const QuantumModel model{lat, {opt->coupling, opt->transverse, opt->beta}};
    const auto spectrum = diagonalize(model);
    const auto dist = opt->ground ? ground_z_distribution(spectrum, lat.n_sites)
                                  : thermal_z_distribution(spectrum, lat.n_sites, opt->beta);
    const auto c = chsh(dist, lat.roles, convention_of(opt->convention));
    std::vector<IndependenceReport> ind;
    if (!lat.roles.hidden.empty()) ind.push_back(diagnose(dist, lat.roles));
    rb.csv("distribution.csv", distribution_csv(dist));
    rb.csv("eigenvalues.csv", eigenvalues_csv(spectrum));
    rb.text("chsh.txt", chsh_text(c));
    rb.csv("chsh.csv", chsh_csv(c));
    rb.text("independence.txt", independence_text(ind, lat));
    rb.csv("independence.csv", independence_csv(ind, lat));
    std::ostringstream head;
    head << "transverse-field model: J = " << format_real(opt->coupling) << ", h = " << format_real(opt->transverse)
         << ", beta = " << format_real(opt->beta) << ", state = " << (opt->ground ? "ground" : "thermal") << "\n"
         << "  E0 = " << format_real(spectrum.eigenvalues(0)) << ", dimension = " << spectrum.eigenvalues.size()
         << "\n";
    *out = rb.release(head.str() + chsh_text(c) + independence_text(ind, lat));
  });
}

sb_status sb_run_mc(const sb_spec* spec, const sb_run_context* ctx, const sb_mc_config* cfg, const char* convention,
                    sb_report** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(cfg, "cfg");
    require_arg(out, "out");
    const auto& lat = spec->doc.lattice;
    auto m = manifest_of(ctx, "mc");
    m.seed = cfg->seed;
    ReportBuilder rb(std::move(m));
    const McConfig c = config_of(*cfg);
    const auto res = metropolis_run(lat, c, convention_of(convention));
    rb.csv("mc.csv", mc_csv(res, lat));
    rb.text("mc.txt", mc_text(res, lat));
    *out = rb.release(mc_text(res, lat));
  });
}

sb_status sb_run_dump(const sb_spec* spec, const sb_run_context* ctx, sb_report** out) {
  return guard([&] {
    require_arg(spec, "spec");
    require_arg(out, "out");
    const auto& lat = spec->doc.lattice;
    require_valid(lat, kDefaultEnumerationCap, false);
    ReportBuilder rb(manifest_of(ctx, "dump"));
    const auto dist = build_distribution(lat);
    std::ostringstream csv;
    write_distribution_csv(csv, dist, lat);
    rb.csv("distribution.csv", csv.str());
    rb.raw("spec.json", dump_spec(spec->doc));
    std::ostringstream summary;
    summary << "configurations = " << dist.size() << "\nlog Z = " << format_real(dist.log_z())
            << "\nZ = " << format_real(std::exp(dist.log_z())) << "\n";
    rb.text("summary.txt", summary.str());
    *out = rb.release(summary.str());
  });
}

void sb_report_free(sb_report* r) { delete r; }

const char* sb_report_summary(const sb_report* r) { return r ? r->summary.c_str() : ""; }

const char* sb_report_manifest(const sb_report* r) { return r ? r->manifest.c_str() : ""; }

size_t sb_report_artifact_count(const sb_report* r) { return r ? r->artifacts.size() : 0; }

const char* sb_report_artifact_name(const sb_report* r, size_t i) {
  return r && i < r->artifacts.size() ? r->artifacts[i].name.c_str() : "";
}

sb_format sb_report_artifact_format(const sb_report* r, size_t i) {
  return r && i < r->artifacts.size() ? r->artifacts[i].format : SB_FORMAT_TEXT;
}

const char* sb_report_artifact_content(const sb_report* r, size_t i) {
  return r && i < r->artifacts.size() ? r->artifacts[i].content.c_str() : "";
}

}  // extern "C"
