#ifndef SPINBELL_H
#define SPINBELL_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPINBELL_BUILDING_LIBRARY)
#define SB_API __attribute__((visibility("default")))
#else
#define SB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes. */
typedef enum sb_status {
  SB_OK = 0,
  SB_ERR_INPUT = 2,
  SB_ERR_CAP = 3,
  SB_ERR_NUMERICAL = 4,
  SB_ERR_INTERNAL = 5
} sb_status;

typedef struct sb_spec sb_spec;
typedef struct sb_distribution sb_distribution;
typedef struct sb_mc_result sb_mc_result;
typedef struct sb_report sb_report;

SB_API const char* sb_version(void);
/* Message of the last failed call on this thread; "" if none. */
SB_API const char* sb_last_error(void);
SB_API void sb_string_free(char* s);

/* 0 restores the default (SPINBELL_THREADS or the hardware count). */
SB_API void sb_set_thread_cap(unsigned n);
SB_API unsigned sb_thread_cap(void);

/* ---- specs ---- */

SB_API sb_status sb_spec_load(const char* path, sb_spec** out);
SB_API sb_status sb_spec_parse(const char* text, sb_spec** out);
SB_API sb_status sb_spec_named(const char* name, sb_spec** out);
/* Newline-separated list of bundled spec names. */
SB_API sb_status sb_spec_named_list(char** out);
SB_API sb_status sb_spec_clone(const sb_spec* spec, sb_spec** out);
SB_API sb_status sb_spec_save(const sb_spec* spec, const char* path);
SB_API sb_status sb_spec_to_string(const sb_spec* spec, char** out);
SB_API void sb_spec_free(sb_spec* spec);

SB_API size_t sb_spec_n_sites(const sb_spec* spec);
SB_API double sb_spec_beta(const sb_spec* spec);
SB_API int sb_spec_equal(const sb_spec* a, const sb_spec* b);
/* Accepts a site label or a decimal index. */
SB_API sb_status sb_spec_find_site(const sb_spec* spec, const char* token, size_t* out);
SB_API sb_status sb_spec_set_beta(sb_spec* spec, double beta);
SB_API sb_status sb_spec_set_uniform_coupling(sb_spec* spec, double coupling);
SB_API sb_status sb_spec_set_uniform_field(sb_spec* spec, double field);
SB_API sb_status sb_spec_set_field(sb_spec* spec, const char* site, double field);
SB_API sb_status sb_spec_add_edge(sb_spec* spec, const char* site_i, const char* site_j, double coupling);
SB_API sb_status sb_spec_set_quantum(sb_spec* spec, double coupling, double transverse, double beta);
/* Returns 1 and fills the outputs when the spec carries quantum parameters. */
SB_API int sb_spec_quantum(const sb_spec* spec, double* coupling, double* transverse, double* beta);
/* SB_OK when valid; otherwise SB_ERR_INPUT or SB_ERR_CAP with the findings in *report. */
SB_API sb_status sb_spec_validate(const sb_spec* spec, char** report);

/* ---- distributions ---- */

SB_API sb_status sb_distribution_build(const sb_spec* spec, sb_distribution** out);
/* Diagonal of the transverse-field model in the z basis; ground != 0 selects
   the ground state instead of the thermal state. */
SB_API sb_status sb_distribution_quantum(const sb_spec* spec, double coupling, double transverse, double beta,
                                         int ground, sb_distribution** out);
SB_API void sb_distribution_free(sb_distribution* dist);
SB_API uint64_t sb_distribution_size(const sb_distribution* dist);
SB_API double sb_distribution_prob(const sb_distribution* dist, uint64_t index);
SB_API double sb_distribution_log_z(const sb_distribution* dist);
SB_API sb_status sb_marginal(const sb_distribution* dist, const size_t* sites, const int* spins, size_t count,
                             double* out);
SB_API sb_status sb_conditional(const sb_distribution* dist, const size_t* target_sites, const int* target_spins,
                                size_t target_count, const size_t* given_sites, const int* given_spins,
                                size_t given_count, double* out);
SB_API sb_status sb_distribution_write_csv(const sb_distribution* dist, const sb_spec* spec, const char* path);

/* ---- CHSH and independence ---- */

typedef struct sb_chsh_result {
  double m[4]; /* (+,+), (-,+), (+,-), (-,-) */
  double setting_probs[4];
  double x_bi;
  char convention[8];
} sb_chsh_result;

/* convention: "mm" (default when NULL), "mp", "pm", "pp" or "max". */
SB_API sb_status sb_chsh(const sb_distribution* dist, const sb_spec* spec, const char* convention,
                         sb_chsh_result* out);

typedef struct sb_deviations {
  double mi;
  double oi;
  double pi;
  double factorability;
  double mi_total_variation;
} sb_deviations;

/* count == 0 uses the full hidden set. */
SB_API sb_status sb_diagnose(const sb_distribution* dist, const sb_spec* spec, const size_t* subset, size_t count,
                             sb_deviations* out);

/* ---- Monte Carlo ---- */

typedef struct sb_mc_config {
  uint64_t seed;
  uint64_t sweeps;
  uint64_t burn_in;
  uint64_t thinning;
  uint64_t batch_count;
  unsigned chains;
  /* 0: clamped setting spins per pair; 1: ratio of counts in the joint run */
  int postselect_counts;
} sb_mc_config;

typedef struct sb_estimate {
  double value;
  double std_error;
  double n_effective;
} sb_estimate;

SB_API void sb_mc_config_default(sb_mc_config* cfg);
SB_API sb_status sb_mc_run(const sb_spec* spec, const sb_mc_config* cfg, const char* convention,
                           sb_mc_result** out);
SB_API void sb_mc_result_free(sb_mc_result* r);
SB_API sb_estimate sb_mc_marginal(const sb_mc_result* r, size_t site);
SB_API sb_estimate sb_mc_correlator(const sb_mc_result* r, size_t setting_pair);
SB_API sb_estimate sb_mc_x_bi(const sb_mc_result* r);

/* ---- command runs ----
   Each run produces a report holding a terminal summary, a manifest and a
   list of named artifacts (text or CSV) ready to be written to disk. */

typedef enum sb_format { SB_FORMAT_TEXT = 0, SB_FORMAT_CSV = 1 } sb_format;

typedef struct sb_run_context {
  const char* command;
  const char* spec_path;
  const char* const* overrides;
  size_t n_overrides;
  const char* out_dir;
} sb_run_context;

typedef struct sb_chsh_options {
  const char* convention;
  const size_t* lambda_subset; /* NULL for the full hidden set */
  size_t lambda_count;
  int sweep_subsets;
} sb_chsh_options;

/* Free parameters are written NAME:LOWER:UPPER with NAME one of
   J (all couplings), beta, h (all fields) or h<site>[+<site>...]. */
typedef struct sb_search_options {
  const char* const* params;
  size_t n_params;
  int mirror_tied;
  const char* convention; /* "max" selects the max-over-placements objective */
  size_t resolution;      /* sweep */
  size_t budget;          /* sweep, 0 for the default */
  const double* start;    /* search, NULL for the interval midpoints */
  double initial_step;
  double tolerance;
  size_t max_iterations;
} sb_search_options;

SB_API void sb_search_options_default(sb_search_options* opt);

typedef struct sb_quantum_options {
  double coupling;
  double transverse;
  double beta;
  int ground;
  const char* convention;
} sb_quantum_options;

SB_API sb_status sb_run_chsh(const sb_spec* spec, const sb_run_context* ctx, const sb_chsh_options* opt,
                             sb_report** out);
SB_API sb_status sb_run_diagnose(const sb_spec* spec, const sb_run_context* ctx, const sb_chsh_options* opt,
                                 sb_report** out);
SB_API sb_status sb_run_sweep(const sb_spec* spec, const sb_run_context* ctx, const sb_search_options* opt,
                              sb_report** out);
SB_API sb_status sb_run_search(const sb_spec* spec, const sb_run_context* ctx, const sb_search_options* opt,
                               sb_report** out);
SB_API sb_status sb_run_reproduce(const sb_run_context* ctx, double tolerance, size_t h7_steps, sb_report** out);
SB_API sb_status sb_run_quantum(const sb_spec* spec, const sb_run_context* ctx, const sb_quantum_options* opt,
                                sb_report** out);
SB_API sb_status sb_run_mc(const sb_spec* spec, const sb_run_context* ctx, const sb_mc_config* cfg,
                           const char* convention, sb_report** out);
SB_API sb_status sb_run_dump(const sb_spec* spec, const sb_run_context* ctx, sb_report** out);

SB_API void sb_report_free(sb_report* r);
SB_API const char* sb_report_summary(const sb_report* r);
SB_API const char* sb_report_manifest(const sb_report* r);
SB_API size_t sb_report_artifact_count(const sb_report* r);
SB_API const char* sb_report_artifact_name(const sb_report* r, size_t i);
SB_API sb_format sb_report_artifact_format(const sb_report* r, size_t i);
SB_API const char* sb_report_artifact_content(const sb_report* r, size_t i);

#ifdef __cplusplus
}
#endif

#endif
