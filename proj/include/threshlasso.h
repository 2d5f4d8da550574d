/* threshlasso - two-regime threshold regression with a scaled L1 penalty
 * and hard-threshold variable selection.
 *
 * C interface of the shared library. Objects are opaque handles created and
 * released through the functions below; every fallible call returns TL_OK
 * or an error code resolvable with tl_strerror(). A thread-local detail
 * message for the most recent failure is available via tl_last_error().
 * Strings returned through char** out-parameters are heap-allocated and
 * must be released with tl_string_free().
 */

#ifndef THRESHLASSO_H
#define THRESHLASSO_H

#ifdef __cplusplus
extern "C" {
#endif

#define TL_OK 0
#define TL_ERR_INVALID_ARGUMENT 1
#define TL_ERR_RUNTIME 2
#define TL_ERR_IO 3
#define TL_ERR_NOMEM 4

typedef struct tl_dataset tl_dataset;
typedef struct tl_fit tl_fit;

const char* tl_version(void);
const char* tl_strerror(int code);
const char* tl_last_error(void);
void tl_string_free(char* s);

/* ---- datasets ---------------------------------------------------------- */

/* x is column-major n*m; y and q have length n. */
int tl_dataset_create(int n, int m, const double* x, const double* y,
                      const double* q, tl_dataset** out);

/* Toggle the unpenalized intercept columns (plain and regime-interacted). */
int tl_dataset_set_intercepts(tl_dataset* data, int intercept,
                              int thresh_intercept);

/* Reads a header CSV: y_col is the response, q_col the threshold variable,
 * every other column a regressor. */
int tl_dataset_from_csv(const char* path, const char* y_col,
                        const char* q_col, tl_dataset** out);

int tl_dataset_dims(const tl_dataset* data, int* n, int* m);
void tl_dataset_free(tl_dataset* data);

/* ---- estimation -------------------------------------------------------- */

typedef struct tl_fit_options {
  /* candidate-threshold grid, as centiles of q */
  double grid_lo, grid_hi, grid_step;
  int exhaustive_tau; /* search every observed q value inside the bounds */
  /* penalty path */
  int n_lambda;
  double lambda_min_ratio;
  double fixed_lambda;   /* >= 0 skips BIC selection */
  double theoretical_a;  /* >= 0 uses a*sqrt(log(3m)/(n*rn)) */
  /* hard-threshold constant grid */
  double c_lo, c_hi, c_step;
  double fixed_c;  /* > 0 skips BIC selection */
  int two_c_rule;  /* cutoff 2*C*lambda instead of C*lambda */
  /* solver */
  double coef_tol, kkt_tol;
  int max_sweeps;
} tl_fit_options;

void tl_fit_options_init(tl_fit_options* opts);

int tl_fit_run(const tl_dataset* data, const tl_fit_options* opts,
               tl_fit** out);

/* n_coef is the number of design columns (2m plus intercepts). */
int tl_fit_dims(const tl_fit* fit, int* n_coef, int* m);
/* Either destination may be NULL; non-NULL buffers need n_coef doubles. */
int tl_fit_coefficients(const tl_fit* fit, double* alpha_hat,
                        double* alpha_tilde);
/* Any destination may be NULL. */
int tl_fit_scalars(const tl_fit* fit, double* tau_hat, double* lambda_hat,
                   double* c_hat, double* bic);
int tl_fit_break_detected(const tl_fit* fit, int* detected);
int tl_fit_profile_size(const tl_fit* fit, int* size);
int tl_fit_profile_point(const tl_fit* fit, int index, double* tau,
                         double* criterion, double* rss_n, int* converged);
/* Full fit as JSON: coefficients, selected tuning values, profile trace. */
int tl_fit_to_json(const tl_fit* fit, char** json);
void tl_fit_free(tl_fit* fit);

/* ---- closed-form pieces ------------------------------------------------ */

int tl_theoretical_lambda(double a, int m, int n, double rn, double* out);
int tl_rn_ratio(const tl_dataset* data, double t0, double* out);

/* ---- simulation harness ------------------------------------------------ */

typedef struct tl_dgp_config {
  int n, m;
  int beta_nonzeros, delta_nonzeros;
  double scale;
  int delta_alternating;
  double tau0, sigma2;
  int include_intercept;
} tl_dgp_config;

void tl_dgp_config_init(tl_dgp_config* config);

/* Runs a preset suite (table1..table5). Any of csv/text/json may be NULL;
 * json carries per-replication detail. */
int tl_run_table(const char* table, int reps, unsigned long long seed,
                 int threads, const tl_fit_options* opts, char** csv,
                 char** text, char** json);

/* Same harness for a single custom process. */
int tl_run_custom(const tl_dgp_config* config, int reps,
                  unsigned long long seed, int threads,
                  const tl_fit_options* opts, char** csv, char** text,
                  char** json);

/* ---- growth application ------------------------------------------------ */

typedef struct tl_growth_spec {
  const char* csv_path;
  const char* country_col;
  const char* year_col;
  const char* gdp_col;
  const char* threshold_col;
  const char* control_cols; /* comma separated; NULL or "" = every other column */
  int horizon;
  int fixed_effects;
  int year_min, year_max;   /* 0 = unbounded */
  const char* year_list;    /* comma separated, overrides min/max; NULL = off */
  int scale_100;
  int penalize_intercepts;
} tl_growth_spec;

void tl_growth_spec_init(tl_growth_spec* spec);

int tl_growth_run(const tl_growth_spec* spec, const tl_fit_options* opts,
                  char** coef_csv, char** text, char** json);

/* ---- equicorrelation theory check -------------------------------------- */

/* Evaluates the closed-form inverse norm and its bound over the grid of
 * (m, rho, tau) triples; writes an aligned text table and the number of
 * bound violations. */
int tl_theory_check(const int* ms, int n_m, const double* rhos, int n_rho,
                    const double* taus, int n_tau, char** table,
                    int* violations);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* THRESHLASSO_H */
