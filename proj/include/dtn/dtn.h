/* Copyright 2026 the dtn authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the dtn library: the doubly truncated Normal family with
 * exact moments and sampling, a CLT convergence experiment engine, and a
 * sign-constrained linear mixed-effects estimator.
 *
 * Every fallible function returns a DTN_* status code and writes results
 * through out-parameters. On failure, dtn_last_error() carries a message
 * for the calling thread. Strings returned through char** are allocated by
 * the library and released with dtn_string_free().
 */

#ifndef DTN_DTN_H_
#define DTN_DTN_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define DTN_OK 0
#define DTN_ERR_DOMAIN 1 /* argument outside its mathematical domain */
#define DTN_ERR_NOT_POSITIVE_DEFINITE 2
#define DTN_ERR_CONFIG 3       /* malformed config; message names the key */
#define DTN_ERR_NONCONVERGED 4 /* fit finished without converging; result \
                                  is still written */
#define DTN_ERR_INTERNAL 5

const char* dtn_version(void);

/* Message for the most recent failure on the calling thread. */
const char* dtn_last_error(void);

void dtn_string_free(char* s);

/* --- symmetric doubly truncated Normal DTN(mu, eta^2, rho) --- */

int dtn_pdf(double mu, double eta, double rho, double x, double* out);
int dtn_cdf(double mu, double eta, double rho, double x, double* out);
int dtn_quantile(double mu, double eta, double rho, double q, double* out);
int dtn_mean(double mu, double eta, double rho, double* out);
int dtn_var(double mu, double eta, double rho, double* out);

/* The variance shrinkage factor 1 - 2 rho phi(rho) / (2 Phi(rho) - 1). */
int dtn_variance_factor(double rho, double* out);

/* Parameters of k0 + k1 * x for centered x ~ DTN(0, eta^2, rho). */
int dtn_affine(double eta, double rho, double k0, double k1, double* out_mu,
               double* out_eta, double* out_rho);

/* --- general truncated Normal TN(mu, eta^2, [a, b]); the bounds may be
       -INFINITY / INFINITY --- */

int dtn_tn_pdf(double mu, double eta, double a, double b, double x,
               double* out);
int dtn_tn_mean(double mu, double eta, double a, double b, double* out);
int dtn_tn_var(double mu, double eta, double a, double b, double* out);

/* --- sampling ---
 *
 * A dtn_rng is an opaque deterministic stream: the same seed always yields
 * the same draws. Streams are not thread-safe; use one per thread.
 */

typedef struct dtn_rng dtn_rng;

dtn_rng* dtn_rng_new(uint64_t seed);
void dtn_rng_free(dtn_rng* rng);

/* Fill out[0..count) with exact inverse-transform draws. */
int dtn_sample(double mu, double eta, double rho, dtn_rng* rng, size_t count,
               double* out);

/* --- CLT convergence experiment ---
 *
 * config_json:
 *   {
 *     "sequence": {
 *       "mu_range": [lo, hi], "eta_range": [lo, hi],
 *       "rho_range": [lo, hi], "weight_range": [lo, hi],
 *       "weight_signs": "positive" | "alternating" | "random",  (optional)
 *       "seed": <uint64>
 *     },
 *     "n_schedule": [n1, n2, ...],
 *     "replications": <count>,
 *     "epsilon": <Lindeberg epsilon>
 *   }
 *
 * The result JSON carries one row object per schedule entry with fields n,
 * ks_distance, sample_mean, sample_var, skewness, excess_kurtosis,
 * lindeberg_sum, t_n. `threads` partitions the replication loop only; the
 * result is bit-identical for any thread count.
 */
int dtn_clt_run(const char* config_json, int threads, char** result_json);

/* --- mixed-model data simulation ---
 *
 * config_json:
 *   {
 *     "groups": <g>,
 *     "group_size": <m_l>            (or "group_sizes": [..] of length g),
 *     "beta": [..k..], "sigma2": <v>, "varsigma": [..p..],
 *     "constrained": [{"column": <z index>, "sign": "nonnegative" |
 *                      "nonpositive"}, ...],
 *     "covariate_range": [lo, hi],   (optional, default [-1, 1])
 *     "seed": <uint64>
 *   }
 *
 * Random column j duplicates covariate j, so p <= k. dtn_simulate_dims
 * reports the array sizes; dtn_simulate fills caller-allocated buffers:
 * y[m], x[m*k] row-major, z[m*p] row-major, group[m] (labels 1..g), and
 * gamma[g*p], the realized per-group effects.
 */
int dtn_simulate_dims(const char* config_json, size_t* m, size_t* k,
                      size_t* p, size_t* g);
int dtn_simulate(const char* config_json, double* y, double* x, double* z,
                 int64_t* group, double* gamma);

/* --- mixed-model maximum likelihood ---
 *
 * Data arrays use the dtn_simulate layout. options_json:
 *   {
 *     "constraints": [{"z_column": <j>, "beta_index": <i>,
 *                      "sign": "nonnegative" | "nonpositive"}, ...],
 *     "optimizer": {"max_iter": .., "diameter_tol": .., "value_tol": ..},
 *     "restarts": <count>,
 *     "init": {"beta": [..], "sigma2": .., "varsigma": [..]}
 *   }
 * with every field optional except "constraints" slots for constrained
 * columns (unlisted columns are unconstrained).
 *
 * The result JSON carries beta, sigma2, varsigma, rho (null where
 * unconstrained), loglik, converged, iterations, termination and the final
 * simplex diagnostics. Returns DTN_ERR_NONCONVERGED (result still written)
 * when the optimizer stopped on its iteration cap.
 */
int dtn_fit(const double* y, const double* x, const double* z,
            const int64_t* group, size_t m, size_t k, size_t p,
            const char* options_json, char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* DTN_DTN_H_ */
