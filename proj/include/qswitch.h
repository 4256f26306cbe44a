/*
 * qswitch — slotted-time scheduling policies and capacity analysis for a
 * star-topology entanglement switch.
 *
 * C API of the shared library. All functions return a qsw_status; output
 * parameters are written only on QSW_OK. Objects are opaque handles released
 * with their _destroy function. qsw_last_error() gives a thread-local message
 * for the most recent failure on the calling thread.
 */
#ifndef QSWITCH_H
#define QSWITCH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qsw_status {
  QSW_OK = 0,
  QSW_ERROR_INVALID_ARGUMENT = 1, /* bad sizes, ranges, or preconditions */
  QSW_ERROR_TOO_LARGE = 2,        /* request exceeds a documented size ceiling */
  QSW_ERROR_IO = 3,               /* file could not be written */
  QSW_ERROR_INTERNAL = 4          /* invariant violation inside the library */
} qsw_status;

const char* qsw_status_name(qsw_status status);
const char* qsw_last_error(void);
const char* qsw_version(void);

/* ---- topology ----------------------------------------------------------- */

/* N clients; request types are unordered client pairs indexed
 * lexicographically, d = N(N-1)/2 of them. Valid N: 2..12. */
typedef struct qsw_topology qsw_topology;

qsw_status qsw_topology_create(int32_t n_clients, qsw_topology** out);
void qsw_topology_destroy(qsw_topology* topo);
int32_t qsw_topology_clients(const qsw_topology* topo);
int32_t qsw_topology_request_types(const qsw_topology* topo);
qsw_status qsw_topology_pair_of(const qsw_topology* topo, int32_t type, int32_t* client_i,
                                int32_t* client_j);
qsw_status qsw_topology_index_of(const qsw_topology* topo, int32_t client_i,
                                 int32_t client_j, int32_t* type);

/* Exact maximum-weight matching restricted to the active link state.
 * state: N entries in {0,1}; weights: d entries; served_out: d entries (0/1).
 * Edges with non-positive weight never serve; ties break to the
 * lexicographically smallest served vector. value_out may be NULL. */
qsw_status qsw_max_weight_matching(const qsw_topology* topo, const uint8_t* state,
                                   const double* weights, uint8_t* served_out,
                                   double* value_out);

/* ---- capacity analysis (LLEs last one slot) ------------------------------ */

typedef enum qsw_verdict {
  QSW_VERDICT_OUTSIDE = 0,
  QSW_VERDICT_BOUNDARY = 1,
  QSW_VERDICT_INSIDE = 2
} qsw_verdict;

/* Membership of the rate vector b (length d) in the capacity region for
 * per-client LLE success probabilities tau (length N). slack_out receives the
 * optimal uniform inflation t* (sign gives the verdict); rate_out, when not
 * NULL, receives a servable rate vector >= b + t* (length d) for verdicts
 * inside/boundary. Supported up to 8 clients. */
qsw_status qsw_capacity_membership(const qsw_topology* topo, const double* tau,
                                   const double* b, int32_t* verdict_out,
                                   double* slack_out, double* rate_out);

/* Largest rho with rho*direction inside the capacity region, within tol. */
qsw_status qsw_boundary_scaling(const qsw_topology* topo, const double* tau,
                                const double* direction, double tol, double* rho_out);

/* ---- congestion control (no decoherence) --------------------------------- */

/* 1 if (alpha, gamma, delta, memory) lies in the guaranteed-safe regime:
 * delta in [2(gamma+alpha)+alpha, 3(gamma+alpha)) and
 * memory >= ceil(gamma/alpha + 1). */
int32_t qsw_params_theorem_valid(double alpha, double gamma, double delta,
                                 int32_t memory_capacity);
int32_t qsw_required_memory(double alpha, double gamma);

/* Static admission/service optimum: minimize delta*<1,[x;Ax]> -
 * gamma*<1,[z;zhat]> over x in conv(Y), 0 <= z <= b, 0 <= zhat <= bhat,
 * [z;zhat] <= [x;Ax]. x_out/z_out have length d, zhat_out length N; any output
 * pointer may be NULL. */
qsw_status qsw_static_congestion_solve(const qsw_topology* topo, const double* b,
                                       const double* bhat, double gamma, double delta,
                                       double* objective_out, double* x_out, double* z_out,
                                       double* zhat_out);

typedef enum qsw_lemma1_outcome {
  QSW_LEMMA1_VIOLATED = 0,
  QSW_LEMMA1_HOLDS = 1,
  QSW_LEMMA1_PRECONDITIONS_UNMET = 2
} qsw_lemma1_outcome;

/* Does the static solution also solve the fluid problem
 * { x in conv(Y) : b <= x, A x <= bhat }? Requires gamma > delta > 0 and a
 * feasible fluid problem; otherwise reports PRECONDITIONS_UNMET. detail_out,
 * when not NULL, receives a malloc'd explanation (free with qsw_string_free). */
qsw_status qsw_lemma1_check(const qsw_topology* topo, const double* b, const double* bhat,
                            double gamma, double delta, int32_t* outcome_out,
                            char** detail_out);

/* ---- traces --------------------------------------------------------------- */

/* Columnar numeric results with '#'-prefixed metadata; identical seed and
 * configuration give byte-identical CSV. */
typedef struct qsw_trace qsw_trace;

void qsw_trace_destroy(qsw_trace* trace);
int32_t qsw_trace_columns(const qsw_trace* trace);
const char* qsw_trace_column_name(const qsw_trace* trace, int32_t column);
int64_t qsw_trace_rows(const qsw_trace* trace);
double qsw_trace_cell(const qsw_trace* trace, int64_t row, int32_t column);
int32_t qsw_trace_meta_lines(const qsw_trace* trace);
const char* qsw_trace_meta_line(const qsw_trace* trace, int32_t index);
qsw_status qsw_trace_meta_add(qsw_trace* trace, const char* line);
qsw_status qsw_trace_write_csv(const qsw_trace* trace, const char* path);
/* Malloc'd CSV text; free with qsw_string_free. */
qsw_status qsw_trace_format_csv(const qsw_trace* trace, char** csv_out);
void qsw_string_free(char* s);

/* ---- simulations ----------------------------------------------------------- */

/* Online policy for the per-slot-decoherence model: i.i.d. link states from
 * tau (length N), i.i.d. Bernoulli request arrivals (length d). Columns:
 * slot, sum_lambda, residual_sq, served_total. checkpoint_interval <= 0
 * records only the final slot. */
qsw_status qsw_run_decoherent(const qsw_topology* topo, const double* tau,
                              const double* request_probs, int64_t slots, uint64_t seed,
                              int64_t checkpoint_interval, qsw_trace** out);

/* Congestion-control policy for the no-decoherence model. request_probs has
 * length d, lle_probs length N. literal_delta switches the service rule to
 * charging delta per queue touched (study variant; never serves in the
 * guaranteed regime). Columns: slot, gap, avg_admission_req,
 * avg_admission_lle, max_qhat, underflows, window_admission_req,
 * window_admission_lle. */
qsw_status qsw_run_congestion(const qsw_topology* topo, const double* request_probs,
                              const double* lle_probs, double alpha, double gamma,
                              double delta, int32_t memory_capacity, int64_t slots,
                              uint64_t seed, int64_t checkpoint_interval,
                              int32_t literal_delta, qsw_trace** out);

/* ---- experiment sweeps ------------------------------------------------------ */

typedef enum qsw_profile {
  QSW_PROFILE_UNIFORM = 0,
  QSW_PROFILE_SKEWED = 1,
  QSW_PROFILE_BOTH = 2
} qsw_profile;

/* Per-type arrival probabilities of a load profile (uniform or skewed),
 * summing to total_load. heavy_types (3 entries) may be NULL for the default
 * disjoint pairs. probs_out has length d. Fails if a probability would
 * exceed 1. */
qsw_status qsw_profile_probs(const qsw_topology* topo, int32_t profile, double total_load,
                             const int32_t* heavy_types, double* probs_out);

/* Load sweep of the decoherent policy. loads (length n_loads) are total
 * expected requests per slot, or fractions of the computed boundary when
 * loads_relative is nonzero. heavy_types may be NULL for the default three
 * disjoint pairs. */
qsw_status qsw_experiment1(const qsw_topology* topo, const double* tau, int32_t profile,
                           const double* loads, int32_t n_loads, int32_t loads_relative,
                           const int32_t* heavy_types, int64_t slots, int32_t seeds,
                           uint64_t seed, qsw_trace** out);

/* Step-size sweep of the congestion policy at symmetric arrival probability p;
 * delta per alpha defaults to the lower end of the guaranteed regime. */
qsw_status qsw_experiment2(const qsw_topology* topo, double p, const double* alphas,
                           int32_t n_alphas, double gamma, int64_t slots, int32_t seeds,
                           uint64_t seed, int64_t checkpoint_interval, qsw_trace** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QSWITCH_H */
