#include "qswitch.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "core/arrivals.hpp"
#include "core/capacity.hpp"
#include "core/common.hpp"
#include "core/congestion.hpp"
#include "core/decoherent.hpp"
#include "core/experiments.hpp"
#include "core/matching.hpp"
#include "core/table.hpp"
#include "core/topology.hpp"

struct qsw_topology {
  qsw::Topology impl;
};

struct qsw_trace {
  qsw::Table impl;
};

namespace {

thread_local std::string g_lastError;

void setError(const char* what) { g_lastError = what ? what : "unknown error"; }

qsw_status translate(std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const qsw::TooLargeError& ex) {
    setError(ex.what());
    return QSW_ERROR_TOO_LARGE;
  } catch (const std::invalid_argument& ex) {
    setError(ex.what());
    return QSW_ERROR_INVALID_ARGUMENT;
  } catch (const std::out_of_range& ex) {
    setError(ex.what());
    return QSW_ERROR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    setError("out of memory");
    return QSW_ERROR_INTERNAL;
  } catch (const std::exception& ex) {
    setError(ex.what());
    return QSW_ERROR_INTERNAL;
  } catch (...) {
    setError("unknown error");
    return QSW_ERROR_INTERNAL;
  }
}

template <typename Fn>
qsw_status guarded(Fn&& fn) {
  try {
    fn();
    return QSW_OK;
  } catch (...) {
    return translate(std::current_exception());
  }
}

qsw_status requireArgs(bool ok, const char* message) {
  if (!ok) {
    setError(message);
    return QSW_ERROR_INVALID_ARGUMENT;
  }
  return QSW_OK;
}

char* dupString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* qsw_status_name(qsw_status status) {
  switch (status) {
    case QSW_OK: return "ok";
    case QSW_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case QSW_ERROR_TOO_LARGE: return "too large";
    case QSW_ERROR_IO: return "io error";
    case QSW_ERROR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* qsw_last_error(void) { return g_lastError.c_str(); }

const char* qsw_version(void) { return "0.1.0"; }

qsw_status qsw_topology_create(int32_t n_clients, qsw_topology** out) {
  if (auto s = requireArgs(out != nullptr, "topology create: null output"); s != QSW_OK) return s;
  return guarded([&] { *out = new qsw_topology{qsw::Topology(n_clients)}; });
}

void qsw_topology_destroy(qsw_topology* topo) { delete topo; }

int32_t qsw_topology_clients(const qsw_topology* topo) {
  return topo ? topo->impl.clients() : 0;
}

int32_t qsw_topology_request_types(const qsw_topology* topo) {
  return topo ? topo->impl.requestTypes() : 0;
}

qsw_status qsw_topology_pair_of(const qsw_topology* topo, int32_t type, int32_t* client_i,
                                int32_t* client_j) {
  if (auto s = requireArgs(topo && client_i && client_j, "pair_of: null argument");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    auto [i, j] = topo->impl.pairOf(type);
    *client_i = i;
    *client_j = j;
  });
}

qsw_status qsw_topology_index_of(const qsw_topology* topo, int32_t client_i,
                                 int32_t client_j, int32_t* type) {
  if (auto s = requireArgs(topo && type, "index_of: null argument"); s != QSW_OK) return s;
  return guarded([&] { *type = topo->impl.indexOf(client_i, client_j); });
}

qsw_status qsw_max_weight_matching(const qsw_topology* topo, const uint8_t* state,
                                   const double* weights, uint8_t* served_out,
                                   double* value_out) {
  if (auto s = requireArgs(topo && state && weights && served_out,
                           "max_weight_matching: null argument");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    const auto& t = topo->impl;
    qsw::StateMask mask = 0;
    for (int j = 0; j < t.clients(); ++j) {
      if (state[j]) mask |= qsw::StateMask(1) << j;
    }
    const auto wm = qsw::maxWeightMatching(
        t, mask, std::span<const double>(weights, size_t(t.requestTypes())));
    for (int e = 0; e < t.requestTypes(); ++e) served_out[e] = 0;
    for (uint16_t e : wm.edges) served_out[e] = 1;
    if (value_out) *value_out = wm.value;
  });
}

qsw_status qsw_capacity_membership(const qsw_topology* topo, const double* tau,
                                   const double* b, int32_t* verdict_out,
                                   double* slack_out, double* rate_out) {
  if (auto s = requireArgs(topo && tau && b && verdict_out,
                           "capacity_membership: null argument");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    const auto& t = topo->impl;
    qsw::LinkModel model{std::vector<double>(tau, tau + t.clients())};
    const auto res = qsw::capacityMembership(
        t, model, std::span<const double>(b, size_t(t.requestTypes())));
    *verdict_out = int32_t(res.verdict);
    if (slack_out) *slack_out = res.slack;
    if (rate_out) {
      for (int e = 0; e < t.requestTypes(); ++e) {
        rate_out[e] = res.achievedRate.empty() ? 0.0 : res.achievedRate[e];
      }
    }
  });
}

qsw_status qsw_boundary_scaling(const qsw_topology* topo, const double* tau,
                                const double* direction, double tol, double* rho_out) {
  if (auto s = requireArgs(topo && tau && direction && rho_out,
                           "boundary_scaling: null argument");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    const auto& t = topo->impl;
    qsw::LinkModel model{std::vector<double>(tau, tau + t.clients())};
    *rho_out = qsw::boundaryScaling(
        t, model, std::span<const double>(direction, size_t(t.requestTypes())), tol);
  });
}

int32_t qsw_params_theorem_valid(double alpha, double gamma, double delta,
                                 int32_t memory_capacity) {
  qsw::CongestionParams p;
  p.alpha = alpha;
  p.gamma = gamma;
  p.delta = delta;
  p.memoryCapacity = memory_capacity;
  return p.theoremValid() ? 1 : 0;
}

int32_t qsw_required_memory(double alpha, double gamma) {
  if (!(alpha > 0.0) || !(gamma > 0.0)) return -1;
  return qsw::CongestionParams::requiredMemory(alpha, gamma);
}

qsw_status qsw_static_congestion_solve(const qsw_topology* topo, const double* b,
                                       const double* bhat, double gamma, double delta,
                                       double* objective_out, double* x_out, double* z_out,
                                       double* zhat_out) {
  if (auto s = requireArgs(topo && b && bhat, "static_congestion_solve: null argument");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    const auto& t = topo->impl;
    const auto sol = qsw::staticCongestionSolve(
        t, std::span<const double>(b, size_t(t.requestTypes())),
        std::span<const double>(bhat, size_t(t.clients())), gamma, delta);
    if (objective_out) *objective_out = sol.objective;
    for (int e = 0; e < t.requestTypes(); ++e) {
      if (x_out) x_out[e] = sol.x[e];
      if (z_out) z_out[e] = sol.z[e];
    }
    if (zhat_out) {
      for (int j = 0; j < t.clients(); ++j) zhat_out[j] = sol.zHat[j];
    }
  });
}

qsw_status qsw_lemma1_check(const qsw_topology* topo, const double* b, const double* bhat,
                            double gamma, double delta, int32_t* outcome_out,
                            char** detail_out) {
  if (auto s = requireArgs(topo && b && bhat && outcome_out, "lemma1_check: null argument");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    const auto& t = topo->impl;
    const auto report = qsw::lemma1Check(
        t, std::span<const double>(b, size_t(t.requestTypes())),
        std::span<const double>(bhat, size_t(t.clients())), gamma, delta);
    switch (report.status) {
      case qsw::Lemma1Status::Holds: *outcome_out = QSW_LEMMA1_HOLDS; break;
      case qsw::Lemma1Status::Violated: *outcome_out = QSW_LEMMA1_VIOLATED; break;
      case qsw::Lemma1Status::PreconditionsUnmet:
        *outcome_out = QSW_LEMMA1_PRECONDITIONS_UNMET;
        break;
    }
    if (detail_out) {
      *detail_out = dupString(report.detail);
      if (!*detail_out) throw std::bad_alloc();
    }
  });
}

void qsw_trace_destroy(qsw_trace* trace) { delete trace; }

int32_t qsw_trace_columns(const qsw_trace* trace) {
  return trace ? int32_t(trace->impl.columns.size()) : 0;
}

const char* qsw_trace_column_name(const qsw_trace* trace, int32_t column) {
  if (!trace || column < 0 || size_t(column) >= trace->impl.columns.size()) return nullptr;
  return trace->impl.columns[size_t(column)].c_str();
}

int64_t qsw_trace_rows(const qsw_trace* trace) {
  return trace ? int64_t(trace->impl.rows.size()) : 0;
}

double qsw_trace_cell(const qsw_trace* trace, int64_t row, int32_t column) {
  if (!trace || row < 0 || size_t(row) >= trace->impl.rows.size()) return 0.0;
  const auto& r = trace->impl.rows[size_t(row)];
  if (column < 0 || size_t(column) >= r.size()) return 0.0;
  return r[size_t(column)];
}

int32_t qsw_trace_meta_lines(const qsw_trace* trace) {
  return trace ? int32_t(trace->impl.meta.size()) : 0;
}

const char* qsw_trace_meta_line(const qsw_trace* trace, int32_t index) {
  if (!trace || index < 0 || size_t(index) >= trace->impl.meta.size()) return nullptr;
  return trace->impl.meta[size_t(index)].c_str();
}

qsw_status qsw_trace_meta_add(qsw_trace* trace, const char* line) {
  if (auto s = requireArgs(trace && line, "trace_meta_add: null argument"); s != QSW_OK) {
    return s;
  }
  return guarded([&] { trace->impl.meta.push_back(line); });
}

qsw_status qsw_trace_write_csv(const qsw_trace* trace, const char* path) {
  if (auto s = requireArgs(trace && path, "trace_write_csv: null argument"); s != QSW_OK) {
    return s;
  }
  try {
    trace->impl.writeCsv(path);
    return QSW_OK;
  } catch (const std::runtime_error& e) {
    setError(e.what());
    return QSW_ERROR_IO;
  } catch (...) {
    return translate(std::current_exception());
  }
}

qsw_status qsw_trace_format_csv(const qsw_trace* trace, char** csv_out) {
  if (auto s = requireArgs(trace && csv_out, "trace_format_csv: null argument");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    *csv_out = dupString(trace->impl.toCsv());
    if (!*csv_out) throw std::bad_alloc();
  });
}

void qsw_string_free(char* s) { std::free(s); }

qsw_status qsw_run_decoherent(const qsw_topology* topo, const double* tau,
                              const double* request_probs, int64_t slots, uint64_t seed,
                              int64_t checkpoint_interval, qsw_trace** out) {
  if (auto s = requireArgs(topo && tau && request_probs && out,
                           "run_decoherent: null argument");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    const auto& t = topo->impl;
    qsw::LinkModel model{std::vector<double>(tau, tau + t.clients())};
    qsw::ArrivalModel arrivals{
        std::vector<double>(request_probs, request_probs + t.requestTypes()), {}};
    auto trace = qsw::runDecoherent(t, model, arrivals, slots, seed, checkpoint_interval);
    *out = new qsw_trace{std::move(trace)};
  });
}

qsw_status qsw_run_congestion(const qsw_topology* topo, const double* request_probs,
                              const double* lle_probs, double alpha, double gamma,
                              double delta, int32_t memory_capacity, int64_t slots,
                              uint64_t seed, int64_t checkpoint_interval,
                              int32_t literal_delta, qsw_trace** out) {
  if (auto s = requireArgs(topo && request_probs && lle_probs && out,
                           "run_congestion: null argument");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    const auto& t = topo->impl;
    qsw::ArrivalModel arrivals{
        std::vector<double>(request_probs, request_probs + t.requestTypes()),
        std::vector<double>(lle_probs, lle_probs + t.clients())};
    qsw::CongestionParams params;
    params.alpha = alpha;
    params.gamma = gamma;
    params.delta = delta;
    params.memoryCapacity = memory_capacity;
    auto trace = qsw::runCongestion(t, arrivals, params, slots, seed, checkpoint_interval,
                                    literal_delta != 0);
    *out = new qsw_trace{std::move(trace)};
  });
}

qsw_status qsw_profile_probs(const qsw_topology* topo, int32_t profile, double total_load,
                             const int32_t* heavy_types, double* probs_out) {
  if (auto s = requireArgs(topo && probs_out, "profile_probs: null argument"); s != QSW_OK) {
    return s;
  }
  if (auto s = requireArgs(profile == QSW_PROFILE_UNIFORM || profile == QSW_PROFILE_SKEWED,
                           "profile_probs: profile must be uniform or skewed");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    const auto& t = topo->impl;
    qsw::LoadProfile prof;
    prof.kind = profile == QSW_PROFILE_UNIFORM ? qsw::ProfileKind::Uniform
                                               : qsw::ProfileKind::Skewed;
    prof.totalLoad = total_load;
    prof.heavyTypes = heavy_types
                          ? std::array<int, 3>{heavy_types[0], heavy_types[1], heavy_types[2]}
                          : qsw::defaultHeavyTypes(t);
    const auto probs = qsw::profileProbs(t, prof);
    for (int e = 0; e < t.requestTypes(); ++e) probs_out[e] = probs[e];
  });
}

qsw_status qsw_experiment1(const qsw_topology* topo, const double* tau, int32_t profile,
                           const double* loads, int32_t n_loads, int32_t loads_relative,
                           const int32_t* heavy_types, int64_t slots, int32_t seeds,
                           uint64_t seed, qsw_trace** out) {
  if (auto s = requireArgs(topo && tau && (loads || n_loads == 0) && out,
                           "experiment1: null argument");
      s != QSW_OK) {
    return s;
  }
  if (auto s = requireArgs(profile >= QSW_PROFILE_UNIFORM && profile <= QSW_PROFILE_BOTH,
                           "experiment1: bad profile");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    const auto& t = topo->impl;
    qsw::LinkModel model{std::vector<double>(tau, tau + t.clients())};
    qsw::Experiment1Config cfg;
    cfg.profiles.clear();
    if (profile == QSW_PROFILE_UNIFORM || profile == QSW_PROFILE_BOTH) {
      cfg.profiles.push_back(qsw::ProfileKind::Uniform);
    }
    if (profile == QSW_PROFILE_SKEWED || profile == QSW_PROFILE_BOTH) {
      cfg.profiles.push_back(qsw::ProfileKind::Skewed);
    }
    cfg.loads.assign(loads, loads + n_loads);
    cfg.loadsRelative = loads_relative != 0;
    if (heavy_types) {
      cfg.heavyTypes = {heavy_types[0], heavy_types[1], heavy_types[2]};
    }
    cfg.slots = slots;
    cfg.seeds = seeds;
    cfg.seed = seed;
    auto table = qsw::experiment1(t, model, cfg);
    *out = new qsw_trace{std::move(table)};
  });
}

qsw_status qsw_experiment2(const qsw_topology* topo, double p, const double* alphas,
                           int32_t n_alphas, double gamma, int64_t slots, int32_t seeds,
                           uint64_t seed, int64_t checkpoint_interval, qsw_trace** out) {
  if (auto s = requireArgs(topo && alphas && n_alphas > 0 && out,
                           "experiment2: null argument");
      s != QSW_OK) {
    return s;
  }
  return guarded([&] {
    const auto& t = topo->impl;
    qsw::Experiment2Config cfg;
    cfg.alphas.assign(alphas, alphas + n_alphas);
    cfg.p = p;
    cfg.gamma = gamma;
    cfg.slots = slots;
    cfg.seeds = seeds;
    cfg.seed = seed;
    cfg.checkpointInterval = checkpoint_interval;
    auto table = qsw::experiment2(t, cfg);
    *out = new qsw_trace{std::move(table)};
  });
}

}  // extern "C"
