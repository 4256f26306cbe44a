// qsw — command-line front end of the qswitch shared library.
//
// Subcommands: capacity, static-solve, lemma1-check, simulate, sweep.
// Exit codes: 0 success, 1 runtime failure, 2 validation failure.

#include <cstdio>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qswitch.h"
#include "run_config.hpp"

using qsw::cli::RunConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct ExitWith {
  int code;
  std::string message;
};

void checkApi(qsw_status s) {
  if (s == QSW_OK) return;
  const int code = (s == QSW_ERROR_INVALID_ARGUMENT || s == QSW_ERROR_TOO_LARGE)
                       ? kExitValidation
                       : kExitRuntime;
  throw ExitWith{code, std::string(qsw_status_name(s)) + ": " + qsw_last_error()};
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ExitWith{kExitValidation, message};
}

struct TopologyHandle {
  qsw_topology* h = nullptr;
  explicit TopologyHandle(int n) { checkApi(qsw_topology_create(n, &h)); }
  ~TopologyHandle() { qsw_topology_destroy(h); }
  TopologyHandle(const TopologyHandle&) = delete;
  TopologyHandle& operator=(const TopologyHandle&) = delete;
};

struct TraceHandle {
  qsw_trace* h = nullptr;
  ~TraceHandle() { qsw_trace_destroy(h); }
};

// scalar entries broadcast to the expected length
std::vector<double> expandList(const std::string& text, int length, const char* name) {
  std::vector<double> v;
  try {
    v = qsw::cli::parseDoubleList(text);
  } catch (const std::invalid_argument& e) {
    throw ExitWith{kExitValidation, std::string(name) + ": " + e.what()};
  }
  if (int(v.size()) == 1 && length > 1) v.assign(size_t(length), v[0]);
  require(int(v.size()) == length,
          std::string(name) + ": expected 1 or " + std::to_string(length) + " values");
  return v;
}

std::string resolveOutPath(const std::string& out) {
  if (out.empty() || out == "-") return out;
  const char* dir = std::getenv("QSW_OUT_DIR");
  if (dir && *dir && out.front() != '/') return std::string(dir) + "/" + out;
  return out;
}

void emitTrace(qsw_trace* trace, const std::vector<std::string>& configLines,
               const std::string& out) {
  checkApi(qsw_trace_meta_add(trace, (std::string("qswitch_version=") + qsw_version()).c_str()));
  for (const auto& line : configLines) {
    checkApi(qsw_trace_meta_add(trace, ("config." + line).c_str()));
  }
  const std::string path = resolveOutPath(out);
  if (path.empty() || path == "-") {
    char* csv = nullptr;
    checkApi(qsw_trace_format_csv(trace, &csv));
    std::fputs(csv, stdout);
    qsw_string_free(csv);
  } else {
    checkApi(qsw_trace_write_csv(trace, path.c_str()));
  }
}

const char* verdictName(int32_t v) {
  switch (v) {
    case QSW_VERDICT_INSIDE: return "inside";
    case QSW_VERDICT_BOUNDARY: return "boundary";
    default: return "outside";
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---- capacity ---------------------------------------------------------------

struct CapacityArgs {
  int n = 6;
  std::string tau = "0.8";
  std::string b;
  std::string direction;
  double tol = 1e-4;
  std::string format = "human";
};

int cmdCapacity(const CapacityArgs& args) {
  require(!args.b.empty() || !args.direction.empty(),
          "capacity: provide --b and/or --direction");
  TopologyHandle topo(args.n);
  const int d = qsw_topology_request_types(topo.h);
  const auto tau = expandList(args.tau, args.n, "--tau");

  bool haveVerdict = false;
  int32_t verdict = 0;
  double slack = 0.0;
  std::vector<double> rate(size_t(d), 0.0);
  if (!args.b.empty()) {
    const auto b = expandList(args.b, d, "--b");
    checkApi(qsw_capacity_membership(topo.h, tau.data(), b.data(), &verdict, &slack,
                                     rate.data()));
    haveVerdict = true;
  }

  // boundary along --direction when given, else along b; a zero default
  // direction (b = 0) just skips the boundary report
  const std::string dirText = args.direction.empty() ? args.b : args.direction;
  const auto direction = expandList(dirText, d, "--direction");
  double dirTotal = 0.0;
  for (double v : direction) dirTotal += v;
  require(dirTotal > 0.0 || args.direction.empty(),
          "capacity: direction must have a positive entry");
  double rho = 0.0;
  const bool haveBoundary = dirTotal > 0.0;
  if (haveBoundary) {
    checkApi(qsw_boundary_scaling(topo.h, tau.data(), direction.data(), args.tol, &rho));
  }

  if (args.format == "csv") {
    std::printf("# qswitch_version=%s\n", qsw_version());
    std::printf("# config.n=%d\n# config.tau=%s\n# config.tol=%s\n", args.n,
                args.tau.c_str(), fmt(args.tol).c_str());
    std::printf("verdict,slack,rho_star,boundary_total_load\n");
    std::printf("%s,%s,%s,%s\n", haveVerdict ? verdictName(verdict) : "none",
                fmt(haveVerdict ? slack : 0.0).c_str(), fmt(rho).c_str(),
                fmt(rho * dirTotal).c_str());
  } else {
    if (haveVerdict) {
      std::printf("verdict: %s\n", verdictName(verdict));
      std::printf("uniform slack t*: %s\n", fmt(slack).c_str());
      if (verdict != QSW_VERDICT_OUTSIDE) {
        std::printf("servable rate:");
        for (double v : rate) std::printf(" %s", fmt(v).c_str());
        std::printf("\n");
      }
    }
    if (haveBoundary) {
      std::printf("boundary scale rho*: %s\n", fmt(rho).c_str());
      std::printf("boundary total load: %s\n", fmt(rho * dirTotal).c_str());
    }
  }
  return kExitOk;
}

// ---- static-solve -----------------------------------------------------------

struct StaticArgs {
  int n = 6;
  std::string b;
  std::string bhat;
  double gamma = 2.0;
  double delta = 1.0;
  std::string format = "human";
};

int cmdStaticSolve(const StaticArgs& args) {
  require(!args.b.empty(), "static-solve: --b is required");
  require(!args.bhat.empty(), "static-solve: --bhat is required");
  TopologyHandle topo(args.n);
  const int d = qsw_topology_request_types(topo.h);
  const auto b = expandList(args.b, d, "--b");
  const auto bhat = expandList(args.bhat, args.n, "--bhat");
  double objective = 0.0;
  std::vector<double> x(size_t(d)), z(size_t(d)), zhat(size_t(args.n));
  checkApi(qsw_static_congestion_solve(topo.h, b.data(), bhat.data(), args.gamma,
                                       args.delta, &objective, x.data(), z.data(),
                                       zhat.data()));
  if (args.format == "csv") {
    std::printf("# qswitch_version=%s\n", qsw_version());
    std::printf("series,index,value\n");
    std::printf("objective,0,%s\n", fmt(objective).c_str());
    for (int e = 0; e < d; ++e) std::printf("x,%d,%s\n", e, fmt(x[size_t(e)]).c_str());
    for (int e = 0; e < d; ++e) std::printf("z,%d,%s\n", e, fmt(z[size_t(e)]).c_str());
    for (int j = 0; j < args.n; ++j) {
      std::printf("zhat,%d,%s\n", j, fmt(zhat[size_t(j)]).c_str());
    }
  } else {
    std::printf("objective: %s\n", fmt(objective).c_str());
    std::printf("x:");
    for (double v : x) std::printf(" %s", fmt(v).c_str());
    std::printf("\nz:");
    for (double v : z) std::printf(" %s", fmt(v).c_str());
    std::printf("\nzhat:");
    for (double v : zhat) std::printf(" %s", fmt(v).c_str());
    std::printf("\n");
  }
  return kExitOk;
}

// ---- lemma1-check -----------------------------------------------------------

int cmdLemma1(const StaticArgs& args) {
  require(!args.b.empty(), "lemma1-check: --b is required");
  require(!args.bhat.empty(), "lemma1-check: --bhat is required");
  TopologyHandle topo(args.n);
  const int d = qsw_topology_request_types(topo.h);
  const auto b = expandList(args.b, d, "--b");
  const auto bhat = expandList(args.bhat, args.n, "--bhat");
  int32_t outcome = 0;
  char* detail = nullptr;
  checkApi(qsw_lemma1_check(topo.h, b.data(), bhat.data(), args.gamma, args.delta,
                            &outcome, &detail));
  const char* name = outcome == QSW_LEMMA1_HOLDS              ? "holds"
                     : outcome == QSW_LEMMA1_VIOLATED         ? "violated"
                                                              : "preconditions-unmet";
  std::printf("%s: %s\n", name, detail ? detail : "");
  qsw_string_free(detail);
  return kExitOk;
}

// ---- simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string configFile;
  std::vector<std::pair<std::string, std::string>> overrides;  // key -> raw value
  std::string out = "-";
};

RunConfig resolveRunConfig(const SimulateArgs& args) {
  RunConfig cfg;
  try {
    if (!args.configFile.empty()) {
      for (const auto& [k, v] : qsw::cli::readKeyValueFile(args.configFile)) {
        qsw::cli::applyKeyValue(cfg, k, v);
      }
    }
    for (const auto& [k, v] : args.overrides) qsw::cli::applyKeyValue(cfg, k, v);
  } catch (const std::invalid_argument& e) {
    throw ExitWith{kExitValidation, e.what()};
  }
  return cfg;
}

int cmdSimulate(const SimulateArgs& args) {
  RunConfig cfg = resolveRunConfig(args);
  require(cfg.model == "decoherent" || cfg.model == "congestion",
          "simulate: model must be decoherent or congestion");
  require(cfg.slots >= 0, "simulate: slots must be >= 0");
  TopologyHandle topo(cfg.n);
  const int d = qsw_topology_request_types(topo.h);

  TraceHandle trace;
  if (cfg.model == "decoherent") {
    if (cfg.tau.empty()) cfg.tau = {0.8};
    if (int(cfg.tau.size()) == 1) cfg.tau.assign(size_t(cfg.n), cfg.tau[0]);
    require(int(cfg.tau.size()) == cfg.n, "simulate: tau length must match n");
    if (cfg.probs.empty()) {
      require(cfg.load >= 0.0, "simulate: provide probs or a load profile");
      require(cfg.profile == "uniform" || cfg.profile == "skewed",
              "simulate: profile must be uniform or skewed");
      require(cfg.heavy.empty() || cfg.heavy.size() == 3,
              "simulate: heavy needs exactly 3 indices");
      cfg.probs.resize(size_t(d));
      const int32_t heavy[3] = {cfg.heavy.empty() ? 0 : cfg.heavy[0],
                                cfg.heavy.empty() ? 0 : cfg.heavy[1],
                                cfg.heavy.empty() ? 0 : cfg.heavy[2]};
      checkApi(qsw_profile_probs(topo.h,
                                 cfg.profile == "uniform" ? QSW_PROFILE_UNIFORM
                                                          : QSW_PROFILE_SKEWED,
                                 cfg.load, cfg.heavy.empty() ? nullptr : heavy,
                                 cfg.probs.data()));
    }
    if (int(cfg.probs.size()) == 1) cfg.probs.assign(size_t(d), cfg.probs[0]);
    require(int(cfg.probs.size()) == d, "simulate: probs length must match request types");
    checkApi(qsw_run_decoherent(topo.h, cfg.tau.data(), cfg.probs.data(), cfg.slots,
                                cfg.seed, cfg.checkpoint, &trace.h));
  } else {
    if (cfg.probs.empty()) cfg.probs = {0.3};
    if (int(cfg.probs.size()) == 1) cfg.probs.assign(size_t(d), cfg.probs[0]);
    require(int(cfg.probs.size()) == d, "simulate: probs length must match request types");
    if (cfg.lleProbs.empty()) cfg.lleProbs = {0.3};
    if (int(cfg.lleProbs.size()) == 1) cfg.lleProbs.assign(size_t(cfg.n), cfg.lleProbs[0]);
    require(int(cfg.lleProbs.size()) == cfg.n, "simulate: lle_probs length must match n");
    if (cfg.delta < 0.0) cfg.delta = 2.0 * (cfg.gamma + cfg.alpha) + cfg.alpha;
    if (cfg.memory < 0) cfg.memory = qsw_required_memory(cfg.alpha, cfg.gamma);
    const bool regime =
        qsw_params_theorem_valid(cfg.alpha, cfg.gamma, cfg.delta, cfg.memory) != 0;
    if (!regime) {
      require(cfg.force,
              "simulate: (alpha, gamma, delta, memory) outside the guaranteed regime; "
              "pass --force to run anyway");
      std::fprintf(stderr,
                   "warning: parameters outside the guaranteed regime; service may "
                   "outrun the queues\n");
    }
    checkApi(qsw_run_congestion(topo.h, cfg.probs.data(), cfg.lleProbs.data(), cfg.alpha,
                                cfg.gamma, cfg.delta, cfg.memory, cfg.slots, cfg.seed,
                                cfg.checkpoint, cfg.literalService ? 1 : 0, &trace.h));
  }
  emitTrace(trace.h, cfg.toLines(), args.out);
  return kExitOk;
}

// ---- sweep --------------------------------------------------------------------

struct SweepArgs {
  int experiment = 0;
  int n = 6;
  std::string tau = "0.8";
  std::string loads;
  std::string loadMode = "absolute";
  std::string profile = "both";
  std::string heavy;
  std::string alphas = "1,0.1,0.01";
  double p = 0.3;
  double gamma = 2.0;
  long long slots = -1;
  int seeds = 10;
  unsigned long long seed = 1;
  long long checkpoint = 500;
  std::string out = "-";
};

int cmdSweep(const SweepArgs& args) {
  require(args.experiment == 1 || args.experiment == 2, "sweep: --experiment must be 1 or 2");
  require(args.seeds >= 1, "sweep: --seeds must be >= 1");
  TopologyHandle topo(args.n);
  TraceHandle trace;
  std::vector<std::string> configLines;
  configLines.push_back("experiment=" + std::to_string(args.experiment));
  configLines.push_back("n=" + std::to_string(args.n));
  configLines.push_back("seeds=" + std::to_string(args.seeds));
  configLines.push_back("seed=" + std::to_string(args.seed));

  if (args.experiment == 1) {
    const auto tau = expandList(args.tau, args.n, "--tau");
    std::vector<double> loads;
    if (!args.loads.empty()) {
      try {
        loads = qsw::cli::parseDoubleList(args.loads);
      } catch (const std::invalid_argument& e) {
        throw ExitWith{kExitValidation, std::string("--loads: ") + e.what()};
      }
    }
    require(args.loadMode == "absolute" || args.loadMode == "relative",
            "sweep: --load-mode must be absolute or relative");
    int32_t profile = QSW_PROFILE_BOTH;
    if (args.profile == "uniform") profile = QSW_PROFILE_UNIFORM;
    else if (args.profile == "skewed") profile = QSW_PROFILE_SKEWED;
    else require(args.profile == "both", "sweep: --profile must be uniform, skewed or both");
    std::vector<int> heavy;
    if (!args.heavy.empty()) {
      heavy = qsw::cli::parseIntList(args.heavy);
      require(heavy.size() == 3, "sweep: --heavy needs exactly 3 indices");
    }
    const int32_t heavy32[3] = {heavy.empty() ? 0 : heavy[0], heavy.empty() ? 0 : heavy[1],
                                heavy.empty() ? 0 : heavy[2]};
    const long long slots = args.slots < 0 ? 50000 : args.slots;
    configLines.push_back("tau=" + args.tau);
    configLines.push_back("loads=" + args.loads);
    configLines.push_back("load_mode=" + args.loadMode);
    configLines.push_back("profile=" + args.profile);
    configLines.push_back("slots=" + std::to_string(slots));
    checkApi(qsw_experiment1(topo.h, tau.data(), profile, loads.data(),
                             int32_t(loads.size()), args.loadMode == "relative" ? 1 : 0,
                             heavy.empty() ? nullptr : heavy32, slots, args.seeds,
                             args.seed, &trace.h));
  } else {
    std::vector<double> alphas;
    try {
      alphas = qsw::cli::parseDoubleList(args.alphas);
    } catch (const std::invalid_argument& e) {
      throw ExitWith{kExitValidation, std::string("--alphas: ") + e.what()};
    }
    require(!alphas.empty(), "sweep: --alphas must not be empty");
    const long long slots = args.slots < 0 ? 25000 : args.slots;
    configLines.push_back("alphas=" + args.alphas);
    configLines.push_back("p=" + fmt(args.p));
    configLines.push_back("gamma=" + fmt(args.gamma));
    configLines.push_back("slots=" + std::to_string(slots));
    configLines.push_back("checkpoint=" + std::to_string(args.checkpoint));
    checkApi(qsw_experiment2(topo.h, args.p, alphas.data(), int32_t(alphas.size()),
                             args.gamma, slots, args.seeds, args.seed, args.checkpoint,
                             &trace.h));
  }
  emitTrace(trace.h, configLines, args.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qswitch: capacity analysis and scheduling policies for a star "
               "entanglement switch"};
  app.require_subcommand(1);

  CapacityArgs capacityArgs;
  auto* capacity = app.add_subcommand(
      "capacity", "Capacity-region membership and boundary scaling");
  capacity->add_option("--n", capacityArgs.n, "number of clients (2..8)");
  capacity->add_option("--tau", capacityArgs.tau, "LLE success probabilities (scalar or list)");
  capacity->add_option("--b", capacityArgs.b, "request rate vector (scalar or list)");
  capacity->add_option("--direction", capacityArgs.direction,
                       "boundary direction (defaults to --b)");
  capacity->add_option("--tol", capacityArgs.tol, "boundary bisection tolerance");
  capacity->add_option("--format", capacityArgs.format, "human or csv");

  StaticArgs staticArgs;
  auto* staticSolve = app.add_subcommand(
      "static-solve", "Static admission/service optimum of the congestion model");
  staticSolve->add_option("--n", staticArgs.n, "number of clients");
  staticSolve->add_option("--b", staticArgs.b, "request arrival rates (scalar or list)");
  staticSolve->add_option("--bhat", staticArgs.bhat, "LLE arrival rates (scalar or list)");
  staticSolve->add_option("--gamma", staticArgs.gamma, "admission reward");
  staticSolve->add_option("--delta", staticArgs.delta, "service charge");
  staticSolve->add_option("--format", staticArgs.format, "human or csv");

  StaticArgs lemmaArgs;
  auto* lemma = app.add_subcommand(
      "lemma1-check", "Does the static solution solve the fluid problem?");
  lemma->add_option("--n", lemmaArgs.n, "number of clients");
  lemma->add_option("--b", lemmaArgs.b, "request arrival rates (scalar or list)");
  lemma->add_option("--bhat", lemmaArgs.bhat, "LLE arrival rates (scalar or list)");
  lemma->add_option("--gamma", lemmaArgs.gamma, "admission reward (> delta)");
  lemma->add_option("--delta", lemmaArgs.delta, "service charge (> 0)");

  SimulateArgs simArgs;
  auto* simulate = app.add_subcommand("simulate", "Run one policy simulation to CSV");
  simulate->add_option("--config", simArgs.configFile, "key=value config file");
  simulate->add_option("--out", simArgs.out, "output CSV path ('-' = stdout)");
  // every config key is also a flag; flags override the file
  std::map<std::string, std::string> flagValues;
  std::vector<std::pair<std::string, CLI::Option*>> flagOptions;
  for (const char* key : {"model", "n", "tau", "profile", "load", "heavy", "probs",
                          "lle_probs", "alpha", "gamma", "delta", "memory", "slots",
                          "seed", "checkpoint"}) {
    std::string flag = std::string("--") + key;
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    auto* opt = simulate->add_option(flag, flagValues[key], key);
    flagOptions.emplace_back(key, opt);
  }
  bool literalService = false, force = false;
  simulate->add_flag("--literal-service", literalService,
                     "charge delta per queue touched in the service rule");
  simulate->add_flag("--force", force, "run outside the guaranteed parameter regime");

  SweepArgs sweepArgs;
  auto* sweep = app.add_subcommand("sweep", "Experiment grids to CSV");
  sweep->add_option("--experiment", sweepArgs.experiment, "1 = load sweep, 2 = step sizes");
  sweep->add_option("--n", sweepArgs.n, "number of clients");
  sweep->add_option("--tau", sweepArgs.tau, "LLE success probabilities (experiment 1)");
  sweep->add_option("--loads", sweepArgs.loads, "comma list of total loads (experiment 1)");
  sweep->add_option("--load-mode", sweepArgs.loadMode, "absolute or relative to boundary");
  sweep->add_option("--profile", sweepArgs.profile, "uniform, skewed or both");
  sweep->add_option("--heavy", sweepArgs.heavy, "three heavy request types (skewed)");
  sweep->add_option("--alphas", sweepArgs.alphas, "comma list of step sizes (experiment 2)");
  sweep->add_option("--p", sweepArgs.p, "arrival probability (experiment 2)");
  sweep->add_option("--gamma", sweepArgs.gamma, "admission threshold (experiment 2)");
  sweep->add_option("--slots", sweepArgs.slots, "slots per run");
  sweep->add_option("--seeds", sweepArgs.seeds, "seeds per cell");
  sweep->add_option("--seed", sweepArgs.seed, "master seed");
  sweep->add_option("--checkpoint", sweepArgs.checkpoint, "checkpoint interval");
  sweep->add_option("--out", sweepArgs.out, "output CSV path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (capacity->parsed()) return cmdCapacity(capacityArgs);
    if (staticSolve->parsed()) return cmdStaticSolve(staticArgs);
    if (lemma->parsed()) return cmdLemma1(lemmaArgs);
    if (simulate->parsed()) {
      for (const auto& [key, opt] : flagOptions) {
        if (opt->count() > 0) simArgs.overrides.emplace_back(key, flagValues[key]);
      }
      if (literalService) simArgs.overrides.emplace_back("literal_service", "true");
      if (force) simArgs.overrides.emplace_back("force", "true");
      return cmdSimulate(simArgs);
    }
    if (sweep->parsed()) return cmdSweep(sweepArgs);
  } catch (const ExitWith& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitValidation;
}
