#include "experiments.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "common.hpp"
#include "congestion.hpp"
#include "decoherent.hpp"

namespace qsw {

void parallelFor(int count, const std::function<void(int)>& job) {
  if (count <= 0) return;
  const int workers = std::max(1, std::min<int>(int(std::thread::hardware_concurrency()), count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex errorMutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(errorMutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

const char* profileName(ProfileKind kind) {
  return kind == ProfileKind::Uniform ? "uniform" : "skewed";
}

struct MeanCi {
  double mean = 0.0;
  double halfwidth = 0.0;  // 2 * standard error
};

MeanCi meanCi(const std::vector<double>& xs) {
  MeanCi out;
  const double n = double(xs.size());
  for (double x : xs) out.mean += x;
  out.mean /= n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.halfwidth = 2.0 * std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

}  // namespace

Table experiment1(const Topology& topo, const LinkModel& model,
                  const Experiment1Config& config) {
  if (config.seeds < 1) throw std::invalid_argument("experiment1: need at least one seed");
  if (config.slots < 0) throw std::invalid_argument("experiment1: negative slot count");

  Table out;
  out.columns = {"profile", "total_load", "seed", "sum_lambda_final", "is_aggregate",
                 "ci_halfwidth"};
  out.meta.push_back("experiment=1");
  out.meta.push_back("seed=" + std::to_string(config.seed));
  out.meta.push_back("slots=" + std::to_string(config.slots));
  out.meta.push_back("seeds_per_cell=" + std::to_string(config.seeds));

  std::array<int, 3> heavy = config.heavyTypes;
  if (heavy[0] < 0) heavy = defaultHeavyTypes(topo);

  struct Cell {
    int profileIdx;
    double load;
    int seedIdx;
  };
  std::vector<Cell> cells;
  std::vector<double> boundaries(config.profiles.size(), 0.0);
  std::vector<std::vector<double>> loadGrid(config.profiles.size());

  for (size_t pi = 0; pi < config.profiles.size(); ++pi) {
    LoadProfile unitProfile{config.profiles[pi], 1.0, 16.0, heavy};
    const auto direction = profileProbs(topo, unitProfile);
    boundaries[pi] = boundaryScaling(topo, model, direction, config.boundaryTol);
    out.meta.push_back(std::string("boundary_total_load.") +
                       profileName(config.profiles[pi]) + "=" + formatCell(boundaries[pi]));
    for (double load : config.loads) {
      loadGrid[pi].push_back(config.loadsRelative ? load * boundaries[pi] : load);
    }
    for (size_t li = 0; li < loadGrid[pi].size(); ++li) {
      for (int s = 0; s < config.seeds; ++s) {
        cells.push_back({int(pi), loadGrid[pi][li], s});
      }
    }
  }

  std::vector<double> finals(cells.size(), 0.0);
  parallelFor(int(cells.size()), [&](int i) {
    const Cell& cell = cells[size_t(i)];
    LoadProfile profile{config.profiles[cell.profileIdx], cell.load, 16.0, heavy};
    ArrivalModel arrivals{profileProbs(topo, profile), {}};
    const uint64_t cellSeed = subSeed(config.seed, uint64_t(i));
    const Table trace =
        runDecoherent(topo, model, arrivals, config.slots, cellSeed, /*checkpoint=*/0);
    finals[size_t(i)] = trace.rows.empty() ? 0.0 : trace.rows.back()[1];
  });

  size_t idx = 0;
  for (size_t pi = 0; pi < config.profiles.size(); ++pi) {
    for (double load : loadGrid[pi]) {
      std::vector<double> sample;
      for (int s = 0; s < config.seeds; ++s) {
        out.addRow({double(pi), load, double(s), finals[idx], 0.0, 0.0});
        sample.push_back(finals[idx]);
        ++idx;
      }
      const MeanCi ci = meanCi(sample);
      out.addRow({double(pi), load, -1.0, ci.mean, 1.0, ci.halfwidth});
    }
  }
  return out;
}

Table experiment2(const Topology& topo, const Experiment2Config& config) {
  if (config.seeds < 1) throw std::invalid_argument("experiment2: need at least one seed");
  if (!(config.p >= 0.0 && config.p <= 1.0)) {
    throw std::invalid_argument("experiment2: p must lie in [0,1]");
  }

  Table out;
  out.columns = {"alpha", "delta",          "seed",         "slot",
                 "gap",   "avg_admission_req", "avg_admission_lle", "is_aggregate",
                 "ci_gap", "ci_admission_req"};
  out.meta.push_back("experiment=2");
  out.meta.push_back("seed=" + std::to_string(config.seed));
  out.meta.push_back("slots=" + std::to_string(config.slots));
  out.meta.push_back("seeds_per_cell=" + std::to_string(config.seeds));
  out.meta.push_back("p=" + formatCell(config.p));
  out.meta.push_back("gamma=" + formatCell(config.gamma));

  const ArrivalModel arrivals{
      std::vector<double>(size_t(topo.requestTypes()), config.p),
      std::vector<double>(size_t(topo.clients()), config.p)};

  struct Cell {
    int alphaIdx;
    int seedIdx;
  };
  std::vector<Cell> cells;
  std::vector<CongestionParams> params(config.alphas.size());
  for (size_t ai = 0; ai < config.alphas.size(); ++ai) {
    const double alpha = config.alphas[ai];
    CongestionParams p;
    p.alpha = alpha;
    p.gamma = config.gamma;
    p.delta = CongestionParams::defaultDelta(alpha, config.gamma);
    p.memoryCapacity = CongestionParams::requiredMemory(alpha, config.gamma);
    params[ai] = p;
    const StaticCongestionSolution opt = staticCongestionSolve(
        topo, arrivals.requestProbs, arrivals.lleProbs, p.gamma, p.delta);
    double zSum = 0.0, zHatSum = 0.0;
    for (double v : opt.z) zSum += v;
    for (double v : opt.zHat) zHatSum += v;
    const std::string tag = "alpha_" + formatCell(alpha);
    out.meta.push_back(tag + ".delta=" + formatCell(p.delta));
    out.meta.push_back(tag + ".memory=" + std::to_string(p.memoryCapacity));
    out.meta.push_back(tag + ".static_objective=" + formatCell(opt.objective));
    out.meta.push_back(tag + ".static_admission_req=" + formatCell(zSum));
    out.meta.push_back(tag + ".static_admission_lle=" + formatCell(zHatSum));
    for (int s = 0; s < config.seeds; ++s) cells.push_back({int(ai), s});
  }

  std::vector<Table> traces(cells.size());
  parallelFor(int(cells.size()), [&](int i) {
    const Cell& cell = cells[size_t(i)];
    const uint64_t cellSeed = subSeed(config.seed, uint64_t(i));
    traces[size_t(i)] = runCongestion(topo, arrivals, params[size_t(cell.alphaIdx)],
                                      config.slots, cellSeed, config.checkpointInterval);
  });

  size_t idx = 0;
  for (size_t ai = 0; ai < config.alphas.size(); ++ai) {
    std::vector<double> finalGap, finalAdm, finalAdmLle;
    for (int s = 0; s < config.seeds; ++s, ++idx) {
      const Table& tr = traces[idx];
      for (const auto& row : tr.rows) {
        out.addRow({config.alphas[ai], params[ai].delta, double(s), row[0], row[1], row[2],
                    row[3], 0.0, 0.0, 0.0});
      }
      if (!tr.rows.empty()) {
        finalGap.push_back(tr.rows.back()[1]);
        finalAdm.push_back(tr.rows.back()[2]);
        finalAdmLle.push_back(tr.rows.back()[3]);
      }
    }
    if (!finalGap.empty()) {
      const MeanCi gapCi = meanCi(finalGap);
      const MeanCi admCi = meanCi(finalAdm);
      const MeanCi admLleCi = meanCi(finalAdmLle);
      out.addRow({config.alphas[ai], params[ai].delta, -1.0, double(config.slots),
                  gapCi.mean, admCi.mean, admLleCi.mean, 1.0, gapCi.halfwidth,
                  admCi.halfwidth});
    }
  }
  return out;
}

}  // namespace qsw
