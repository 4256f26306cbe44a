#include "lp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "common.hpp"

namespace qsw {

int LinearProgram::addVariable(double lo, double hi, double cost) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  return int(objective.size()) - 1;
}

void LinearProgram::addRow(std::vector<double> coeffs, RowSense sense, double bound) {
  rowCoeffs.push_back(std::move(coeffs));
  rowSense.push_back(sense);
  rowBound.push_back(bound);
}

void LinearProgram::validate() const {
  const size_t n = objective.size();
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("lp: bound vectors do not match variable count");
  }
  if (rowCoeffs.size() != rowSense.size() || rowCoeffs.size() != rowBound.size()) {
    throw std::invalid_argument("lp: row arrays have inconsistent lengths");
  }
  for (const auto& r : rowCoeffs) {
    if (r.size() != n) {
      throw std::invalid_argument("lp: row length does not match variable count");
    }
  }
  for (size_t j = 0; j < n; ++j) {
    if (lower[j] > upper[j]) throw std::invalid_argument("lp: empty variable bound");
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || std::isnan(objective[j])) {
      throw std::invalid_argument("lp: NaN in program");
    }
  }
  for (double b : rowBound) {
    if (std::isnan(b)) throw std::invalid_argument("lp: NaN row bound");
  }
}

namespace {

constexpr double kPivotTol = 1e-9;

// Dense tableau; the reduced-cost row is stored as row index rows().
class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), a_(size_t(rows + 1) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return a_[size_t(r) * (cols_ + 1) + c]; }
  double at(int r, int c) const { return a_[size_t(r) * (cols_ + 1) + c]; }
  double& rhs(int r) { return a_[size_t(r) * (cols_ + 1) + cols_]; }
  double rhs(int r) const { return a_[size_t(r) * (cols_ + 1) + cols_]; }
  double& cost(int c) { return at(rows_, c); }
  double& costRhs() { return rhs(rows_); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int pr, int pc) {
    double* prow = &a_[size_t(pr) * (cols_ + 1)];
    const double inv = 1.0 / prow[pc];
    for (int c = 0; c <= cols_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double* row = &a_[size_t(r) * (cols_ + 1)];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
  }

 private:
  int rows_, cols_;
  std::vector<double> a_;
};

// The user's program rewritten over nonnegative structural variables.
struct StdForm {
  // x[orig] = shift + sign * xs[col], plus "- xs[negCol]" when the variable is
  // free and split into a positive/negative pair.
  struct VarMap {
    int col = -1;
    int negCol = -1;
    double shift = 0.0;
    double sign = 1.0;
  };
  std::vector<VarMap> varMap;
  int nStruct = 0;
  std::vector<std::vector<double>> rows;  // user rows first, then bound rows
  std::vector<RowSense> sense;
  std::vector<double> rhs;
  std::vector<double> cost;  // minimize convention
  int nUserRows = 0;
};

StdForm toStandard(const LinearProgram& p) {
  StdForm f;
  const int n = p.numVariables();
  f.varMap.resize(n);
  for (int j = 0; j < n; ++j) {
    auto& m = f.varMap[j];
    const double lo = p.lower[j], hi = p.upper[j];
    if (lo == -kLpInf && hi == kLpInf) {
      m.col = f.nStruct++;
      m.negCol = f.nStruct++;
    } else if (lo == -kLpInf) {
      m.col = f.nStruct++;  // x = hi - xs
      m.shift = hi;
      m.sign = -1.0;
    } else {
      m.col = f.nStruct++;  // x = lo + xs
      m.shift = lo;
      m.sign = 1.0;
    }
  }
  f.cost.assign(f.nStruct, 0.0);
  const double dir = p.maximize ? -1.0 : 1.0;
  for (int j = 0; j < n; ++j) {
    const auto& m = f.varMap[j];
    const double c = dir * p.objective[j];
    f.cost[m.col] += c * m.sign;
    if (m.negCol >= 0) f.cost[m.negCol] -= c;
  }
  f.nUserRows = p.numRows();
  for (int i = 0; i < p.numRows(); ++i) {
    std::vector<double> row(f.nStruct, 0.0);
    double rhs = p.rowBound[i];
    for (int j = 0; j < n; ++j) {
      const double a = p.rowCoeffs[i][j];
      if (a == 0.0) continue;
      const auto& m = f.varMap[j];
      row[m.col] += a * m.sign;
      if (m.negCol >= 0) row[m.negCol] -= a;
      rhs -= a * m.shift;
    }
    f.rows.push_back(std::move(row));
    f.sense.push_back(p.rowSense[i]);
    f.rhs.push_back(rhs);
  }
  for (int j = 0; j < n; ++j) {
    const auto& m = f.varMap[j];
    if (m.negCol >= 0 || m.sign < 0.0) continue;
    if (p.upper[j] == kLpInf) continue;
    std::vector<double> row(f.nStruct, 0.0);
    row[m.col] = 1.0;
    f.rows.push_back(std::move(row));
    f.sense.push_back(RowSense::LE);
    f.rhs.push_back(p.upper[j] - p.lower[j]);
  }
  return f;
}

struct SimplexResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> xs;
  std::vector<double> duals;  // per user row, minimize convention
};

// Bland's rule: entering column = smallest index with negative reduced cost;
// leaving row = smallest basic index among minimal-ratio ties.
bool pivotLoop(Tableau& t, std::vector<int>& basis, const std::vector<char>& allowed,
               LpStatus* statusOut) {
  for (;;) {
    int enter = -1;
    for (int c = 0; c < t.cols(); ++c) {
      if (allowed[c] && t.cost(c) < -kPivotTol) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double bestRatio = 0.0;
    for (int r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = t.rhs(r) / a;
      if (leave < 0 || ratio < bestRatio - kPivotTol ||
          (std::abs(ratio - bestRatio) <= kPivotTol && basis[r] < basis[leave])) {
        leave = r;
        bestRatio = ratio;
      }
    }
    if (leave < 0) {
      *statusOut = LpStatus::Unbounded;
      return false;
    }
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
}

SimplexResult simplex(const StdForm& f, bool needPhase2) {
  const int m = int(f.rows.size());
  const int ns = f.nStruct;

  std::vector<double> rowScale(m, 1.0);
  for (int i = 0; i < m; ++i) {
    if (f.rhs[i] < 0.0) rowScale[i] = -1.0;
  }
  auto effSense = [&](int i) {
    if (rowScale[i] > 0.0) return f.sense[i];
    switch (f.sense[i]) {
      case RowSense::LE: return RowSense::GE;
      case RowSense::GE: return RowSense::LE;
      default: return RowSense::EQ;
    }
  };

  std::vector<int> slackCol(m, -1), artCol(m, -1);
  int cols = ns;
  for (int i = 0; i < m; ++i) {
    if (effSense(i) != RowSense::EQ) slackCol[i] = cols++;
  }
  const int firstArt = cols;
  for (int i = 0; i < m; ++i) {
    if (effSense(i) != RowSense::LE) artCol[i] = cols++;
  }

  Tableau t(m, cols);
  std::vector<int> basis(m, -1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < ns; ++j) t.at(i, j) = rowScale[i] * f.rows[i][j];
    t.rhs(i) = rowScale[i] * f.rhs[i];
    if (slackCol[i] >= 0) {
      t.at(i, slackCol[i]) = effSense(i) == RowSense::LE ? 1.0 : -1.0;
    }
    if (artCol[i] >= 0) {
      t.at(i, artCol[i]) = 1.0;
      basis[i] = artCol[i];
    } else {
      basis[i] = slackCol[i];
    }
  }

  SimplexResult res;
  std::vector<char> allowed(cols, 1);

  if (firstArt < cols) {
    // phase 1: minimize the artificial sum. Reduced cost row = c_art with the
    // basic artificial columns eliminated.
    for (int i = 0; i < m; ++i) {
      if (artCol[i] < 0) continue;
      for (int c = 0; c < cols; ++c) t.cost(c) -= t.at(i, c);
      t.costRhs() -= t.rhs(i);
    }
    for (int i = 0; i < m; ++i) {
      if (artCol[i] >= 0) t.cost(artCol[i]) += 1.0;
    }
    LpStatus st = LpStatus::Optimal;
    if (!pivotLoop(t, basis, allowed, &st)) {
      res.status = st;
      return res;
    }
    if (-t.costRhs() > kFeasTol) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    // pivot surviving basic artificials out; an all-zero row is redundant and
    // keeps its artificial basic at value 0
    for (int i = 0; i < m; ++i) {
      if (basis[i] < firstArt) continue;
      for (int c = 0; c < firstArt; ++c) {
        if (std::abs(t.at(i, c)) > kPivotTol) {
          t.pivot(i, c);
          basis[i] = c;
          break;
        }
      }
    }
    for (int c = firstArt; c < cols; ++c) allowed[c] = 0;
  }

  if (!needPhase2) {
    res.status = LpStatus::Optimal;
    return res;
  }

  // phase 2: install the real cost row and eliminate basic columns
  for (int c = 0; c < cols; ++c) t.cost(c) = c < ns ? f.cost[c] : 0.0;
  t.costRhs() = 0.0;
  for (int i = 0; i < m; ++i) {
    const int b = basis[i];
    const double cb = (b >= 0 && b < ns) ? f.cost[b] : 0.0;
    if (cb == 0.0) continue;
    for (int c = 0; c < cols; ++c) t.cost(c) -= cb * t.at(i, c);
    t.costRhs() -= cb * t.rhs(i);
  }
  LpStatus st = LpStatus::Optimal;
  if (!pivotLoop(t, basis, allowed, &st)) {
    res.status = st;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.xs.assign(ns, 0.0);
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= 0 && basis[i] < ns) res.xs[basis[i]] = t.rhs(i);
  }
  // duals from the unit columns: slack of an effective-LE row carries -y_i,
  // surplus of an effective-GE row carries +y_i, an artificial carries -y_i.
  res.duals.assign(f.nUserRows, 0.0);
  for (int i = 0; i < f.nUserRows; ++i) {
    double y;
    if (slackCol[i] >= 0) {
      const double rc = t.cost(slackCol[i]);
      y = effSense(i) == RowSense::LE ? -rc : rc;
    } else {
      y = -t.cost(artCol[i]);
    }
    res.duals[i] = rowScale[i] * y;
  }
  return res;
}

}  // namespace

LpSolution lpSolve(const LinearProgram& problem) {
  problem.validate();
  const StdForm f = toStandard(problem);
  const SimplexResult r = simplex(f, /*needPhase2=*/true);

  LpSolution sol;
  sol.status = r.status;
  if (r.status != LpStatus::Optimal) return sol;

  const int n = problem.numVariables();
  sol.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const auto& m = f.varMap[j];
    double v = m.shift + m.sign * r.xs[m.col];
    if (m.negCol >= 0) v -= r.xs[m.negCol];
    sol.x[j] = v;
  }
  double obj = 0.0;
  for (int j = 0; j < n; ++j) obj += problem.objective[j] * sol.x[j];
  sol.objective = obj;
  sol.duals = r.duals;
  if (problem.maximize) {
    for (auto& y : sol.duals) y = -y;
  }

  // post-hoc feasibility audit on every solve
  for (int i = 0; i < problem.numRows(); ++i) {
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) lhs += problem.rowCoeffs[i][j] * sol.x[j];
    const double b = problem.rowBound[i];
    const double tol = kFeasTol * (1.0 + std::abs(b));
    const bool ok = problem.rowSense[i] == RowSense::LE   ? lhs <= b + tol
                    : problem.rowSense[i] == RowSense::GE ? lhs >= b - tol
                                                          : std::abs(lhs - b) <= tol;
    if (!ok) {
      throw std::runtime_error("lp: optimal point violates row " + std::to_string(i));
    }
  }
  for (int j = 0; j < n; ++j) {
    if (sol.x[j] < problem.lower[j] - kFeasTol || sol.x[j] > problem.upper[j] + kFeasTol) {
      throw std::runtime_error("lp: optimal point violates bound of variable " +
                               std::to_string(j));
    }
  }
  return sol;
}

bool lpFeasible(const LinearProgram& problem) {
  problem.validate();
  const StdForm f = toStandard(problem);
  return simplex(f, /*needPhase2=*/false).status == LpStatus::Optimal;
}

}  // namespace qsw
