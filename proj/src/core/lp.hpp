#pragma once

#include <limits>
#include <vector>

namespace qsw {

inline constexpr double kLpInf = std::numeric_limits<double>::infinity();

enum class RowSense { LE, EQ, GE };

// Dense LP: optimize objective over { x : rows o senses o bounds, lower <= x <= upper }.
// Bounds may be +-kLpInf.
struct LinearProgram {
  bool maximize = false;
  std::vector<double> objective;
  std::vector<std::vector<double>> rowCoeffs;
  std::vector<RowSense> rowSense;
  std::vector<double> rowBound;
  std::vector<double> lower;
  std::vector<double> upper;

  int addVariable(double lo = 0.0, double hi = kLpInf, double cost = 0.0);
  void addRow(std::vector<double> coeffs, RowSense sense, double bound);
  int numVariables() const { return int(objective.size()); }
  int numRows() const { return int(rowCoeffs.size()); }
  void validate() const;  // throws std::invalid_argument on dimension mismatch
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;       // primal values, valid when Optimal
  double objective = 0.0;      // valid when Optimal
  std::vector<double> duals;   // one per row, minimize convention; valid when Optimal
};

// Two-phase primal simplex on a dense tableau with Bland's anti-cycling rule.
// Returns an optimal vertex; the primal point is verified feasible to kFeasTol
// before returning.
LpSolution lpSolve(const LinearProgram& problem);

// Phase 1 only.
bool lpFeasible(const LinearProgram& problem);

}  // namespace qsw
