#pragma once

#include <vector>

namespace igc {

// Dense linear program in standard form: min c.x  s.t.  A x = b, x >= 0.
// A is row major (n_cons x n_vars). Two-phase primal simplex with Bland's
// rule; intended for the desk-scale problems in this library (vars <= ~2000).
struct LpProblem {
  int n_vars = 0;
  int n_cons = 0;
  std::vector<double> a;  // row major
  std::vector<double> b;
  std::vector<double> c;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

LpResult solve_lp(const LpProblem& p);

inline constexpr double kLpTol = 1e-9;

}  // namespace igc
