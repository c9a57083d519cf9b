#include "igc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace igc {

namespace {

// Tableau simplex core: rows = n_cons constraint rows plus the objective
// row; basis holds the variable index of each constraint row. Bland's rule
// prevents cycling on the degenerate problems the library produces.
struct Tableau {
  int rows, cols;  // cols includes the rhs column
  std::vector<double> t;
  std::vector<int> basis;

  double& at(int r, int c) { return t[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return t[static_cast<size_t>(r) * cols + c]; }
};

// Returns false when unbounded.
bool run_simplex(Tableau& tb, int n_total) {
  const int m = tb.rows - 1;
  for (;;) {
    int pivot_col = -1;
    for (int j = 0; j < n_total; ++j) {
      if (tb.at(m, j) < -kLpTol) {
        pivot_col = j;
        break;  // Bland: smallest eligible index
      }
    }
    if (pivot_col < 0) return true;
    int pivot_row = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      double a = tb.at(i, pivot_col);
      if (a > kLpTol) {
        double ratio = tb.at(i, tb.cols - 1) / a;
        if (pivot_row < 0 || ratio < best_ratio - kLpTol ||
            (ratio < best_ratio + kLpTol && tb.basis[i] < tb.basis[pivot_row])) {
          pivot_row = i;
          best_ratio = ratio;
        }
      }
    }
    if (pivot_row < 0) return false;
    double piv = tb.at(pivot_row, pivot_col);
    for (int j = 0; j < tb.cols; ++j) tb.at(pivot_row, j) /= piv;
    for (int i = 0; i < tb.rows; ++i) {
      if (i == pivot_row) continue;
      double f = tb.at(i, pivot_col);
      if (f == 0.0) continue;
      for (int j = 0; j < tb.cols; ++j) tb.at(i, j) -= f * tb.at(pivot_row, j);
    }
    tb.basis[pivot_row] = pivot_col;
  }
}

}  // namespace

LpResult solve_lp(const LpProblem& p) {
  const int n = p.n_vars, m = p.n_cons;
  if (static_cast<int>(p.a.size()) != n * m || static_cast<int>(p.b.size()) != m ||
      static_cast<int>(p.c.size()) != n)
    throw std::invalid_argument("solve_lp: inconsistent problem dimensions");

  const int total = n + m;  // structural + artificial variables
  Tableau tb;
  tb.rows = m + 1;
  tb.cols = total + 1;
  tb.t.assign(static_cast<size_t>(tb.rows) * tb.cols, 0.0);
  tb.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    double sign = p.b[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tb.at(i, j) = sign * p.a[static_cast<size_t>(i) * n + j];
    tb.at(i, n + i) = 1.0;
    tb.at(i, total) = sign * p.b[i];
    tb.basis[i] = n + i;
  }
  // phase 1: minimize the sum of artificials
  for (int j = 0; j < total + 1; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += tb.at(i, j);
    tb.at(m, j) = (j >= n && j < total) ? 1.0 - s : -s;
  }
  if (!run_simplex(tb, total)) throw std::runtime_error("solve_lp: phase 1 unbounded");
  if (-tb.at(m, total) > 1e-7) {
    LpResult r;
    r.status = LpStatus::kInfeasible;
    return r;
  }
  // drive remaining artificials out of the basis where possible
  for (int i = 0; i < m; ++i) {
    if (tb.basis[i] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tb.at(i, j)) > 1e-7) {
        col = j;
        break;
      }
    }
    if (col < 0) continue;  // redundant row
    double piv = tb.at(i, col);
    for (int j = 0; j < tb.cols; ++j) tb.at(i, j) /= piv;
    for (int r2 = 0; r2 < tb.rows; ++r2) {
      if (r2 == i) continue;
      double f = tb.at(r2, col);
      if (f == 0.0) continue;
      for (int j = 0; j < tb.cols; ++j) tb.at(r2, j) -= f * tb.at(i, j);
    }
    tb.basis[i] = col;
  }
  // phase 2 objective (artificials pinned at zero cost but excluded from
  // pivoting by restricting the column scan)
  for (int j = 0; j < tb.cols; ++j) tb.at(m, j) = 0.0;
  for (int j = 0; j < n; ++j) tb.at(m, j) = p.c[j];
  for (int i = 0; i < m; ++i) {
    int bj = tb.basis[i];
    double cost = bj < n ? p.c[bj] : 0.0;
    if (cost == 0.0) continue;
    for (int j = 0; j < tb.cols; ++j) tb.at(m, j) -= cost * tb.at(i, j);
  }
  if (!run_simplex(tb, n)) {
    LpResult r;
    r.status = LpStatus::kUnbounded;
    return r;
  }
  LpResult r;
  r.status = LpStatus::kOptimal;
  r.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (tb.basis[i] < n) r.x[tb.basis[i]] = tb.at(i, total);
  r.objective = 0.0;
  for (int j = 0; j < n; ++j) r.objective += p.c[j] * r.x[j];
  return r;
}

}  // namespace igc
