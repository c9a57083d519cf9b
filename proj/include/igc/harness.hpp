#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "igc/tangent_sim.hpp"

namespace igc {

struct SweepRow {
  long n = 0;
  double exact = 0.0;
  double certified = 0.0;
  double mc = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double fitted_slope = 0.0;
  double fit_r2 = 0.0;
  bool degenerate = false;         // some error was zero; no log-log fit
  bool excluded_smallest = false;  // smallest n dropped after a poor fit
};

enum class SweepMode { kExact, kMonteCarlo, kBoth };

// Evaluates the plan family on the grid and fits log(error) against log(n)
// by least squares. A fit with R^2 < 0.9 is retried without the smallest n.
SweepResult convergence_sweep(const std::function<SimulationPlan(long)>& family,
                              const std::vector<long>& n_grid, SweepMode mode,
                              const McOptions& mc = McOptions{});

// Deterministic CSV with header "n,exact,certified,mc,ci_lo,ci_hi".
std::string sweep_csv(const SweepResult& s);

struct CalibrationReport {
  int trials = 0;
  int covered = 0;
  double coverage = 0.0;
  double mean_ci_width = 0.0;
};

// Fraction of seeded Monte Carlo runs whose confidence interval covers the
// exact plan error.
CalibrationReport mc_calibration(const SimulationPlan& plan, int trials, std::uint64_t seed,
                                 long samples = 20000);

// Least-squares slope/R^2 of y against x (shared by the sweep and tests).
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace igc
