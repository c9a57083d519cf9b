#pragma once

#include <vector>

#include "igc/measures.hpp"

namespace igc {

// Finite statistical experiment: one law per parameter value, all on a
// common finite support.
struct FiniteExperiment {
  std::vector<FinitePmf> laws;

  explicit FiniteExperiment(std::vector<FinitePmf> laws_);

  int theta_count() const { return static_cast<int>(laws.size()); }
  int support_size() const { return laws.empty() ? 0 : laws.front().size(); }
};

struct RandomizationResult {
  double value = 0.0;       // min over Markov kernels of max_theta TV
  MarkovKernel kernel;      // an optimal kernel (f-support -> e-support)
};

// Randomizing criterion as a linear program: value 0 iff f is sufficient
// for e (e is a garbling of f).
RandomizationResult randomization_distance(const FiniteExperiment& e,
                                           const FiniteExperiment& f);

// Brute-force oracle over a grid of kernels; cross-check for tiny instances
// (grid size (steps+1)^(columns), guarded).
double randomization_distance_grid(const FiniteExperiment& e, const FiniteExperiment& f,
                                   int steps);

struct LocalDeficiencyResult {
  bool feasible = false;    // a kernel with Lambda(q) = p exists
  double tangent_error = 0.0;  // min ||delta - Lambda(delta')||_1 given feasibility
  MarkovKernel kernel;
};

// Minimal tangent transport error among kernels carrying q exactly onto p.
// relaxed_state_tolerance > 0 replaces the exact constraint Lambda(q) = p
// by ||Lambda(q) - p||_1 <= tolerance.
LocalDeficiencyResult local_deficiency(const LocalData& e_local, const LocalData& f_local,
                                       double relaxed_state_tolerance = 0.0);

}  // namespace igc
