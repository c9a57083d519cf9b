#pragma once

#include <limits>
#include <vector>

#include "igc/measures.hpp"

namespace igc {

inline constexpr double kScoreGroupTol = 1e-10;

// Score variable L(x) = delta(x)/p(x) together with the law of X.
// E_mass[values] = 0 within 1e-10.
struct ScoreTable {
  std::vector<double> values;
  FinitePmf mass;

  ScoreTable(std::vector<double> values_, FinitePmf mass_);
};

// J_p(delta) = sum delta(x)^2 / p(x) over atoms with p(x) > 0.
// Returns +infinity when the tangent charges a zero-probability atom.
double fisher_info(const LocalData& a);

// Fisher information of {N(mean, var), w * dN(mean, var)}: w^2 / var.
double gaussian_fisher(const GaussianLocal& g);

struct ScoreReduction {
  LocalData reduced;                 // {p_L, l p_L}
  std::vector<double> score_values;  // distinct L value per reduced atom
  std::vector<int> group_of;         // original atom -> reduced atom
  MarkovKernel reconstruction;       // p_{X|L}: reduced support -> original
};

// Groups atoms by equal score value (absolute tolerance 1e-10 on L).
// Preserves Fisher information; the reconstruction kernel maps the reduced
// local data back to the original exactly. Requires finite J.
ScoreReduction score_reduction(const LocalData& a);

struct BinaryCoarsening {
  LocalData binary;       // {p_a, delta_a} on {0,1}; group 0 is the split letter
  LocalData conditional;  // {p_A, delta_A} on the remaining k-1 letters
  double group1_mass;     // p_a(1)
};

// Splits off one letter (the last one by default) as group 0 and conditions
// on the rest. Satisfies J_p(delta) = J_a(delta_a) + p_a(1) J_A(delta_A).
BinaryCoarsening binary_coarsen(const LocalData& a, int split_letter = -1);

struct ChainStage {
  LocalData binary;
  double weight;  // cumulative mass weight; sum of weight * J(binary) = J
};

// Repeated binary coarsening down to a single letter.
std::vector<ChainStage> fisher_chain(const LocalData& a);

// |E_p[L T]|^2 / E_p[T^2]; a lower bound on J, tight at T proportional to L.
double fisher_variational(const LocalData& a, std::span<const double> statistic);

}  // namespace igc
