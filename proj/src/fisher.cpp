#include "igc/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace igc {

ScoreTable::ScoreTable(std::vector<double> values_, FinitePmf mass_)
    : values(std::move(values_)), mass(std::move(mass_)) {
  if (static_cast<int>(values.size()) != mass.size())
    throw invalid_input("ScoreTable: size mismatch");
  double mean = 0.0, scale = 0.0;
  for (int i = 0; i < mass.size(); ++i) {
    mean += values[i] * mass[i];
    scale += std::abs(values[i]) * mass[i];
  }
  if (std::abs(mean) > 1e-10 * std::max(1.0, scale))
    throw invalid_input("ScoreTable: score does not center under its mass");
}

double fisher_info(const LocalData& a) {
  double j = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    double p = a.pmf[i], d = a.tangent[i];
    if (p > 0.0) {
      j += d * d / p;
    } else if (std::abs(d) > kSumTolerance) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return j;
}

double gaussian_fisher(const GaussianLocal& g) {
  return g.shift_weight * g.shift_weight / g.variance;
}

ScoreReduction score_reduction(const LocalData& a) {
  if (std::isinf(fisher_info(a)))
    throw numeric_error("score_reduction: Fisher information is infinite");
  int k = a.size();
  // group atoms by score, merging values within the absolute tolerance
  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  auto score = [&](int i) { return a.pmf[i] > 0.0 ? a.tangent[i] / a.pmf[i] : 0.0; };
  std::sort(order.begin(), order.end(), [&](int i, int j) { return score(i) < score(j); });

  std::vector<int> group_of(k, -1);
  std::vector<double> gp, gd;  // grouped mass and tangent
  double prev = 0.0;
  for (int idx : order) {
    double l = score(idx);
    if (gp.empty() || l - prev > kScoreGroupTol) {
      gp.push_back(0.0);
      gd.push_back(0.0);
      prev = l;
    }
    group_of[idx] = static_cast<int>(gp.size()) - 1;
    gp.back() += a.pmf[idx];
    gd.back() += a.tangent[idx];
  }
  int m = static_cast<int>(gp.size());
  std::vector<double> score_values(m);
  for (int g = 0; g < m; ++g) score_values[g] = gp[g] > 0.0 ? gd[g] / gp[g] : 0.0;

  // reconstruction kernel p_{X|L}
  std::vector<double> table(static_cast<size_t>(m) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    int g = group_of[i];
    if (gp[g] > 0.0) table[i + static_cast<size_t>(g) * k] = a.pmf[i] / gp[g];
  }
  // groups of zero mass get an arbitrary valid column
  for (int g = 0; g < m; ++g) {
    if (gp[g] == 0.0) table[0 + static_cast<size_t>(g) * k] = 1.0;
  }
  return ScoreReduction{
      LocalData(FinitePmf(std::move(gp)), TangentVec(std::move(gd))),
      std::move(score_values), std::move(group_of),
      MarkovKernel::markov(m, k, std::move(table))};
}

BinaryCoarsening binary_coarsen(const LocalData& a, int split_letter) {
  int k = a.size();
  if (k < 2) throw invalid_input("binary_coarsen: need at least two letters");
  if (split_letter < 0) split_letter = k - 1;
  if (split_letter >= k) throw invalid_input("binary_coarsen: split letter out of range");
  double p0 = a.pmf[split_letter], d0 = a.tangent[split_letter];
  double p1 = 0.0, d1 = 0.0;
  for (int x = 0; x < k; ++x) {
    if (x == split_letter) continue;
    p1 += a.pmf[x];
    d1 += a.tangent[x];
  }
  if (!(p1 > 0.0)) throw numeric_error("binary_coarsen: zero group mass");
  std::vector<double> pA, dA;
  pA.reserve(k - 1);
  dA.reserve(k - 1);
  for (int x = 0; x < k; ++x) {
    if (x == split_letter) continue;
    double pa = a.pmf[x] / p1;
    pA.push_back(pa);
    dA.push_back(a.tangent[x] / p1 - d1 * pa / p1);
  }
  return BinaryCoarsening{
      LocalData(FinitePmf({p0, p1}), TangentVec({d0, d1})),
      LocalData(FinitePmf(std::move(pA)), TangentVec(std::move(dA))), p1};
}

std::vector<ChainStage> fisher_chain(const LocalData& a) {
  std::vector<ChainStage> stages;
  LocalData cur = a;
  double weight = 1.0;
  while (cur.size() >= 2) {
    BinaryCoarsening c = binary_coarsen(cur);
    stages.push_back(ChainStage{c.binary, weight});
    weight *= c.group1_mass;
    cur = c.conditional;
  }
  if (stages.empty()) {
    // single letter: trivial stage with zero information
    stages.push_back(ChainStage{
        LocalData(FinitePmf({1.0, 0.0}), TangentVec({0.0, 0.0})), 0.0});
  }
  return stages;
}

double fisher_variational(const LocalData& a, std::span<const double> statistic) {
  if (static_cast<int>(statistic.size()) != a.size())
    throw invalid_input("fisher_variational: statistic size mismatch");
  double num = 0.0, den = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    num += a.tangent[i] * statistic[i];  // E_p[L T] = sum delta T
    den += a.pmf[i] * statistic[i] * statistic[i];
  }
  if (!(den > 0.0)) throw numeric_error("fisher_variational: statistic has zero variance");
  return num * num / den;
}

}  // namespace igc
