#include "igc/deficiency.hpp"

#include <algorithm>
#include <cmath>

#include "igc/lp.hpp"

namespace igc {

namespace {

double kernel_tv(const MarkovKernel& k, const FinitePmf& q, const FinitePmf& p) {
  std::vector<double> img = k.apply(q.probs());
  double s = 0.0;
  for (int y = 0; y < p.size(); ++y) s += std::abs(p[y] - img[y]);
  return s;
}

// tiny lexicographic weights on the kernel entries pick a reproducible
// optimum among degenerate ones
void add_lex_weights(std::vector<double>& c, int n_lambda) {
  for (int i = 0; i < n_lambda; ++i) c[i] += 1e-12 * (i + 1);
}

}  // namespace

FiniteExperiment::FiniteExperiment(std::vector<FinitePmf> laws_) : laws(std::move(laws_)) {
  if (laws.empty()) throw invalid_input("FiniteExperiment: no laws");
  int m = laws.front().size();
  for (const auto& l : laws)
    if (l.size() != m) throw invalid_input("FiniteExperiment: laws on different supports");
}

RandomizationResult randomization_distance(const FiniteExperiment& e,
                                           const FiniteExperiment& f) {
  if (e.theta_count() != f.theta_count())
    throw invalid_input("randomization_distance: parameter count mismatch");
  const int T = e.theta_count(), me = e.support_size(), mf = f.support_size();
  const int n_lambda = me * mf;  // lambda[y + z*me]
  const int u0 = n_lambda, v0 = n_lambda + T * me;
  const int t_var = n_lambda + 2 * T * me;
  const int s0 = t_var + 1;  // per-theta slack of the max constraint
  LpProblem lp;
  lp.n_vars = s0 + T;
  lp.n_cons = mf + T * me + T;
  lp.a.assign(static_cast<size_t>(lp.n_cons) * lp.n_vars, 0.0);
  lp.b.assign(lp.n_cons, 0.0);
  lp.c.assign(lp.n_vars, 0.0);
  auto A = [&](int r, int c) -> double& { return lp.a[static_cast<size_t>(r) * lp.n_vars + c]; };
  for (int z = 0; z < mf; ++z) {
    for (int y = 0; y < me; ++y) A(z, y + z * me) = 1.0;
    lp.b[z] = 1.0;
  }
  for (int th = 0; th < T; ++th) {
    for (int y = 0; y < me; ++y) {
      int r = mf + th * me + y;
      for (int z = 0; z < mf; ++z) A(r, y + z * me) = f.laws[th][z];
      A(r, u0 + th * me + y) = 1.0;
      A(r, v0 + th * me + y) = -1.0;
      lp.b[r] = e.laws[th][y];
    }
    int r = mf + T * me + th;
    for (int y = 0; y < me; ++y) {
      A(r, u0 + th * me + y) = 1.0;
      A(r, v0 + th * me + y) = 1.0;
    }
    A(r, t_var) = -1.0;
    A(r, s0 + th) = 1.0;
  }
  lp.c[t_var] = 1.0;
  add_lex_weights(lp.c, n_lambda);
  LpResult sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal)
    throw numeric_error("randomization_distance: LP did not reach an optimum");
  std::vector<double> table(sol.x.begin(), sol.x.begin() + n_lambda);
  for (auto& v : table) v = std::max(v, 0.0);
  // renormalize away simplex round-off so the kernel constructor accepts it
  for (int z = 0; z < mf; ++z) {
    double s = 0.0;
    for (int y = 0; y < me; ++y) s += table[y + z * me];
    if (s > 0.0)
      for (int y = 0; y < me; ++y) table[y + z * me] /= s;
    else
      table[0 + z * me] = 1.0;
  }
  RandomizationResult out{0.0, MarkovKernel::markov(mf, me, std::move(table))};
  for (int th = 0; th < T; ++th)
    out.value = std::max(out.value, kernel_tv(out.kernel, f.laws[th], e.laws[th]));
  return out;
}

double randomization_distance_grid(const FiniteExperiment& e, const FiniteExperiment& f,
                                   int steps) {
  if (e.support_size() != 2)
    throw invalid_input("randomization_distance_grid: oracle supports binary e only");
  int mf = f.support_size();
  double total = std::pow(steps + 1.0, mf);
  if (total > 2e6) throw invalid_input("randomization_distance_grid: grid too large");
  // full grid scan first, then local window refinements around the best cell
  std::vector<double> center(mf, 0.5), half(mf, 0.5), best_a(mf, 0.0);
  double best = std::numeric_limits<double>::infinity();
  const int refine_steps = 40;
  int passes = std::pow(refine_steps + 1.0, mf) > 2e6 ? 1 : 4;
  for (int pass = 0; pass < passes; ++pass) {
    int s = pass == 0 ? steps : refine_steps;
    std::vector<int> idx(mf, 0);
    for (;;) {
      std::vector<double> a(mf), table(2 * mf);
      for (int z = 0; z < mf; ++z) {
        a[z] = center[z] - half[z] + 2.0 * half[z] * idx[z] / s;
        a[z] = std::min(1.0, std::max(0.0, a[z]));
        table[0 + z * 2] = a[z];
        table[1 + z * 2] = 1.0 - a[z];
      }
      MarkovKernel k = MarkovKernel::markov(mf, 2, std::move(table));
      double worst = 0.0;
      for (int th = 0; th < e.theta_count(); ++th)
        worst = std::max(worst, kernel_tv(k, f.laws[th], e.laws[th]));
      if (worst < best) {
        best = worst;
        best_a = a;
      }
      int i = 0;
      while (i < mf && ++idx[i] > s) idx[i++] = 0;
      if (i == mf) break;
    }
    for (int z = 0; z < mf; ++z) {
      double spacing = 2.0 * half[z] / s;
      center[z] = best_a[z];
      half[z] = 2.0 * spacing;
    }
  }
  return best;
}

LocalDeficiencyResult local_deficiency(const LocalData& e_local, const LocalData& f_local,
                                       double relaxed_state_tolerance) {
  const int ke = e_local.size(), kf = f_local.size();
  const int n_lambda = ke * kf;
  const bool relaxed = relaxed_state_tolerance > 0.0;
  const int u0 = n_lambda, v0 = n_lambda + ke;         // tangent splits
  const int a0 = n_lambda + 2 * ke, b0 = a0 + ke;      // state splits (relaxed)
  LpProblem lp;
  lp.n_vars = n_lambda + 2 * ke + (relaxed ? 2 * ke + 1 : 0);
  lp.n_cons = kf + 2 * ke + (relaxed ? 1 : 0);
  lp.a.assign(static_cast<size_t>(lp.n_cons) * lp.n_vars, 0.0);
  lp.b.assign(lp.n_cons, 0.0);
  lp.c.assign(lp.n_vars, 0.0);
  auto A = [&](int r, int c) -> double& { return lp.a[static_cast<size_t>(r) * lp.n_vars + c]; };
  for (int z = 0; z < kf; ++z) {
    for (int y = 0; y < ke; ++y) A(z, y + z * ke) = 1.0;
    lp.b[z] = 1.0;
  }
  for (int y = 0; y < ke; ++y) {
    int rs = kf + y;  // state row
    for (int z = 0; z < kf; ++z) A(rs, y + z * ke) = f_local.pmf[z];
    lp.b[rs] = e_local.pmf[y];
    if (relaxed) {
      A(rs, a0 + y) = 1.0;
      A(rs, b0 + y) = -1.0;
    }
    int rt = kf + ke + y;  // tangent row
    for (int z = 0; z < kf; ++z) A(rt, y + z * ke) = f_local.tangent[z];
    A(rt, u0 + y) = 1.0;
    A(rt, v0 + y) = -1.0;
    lp.b[rt] = e_local.tangent[y];
    lp.c[u0 + y] = lp.c[v0 + y] = 1.0;
  }
  if (relaxed) {
    int r = kf + 2 * ke;
    for (int y = 0; y < ke; ++y) {
      A(r, a0 + y) = 1.0;
      A(r, b0 + y) = 1.0;
    }
    A(r, lp.n_vars - 1) = 1.0;  // slack up to the tolerance
    lp.b[r] = relaxed_state_tolerance;
  }
  add_lex_weights(lp.c, n_lambda);
  LpResult sol = solve_lp(lp);
  LocalDeficiencyResult out{false, 0.0, MarkovKernel::identity(std::max(ke, 1))};
  if (sol.status != LpStatus::kOptimal) return out;
  std::vector<double> table(sol.x.begin(), sol.x.begin() + n_lambda);
  for (auto& v : table) v = std::max(v, 0.0);
  for (int z = 0; z < kf; ++z) {
    double s = 0.0;
    for (int y = 0; y < ke; ++y) s += table[y + z * ke];
    if (s > 0.0)
      for (int y = 0; y < ke; ++y) table[y + z * ke] /= s;
    else
      table[0 + z * ke] = 1.0;
  }
  out.kernel = MarkovKernel::markov(kf, ke, std::move(table));
  out.feasible = true;
  std::vector<double> img = out.kernel.apply(f_local.tangent.weights());
  for (int y = 0; y < ke; ++y) out.tangent_error += std::abs(e_local.tangent[y] - img[y]);
  return out;
}

}  // namespace igc
