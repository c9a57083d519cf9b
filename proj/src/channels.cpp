#include "igc/channels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "igc/lp.hpp"

namespace igc {

namespace {

LocalData mixture_local(const ChannelLocal& cl, const std::vector<double>& p_in) {
  int out = cl.out_size();
  std::vector<double> p(out, 0.0), d(out, 0.0);
  for (int x = 0; x < cl.in_size(); ++x) {
    for (int y = 0; y < out; ++y) {
      p[y] += p_in[x] * cl.channel.columns[x][y];
      d[y] += p_in[x] * cl.tangent.columns[x][y];
    }
  }
  return LocalData(FinitePmf(std::move(p)), TangentVec(std::move(d)));
}

double local_j(const ChannelLocal& cl, const std::vector<double>& p_in) {
  return fisher_info(mixture_local(cl, p_in));
}

// Feasibility LP for one input letter at a fixed program (q, d): minimizes
// the total absolute residual of the state and tangent matching constraints
// over kernels Lambda(y|z) with stochastic columns.
struct LetterFit {
  double state_residual;
  double tangent_residual;
  std::vector<double> lambda;  // out x m, lambda[y + z*out]
};

LetterFit fit_letter_kernel(const std::vector<double>& q, const std::vector<double>& d,
                            const FinitePmf& col, const TangentVec& tcol) {
  int m = static_cast<int>(q.size());
  int out = col.size();
  int n_lambda = out * m;
  LpProblem lp;
  lp.n_vars = n_lambda + 4 * out;  // + state u,v and tangent u,v per output
  lp.n_cons = m + 2 * out;
  lp.a.assign(static_cast<size_t>(lp.n_cons) * lp.n_vars, 0.0);
  lp.b.assign(lp.n_cons, 0.0);
  lp.c.assign(lp.n_vars, 0.0);
  auto A = [&](int r, int c) -> double& { return lp.a[static_cast<size_t>(r) * lp.n_vars + c]; };
  for (int z = 0; z < m; ++z) {
    for (int y = 0; y < out; ++y) A(z, y + z * out) = 1.0;
    lp.b[z] = 1.0;
  }
  int us = n_lambda, vs = n_lambda + out, ut = n_lambda + 2 * out, vt = n_lambda + 3 * out;
  for (int y = 0; y < out; ++y) {
    int rs = m + y, rt = m + out + y;
    for (int z = 0; z < m; ++z) {
      A(rs, y + z * out) = q[z];
      A(rt, y + z * out) = d[z];
    }
    A(rs, us + y) = 1.0;
    A(rs, vs + y) = -1.0;
    A(rt, ut + y) = 1.0;
    A(rt, vt + y) = -1.0;
    lp.b[rs] = col[y];
    lp.b[rt] = tcol[y];
    lp.c[us + y] = lp.c[vs + y] = lp.c[ut + y] = lp.c[vt + y] = 1.0;
  }
  LpResult r = solve_lp(lp);
  LetterFit fit{1e30, 1e30, {}};
  if (r.status != LpStatus::kOptimal) return fit;
  fit.state_residual = 0.0;
  fit.tangent_residual = 0.0;
  for (int y = 0; y < out; ++y) {
    fit.state_residual += r.x[us + y] + r.x[vs + y];
    fit.tangent_residual += r.x[ut + y] + r.x[vt + y];
  }
  fit.lambda.assign(r.x.begin(), r.x.begin() + n_lambda);
  return fit;
}

// Re-fits the program tangent at fixed kernels: minimum J_q(d) subject to
// all tangent-matching rows plus the zero-sum row (KKT system, small dense).
bool refit_tangent(const ChannelLocal& cl, const std::vector<std::vector<double>>& lambdas,
                   const std::vector<double>& q, std::vector<double>& d) {
  int m = static_cast<int>(q.size());
  int out = cl.out_size();
  int rows = cl.in_size() * out + 1;
  std::vector<double> M(static_cast<size_t>(rows) * m, 0.0), r(rows, 0.0);
  for (int x = 0; x < cl.in_size(); ++x) {
    for (int y = 0; y < out; ++y) {
      int row = x * out + y;
      for (int z = 0; z < m; ++z) M[static_cast<size_t>(row) * m + z] = lambdas[x][y + z * out];
      r[row] = cl.tangent.columns[x][y];
    }
  }
  for (int z = 0; z < m; ++z) M[static_cast<size_t>(rows - 1) * m + z] = 1.0;
  // normal system (M Q M^T) lam = r with Q = diag(q)
  std::vector<double> G(static_cast<size_t>(rows) * rows, 0.0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rows; ++j) {
      double s = 0.0;
      for (int z = 0; z < m; ++z)
        s += M[static_cast<size_t>(i) * m + z] * q[z] * M[static_cast<size_t>(j) * m + z];
      G[static_cast<size_t>(i) * rows + j] = s + (i == j ? 1e-12 : 0.0);
    }
  std::vector<double> lam = r;
  // Gaussian elimination with partial pivoting
  std::vector<int> perm(rows);
  for (int i = 0; i < rows; ++i) perm[i] = i;
  for (int k = 0; k < rows; ++k) {
    int piv = k;
    for (int i = k + 1; i < rows; ++i)
      if (std::abs(G[static_cast<size_t>(i) * rows + k]) >
          std::abs(G[static_cast<size_t>(piv) * rows + k]))
        piv = i;
    if (std::abs(G[static_cast<size_t>(piv) * rows + k]) < 1e-14) continue;
    if (piv != k) {
      for (int j = 0; j < rows; ++j)
        std::swap(G[static_cast<size_t>(piv) * rows + j], G[static_cast<size_t>(k) * rows + j]);
      std::swap(lam[piv], lam[k]);
    }
    for (int i = k + 1; i < rows; ++i) {
      double f = G[static_cast<size_t>(i) * rows + k] / G[static_cast<size_t>(k) * rows + k];
      if (f == 0.0) continue;
      for (int j = k; j < rows; ++j)
        G[static_cast<size_t>(i) * rows + j] -= f * G[static_cast<size_t>(k) * rows + j];
      lam[i] -= f * lam[k];
    }
  }
  for (int k = rows - 1; k >= 0; --k) {
    double diag = G[static_cast<size_t>(k) * rows + k];
    if (std::abs(diag) < 1e-14) {
      lam[k] = 0.0;
      continue;
    }
    double s = lam[k];
    for (int j = k + 1; j < rows; ++j) s -= G[static_cast<size_t>(k) * rows + j] * lam[j];
    lam[k] = s / diag;
  }
  std::vector<double> cand(m, 0.0);
  for (int z = 0; z < m; ++z) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += M[static_cast<size_t>(i) * m + z] * lam[i];
    cand[z] = q[z] * s;
  }
  for (int i = 0; i < rows; ++i) {
    double s = -r[i];
    for (int z = 0; z < m; ++z) s += M[static_cast<size_t>(i) * m + z] * cand[z];
    if (std::abs(s) > 1e-8) return false;
  }
  d = std::move(cand);
  return true;
}

double program_j(const std::vector<double>& q, const std::vector<double>& d) {
  double j = 0.0;
  for (size_t z = 0; z < q.size(); ++z) {
    if (q[z] > 0.0)
      j += d[z] * d[z] / q[z];
    else if (std::abs(d[z]) > kSumTolerance)
      return std::numeric_limits<double>::infinity();
  }
  return j;
}

// Per-letter certified plan constant: the certified bound of the column
// plan evaluated at block length 1.
double column_constant(const LocalData& col, double eps) {
  double tnorm = tv_norm(col.tangent);
  if (tnorm < kSumTolerance) return 0.0;  // exact stage, no Gaussian resource
  // drop zero-mass letters so the recursion sees a positive pmf
  std::vector<double> p, d;
  for (int y = 0; y < col.size(); ++y) {
    if (col.pmf[y] > 0.0) {
      p.push_back(col.pmf[y]);
      d.push_back(col.tangent[y]);
    } else if (std::abs(col.tangent[y]) > kSumTolerance) {
      throw numeric_error("channel_sim_plan: column tangent escapes the column support");
    }
  }
  if (p.size() < 2) return 0.0;
  LocalData trimmed(FinitePmf(std::move(p)), TangentVec(std::move(d)));
  SimulationPlan plan = trimmed.size() == 2 ? binary_gaussian_plan(trimmed, 1)
                                            : finite_plan(trimmed, 1, eps);
  return plan.error_state.certified;
}

LocalData trimmed_column(const LocalData& col) {
  std::vector<double> p, d;
  for (int y = 0; y < col.size(); ++y) {
    if (col.pmf[y] > 0.0) {
      p.push_back(col.pmf[y]);
      d.push_back(col.tangent[y]);
    }
  }
  return LocalData(FinitePmf(std::move(p)), TangentVec(std::move(d)));
}

}  // namespace

ChannelLocal::ChannelLocal(Channel c, ChannelTangent t)
    : channel(std::move(c)), tangent(std::move(t)) {
  if (channel.columns.empty()) throw invalid_input("ChannelLocal: empty channel");
  if (tangent.columns.size() != channel.columns.size())
    throw invalid_input("ChannelLocal: tangent/channel input size mismatch");
  int out = channel.out_size();
  for (const auto& col : channel.columns)
    if (col.size() != out) throw invalid_input("ChannelLocal: ragged channel columns");
  for (const auto& col : tangent.columns)
    if (col.size() != out) throw invalid_input("ChannelLocal: ragged tangent columns");
}

LocalData ChannelLocal::column_local(int x) const {
  return LocalData(channel.columns.at(x), tangent.columns.at(x));
}

GMinResult g_min(const ChannelLocal& cl) {
  GMinResult r;
  for (int x = 0; x < cl.in_size(); ++x) {
    double j = fisher_info(cl.column_local(x));
    if (x == 0 || j > r.value) {
      r.value = j;
      r.argmax = x;
    }
  }
  return r;
}

double g_min_grid(const ChannelLocal& cl, int grid_points) {
  int k = cl.in_size();
  double best = 0.0;
  if (k == 1) return local_j(cl, {1.0});
  if (k == 2) {
    for (int i = 0; i < grid_points; ++i) {
      double s = static_cast<double>(i) / (grid_points - 1);
      best = std::max(best, local_j(cl, {s, 1.0 - s}));
    }
    return best;
  }
  if (k == 3) {
    int r = 1;
    while ((r + 1) * (r + 2) / 2 < grid_points) ++r;
    for (int i = 0; i <= r; ++i)
      for (int j = 0; j <= r - i; ++j) {
        double a = static_cast<double>(i) / r, b = static_cast<double>(j) / r;
        best = std::max(best, local_j(cl, {a, b, 1.0 - a - b}));
      }
    return best;
  }
  throw invalid_input("g_min_grid: supported for up to three input letters");
}

GMaxResult g_max_search(const ChannelLocal& cl, int program_support, int restarts,
                        std::uint64_t seed) {
  if (program_support < 1) throw invalid_input("g_max_search: program support must be >= 1");
  int out = cl.out_size();
  int m = program_support;
  GMinResult gm = g_min(cl);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  GMaxResult best;
  auto try_program = [&](std::vector<double> q, std::vector<double> d) {
    // normalize the program onto the simplex / zero-sum hyperplane
    double qs = 0.0, ds = 0.0;
    for (double v : q) qs += std::max(v, 0.0);
    if (!(qs > 0.0)) return;
    for (auto& v : q) v = std::max(v, 0.0) / qs;
    for (double v : d) ds += v;
    for (auto& v : d) v -= ds / d.size();

    for (int pass = 0; pass < 3; ++pass) {
      std::vector<std::vector<double>> lambdas;
      double sres = 0.0, tres = 0.0;
      bool solved = true;
      for (int x = 0; x < cl.in_size(); ++x) {
        LetterFit fit =
            fit_letter_kernel(q, d, cl.channel.columns[x], cl.tangent.columns[x]);
        if (fit.lambda.empty()) {
          solved = false;
          break;
        }
        sres += fit.state_residual;
        tres += fit.tangent_residual;
        lambdas.push_back(std::move(fit.lambda));
      }
      if (!solved) return;
      if (sres <= 1e-8 && tres <= 1e-8) {
        double j = program_j(q, d);
        if (!best.feasible || j < best.value) {
          best.feasible = true;
          best.value = j;
          best.state_residual = sres;
          best.tangent_residual = tres;
          best.program_q = q;
          best.program_delta = d;
        }
        // improvement: re-fit the tangent under the recovered kernels
        std::vector<double> d2 = d;
        if (refit_tangent(cl, lambdas, q, d2)) {
          double j2 = program_j(q, d2);
          if (j2 < best.value - 1e-12) {
            d = d2;
            continue;
          }
        }
      }
      break;
    }
  };

  // deterministic candidate: the arg-max column embedded into the support
  if (m >= out && gm.argmax >= 0) {
    std::vector<double> q(m, 0.0), d(m, 0.0);
    for (int y = 0; y < out; ++y) {
      q[y] = cl.channel.columns[gm.argmax][y];
      d[y] = cl.tangent.columns[gm.argmax][y];
    }
    try_program(q, d);
  }
  for (int t = 0; t < restarts; ++t) {
    std::vector<double> q(m), d(m);
    for (int z = 0; z < m; ++z) {
      q[z] = -std::log(std::max(unif(rng), 1e-12));
      d[z] = unif(rng) - 0.5;
    }
    if (m >= out && gm.argmax >= 0) {
      // perturbation of the deterministic candidate
      for (int y = 0; y < out; ++y) {
        q[y] = cl.channel.columns[gm.argmax][y] + 0.1 * (unif(rng) - 0.5);
        d[y] = cl.tangent.columns[gm.argmax][y] + 0.1 * (unif(rng) - 0.5);
      }
      for (int z = out; z < m; ++z) q[z] = 0.02 * unif(rng);
    }
    try_program(q, d);
  }
  if (!best.feasible)
    throw numeric_error("g_max_search: no feasible kernel at this program support");
  return best;
}

ChannelSimPlan channel_sim_plan(const ChannelLocal& cl, long n, double eps, double c) {
  if (n < 1) throw invalid_input("channel_sim_plan: n must be positive");
  if (!(eps > 0.0) || !(c > 0.0))
    throw invalid_input("channel_sim_plan: eps and c must be positive");
  GMinResult gm = g_min(cl);
  if (std::isinf(gm.value)) throw numeric_error("channel_sim_plan: infinite column information");
  ChannelSimPlan plan;
  plan.g_min_value = gm.value;
  plan.eps = eps;
  plan.c = c;
  plan.n = n;
  int k = cl.in_size();
  plan.program_exponent = static_cast<double>(n) * (1.0 + k * eps) * (gm.value + c);
  double total = 0.0;
  for (int x = 0; x < k; ++x) {
    double kx = column_constant(cl.column_local(x), eps);
    plan.column_constants.push_back(kx);
    total += kx;
  }
  plan.certified = total / std::pow(eps * static_cast<double>(n), 0.25);
  return plan;
}

ErrorReport channel_sim_measured(const ChannelLocal& cl, const ChannelSimPlan& plan,
                                 const std::vector<long>& counts) {
  if (static_cast<int>(counts.size()) != cl.in_size())
    throw invalid_input("channel_sim_measured: count profile size mismatch");
  long total = 0;
  for (long v : counts) total += v;
  if (total != plan.n) throw invalid_input("channel_sim_measured: counts must sum to n");
  long pad = static_cast<long>(std::ceil(plan.eps * plan.n));
  ErrorReport out;
  for (int x = 0; x < cl.in_size(); ++x) {
    LocalData col = trimmed_column(cl.column_local(x));
    if (col.size() < 2 || tv_norm(col.tangent) < kSumTolerance) continue;
    long block = std::max(counts[x], pad);
    SimulationPlan p = col.size() == 2 ? binary_gaussian_plan(col, block)
                                       : finite_plan(col, block, plan.eps);
    ErrorReport r = evaluate_plan_error_exact(p);
    out.tv_state_error += r.tv_state_error;
    // block tangent errors re-scale from the block length to the full n
    out.tv_tangent_error += r.tv_tangent_error *
                            std::sqrt(static_cast<double>(block) / plan.n);
  }
  return out;
}

LatticeCoarsening lattice_coarsen(const CubeChannel& ch, double t) {
  if (!(t > 0.0)) throw invalid_input("lattice_coarsen: t must be positive");
  int per_axis = static_cast<int>(std::ceil(1.0 / t));
  double total = std::pow(static_cast<double>(per_axis), ch.dim);
  if (total > 1e5) throw invalid_input("lattice_coarsen: lattice too fine");
  std::vector<std::vector<double>> points;
  std::vector<int> idx(ch.dim, 0);
  for (;;) {
    std::vector<double> pt(ch.dim);
    for (int i = 0; i < ch.dim; ++i) pt[i] = std::min(t / 2.0 + idx[i] * t, 1.0);
    points.push_back(pt);
    int i = 0;
    while (i < ch.dim && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == ch.dim) break;
  }
  Channel chan;
  ChannelTangent tan;
  for (const auto& pt : points) {
    auto [p, d] = ch.eval(pt);
    chan.columns.emplace_back(std::move(p));
    tan.columns.emplace_back(std::move(d));
  }
  LatticeCoarsening lc{ChannelLocal(std::move(chan), std::move(tan)), std::move(points),
                       ch.modulus(t * std::sqrt(static_cast<double>(ch.dim)) / 2.0)};
  return lc;
}

ParallelogramWitness parallelogram_witness(std::uint64_t seed) {
  auto assess = [](const Channel& ch, const ChannelTangent& d1, const ChannelTangent& d2) {
    auto combine = [&](double s1, double s2) {
      ChannelTangent t;
      for (size_t x = 0; x < d1.columns.size(); ++x) {
        std::vector<double> col(d1.columns[x].size());
        for (int y = 0; y < d1.columns[x].size(); ++y)
          col[y] = s1 * d1.columns[x][y] + s2 * d2.columns[x][y];
        t.columns.emplace_back(std::move(col));
      }
      return g_min(ChannelLocal(ch, t)).value;
    };
    double gp = combine(1, 1), gm2 = combine(1, -1), g1 = combine(1, 0), g2 = combine(0, 1);
    ParallelogramWitness w;
    w.defect = std::abs(gp + gm2 - 2.0 * g1 - 2.0 * g2);
    w.scale = g1 + g2;
    w.values = {gp, gm2, g1, g2};
    w.channel = ch;
    w.delta1 = d1;
    w.delta2 = d2;
    w.found = w.scale > 0.0 && w.defect > 0.1 * w.scale;
    return w;
  };

  // constructed family: both directions live on different inputs of a
  // two-column channel, so the max over letters breaks the parallelogram law
  Channel ch;
  ch.columns.emplace_back(std::vector<double>{0.5, 0.5});
  ch.columns.emplace_back(std::vector<double>{0.5, 0.5});
  ChannelTangent d1, d2;
  d1.columns.emplace_back(std::vector<double>{0.3, -0.3});
  d1.columns.emplace_back(std::vector<double>{0.0, 0.0});
  d2.columns.emplace_back(std::vector<double>{0.0, 0.0});
  d2.columns.emplace_back(std::vector<double>{0.3, -0.3});
  ParallelogramWitness best = assess(ch, d1, d2);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int trial = 0; trial < 50 && true; ++trial) {
    double p1 = unif(rng), p2 = unif(rng), a = unif(rng) - 0.5, b = unif(rng) - 0.5;
    Channel c2;
    c2.columns.emplace_back(std::vector<double>{p1, 1.0 - p1});
    c2.columns.emplace_back(std::vector<double>{p2, 1.0 - p2});
    ChannelTangent e1, e2;
    e1.columns.emplace_back(std::vector<double>{a, -a});
    e1.columns.emplace_back(std::vector<double>{0.0, 0.0});
    e2.columns.emplace_back(std::vector<double>{0.0, 0.0});
    e2.columns.emplace_back(std::vector<double>{b, -b});
    ParallelogramWitness w = assess(c2, e1, e2);
    if (w.found && (!best.found || w.defect / w.scale > best.defect / best.scale)) best = w;
  }
  return best;
}

CounterexampleResult continuity_counterexample(double t, long n) {
  if (!(t > 0.0) || !(t < 1.0)) throw invalid_input("continuity_counterexample: t in (0,1)");
  if (n < 1) throw invalid_input("continuity_counterexample: n must be positive");
  CounterexampleResult r;
  double log_half_t = std::log(t / 2.0);
  double log_t = std::log(t), log_1t = std::log1p(-t);
  r.underflow_tail = n * log_half_t < std::log(std::numeric_limits<double>::min());
  r.tv_perturbation = 2.0 * std::exp(n * log_half_t);
  // perturbed atoms: the all-zeros string loses mass down to (t/2)^n and the
  // all-ones string gains it; only those two atoms change the information
  double nn = static_cast<double>(n);
  double term1 = nn * nn * std::exp((nn - 2.0) * log_t + nn * std::log(2.0)) *
                 (1.0 - std::exp(-nn * std::log(2.0)));
  double lr = nn * (log_half_t - log_1t);
  double ratio = lr > 700.0 ? 1.0 : std::exp(lr) / (1.0 + std::exp(lr));
  double term2 = -nn * nn * std::exp((nn - 2.0) * log_1t) * ratio;
  r.divergence = std::abs(term1 + term2) / nn;
  return r;
}

}  // namespace igc
