#include "igc/tangent_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace igc {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

double log_binom_pmf(long n, long k, double p) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  if (p <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p >= 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
         k * std::log(p) + (n - k) * std::log1p(-p);
}

namespace {

std::vector<double> binom_pmf_vec(long n, double p) {
  std::vector<double> b(n + 1);
  for (long k = 0; k <= n; ++k) b[k] = std::exp(log_binom_pmf(n, k, p));
  return b;
}

struct LatticeLaw {
  std::vector<double> centers;  // lattice values alpha*(n1 - mean_count)
  std::vector<double> mass;     // Gaussian mass of each rounding cell
  std::vector<double> moment;   // int_cell t phi dt (signed first moments)
};

// Rounded N(0, var) on the lattice alpha*(n1 - mean_count), n1 = 0..npts.
// The extreme cells (in value order) absorb the tails.
LatticeLaw rounded_gaussian(double var, double alpha, long npts, double mean_count) {
  LatticeLaw law;
  law.centers.resize(npts + 1);
  law.mass.resize(npts + 1);
  law.moment.resize(npts + 1);
  double sd = std::sqrt(var);
  double h = std::abs(alpha) / 2.0;
  for (long i = 0; i <= npts; ++i) {
    double c = alpha * (i - mean_count);
    law.centers[i] = c;
    double lo = (c - h) / sd, hi = (c + h) / sd;
    law.mass[i] = normal_cdf(hi) - normal_cdf(lo);
    law.moment[i] = sd * (normal_pdf(lo) - normal_pdf(hi));
  }
  long imin = 0, imax = 0;
  for (long i = 1; i <= npts; ++i) {
    if (law.centers[i] < law.centers[imin]) imin = i;
    if (law.centers[i] > law.centers[imax]) imax = i;
  }
  double lo_edge = (law.centers[imin] - h) / sd, hi_edge = (law.centers[imax] + h) / sd;
  law.mass[imin] += normal_cdf(lo_edge);
  law.mass[imax] += 1.0 - normal_cdf(hi_edge);
  law.moment[imin] += -sd * normal_pdf(lo_edge);
  law.moment[imax] += sd * normal_pdf(hi_edge);
  return law;
}

// Exact count law of the binary target on the same lattice.
LatticeLaw exact_binary_lattice(double p1, double alpha, long n, double mean_count) {
  LatticeLaw law;
  law.centers.resize(n + 1);
  law.mass = binom_pmf_vec(n, p1);
  law.moment.resize(n + 1);
  for (long i = 0; i <= n; ++i) {
    law.centers[i] = alpha * (i - mean_count);
    law.moment[i] = law.centers[i] * law.mass[i];
  }
  return law;
}

struct BinaryParams {
  double p1, delta1, j, alpha;
};

BinaryParams binary_params(double p1, double delta1) {
  double p0 = 1.0 - p1;
  double l0 = -delta1 / p0, l1 = delta1 / p1;
  return BinaryParams{p1, delta1, delta1 * delta1 / p0 + delta1 * delta1 / p1, l1 - l0};
}

ErrorReport binary_exact_error(double p1, double delta1, long n) {
  if (n > kEnumerationGuard) throw numeric_error("binary plan: n exceeds enumeration guard");
  BinaryParams bp = binary_params(p1, delta1);
  if (bp.j <= 0.0 || bp.alpha == 0.0) return ErrorReport{0.0, 0.0};
  LatticeLaw sim = rounded_gaussian(n * bp.j, bp.alpha, n, p1 * n);
  std::vector<double> b = binom_pmf_vec(n, p1);
  double state = 0.0, tang = 0.0;
  for (long i = 0; i <= n; ++i) {
    state += std::abs(b[i] - sim.mass[i]);
    tang += std::abs(sim.centers[i] * b[i] - sim.moment[i]);
  }
  return ErrorReport{state, tang / std::sqrt(static_cast<double>(n))};
}

struct StageData {
  BinaryCoarsening coarse;
  BinaryParams bp;
  double weight_eps;  // cumulative product of (p1_j + eps) before this stage
  double weight;      // cumulative product of p1_j (exact chain weight)
};

std::vector<StageData> chain_stages(const LocalData& a, double eps) {
  std::vector<StageData> out;
  LocalData cur = a;
  double w_eps = 1.0, w = 1.0;
  while (cur.size() >= 2) {
    BinaryCoarsening c = binary_coarsen(cur);
    double p0 = c.binary.pmf[0];
    if (eps >= p0)
      throw numeric_error("finite_plan: eps >= p_a(0) at a stage; truncation exponent undefined");
    StageData sd{c, binary_params(c.binary.pmf[1], c.binary.tangent[1]), w_eps, w};
    out.push_back(sd);
    w_eps *= (c.binary.pmf[1] + eps);
    w *= c.group1_mass;
    cur = out.back().coarse.conditional;
  }
  return out;
}

double trunc_rate(double p0, double p1, double eps) {
  return p0 * std::log(p0 / (p0 - eps)) + p1 * std::log(p1 / (p1 + eps));
}

// sup over block sizes of the truncation error times n^{1/4}; M is the
// score-magnitude factor of the tangent part, w the relative block length.
double trunc_constant(double rate, double m_factor, double w) {
  double best = 0.0;
  for (double n = 1.0; n < 1e8; n *= 1.08) {
    double ni = std::max(1.0, w * n - 1.0);
    double v = 2.0 * (1.0 + std::sqrt(ni) * m_factor) * std::exp(-ni * rate) *
               std::pow(n, 0.25);
    best = std::max(best, v);
  }
  return best;
}

ErrorReport finite_chain_exact_error(const FiniteChainKernel& fk, long n);

}  // namespace

double binary_plan_constant(double p1, double delta1) {
  BinaryParams bp = binary_params(p1, delta1);
  if (bp.j <= 0.0) return 0.0;
  return 8.0 / std::sqrt(bp.j) + 3.0 * bp.j + 3.0 * bp.alpha * bp.alpha + 3.0 * std::abs(bp.alpha);
}

SimulationPlan binary_gaussian_plan(const LocalData& a, long n) {
  if (a.size() != 2) throw invalid_input("binary_gaussian_plan: need a binary target");
  double p1 = a.pmf[1];
  if (!(p1 > 0.0) || !(p1 < 1.0))
    throw invalid_input("binary_gaussian_plan: degenerate pmf");
  double d1 = a.tangent[1];
  if (d1 == 0.0) throw invalid_input("binary_gaussian_plan: zero tangent");
  if (n < 1) throw invalid_input("binary_gaussian_plan: n must be positive");
  BinaryParams bp = binary_params(p1, d1);
  SimulationPlan plan;
  plan.program_exponent = static_cast<double>(n) * bp.j;
  plan.kernel = BinaryRoundingKernel{p1, d1};
  plan.n = n;
  plan.error_state.certified =
      binary_plan_constant(p1, d1) / std::pow(static_cast<double>(n), 0.25);
  return plan;
}

double exact_binomial_gaussian_tv(double eta, long n) {
  if (n < 1 || n > 1000000) throw invalid_input("exact_binomial_gaussian_tv: n out of range");
  if (!(eta > 0.0) || !(eta < 1.0))
    throw invalid_input("exact_binomial_gaussian_tv: eta must lie in (0,1)");
  double sigma = std::sqrt(eta * (1.0 - eta));
  double scale = std::sqrt(static_cast<double>(n)) * sigma;
  double h = 1.0 / (2.0 * scale);
  double total = 0.0;
  for (long k = 0; k <= n; ++k) {
    double z = (k - n * eta) / scale;
    double g = normal_cdf(z + h) - normal_cdf(z - h);
    if (k == 0) g += normal_cdf(z - h);
    if (k == n) g += 1.0 - normal_cdf(z + h);
    total += std::abs(std::exp(log_binom_pmf(n, k, eta)) - g);
  }
  return total;
}

double finite_plan_exponent_excess(const LocalData& a, double eps) {
  double j = fisher_info(a);
  if (std::isinf(j)) throw numeric_error("finite_plan: infinite Fisher information");
  auto stages = chain_stages(a, eps);
  double exponent = 0.0;
  for (const auto& s : stages) exponent += s.weight_eps * s.bp.j;
  return exponent - j;
}

SimulationPlan finite_plan(const LocalData& a, long n, double eps) {
  if (a.size() < 2) throw invalid_input("finite_plan: need at least two letters");
  if (!(eps > 0.0)) throw invalid_input("finite_plan: eps must be positive");
  if (n < 1) throw invalid_input("finite_plan: n must be positive");
  double j = fisher_info(a);
  if (std::isinf(j)) throw numeric_error("finite_plan: infinite Fisher information");
  if (a.size() == 2) return binary_gaussian_plan(a, n);

  auto stages = chain_stages(a, eps);
  FiniteChainKernel fk;
  fk.p = a.pmf.probs();
  fk.delta = a.tangent.weights();
  fk.eps = eps;
  double exponent = 0.0, certified_k = 0.0;
  for (const auto& s : stages) {
    FiniteChainStageInfo info;
    info.p1 = s.bp.p1;
    info.delta1 = s.bp.delta1;
    info.stage_j = s.bp.j;
    info.copies = s.weight_eps;
    double p0 = s.coarse.binary.pmf[0];
    info.trunc_rate = trunc_rate(p0, s.bp.p1, eps);
    info.leaf_a = binary_plan_constant(s.bp.p1, s.bp.delta1);
    fk.stages.push_back(info);
    exponent += s.weight_eps * s.bp.j;

    // score-magnitude factor of the truncated tangent mass at this stage
    double la0 = s.coarse.binary.pmf[0] > 0 ? s.coarse.binary.tangent[0] / s.coarse.binary.pmf[0] : 0.0;
    double la1 = s.bp.p1 > 0 ? s.bp.delta1 / s.bp.p1 : 0.0;
    double lA = 0.0;
    const LocalData& cond = s.coarse.conditional;
    for (int x = 0; x < cond.size(); ++x)
      if (cond.pmf[x] > 0) lA = std::max(lA, std::abs(cond.tangent[x] / cond.pmf[x]));
    double m_factor = std::max(std::abs(la0), std::abs(la1)) + lA;
    certified_k += info.leaf_a * std::pow(2.0 / s.weight_eps, 0.25);
    certified_k += trunc_constant(info.trunc_rate, m_factor, s.weight_eps);
  }
  SimulationPlan plan;
  plan.program_exponent = static_cast<double>(n) * exponent;
  plan.kernel = std::move(fk);
  plan.n = n;
  plan.error_state.certified = certified_k / std::pow(static_cast<double>(n), 0.25);
  return plan;
}

SimulationPlan continuous_plan(const Density1D& p_L, long n) {
  Moments mom = density_moments(p_L);
  double j = mom.variance + mom.mean * mom.mean;
  WVarianceResult w = w_variance_functional(p_L, j);
  if (!w.finite) throw numeric_error("continuous_plan: w-variance functional diverges");
  SimulationPlan plan;
  plan.program_exponent = static_cast<double>(n) * j;
  plan.kernel = ContinuousScoreKernel{j, w.value};
  plan.n = n;
  double excess = std::max(w.value - 1.0, 0.0);
  plan.error_state.certified =
      2.0 * std::sqrt(excess / std::sqrt(static_cast<double>(n)));
  return plan;
}

Density1D smoothed_score_density(const LocalData& a, double eps) {
  if (!(eps > 0.0)) throw invalid_input("smoothed_score_density: eps must be positive");
  std::vector<double> locs, masses;
  for (int x = 0; x < a.size(); ++x) {
    if (a.pmf[x] > 0.0) {
      locs.push_back(a.tangent[x] / a.pmf[x]);
      masses.push_back(a.pmf[x]);
    } else if (std::abs(a.tangent[x]) > kSumTolerance) {
      throw numeric_error("smoothed_score_density: unbounded score");
    }
  }
  auto eval = [locs, masses, eps](double t) {
    double acc = 0.0;
    for (size_t i = 0; i < locs.size(); ++i)
      acc += masses[i] * normal_pdf((t - locs[i]) / eps) / eps;
    return acc;
  };
  return Density1D{eval, -std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity(), GridSpec{}};
}

SimulationPlan gaussian_by_iid_plan(const LocalData& a, long n, double eps) {
  double j = fisher_info(a);
  if (std::isinf(j)) throw numeric_error("gaussian_by_iid_plan: unbounded score");
  SimulationPlan plan;
  plan.program_exponent = static_cast<double>(n) * j / (1.0 + eps * eps * j);
  plan.kernel = GaussianSmoothingKernel{eps, j};
  plan.n = n;
  if (j > 0.0) {
    // very small eps makes the smoothed density numerically singular; the
    // certified bound is then vacuous rather than an error
    try {
      Density1D sm = smoothed_score_density(a, eps);
      Moments mom = density_moments(sm);
      double jsm = mom.variance + mom.mean * mom.mean;
      WVarianceResult w = w_variance_functional(sm, jsm);
      double excess = std::max(w.value - 1.0, 0.0);
      plan.error_state.certified =
          2.0 * std::sqrt(excess / std::sqrt(static_cast<double>(n)));
    } catch (const numeric_error&) {
      plan.error_state.certified = std::numeric_limits<double>::infinity();
    } catch (const invalid_input&) {
      plan.error_state.certified = std::numeric_limits<double>::infinity();
    }
  }
  return plan;
}

SimulationPlan compose_plans(const std::vector<SimulationPlan>& plans) {
  if (plans.empty()) throw invalid_input("compose_plans: empty chain");
  if (plans.size() == 1) return plans.front();
  long n = plans.front().n;
  for (const auto& p : plans)
    if (p.n != n) throw invalid_input("compose_plans: incompatible plan lengths");
  SimulationPlan out;
  out.program_exponent = plans.front().program_exponent;
  out.n = n;
  CompositeKernel ck;
  double certified = 0.0;
  for (const auto& p : plans) {
    certified += p.error_state.certified;
    ck.stages.push_back(p);
  }
  out.kernel = std::move(ck);
  out.error_state.certified = certified;
  return out;
}

namespace {

// Exact state/tangent error of the two-stage composite (3-letter targets):
// the joint law is evaluated on (first-stage count, second-stage count in
// the kept prefix) cells, which is a sufficient coordinate for both laws.
ErrorReport finite_chain_exact_error(const FiniteChainKernel& fk, long n) {
  LocalData target(FinitePmf(fk.p), TangentVec(fk.delta));
  if (target.size() != 3)
    throw numeric_error("exact evaluation of finite chains supports 3-letter targets only");
  BinaryCoarsening ca = binary_coarsen(target);
  BinaryParams a = binary_params(ca.binary.pmf[1], ca.binary.tangent[1]);
  const LocalData& cond = ca.conditional;
  BinaryParams b = binary_params(cond.pmf[0], cond.tangent[0]);
  double la0 = ca.binary.tangent[0] / ca.binary.pmf[0];
  double lA1 = cond.pmf[0] > 0 ? cond.tangent[0] / cond.pmf[0] : 0.0;
  double lA2 = cond.pmf[1] > 0 ? cond.tangent[1] / cond.pmf[1] : 0.0;
  long na = static_cast<long>(std::floor(n * (a.p1 + fk.eps)));
  na = std::min(na, n);
  if (static_cast<double>(n) * na > 4.0e9)
    throw numeric_error("finite chain exact evaluation: state space too large");

  // stage laws (degenerate tangents fall back to the exact law: a stage with
  // zero tangent costs no Gaussian resource and simulates exactly)
  LatticeLaw g1 = (a.j > 0.0) ? rounded_gaussian(n * a.j, a.alpha, n, a.p1 * n)
                              : exact_binary_lattice(a.p1, a.alpha, n, a.p1 * n);
  LatticeLaw g2 = (b.j > 0.0) ? rounded_gaussian(na * b.j, b.alpha, na, b.p1 * na)
                              : exact_binary_lattice(b.p1, b.alpha, na, b.p1 * na);
  std::vector<double> bm = binom_pmf_vec(n, a.p1);

  double trunc_mass = 0.0, trunc_mom = 0.0;
  for (long m = na + 1; m <= n; ++m) {
    trunc_mass += g1.mass[m];
    trunc_mom += g1.moment[m];
  }
  const double tiny = 1e-18;
  double sqn = std::sqrt(static_cast<double>(n));

  // log-factorials for hypergeometric pmfs
  std::vector<double> lf(n + na + 2);
  lf[0] = 0.0;
  for (long i = 1; i < static_cast<long>(lf.size()); ++i) lf[i] = lf[i - 1] + std::log((double)i);
  auto lbin = [&](long N, long K) { return lf[N] - lf[K] - lf[N - K]; };

  std::vector<long> jeff;
  for (long jc = 0; jc <= na; ++jc)
    if (g2.mass[jc] > tiny || std::abs(g2.moment[jc]) > tiny) jeff.push_back(jc);

  double state = 0.0, tang = 0.0;
  // cell m = 0 (all split-letter outputs), absorbing the truncation image
  {
    double p0 = bm[0], q0 = g1.mass[0] + trunc_mass;
    state += std::abs(p0 - q0);
    double t0 = p0 * (n * la0);
    double s0 = g1.moment[0] + trunc_mom;
    tang += std::abs(t0 - s0);
  }
  std::vector<double> h, u, pj, tj;
  for (long m = 1; m <= n; ++m) {
    bool sim_mass = m <= na && (g1.mass[m] > tiny || std::abs(g1.moment[m]) > tiny);
    if (bm[m] <= tiny && !sim_mass) continue;
    pj.assign(m + 1, 0.0);
    for (long jv = 0; jv <= m; ++jv) pj[jv] = bm[m] * std::exp(log_binom_pmf(m, jv, b.p1));
    double base_l = n * la0 + m * a.alpha;
    if (m > na || !sim_mass) {
      // target mass the simulation cannot reach (typical-set overflow)
      for (long jv = 0; jv <= m; ++jv) {
        state += pj[jv];
        tang += std::abs(pj[jv] * (base_l + jv * lA1 + (m - jv) * lA2));
      }
      continue;
    }
    h.assign(m + 1, 0.0);
    u.assign(m + 1, 0.0);
    for (long jc : jeff) {
      long jlo = std::max(0L, m - (na - jc));
      long jhi = std::min(m, jc);
      for (long jv = jlo; jv <= jhi; ++jv) {
        double lh = lbin(jc, jv) + lbin(na - jc, m - jv) - lbin(na, m);
        double hyp = std::exp(lh);
        h[jv] += g2.mass[jc] * hyp;
        u[jv] += g2.moment[jc] * hyp;
      }
    }
    for (long jv = 0; jv <= m; ++jv) {
      double q = g1.mass[m] * h[jv];
      state += std::abs(pj[jv] - q);
      double t = pj[jv] * (base_l + jv * lA1 + (m - jv) * lA2);
      double s = g1.moment[m] * h[jv] + g1.mass[m] * u[jv];
      tang += std::abs(t - s);
    }
  }
  return ErrorReport{state, tang / sqn};
}

ErrorReport binary_mc_error(const BinaryRoundingKernel& bk, long n, const McOptions& opts,
                            ErrorState* state_out) {
  BinaryParams bp = binary_params(bk.p1, bk.delta1);
  std::mt19937_64 rng(opts.seed);
  std::binomial_distribution<long> binom(n, bk.p1);
  std::normal_distribution<double> gauss(0.0, std::sqrt(n * bp.j));
  std::vector<double> pc(n + 1, 0.0), qc(n + 1, 0.0);
  for (long s = 0; s < opts.samples; ++s) pc[binom(rng)] += 1.0;
  for (long s = 0; s < opts.samples; ++s) {
    double l = gauss(rng);
    long idx = std::lround(l / bp.alpha + bp.p1 * n);
    idx = std::clamp(idx, 0L, n);
    qc[idx] += 1.0;
  }
  double ns = static_cast<double>(opts.samples);
  auto tv_of = [&](const std::vector<double>& pa, const std::vector<double>& qa) {
    double s = 0.0;
    for (long i = 0; i <= n; ++i) s += std::abs(pa[i] - qa[i]);
    return s / ns;
  };
  double t_hat = tv_of(pc, qc);
  // parametric bootstrap for bias correction and the confidence interval
  std::vector<double> boot(opts.bootstrap);
  std::vector<double> pcum(n + 1), qcum(n + 1);
  std::partial_sum(pc.begin(), pc.end(), pcum.begin());
  std::partial_sum(qc.begin(), qc.end(), qcum.begin());
  std::uniform_real_distribution<double> unif(0.0, ns);
  std::vector<double> rp(n + 1), rq(n + 1);
  for (int bI = 0; bI < opts.bootstrap; ++bI) {
    std::fill(rp.begin(), rp.end(), 0.0);
    std::fill(rq.begin(), rq.end(), 0.0);
    for (long s = 0; s < opts.samples; ++s) {
      double up = unif(rng);
      rp[std::lower_bound(pcum.begin(), pcum.end(), up) - pcum.begin()] += 1.0;
      double uq = unif(rng);
      rq[std::lower_bound(qcum.begin(), qcum.end(), uq) - qcum.begin()] += 1.0;
    }
    boot[bI] = tv_of(rp, rq);
  }
  double mean_boot = std::accumulate(boot.begin(), boot.end(), 0.0) / boot.size();
  double bias = mean_boot - t_hat;
  double var = 0.0;
  for (double v : boot) var += (v - mean_boot) * (v - mean_boot);
  var /= std::max<size_t>(boot.size() - 1, 1);
  double sd = std::sqrt(var);
  double corrected = std::max(t_hat - bias, 0.0);
  double half = 2.6 * sd + std::abs(bias);
  if (state_out) {
    state_out->mc_estimate = corrected;
    state_out->mc_ci_lo = std::max(corrected - half, 0.0);
    state_out->mc_ci_hi = corrected + half;
    state_out->mc_bias = bias;
  }
  return ErrorReport{corrected, 0.0};
}

}  // namespace

ErrorReport evaluate_plan_error_exact(const SimulationPlan& plan) {
  const long n = plan.n;
  if (const auto* bk = std::get_if<BinaryRoundingKernel>(&plan.kernel))
    return binary_exact_error(bk->p1, bk->delta1, n);
  if (const auto* fk = std::get_if<FiniteChainKernel>(&plan.kernel))
    return finite_chain_exact_error(*fk, n);
  if (const auto* ck = std::get_if<ContinuousScoreKernel>(&plan.kernel)) {
    // the normal fixed point simulates exactly; other score densities are
    // not exactly enumerable
    if (std::abs(ck->w_functional - 1.0) < 1e-4) return ErrorReport{0.0, 0.0};
    throw numeric_error("continuous plans admit exact evaluation only at the normal fixed point");
  }
  if (const auto* comp = std::get_if<CompositeKernel>(&plan.kernel)) {
    ErrorReport total;
    for (const auto& st : comp->stages) {
      ErrorReport r = evaluate_plan_error_exact(st);
      total.tv_state_error += r.tv_state_error;
      total.tv_tangent_error += r.tv_tangent_error;
    }
    return total;
  }
  throw numeric_error("exact evaluation unsupported for this kernel");
}

ErrorReport evaluate_plan_error_mc(const SimulationPlan& plan, const McOptions& opts,
                                   ErrorState* state_out) {
  if (const auto* bk = std::get_if<BinaryRoundingKernel>(&plan.kernel))
    return binary_mc_error(*bk, plan.n, opts, state_out);
  if (const auto* comp = std::get_if<CompositeKernel>(&plan.kernel)) {
    ErrorReport total;
    double lo = 0, hi = 0, est = 0;
    McOptions o = opts;
    for (const auto& st : comp->stages) {
      ErrorState es;
      ErrorReport r = evaluate_plan_error_mc(st, o, &es);
      total.tv_state_error += r.tv_state_error;
      est += es.mc_estimate.value_or(r.tv_state_error);
      lo += es.mc_ci_lo.value_or(0.0);
      hi += es.mc_ci_hi.value_or(0.0);
      o.seed = o.seed * 6364136223846793005ULL + 1442695040888963407ULL;
    }
    if (state_out) {
      state_out->mc_estimate = est;
      state_out->mc_ci_lo = lo;
      state_out->mc_ci_hi = hi;
    }
    return total;
  }
  throw numeric_error("Monte Carlo evaluation unsupported for this kernel");
}

ErrorReport evaluate_plan_error(SimulationPlan& plan, bool exact_mode, const McOptions& opts) {
  if (exact_mode) {
    ErrorReport r = evaluate_plan_error_exact(plan);
    plan.error_state.exact = r.max_error();
    return r;
  }
  return evaluate_plan_error_mc(plan, opts, &plan.error_state);
}

}  // namespace igc
