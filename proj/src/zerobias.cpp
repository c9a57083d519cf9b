#include "igc/zerobias.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

namespace igc {

namespace {

// composite Simpson with an even node count
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2 == 1) ++n;
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

struct Window {
  double lo, hi;
};

Window effective_window(const Density1D& d) {
  double lo = d.lo, hi = d.hi;
  if (std::isfinite(lo) && std::isfinite(hi)) return {lo, hi};
  // coarse scan to locate the mass, then a symmetric cutoff window
  double clo = std::isfinite(lo) ? lo : -100.0;
  double chi = std::isfinite(hi) ? hi : 100.0;
  int cn = 4096;
  double mass = 0.0, mean = 0.0, m2 = 0.0;
  double h = (chi - clo) / cn;
  for (int i = 0; i <= cn; ++i) {
    double t = clo + i * h;
    double w = (i == 0 || i == cn) ? 0.5 : 1.0;
    double p = d.pdf(t) * w;
    mass += p;
    mean += p * t;
    m2 += p * t * t;
  }
  if (mass <= 0.0) throw numeric_error("Density1D: no mass found in scan window");
  mean /= mass;
  double var = std::max(m2 / mass - mean * mean, 1e-12);
  double half = d.grid.cutoff_sigmas * std::sqrt(var);
  double wlo = std::max(lo, mean - half), whi = std::min(hi, mean + half);
  return {wlo, whi};
}

}  // namespace

DiscreteLaw1D::DiscreteLaw1D(std::vector<std::pair<double, double>> atoms_)
    : atoms(std::move(atoms_)) {
  if (atoms.empty()) throw invalid_input("DiscreteLaw1D: no atoms");
  double sum = 0.0;
  for (auto& [loc, m] : atoms) {
    if (!(m >= 0.0)) throw invalid_input("DiscreteLaw1D: negative mass");
    sum += m;
  }
  if (std::abs(sum - 1.0) > kRenormalizeDrift)
    throw invalid_input("DiscreteLaw1D: masses sum to " + std::to_string(sum));
  if (std::abs(sum - 1.0) > kSumTolerance)
    for (auto& [loc, m] : atoms) m /= sum;
  std::sort(atoms.begin(), atoms.end());
}

double DiscreteLaw1D::mean() const {
  double s = 0.0;
  for (auto& [loc, m] : atoms) s += loc * m;
  return s;
}

double DiscreteLaw1D::variance() const {
  double mu = mean(), s = 0.0;
  for (auto& [loc, m] : atoms) s += (loc - mu) * (loc - mu) * m;
  return s;
}

double DiscreteLaw1D::min_location() const { return atoms.front().first; }
double DiscreteLaw1D::max_location() const { return atoms.back().first; }

Moments density_moments(const Density1D& d) {
  Window w = effective_window(d);
  int n = d.grid.nodes;
  double mass = simpson(d.pdf, w.lo, w.hi, n);
  double mean = simpson([&](double t) { return t * d.pdf(t); }, w.lo, w.hi, n);
  double m2 = simpson([&](double t) { return t * t * d.pdf(t); }, w.lo, w.hi, n);
  if (mass > 0.0) mean /= mass;
  return Moments{mass, mean, m2 / std::max(mass, 1e-300) - mean * mean};
}

double density_expect(const Density1D& d, const std::function<double(double)>& f) {
  Window w = effective_window(d);
  return simpson([&](double t) { return f(t) * d.pdf(t); }, w.lo, w.hi, d.grid.nodes);
}

Density1D zero_bias(const DiscreteLaw1D& x) {
  double mu = x.mean();
  double var = x.variance();
  if (!(var > 0.0)) throw numeric_error("zero_bias: zero variance");
  auto atoms = x.atoms;
  auto eval = [atoms, mu, var](double t) {
    double acc = 0.0;
    for (auto& [loc, m] : atoms) {
      if (loc > t) break;
      acc += (mu - loc) * m;
    }
    return std::max(acc / var, 0.0);
  };
  return Density1D{eval, x.min_location(), x.max_location(), GridSpec{}};
}

Density1D zero_bias(const Density1D& x) {
  Window w = effective_window(x);
  Moments mom = density_moments(x);
  if (!(mom.variance > 0.0)) throw numeric_error("zero_bias: zero variance");
  // cumulative table of int (mu - y) p(y) dy on the grid, interpolated
  int n = x.grid.nodes;
  double h = (w.hi - w.lo) / n;
  auto table = std::make_shared<std::vector<double>>(n + 1, 0.0);
  double mu = mom.mean;
  for (int i = 1; i <= n; ++i) {
    double a = w.lo + (i - 1) * h, b = w.lo + i * h;
    double fa = (mu - a) * x.pdf(a), fm = (mu - 0.5 * (a + b)) * x.pdf(0.5 * (a + b)),
           fb = (mu - b) * x.pdf(b);
    (*table)[i] = (*table)[i - 1] + (fa + 4.0 * fm + fb) * h / 6.0;
  }
  double lo = w.lo, var = mom.variance;
  auto eval = [table, lo, h, n, var](double t) {
    double u = (t - lo) / h;
    if (u <= 0.0 || u >= n) return 0.0;
    int i = static_cast<int>(u);
    double frac = u - i;
    double v = (*table)[i] * (1.0 - frac) + (*table)[std::min(i + 1, n)] * frac;
    return std::max(v / var, 0.0);
  };
  return Density1D{eval, w.lo, w.hi, x.grid};
}

double cov_identity_check(const DiscreteLaw1D& x, const std::function<double(double)>& f,
                          const std::function<double(double)>& fprime) {
  if (std::abs(x.mean()) > 1e-9) throw invalid_input("cov_identity_check: law not centered");
  double var = x.variance();
  if (!(var > 0.0)) throw invalid_input("cov_identity_check: zero variance");
  double lhs = 0.0;
  for (auto& [loc, m] : x.atoms) lhs += loc * f(loc) * m;
  // the transform density is constant between consecutive atoms, so its
  // expectation of fprime is a finite sum of exact antiderivative increments
  double rhs = 0.0, cum = 0.0, mu = x.mean();
  for (size_t i = 0; i + 1 < x.atoms.size(); ++i) {
    cum += (mu - x.atoms[i].first) * x.atoms[i].second;
    rhs += cum * (f(x.atoms[i + 1].first) - f(x.atoms[i].first));
  }
  return std::abs(lhs - rhs);
}

double cov_identity_check(const Density1D& x, const std::function<double(double)>& f,
                          const std::function<double(double)>& fprime) {
  Moments mom = density_moments(x);
  if (std::abs(mom.mean) > 1e-7) throw invalid_input("cov_identity_check: law not centered");
  if (!(mom.variance > 0.0)) throw invalid_input("cov_identity_check: zero variance");
  double lhs = density_expect(x, [&](double t) { return t * f(t); });
  Density1D w = zero_bias(x);
  double rhs = mom.variance * density_expect(w, fprime);
  return std::abs(lhs - rhs);
}

DiscreteLaw1D convolution_power(const DiscreteLaw1D& x, int n) {
  if (n < 1) throw invalid_input("convolution_power: n must be positive");
  std::map<long long, double> acc;  // keyed by rounded location to merge atoms
  const double quant = 1e-12;
  auto key = [&](double loc) { return static_cast<long long>(std::llround(loc / quant)); };
  acc[key(0.0)] = 1.0;
  std::map<long long, double> locs;
  for (int step = 0; step < n; ++step) {
    std::map<long long, double> next;
    std::map<long long, double> next_locs;
    for (auto& [kloc, m] : acc) {
      double base = kloc * quant;
      for (auto& [loc, ma] : x.atoms) {
        long long kk = key(base + loc);
        next[kk] += m * ma;
        next_locs[kk] = base + loc;
      }
    }
    if (next.size() > 200000) throw numeric_error("convolution_power: atom count guard");
    acc = std::move(next);
    locs = std::move(next_locs);
  }
  std::vector<std::pair<double, double>> atoms;
  atoms.reserve(acc.size());
  for (auto& [kloc, m] : acc) atoms.emplace_back(locs.count(kloc) ? locs[kloc] : kloc * quant, m);
  return DiscreteLaw1D(std::move(atoms));
}

Density1D sum_zero_bias(const DiscreteLaw1D& x, int n) {
  if (std::abs(x.mean()) > 1e-9) throw invalid_input("sum_zero_bias: law not centered");
  Density1D wx = zero_bias(x);
  if (n == 1) return wx;
  DiscreteLaw1D conv = convolution_power(x, n - 1);
  auto atoms = conv.atoms;
  auto wpdf = wx.pdf;
  auto eval = [atoms, wpdf](double s) {
    double acc = 0.0;
    for (auto& [loc, m] : atoms) acc += m * wpdf(s - loc);
    return acc;
  };
  double lo = wx.lo + conv.min_location();
  double hi = wx.hi + conv.max_location();
  return Density1D{eval, lo, hi, GridSpec{}};
}

TailReport tail_condition_check(const Density1D& p_L) {
  TailReport rep;
  if (std::isfinite(p_L.lo) && std::isfinite(p_L.hi)) {
    rep.passes = true;
    rep.tail_template = "bounded";
    return rep;
  }
  Window w = effective_window(p_L);
  // sample each tail between 45% and 95% of the window half-width
  auto fit_side = [&](int sign, double& alpha_poly, double& alpha_exp, double& sse_poly,
                      double& sse_exp) -> bool {
    double edge = sign > 0 ? w.hi : w.lo;
    double center = 0.5 * (w.lo + w.hi);
    std::vector<double> ts, ys;
    for (int i = 0; i < 60; ++i) {
      double frac = 0.45 + 0.5 * i / 59.0;
      double t = center + frac * (edge - center);
      double p = p_L.pdf(t);
      if (p > 1e-290 && std::abs(t) > 1.0) {
        ts.push_back(std::abs(t));
        ys.push_back(std::log(p));
      }
    }
    if (ts.size() < 10) return false;  // density vanishes over the sampled band
    // poly template: y = c - alpha log t
    {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int m = static_cast<int>(ts.size());
      for (int i = 0; i < m; ++i) {
        double lx = std::log(ts[i]);
        sx += lx; sy += ys[i]; sxx += lx * lx; sxy += lx * ys[i];
      }
      double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      double c = (sy - slope * sx) / m;
      alpha_poly = -slope;
      sse_poly = 0;
      for (int i = 0; i < m; ++i) {
        double r = ys[i] - (c + slope * std::log(ts[i]));
        sse_poly += r * r;
      }
    }
    // exp template: y = c - b t^alpha, grid over alpha, LSQ over (c, b)
    {
      sse_exp = std::numeric_limits<double>::infinity();
      int m = static_cast<int>(ts.size());
      for (double a = 0.5; a <= 6.0 + 1e-9; a += 0.05) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < m; ++i) {
          double x = -std::pow(ts[i], a);
          sx += x; sy += ys[i]; sxx += x * x; sxy += x * ys[i];
        }
        double denom = m * sxx - sx * sx;
        if (std::abs(denom) < 1e-30) continue;
        double slope = (m * sxy - sx * sy) / denom;  // = b
        double c = (sy - slope * sx) / m;
        if (slope < 0.0) continue;  // density must decay
        double sse = 0;
        for (int i = 0; i < m; ++i) {
          double r = ys[i] - (c - slope * std::pow(ts[i], a));
          sse += r * r;
        }
        if (sse < sse_exp) {
          sse_exp = sse;
          alpha_exp = a;
        }
      }
    }
    return true;
  };
  double apl = 0, apr = 0, ael = 0, aer = 0, spl = 0, spr = 0, sel = 0, ser = 0;
  bool okl = fit_side(-1, apl, ael, spl, sel);
  bool okr = fit_side(+1, apr, aer, spr, ser);
  // a side whose density underflows across the whole sampled band decays
  // faster than any template; treat it as unconstraining
  if (!okl && !okr) {
    rep.passes = true;
    rep.tail_template = "bounded";
    return rep;
  }
  if (!okl) {
    apl = apr;
    ael = aer;
    spl = spr;
    sel = ser;
  }
  if (!okr) {
    apr = apl;
    aer = ael;
    spr = spl;
    ser = sel;
  }
  bool exp_better = (sel + ser) < (spl + spr);
  if (exp_better) {
    rep.tail_template = "exp";
    rep.alpha_left = ael;
    rep.alpha_right = aer;
    rep.passes = std::min(ael, aer) >= 2.0 - 0.1;
  } else {
    rep.tail_template = "poly";
    rep.alpha_left = apl;
    rep.alpha_right = apr;
    rep.passes = std::min(apl, apr) >= 4.0 - 0.1;
  }
  return rep;
}

WVarianceResult w_variance_functional(const Density1D& p_L, double J) {
  Moments mom = density_moments(p_L);
  double m2 = mom.variance + mom.mean * mom.mean;
  if (std::abs(m2 - J) > 1e-6 * std::max(1.0, std::abs(J)))
    throw invalid_input("w_variance_functional: J does not match the second moment");
  WVarianceResult res;
  res.tail = tail_condition_check(p_L);
  res.finite = res.tail.passes;
  // quadrature of E (m(L) / (J p(L)))^2 with m(x) = int_{-inf}^x (-t) p(t) dt
  Window w = effective_window(p_L);
  int n = p_L.grid.nodes;
  double h = (w.hi - w.lo) / n;
  std::vector<double> cum(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    double a = w.lo + (i - 1) * h, b = w.lo + i * h, mid = 0.5 * (a + b);
    cum[i] = cum[i - 1] + (-a * p_L.pdf(a) - 4.0 * mid * p_L.pdf(mid) - b * p_L.pdf(b)) * h / 6.0;
  }
  // skip the far tails where round-off in the cumulative table would be
  // amplified by 1/p; their true contribution is negligible under the
  // tail condition
  double pmax = 0.0;
  for (int i = 0; i <= n; ++i) pmax = std::max(pmax, p_L.pdf(w.lo + i * h));
  double floor_p = pmax * 1e-10;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    double t = w.lo + i * h;
    double p = p_L.pdf(t);
    if (p < floor_p) continue;
    double ratio = cum[i] / (J * p);
    double wgt = (i == 0 || i == n) ? 0.5 : 1.0;  // trapezoid on the grid
    acc += ratio * ratio * p * wgt * h;
  }
  res.value = acc;
  return res;
}

RatioVariance w_over_p_variance(const Density1D& s) {
  RatioVariance rv;
  Density1D w = zero_bias(s);
  Window win = effective_window(s);
  int n = s.grid.nodes;
  double h = (win.hi - win.lo) / n;
  double pmax = 0.0;
  for (int i = 0; i <= n; ++i) pmax = std::max(pmax, s.pdf(win.lo + i * h));
  double floor_p = pmax * 1e-10;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    double t = win.lo + i * h;
    double p = s.pdf(t);
    if (p < floor_p) {
      if (w.pdf(t) > 1e-6 * pmax) rv.reliable = false;
      continue;
    }
    double r = w.pdf(t) / p - 1.0;
    double wgt = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += r * r * p * wgt * h;
  }
  rv.value = acc;
  return rv;
}

}  // namespace igc
