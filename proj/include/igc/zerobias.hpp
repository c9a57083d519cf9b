#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "igc/measures.hpp"

namespace igc {

struct GridSpec {
  int nodes = 1 << 14;          // quadrature nodes (composite Simpson)
  double cutoff_sigmas = 12.0;  // half-width of the window in standard deviations
};

// One-dimensional density given by a reentrant evaluator plus a grid spec.
// lo/hi may be +-infinity; the quadrature window is then centered at the
// estimated mean with the configured cutoff.
struct Density1D {
  std::function<double(double)> pdf;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  GridSpec grid;
};

struct DiscreteLaw1D {
  // (location, mass) atoms; masses sum to 1 within 1e-12.
  std::vector<std::pair<double, double>> atoms;

  explicit DiscreteLaw1D(std::vector<std::pair<double, double>> atoms_);

  double mean() const;
  double variance() const;
  double min_location() const;
  double max_location() const;
};

struct Moments {
  double mass;
  double mean;
  double variance;
};

// Quadrature moments of a density over its effective window.
Moments density_moments(const Density1D& d);

// Quadrature of f(t) * d.pdf(t) over the effective window.
double density_expect(const Density1D& d, const std::function<double(double)>& f);

// The zero-bias density W_X(x) = (1/V(X)) * int_{-inf}^x (E X - y) P_X(dy).
// Supported inside the convex hull of the support of X.
Density1D zero_bias(const DiscreteLaw1D& x);
Density1D zero_bias(const Density1D& x);

// |E[X f(X)] - V(X) E[f'(X degree)]| for a centered law with finite variance.
double cov_identity_check(const DiscreteLaw1D& x, const std::function<double(double)>& f,
                          const std::function<double(double)>& fprime);
double cov_identity_check(const Density1D& x, const std::function<double(double)>& f,
                          const std::function<double(double)>& fprime);

// W_S for S the n-fold IID sum: W_X convolved with the (n-1)-fold
// convolution power of p_X.
Density1D sum_zero_bias(const DiscreteLaw1D& x, int n);

// n-fold convolution power of a discrete law (atoms merged by location).
DiscreteLaw1D convolution_power(const DiscreteLaw1D& x, int n);

struct TailReport {
  bool passes = false;            // one of the sufficient conditions holds
  std::string tail_template;      // "poly" | "exp" | "bounded"
  double alpha_left = 0.0;
  double alpha_right = 0.0;
};

// Fits log-density tails on both sides against polynomial and exponential
// templates and reports whether the sufficient integrability conditions
// hold (bounded support, poly min alpha >= 4, exp min alpha >= 2).
TailReport tail_condition_check(const Density1D& p_L);

struct WVarianceResult {
  bool finite = false;
  double value = 0.0;  // quadrature value when finite
  TailReport tail;
};

// E[ ( int_{-inf}^{L} (-t) p_L(t) dt / (J p_L(L)) )^2 ] by quadrature.
// J must match the second moment of p_L within 1e-6 (relative).
WVarianceResult w_variance_functional(const Density1D& p_L, double J);

// Quadrature value of E(W_S(S)/p_S(S) - 1)^2 for a density S; regions where
// p_S < 1e-300 are skipped and flagged.
struct RatioVariance {
  double value = 0.0;
  bool reliable = true;
};
RatioVariance w_over_p_variance(const Density1D& s);

}  // namespace igc
