#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace igc {

// Thrown when an input fails a construction invariant.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a computation cannot proceed (infeasible LP, size guard, ...).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kSumTolerance = 1e-12;
inline constexpr double kRenormalizeDrift = 1e-9;
inline constexpr long kEnumerationGuard = 10'000'000;

// Probability vector on a finite support. Entries are >= 0 and sum to 1
// within 1e-12; constructor renormalizes when the drift is below 1e-9 and
// rejects otherwise.
class FinitePmf {
 public:
  explicit FinitePmf(std::vector<double> probs);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Signed vector with zero total mass on a finite support; represents a
// tangent direction c*(p1 - p2) at a distribution.
class TangentVec {
 public:
  explicit TangentVec(std::vector<double> weights);

  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// A distribution together with a tangent on the same support.
struct LocalData {
  FinitePmf pmf;
  TangentVec tangent;

  LocalData(FinitePmf p, TangentVec t);

  int size() const { return pmf.size(); }
  // True when the tangent vanishes wherever the pmf does.
  bool support_compatible() const { return support_compatible_; }

 private:
  bool support_compatible_;
};

// Local data of the Gaussian shift family: the pair
// {N(mean, variance), shift_weight * dN(mean, variance)}.
struct GaussianLocal {
  double mean = 0.0;
  double variance = 1.0;
  double shift_weight = 1.0;

  GaussianLocal() = default;
  GaussianLocal(double mean_, double variance_, double shift_weight_);
};

// General linear map between finite signed-measure spaces, stored column
// major (table[y + x*out] is the mass sent from input letter x to output
// letter y). The Markov subtype has nonnegative entries and unit column
// sums; the tangent subtype has zero column sums.
class LinearKernelMap {
 public:
  LinearKernelMap(int in_size, int out_size, std::vector<double> table);

  static LinearKernelMap identity(int k);
  // Validates column-stochasticity on top of construction.
  static LinearKernelMap markov(int in_size, int out_size, std::vector<double> table);

  int in_size() const { return in_; }
  int out_size() const { return out_; }
  double at(int out, int in) const { return table_[out + in * out_]; }
  double& at(int out, int in) { return table_[out + in * out_]; }
  const std::vector<double>& table() const { return table_; }

  std::vector<double> apply(std::span<const double> v) const;
  bool is_markov(double tol = 1e-9) const;
  bool is_tangent(double tol = 1e-9) const;

  LinearKernelMap compose(const LinearKernelMap& inner) const;  // this after inner

 private:
  int in_;
  int out_;
  std::vector<double> table_;
};

using MarkovKernel = LinearKernelMap;

double tv_norm(std::span<const double> v);
double tv_norm(const TangentVec& v);

// For classical finite maps the sup over distributions of ||(m (x) I)(p)||_1
// is attained at a point mass, so the cb-norm reduces to the max column L1
// norm; tests cross-check this against a brute-force simplex grid.
double cb_norm(const LinearKernelMap& m);

// {p1 (x) p2, d1 (x) p2 + p1 (x) d2}; output index is a*k_b + b.
LocalData tensor_local(const LocalData& a, const LocalData& b);

// {p^(x)n, delta^(n)}. Guard: k^n <= 10^7.
LocalData iid_extend(const LocalData& a, int n);

LocalData pushforward(const LinearKernelMap& m, const LocalData& a);
FinitePmf pushforward(const LinearKernelMap& m, const FinitePmf& p);

}  // namespace igc
