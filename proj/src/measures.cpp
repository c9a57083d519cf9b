#include "igc/measures.hpp"

#include <cmath>
#include <numeric>

namespace igc {

FinitePmf::FinitePmf(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw invalid_input("FinitePmf: empty support");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw invalid_input("FinitePmf: negative entry");
    sum += p;
  }
  double drift = std::abs(sum - 1.0);
  if (drift > kRenormalizeDrift)
    throw invalid_input("FinitePmf: entries sum to " + std::to_string(sum));
  if (drift > kSumTolerance) {
    for (double& p : probs_) p /= sum;
  }
}

TangentVec::TangentVec(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw invalid_input("TangentVec: empty support");
  double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  double scale = tv_norm(std::span<const double>(weights_));
  double drift = std::abs(sum);
  if (drift > kRenormalizeDrift * std::max(1.0, scale))
    throw invalid_input("TangentVec: entries sum to " + std::to_string(sum));
  if (drift > kSumTolerance && scale > 0.0) {
    // spread the drift uniformly so the sum is exactly zero
    double corr = sum / static_cast<double>(weights_.size());
    for (double& w : weights_) w -= corr;
  }
}

LocalData::LocalData(FinitePmf p, TangentVec t) : pmf(std::move(p)), tangent(std::move(t)) {
  if (pmf.size() != tangent.size())
    throw invalid_input("LocalData: pmf and tangent support sizes differ");
  support_compatible_ = true;
  for (int i = 0; i < pmf.size(); ++i) {
    if (pmf[i] == 0.0 && std::abs(tangent[i]) > kSumTolerance) {
      support_compatible_ = false;
      break;
    }
  }
}

GaussianLocal::GaussianLocal(double mean_, double variance_, double shift_weight_)
    : mean(mean_), variance(variance_), shift_weight(shift_weight_) {
  if (!(variance > 0.0)) throw invalid_input("GaussianLocal: variance must be positive");
}

LinearKernelMap::LinearKernelMap(int in_size, int out_size, std::vector<double> table)
    : in_(in_size), out_(out_size), table_(std::move(table)) {
  if (in_ <= 0 || out_ <= 0) throw invalid_input("LinearKernelMap: sizes must be positive");
  if (table_.size() != static_cast<size_t>(in_) * out_)
    throw invalid_input("LinearKernelMap: table size mismatch");
}

LinearKernelMap LinearKernelMap::identity(int k) {
  std::vector<double> t(static_cast<size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) t[i + i * k] = 1.0;
  return LinearKernelMap(k, k, std::move(t));
}

LinearKernelMap LinearKernelMap::markov(int in_size, int out_size, std::vector<double> table) {
  LinearKernelMap m(in_size, out_size, std::move(table));
  if (!m.is_markov()) throw invalid_input("LinearKernelMap: not column-stochastic");
  return m;
}

std::vector<double> LinearKernelMap::apply(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != in_)
    throw invalid_input("LinearKernelMap::apply: size mismatch");
  std::vector<double> out(out_, 0.0);
  for (int x = 0; x < in_; ++x) {
    double vx = v[x];
    if (vx == 0.0) continue;
    const double* col = table_.data() + static_cast<size_t>(x) * out_;
    for (int y = 0; y < out_; ++y) out[y] += col[y] * vx;
  }
  return out;
}

bool LinearKernelMap::is_markov(double tol) const {
  for (int x = 0; x < in_; ++x) {
    double sum = 0.0;
    for (int y = 0; y < out_; ++y) {
      double v = at(y, x);
      if (v < -tol) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

bool LinearKernelMap::is_tangent(double tol) const {
  for (int x = 0; x < in_; ++x) {
    double sum = 0.0;
    for (int y = 0; y < out_; ++y) sum += at(y, x);
    if (std::abs(sum) > tol) return false;
  }
  return true;
}

LinearKernelMap LinearKernelMap::compose(const LinearKernelMap& inner) const {
  if (in_ != inner.out_size())
    throw invalid_input("LinearKernelMap::compose: shape mismatch");
  std::vector<double> t(static_cast<size_t>(inner.in_size()) * out_, 0.0);
  for (int x = 0; x < inner.in_size(); ++x)
    for (int m = 0; m < in_; ++m) {
      double v = inner.at(m, x);
      if (v == 0.0) continue;
      for (int y = 0; y < out_; ++y) t[y + static_cast<size_t>(x) * out_] += at(y, m) * v;
    }
  return LinearKernelMap(inner.in_size(), out_, std::move(t));
}

double tv_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double tv_norm(const TangentVec& v) { return tv_norm(std::span<const double>(v.weights())); }

double cb_norm(const LinearKernelMap& m) {
  double best = 0.0;
  for (int x = 0; x < m.in_size(); ++x) {
    double s = 0.0;
    for (int y = 0; y < m.out_size(); ++y) s += std::abs(m.at(y, x));
    best = std::max(best, s);
  }
  return best;
}

LocalData tensor_local(const LocalData& a, const LocalData& b) {
  int ka = a.size(), kb = b.size();
  std::vector<double> p(static_cast<size_t>(ka) * kb), d(static_cast<size_t>(ka) * kb);
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j) {
      p[static_cast<size_t>(i) * kb + j] = a.pmf[i] * b.pmf[j];
      d[static_cast<size_t>(i) * kb + j] = a.tangent[i] * b.pmf[j] + a.pmf[i] * b.tangent[j];
    }
  return LocalData(FinitePmf(std::move(p)), TangentVec(std::move(d)));
}

LocalData iid_extend(const LocalData& a, int n) {
  if (n < 1) throw invalid_input("iid_extend: n must be positive");
  int k = a.size();
  double total = std::pow(static_cast<double>(k), n);
  if (total > static_cast<double>(kEnumerationGuard))
    throw invalid_input("iid_extend: k^n exceeds enumeration guard");
  if (n == 1) return a;
  LocalData out = a;
  for (int i = 1; i < n; ++i) out = tensor_local(out, a);
  return out;
}

LocalData pushforward(const LinearKernelMap& m, const LocalData& a) {
  if (!m.is_markov()) throw invalid_input("pushforward: kernel is not Markov");
  auto p = m.apply(a.pmf.probs());
  auto d = m.apply(a.tangent.weights());
  return LocalData(FinitePmf(std::move(p)), TangentVec(std::move(d)));
}

FinitePmf pushforward(const LinearKernelMap& m, const FinitePmf& p) {
  if (!m.is_markov()) throw invalid_input("pushforward: kernel is not Markov");
  return FinitePmf(m.apply(p.probs()));
}

}  // namespace igc
