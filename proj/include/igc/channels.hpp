#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "igc/fisher.hpp"
#include "igc/measures.hpp"
#include "igc/tangent_sim.hpp"

namespace igc {

// Finite classical channel: one output pmf per input letter.
struct Channel {
  std::vector<FinitePmf> columns;

  int in_size() const { return static_cast<int>(columns.size()); }
  int out_size() const { return columns.empty() ? 0 : columns.front().size(); }
};

// Channel direction: one zero-sum column per input letter.
struct ChannelTangent {
  std::vector<TangentVec> columns;
};

struct ChannelLocal {
  Channel channel;
  ChannelTangent tangent;

  ChannelLocal(Channel c, ChannelTangent t);

  int in_size() const { return channel.in_size(); }
  int out_size() const { return channel.out_size(); }
  LocalData column_local(int x) const;
};

struct GMinResult {
  double value = 0.0;  // max over input letters of the column Fisher information
  int argmax = -1;
};

GMinResult g_min(const ChannelLocal& cl);

// Brute-force counterpart of g_min: sup of J_{phi(p)}(delta(p)) over a grid
// of input distributions (used as a cross-check oracle).
double g_min_grid(const ChannelLocal& cl, int grid_points);

struct GMaxResult {
  bool feasible = false;
  double value = 0.0;  // J of the best feasible program; upper bound on the
                       // simulation metric
  double state_residual = 0.0;
  double tangent_residual = 0.0;
  std::vector<double> program_q;
  std::vector<double> program_delta;
};

// Alternating search for an exact-simulation program of fixed support size:
// for a fixed program the kernel constraints decouple per input letter into
// linear feasibility problems; for a fixed kernel the tangent is re-fit by
// weighted least squares. Restarts perturb the program seed.
GMaxResult g_max_search(const ChannelLocal& cl, int program_support, int restarts,
                        std::uint64_t seed);

struct ChannelSimPlan {
  double program_exponent = 0.0;  // n (1 + k eps)(J + c)
  double g_min_value = 0.0;
  double eps = 0.0;
  double c = 0.0;
  long n = 1;
  double certified = 0.0;              // C / (eps n)^{1/4}
  std::vector<double> column_constants;  // per-letter plan constants
};

// Per-letter block simulation: Gaussian resources are split by letter
// counts; letters with fewer than eps*n occurrences are padded. The
// certified bound sums the per-letter constants over the worst count split.
ChannelSimPlan channel_sim_plan(const ChannelLocal& cl, long n, double eps, double c);

// Exact state/tangent error of the channel plan on a given input count
// profile (counts[x] = occurrences of letter x; sum = n). Blocks below the
// padding threshold are evaluated at the padded length.
ErrorReport channel_sim_measured(const ChannelLocal& cl, const ChannelSimPlan& plan,
                                 const std::vector<long>& counts);

// Channel on a compact cube with a known modulus of continuity.
struct CubeChannel {
  int dim = 1;
  int out_size = 2;
  // (pmf, tangent) at a point of [0,1]^dim
  std::function<std::pair<std::vector<double>, std::vector<double>>(
      const std::vector<double>&)>
      eval;
  std::function<double(double)> modulus;  // cb-distance <= modulus(distance)
};

struct LatticeCoarsening {
  ChannelLocal coarsened;
  std::vector<std::vector<double>> points;
  double cb_distance_bound = 0.0;  // modulus(t sqrt(dim) / 2)
};

LatticeCoarsening lattice_coarsen(const CubeChannel& ch, double t);

// Witness that the minimal channel metric violates the parallelogram law
// and therefore is not induced by a bilinear form.
struct ParallelogramWitness {
  bool found = false;
  double defect = 0.0;  // |g(d1+d2) + g(d1-d2) - 2 g(d1) - 2 g(d2)|
  double scale = 0.0;   // g(d1) + g(d2)
  std::vector<double> values;  // g(d1+d2), g(d1-d2), g(d1), g(d2)
  Channel channel;
  ChannelTangent delta1, delta2;
};

ParallelogramWitness parallelogram_witness(std::uint64_t seed);

// The perturbed IID family whose per-copy Fisher information diverges while
// the perturbation vanishes in total variation.
struct CounterexampleResult {
  double tv_perturbation = 0.0;  // 2 (t/2)^n, as reported
  double divergence = 0.0;       // (1/n) |J difference|
  bool underflow_tail = false;   // perturbation below the smallest double;
                                 // divergence from the leading term only
};

CounterexampleResult continuity_counterexample(double t, long n);

}  // namespace igc
