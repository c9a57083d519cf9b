#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "igc/fisher.hpp"
#include "igc/measures.hpp"
#include "igc/zerobias.hpp"

namespace igc {

// Certified/exact/estimated error triple of a simulation plan; the plan
// error is the max of the state TV and the (1/sqrt n)-scaled tangent TV.
struct ErrorState {
  double certified = 0.0;
  std::optional<double> exact;
  std::optional<double> mc_estimate;
  std::optional<double> mc_ci_lo;
  std::optional<double> mc_ci_hi;
  std::optional<double> mc_bias;
};

struct ErrorReport {
  double tv_state_error = 0.0;    // ||p^(x)n - Lambda^n(q^n)||_1
  double tv_tangent_error = 0.0;  // (1/sqrt n) ||delta^(n) - Lambda^n(delta'^n)||_1
  double max_error() const { return std::max(tv_state_error, tv_tangent_error); }
};

// Kernel descriptions (rounding rule / recursive chain / identity-on-score /
// score smoothing / composite), enough to re-evaluate the plan exactly.

// Nearest-lattice rounding of N(0, nJ) onto alpha*(n1 - n p1), followed by
// the conditional reconstruction p_{X^n | L^(n)}.
struct BinaryRoundingKernel {
  double p1;      // success probability of the binary target
  double delta1;  // tangent weight on letter 1
};

struct FiniteChainStageInfo {
  double p1;          // group-1 mass at this stage
  double delta1;      // group-1 tangent mass
  double stage_j;     // Fisher information of the stage binary
  double copies;      // n_i / n (relative block length, before flooring)
  double trunc_rate;  // C_{i,eps} exponent for the truncation bound
  double leaf_a;      // binary-plan constant A of the stage
};

// Recursive decomposition of a k-letter target: per-stage binary plans plus
// type-truncation maps with exponential tail bounds.
struct FiniteChainKernel {
  std::vector<double> p;      // target pmf
  std::vector<double> delta;  // target tangent
  double eps;
  std::vector<FiniteChainStageInfo> stages;
};

// Identity on the score statistic followed by conditional reconstruction
// (continuous score densities).
struct ContinuousScoreKernel {
  double j = 1.0;              // second moment of the score density
  double w_functional = 1.0;   // value of the w-variance functional
};

// Gaussian smoothing of a bounded score: L'(X) + eps * Y.
struct GaussianSmoothingKernel {
  double eps;
  double j;  // Fisher information of the source local data
};

struct SimulationPlan;

struct CompositeKernel {
  std::vector<SimulationPlan> stages;
};

using KernelSpec = std::variant<BinaryRoundingKernel, FiniteChainKernel,
                                ContinuousScoreKernel, GaussianSmoothingKernel,
                                CompositeKernel>;

// The triplet {q^n, delta'^n, Lambda^n}: a Gaussian-shift program (stored as
// the exponent of {N(0,1), dN(0,1)}^(x)E), a kernel description, and the
// certified/measured error state.
struct SimulationPlan {
  double program_exponent = 0.0;  // E in {N(0,1), dN(0,1)}^(x)E
  KernelSpec kernel;
  long n = 1;
  ErrorState error_state;
};

// Plan for a binary target via lattice rounding; certified error
// A / n^{1/4} with A = 8/sqrt(J) + 3J + 3 alpha^2 + 3|alpha|.
SimulationPlan binary_gaussian_plan(const LocalData& a, long n);

// The binary-plan constant A for given (p1, delta1).
double binary_plan_constant(double p1, double delta1);

// Exact sum over lattice cells of |Binom(n, eta) - Gaussian cell mass| with
// the standardized cells [z - 1/(2 sqrt(n) sigma), z + 1/(2 sqrt(n) sigma)];
// mass outside all cells is assigned to the nearest boundary cell.
double exact_binomial_gaussian_tv(double eta, long n);

// Composite plan for a k-letter target: truncation + recursive binary
// stages; program exponent n (J + f(eps)) from the chain identity.
SimulationPlan finite_plan(const LocalData& a, long n, double eps);

// f(eps) of the finite plan: (program exponent)/n - J.
double finite_plan_exponent_excess(const LocalData& a, double eps);

// Plan driven by a continuous score density satisfying (w-variance);
// certified state bound 2 sqrt((1/sqrt n)(w_functional - 1)).
SimulationPlan continuous_plan(const Density1D& p_L, long n);

// Plan simulating the Gaussian shift from an IID source with bounded score
// via eps-Gaussian smoothing; achieved exponent n J / (1 + eps^2 J).
SimulationPlan gaussian_by_iid_plan(const LocalData& a, long n, double eps);

// The eps-smoothed score density of a finite local data: sum of Gaussians
// of width eps centered at the score values.
Density1D smoothed_score_density(const LocalData& a, double eps);

SimulationPlan compose_plans(const std::vector<SimulationPlan>& plans);

struct McOptions {
  long samples = 200000;
  std::uint64_t seed = 0x5EED;
  int bootstrap = 200;
};

ErrorReport evaluate_plan_error_exact(const SimulationPlan& plan);
ErrorReport evaluate_plan_error_mc(const SimulationPlan& plan, const McOptions& opts,
                                   ErrorState* state_out = nullptr);

// Convenience: evaluates and stores the result in the plan's error state.
ErrorReport evaluate_plan_error(SimulationPlan& plan, bool exact_mode,
                                const McOptions& opts = McOptions{});

// Gaussian helpers shared with the channel module.
double normal_cdf(double z);
double normal_pdf(double z);
double log_binom_pmf(long n, long k, double p);

}  // namespace igc
