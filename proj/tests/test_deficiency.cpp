#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "igc/deficiency.hpp"
#include "igc/fisher.hpp"

using namespace igc;

namespace {

FinitePmf random_pmf(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (auto& v : p) s += v = unif(rng);
  for (auto& v : p) v /= s;
  return FinitePmf(std::move(p));
}

MarkovKernel random_markov(std::mt19937_64& rng, int in, int out) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::vector<double> t(static_cast<size_t>(in) * out);
  for (int x = 0; x < in; ++x) {
    double s = 0.0;
    for (int y = 0; y < out; ++y) s += t[y + x * out] = unif(rng);
    for (int y = 0; y < out; ++y) t[y + x * out] /= s;
  }
  return MarkovKernel::markov(in, out, std::move(t));
}

double max_tv_between(const FiniteExperiment& e, const FiniteExperiment& f,
                      const MarkovKernel& lam) {
  double worst = 0.0;
  for (int th = 0; th < e.theta_count(); ++th) {
    std::vector<double> img = lam.apply(f.laws[th].probs());
    std::vector<double> diff(img.size());
    for (size_t y = 0; y < img.size(); ++y) diff[y] = img[y] - e.laws[th][static_cast<int>(y)];
    worst = std::max(worst, tv_norm(diff));
  }
  return worst;
}

}  // namespace

TEST_CASE("distance to itself is zero") {
  std::mt19937_64 rng(61);
  for (int it = 0; it < 10; ++it) {
    FiniteExperiment e({random_pmf(rng, 3), random_pmf(rng, 3), random_pmf(rng, 3)});
    RandomizationResult r = randomization_distance(e, e);
    CHECK(r.value <= 1e-9);
    CHECK(r.value == doctest::Approx(max_tv_between(e, e, r.kernel)).epsilon(1e-9));
  }
}

TEST_CASE("a garbled experiment is at distance zero from its source") {
  std::mt19937_64 rng(67);
  for (int it = 0; it < 100; ++it) {
    int mf = 2 + static_cast<int>(rng() % 3);
    int me = 2 + static_cast<int>(rng() % 3);
    int thetas = 2 + static_cast<int>(rng() % 2);
    MarkovKernel garble = random_markov(rng, mf, me);
    std::vector<FinitePmf> fl, el;
    for (int th = 0; th < thetas; ++th) {
      FinitePmf q = random_pmf(rng, mf);
      el.emplace_back(garble.apply(q.probs()));
      fl.emplace_back(std::move(q));
    }
    FiniteExperiment e(std::move(el)), f(std::move(fl));
    RandomizationResult r = randomization_distance(e, f);
    CHECK(r.value <= 1e-8);
    // the returned kernel reproduces each target law
    CHECK(max_tv_between(e, f, r.kernel) <= 1e-8);
  }
}

TEST_CASE("distance matches the brute-force grid oracle on tiny instances") {
  std::mt19937_64 rng(71);
  for (int it = 0; it < 5; ++it) {
    FiniteExperiment e({random_pmf(rng, 2), random_pmf(rng, 2)});
    FiniteExperiment f({random_pmf(rng, 2), random_pmf(rng, 2)});
    double lp = randomization_distance(e, f).value;
    double grid = randomization_distance_grid(e, f, 400);
    CHECK(lp <= grid + 1e-9);  // the grid only visits some kernels
    CHECK(lp == doctest::Approx(grid).epsilon(1e-4));
  }
}

TEST_CASE("distance satisfies the chaining inequality") {
  std::mt19937_64 rng(73);
  for (int it = 0; it < 50; ++it) {
    FiniteExperiment e({random_pmf(rng, 3), random_pmf(rng, 3)});
    FiniteExperiment f({random_pmf(rng, 3), random_pmf(rng, 3)});
    FiniteExperiment g({random_pmf(rng, 3), random_pmf(rng, 3)});
    double ef = randomization_distance(e, f).value;
    double fg = randomization_distance(f, g).value;
    double eg = randomization_distance(e, g).value;
    CHECK(eg <= ef + fg + 1e-6);
  }
}

TEST_CASE("local deficiency on identical data is zero") {
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  for (int it = 0; it < 20; ++it) {
    FinitePmf p = random_pmf(rng, 3);
    std::vector<double> d(3);
    double s = 0.0;
    for (auto& v : d) s += v = unif(rng);
    for (auto& v : d) v -= s / 3.0;
    LocalData a(p, TangentVec(d));
    LocalDeficiencyResult r = local_deficiency(a, a);
    CHECK(r.feasible);
    CHECK(r.tangent_error <= 1e-8);
  }
}

TEST_CASE("score reduction is locally sufficient in both directions") {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  for (int it = 0; it < 30; ++it) {
    FinitePmf p = random_pmf(rng, 4);
    std::vector<double> d(4);
    double s = 0.0;
    for (auto& v : d) s += v = unif(rng);
    for (auto& v : d) v -= s / 4.0;
    LocalData a(p, TangentVec(d));
    ScoreReduction sr = score_reduction(a);
    LocalDeficiencyResult fwd = local_deficiency(sr.reduced, a);
    CHECK(fwd.feasible);
    CHECK(fwd.tangent_error <= 1e-8);
    LocalDeficiencyResult bwd = local_deficiency(a, sr.reduced);
    CHECK(bwd.feasible);
    CHECK(bwd.tangent_error <= 1e-8);
  }
}

TEST_CASE("transport from an uninformative source pays the full tangent") {
  // the state constraint is always satisfiable (a constant kernel works),
  // but a zero-tangent point mass cannot supply any tangent direction
  LocalData point(FinitePmf({1.0, 0.0}), TangentVec({0.0, 0.0}));
  LocalData target(FinitePmf({0.5, 0.5}), TangentVec({0.2, -0.2}));
  LocalDeficiencyResult r = local_deficiency(target, point);
  CHECK(r.feasible);
  CHECK(r.tangent_error == doctest::Approx(0.4).epsilon(1e-9));
  // relaxing the state constraint cannot create tangent mass either
  LocalDeficiencyResult relax = local_deficiency(target, point, 0.5);
  CHECK(relax.feasible);
  CHECK(relax.tangent_error >= 0.4 - 1e-9);
}

TEST_CASE("distances are invariant under relabeling of outcomes") {
  std::mt19937_64 rng(89);
  for (int it = 0; it < 20; ++it) {
    std::vector<FinitePmf> el{random_pmf(rng, 3), random_pmf(rng, 3)};
    std::vector<FinitePmf> fl{random_pmf(rng, 3), random_pmf(rng, 3)};
    FiniteExperiment e(el), f(fl);
    double base = randomization_distance(e, f).value;

    auto rot = [](const FinitePmf& p) {
      return FinitePmf({p[2], p[0], p[1]});
    };
    FiniteExperiment er({rot(el[0]), rot(el[1])});
    FiniteExperiment fr({rot(fl[0]), rot(fl[1])});
    CHECK(randomization_distance(er, f).value == doctest::Approx(base).epsilon(1e-8));
    CHECK(randomization_distance(e, fr).value == doctest::Approx(base).epsilon(1e-8));
  }
}
