#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "igc/channels.hpp"

using namespace igc;

namespace {

ChannelLocal two_column(std::vector<double> c0, std::vector<double> c1,
                        std::vector<double> t0, std::vector<double> t1) {
  Channel ch;
  ch.columns.emplace_back(std::move(c0));
  ch.columns.emplace_back(std::move(c1));
  ChannelTangent tan;
  tan.columns.emplace_back(std::move(t0));
  tan.columns.emplace_back(std::move(t1));
  return ChannelLocal(std::move(ch), std::move(tan));
}

ChannelLocal constant_channel(std::vector<double> p, std::vector<double> d, int inputs) {
  Channel ch;
  ChannelTangent tan;
  for (int x = 0; x < inputs; ++x) {
    ch.columns.emplace_back(p);
    tan.columns.emplace_back(d);
  }
  return ChannelLocal(std::move(ch), std::move(tan));
}

ChannelLocal random_channel(std::mt19937_64& rng, int in, int out) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  Channel ch;
  ChannelTangent tan;
  for (int x = 0; x < in; ++x) {
    std::vector<double> p(out), d(out);
    double ps = 0.0, ds = 0.0;
    for (int y = 0; y < out; ++y) ps += p[y] = unif(rng);
    for (auto& v : p) v /= ps;
    for (int y = 0; y < out; ++y) ds += d[y] = unif(rng) - 0.5;
    for (auto& v : d) v -= ds / out;
    ch.columns.emplace_back(std::move(p));
    tan.columns.emplace_back(std::move(d));
  }
  return ChannelLocal(std::move(ch), std::move(tan));
}

}  // namespace

TEST_CASE("g_min is the max column information") {
  ChannelLocal zero = constant_channel({0.5, 0.5}, {0.0, 0.0}, 2);
  CHECK(g_min(zero).value == 0.0);

  // column informations 1.0 and 0.25
  ChannelLocal cl = two_column({0.5, 0.5}, {0.5, 0.5}, {0.5, -0.5}, {0.25, -0.25});
  GMinResult r = g_min(cl);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.argmax == 0);

  ChannelLocal cc = constant_channel({0.5, 0.5}, {0.5, -0.5}, 3);
  CHECK(g_min(cc).value == doctest::Approx(1.0));  // normalization axiom
}

TEST_CASE("g_min equals the brute-force sup over input distributions") {
  std::mt19937_64 rng(51);
  for (int it = 0; it < 20; ++it) {
    int in = 2 + static_cast<int>(rng() % 2);
    ChannelLocal cl = random_channel(rng, in, 3);
    double exact = g_min(cl).value;
    double grid = g_min_grid(cl, 200);
    CHECK(grid <= exact + 1e-12);
    CHECK(grid == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("g_min monotonicity under pre- and post-processing") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  for (int it = 0; it < 100; ++it) {
    ChannelLocal cl = random_channel(rng, 3, 3);
    // random input pre-processing: columns of the composite are mixtures
    std::vector<std::vector<double>> psi(3, std::vector<double>(3));
    for (int z = 0; z < 3; ++z) {
      double s = 0.0;
      for (int x = 0; x < 3; ++x) s += psi[z][x] = unif(rng);
      for (auto& v : psi[z]) v /= s;
    }
    Channel pre;
    ChannelTangent pre_t;
    for (int z = 0; z < 3; ++z) {
      std::vector<double> p(3, 0.0), d(3, 0.0);
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
          p[y] += psi[z][x] * cl.channel.columns[x][y];
          d[y] += psi[z][x] * cl.tangent.columns[x][y];
        }
      pre.columns.emplace_back(std::move(p));
      pre_t.columns.emplace_back(std::move(d));
    }
    CHECK(g_min(ChannelLocal(std::move(pre), std::move(pre_t))).value <=
          g_min(cl).value + 1e-9);

    // random output post-processing
    std::vector<double> t(9);
    for (int x = 0; x < 3; ++x) {
      double s = 0.0;
      for (int y = 0; y < 3; ++y) s += t[y + x * 3] = unif(rng);
      for (int y = 0; y < 3; ++y) t[y + x * 3] /= s;
    }
    MarkovKernel post = MarkovKernel::markov(3, 3, std::move(t));
    Channel po;
    ChannelTangent po_t;
    for (int x = 0; x < 3; ++x) {
      LocalData img = pushforward(post, cl.column_local(x));
      po.columns.emplace_back(img.pmf.probs());
      po_t.columns.emplace_back(img.tangent.weights());
    }
    CHECK(g_min(ChannelLocal(std::move(po), std::move(po_t))).value <=
          g_min(cl).value + 1e-9);
  }
}

TEST_CASE("g_min scales linearly along constant input sequences") {
  ChannelLocal cl = two_column({0.5, 0.5}, {0.7, 0.3}, {0.5, -0.5}, {0.1, -0.1});
  GMinResult one = g_min(cl);
  for (int n = 2; n <= 4; ++n) {
    LocalData best = cl.column_local(one.argmax);
    CHECK(fisher_info(iid_extend(best, n)) == doctest::Approx(n * one.value).epsilon(1e-9));
  }
}

TEST_CASE("g_max search on a constant channel returns the column cost") {
  ChannelLocal cc = constant_channel({0.5, 0.5}, {0.3, -0.3}, 2);
  double j = fisher_info(cc.column_local(0));
  GMaxResult r = g_max_search(cc, 2, 4, 0x5EED);
  CHECK(r.feasible);
  CHECK(r.state_residual <= 1e-8);
  CHECK(r.tangent_residual <= 1e-8);
  CHECK(r.value <= j + 1e-6);
  CHECK(r.value >= g_min(cc).value - 1e-6);
}

TEST_CASE("g_max matches g_min on garbling families") {
  // second column is a garbling of the first with the matching tangent, so
  // the argmax column is itself a feasible shared program
  ChannelLocal cl = two_column({0.5, 0.5}, {0.4, 0.6}, {0.5, -0.5}, {0.1, -0.1});
  // post-process column 0 by Lambda0 = [[0.6,0.2],[0.4,0.8]] gives (0.4,0.6)
  // and tangent (0.2,-0.2); use that consistent pair instead
  cl = two_column({0.5, 0.5}, {0.4, 0.6}, {0.5, -0.5}, {0.2, -0.2});
  GMaxResult r = g_max_search(cl, 2, 8, 0x5EED);
  CHECK(r.feasible);
  double lo = g_min(cl).value;
  CHECK(r.value >= lo - 1e-6);
  CHECK(r.value <= 1.1 * lo);
}

TEST_CASE("channel sim plan exponent and certified bound") {
  ChannelLocal cl = two_column({0.5, 0.5}, {0.7, 0.3}, {0.5, -0.5}, {0.1, -0.1});
  double j = g_min(cl).value;
  long n = 1024;
  ChannelSimPlan plan = channel_sim_plan(cl, n, 0.1, 0.05);
  CHECK(plan.program_exponent ==
        doctest::Approx(n * (1.0 + 2 * 0.1) * (j + 0.05)));
  CHECK(plan.certified > 0.0);

  // exponent tends to n J as the slack parameters vanish
  ChannelSimPlan tight = channel_sim_plan(cl, n, 1e-6, 1e-6);
  CHECK(tight.program_exponent == doctest::Approx(n * j).epsilon(1e-4));

  // constant input sequences (the cb-norm extreme points) and a mixed split
  for (int x = 0; x < 2; ++x) {
    std::vector<long> counts(2, 0);
    counts[x] = n;
    ErrorReport r = channel_sim_measured(cl, plan, counts);
    CHECK(r.max_error() <= plan.certified + 1e-9);
  }
  ErrorReport mixed = channel_sim_measured(cl, plan, {700, 324});
  CHECK(mixed.max_error() <= plan.certified + 1e-9);
}

TEST_CASE("single-input channel plan reduces to the column plan") {
  Channel ch;
  ch.columns.emplace_back(std::vector<double>{0.6, 0.4});
  ChannelTangent tan;
  tan.columns.emplace_back(std::vector<double>{0.2, -0.2});
  ChannelLocal cl(std::move(ch), std::move(tan));
  ChannelSimPlan plan = channel_sim_plan(cl, 256, 0.1, 0.01);
  LocalData col = cl.column_local(0);
  SimulationPlan bp = binary_gaussian_plan(col, 1);
  CHECK(plan.column_constants.size() == 1);
  CHECK(plan.column_constants[0] == doctest::Approx(bp.error_state.certified));
}

TEST_CASE("lattice coarsening of a Lipschitz channel") {
  CubeChannel ch;
  ch.dim = 1;
  ch.out_size = 2;
  ch.eval = [](const std::vector<double>& x) {
    double a = 0.25 + 0.5 * x[0];
    return std::make_pair(std::vector<double>{a, 1.0 - a}, std::vector<double>{0.1, -0.1});
  };
  ch.modulus = [](double d) { return d; };  // Lipschitz constant 1 in cb distance
  double prev = std::numeric_limits<double>::infinity();
  for (double t : {0.5, 0.25, 0.125, 0.0625}) {
    LatticeCoarsening lc = lattice_coarsen(ch, t);
    CHECK(lc.cb_distance_bound == doctest::Approx(t / 2.0));
    CHECK(lc.cb_distance_bound < prev);
    prev = lc.cb_distance_bound;
    // sup of the original column information bounds the coarsened metric
    double sup_j = 0.0;
    for (const auto& pt : lc.points) {
      auto [p, d] = ch.eval(pt);
      sup_j = std::max(sup_j,
                       fisher_info(LocalData(FinitePmf(p), TangentVec(d))));
    }
    CHECK(g_min(lc.coarsened).value <= sup_j + 1e-12);
  }

  // constant channel coarsens exactly at any resolution
  CubeChannel cc = ch;
  cc.eval = [](const std::vector<double>&) {
    return std::make_pair(std::vector<double>{0.5, 0.5}, std::vector<double>{0.1, -0.1});
  };
  LatticeCoarsening lc = lattice_coarsen(cc, 0.3);
  for (size_t i = 1; i < lc.coarsened.channel.columns.size(); ++i)
    CHECK(lc.coarsened.channel.columns[i][0] ==
          doctest::Approx(lc.coarsened.channel.columns[0][0]));
}

TEST_CASE("parallelogram witness") {
  ParallelogramWitness w = parallelogram_witness(0x5EED);
  CHECK(w.found);
  CHECK(w.defect > 0.1 * w.scale);
  REQUIRE(w.values.size() == 4);

  // degenerate pair: equal directions have defect zero
  ChannelLocal cl(w.channel, w.delta1);
  double g1 = g_min(cl).value;
  double defect = std::abs(4.0 * g1 + 0.0 - 2.0 * g1 - 2.0 * g1);  // d1 = d2 case
  CHECK(defect == doctest::Approx(0.0));

  // doubling both directions scales the defect by four
  ChannelTangent twice1, twice2;
  for (size_t x = 0; x < w.delta1.columns.size(); ++x) {
    std::vector<double> a(w.delta1.columns[x].size()), b(a.size());
    for (int y = 0; y < w.delta1.columns[x].size(); ++y) {
      a[y] = 2.0 * w.delta1.columns[x][y];
      b[y] = 2.0 * w.delta2.columns[x][y];
    }
    twice1.columns.emplace_back(std::move(a));
    twice2.columns.emplace_back(std::move(b));
  }
  auto gmin_of = [&](const ChannelTangent& d1, const ChannelTangent& d2, double s1, double s2) {
    ChannelTangent t;
    for (size_t x = 0; x < d1.columns.size(); ++x) {
      std::vector<double> col(d1.columns[x].size());
      for (int y = 0; y < d1.columns[x].size(); ++y)
        col[y] = s1 * d1.columns[x][y] + s2 * d2.columns[x][y];
      t.columns.emplace_back(std::move(col));
    }
    return g_min(ChannelLocal(w.channel, t)).value;
  };
  double defect2 = std::abs(gmin_of(twice1, twice2, 1, 1) + gmin_of(twice1, twice2, 1, -1) -
                            2.0 * gmin_of(twice1, twice2, 1, 0) -
                            2.0 * gmin_of(twice1, twice2, 0, 1));
  CHECK(defect2 == doctest::Approx(4.0 * w.defect).epsilon(1e-9));
}

TEST_CASE("continuity counterexample") {
  CHECK_THROWS_AS(continuity_counterexample(1.5, 10), invalid_input);

  // n = 1 agrees with the two-atom hand computation
  double t = 0.4;
  CounterexampleResult r1 = continuity_counterexample(t, 1);
  double jp = 1.0 / t + 1.0 / (1.0 - t);
  double jq = 2.0 / t + 1.0 / (1.0 - t / 2.0);
  CHECK(r1.divergence == doctest::Approx(std::abs(jq - jp)).epsilon(1e-12));
  CHECK(r1.tv_perturbation == doctest::Approx(2.0 * (t / 2.0)));

  // perturbation vanishes while the scaled information gap diverges
  CounterexampleResult a = continuity_counterexample(0.5, 50);
  CounterexampleResult b = continuity_counterexample(0.5, 100);
  CHECK(a.tv_perturbation < 1e-9);
  CHECK(b.tv_perturbation < a.tv_perturbation);
  CHECK(b.divergence > a.divergence);
  CHECK(b.divergence > 100.0);
}
