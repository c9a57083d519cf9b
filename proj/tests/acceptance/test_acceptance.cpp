// Acceptance suite: one pass/fail line per criterion, exit code 0 only if
// every criterion holds. Criterion 11 drives the command-line binary, whose
// path is argv[1] (or the IGC_CLI environment variable).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "igc/channels.hpp"
#include "igc/deficiency.hpp"
#include "igc/fisher.hpp"
#include "igc/harness.hpp"
#include "igc/measures.hpp"
#include "igc/tangent_sim.hpp"
#include "igc/zerobias.hpp"

using namespace igc;

namespace {

int g_failures = 0;

void run_criterion(int num, const std::string& what, double time_limit_s,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
    ok = false;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > time_limit_s) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  std::printf("%s criterion %d: %s (%.2f s%s%s)\n", ok ? "PASS" : "FAIL", num, what.c_str(),
              secs, detail.empty() ? "" : " - ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

LocalData random_local(std::mt19937_64& rng, int k, double margin = 0.05) {
  std::uniform_real_distribution<double> unif(margin, 1.0);
  std::vector<double> p(k), d(k);
  double ps = 0.0, ds = 0.0;
  for (int i = 0; i < k; ++i) ps += p[i] = unif(rng);
  for (auto& v : p) v /= ps;
  for (int i = 0; i < k; ++i) ds += d[i] = unif(rng) - 0.5;
  for (auto& v : d) v -= ds / k;
  return LocalData(FinitePmf(std::move(p)), TangentVec(std::move(d)));
}

MarkovKernel random_markov(std::mt19937_64& rng, int in, int out) {
  std::uniform_real_distribution<double> unif(0.02, 1.0);
  std::vector<double> t(static_cast<size_t>(in) * out);
  for (int x = 0; x < in; ++x) {
    double s = 0.0;
    for (int y = 0; y < out; ++y) s += t[y + x * out] = unif(rng);
    for (int y = 0; y < out; ++y) t[y + x * out] /= s;
  }
  return MarkovKernel::markov(in, out, std::move(t));
}

FinitePmf random_pmf(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (auto& v : p) s += v = unif(rng);
  for (auto& v : p) v /= s;
  return FinitePmf(std::move(p));
}

// centered two-component normal mixture and the density of a weighted sum
struct Mixture {
  double w, m1, s1, m2, s2;
  double pdf(double t) const {
    return w * normal_pdf((t - m1) / s1) / s1 + (1.0 - w) * normal_pdf((t - m2) / s2) / s2;
  }
};

// centered and standardized to unit variance, matching the hypotheses under
// which the sum inequality is applied
Mixture random_mixture(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Mixture m;
  m.w = 0.25 + 0.5 * unif(rng);
  m.m1 = 0.2 + 0.8 * unif(rng);
  m.m2 = -m.w * m.m1 / (1.0 - m.w);
  m.s1 = 0.6 + 0.5 * unif(rng);
  m.s2 = 0.6 + 0.5 * unif(rng);
  double var = m.w * (m.m1 * m.m1 + m.s1 * m.s1) +
               (1.0 - m.w) * (m.m2 * m.m2 + m.s2 * m.s2);
  double scale = std::sqrt(var);
  m.m1 /= scale;
  m.m2 /= scale;
  m.s1 /= scale;
  m.s2 /= scale;
  return m;
}

Density1D mixture_density(const Mixture& m) {
  GridSpec g;
  g.nodes = 1 << 12;
  return Density1D{[m](double t) { return m.pdf(t); },
                   -std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity(), g};
}

Density1D sum_density(const Mixture& x1, const Mixture& x2, double a1, double a2) {
  GridSpec g;
  g.nodes = 1 << 12;
  auto pdf = [x1, x2, a1, a2](double t) {
    double acc = 0.0;
    const double w1[2] = {x1.w, 1.0 - x1.w}, mu1[2] = {x1.m1, x1.m2}, s1[2] = {x1.s1, x1.s2};
    const double w2[2] = {x2.w, 1.0 - x2.w}, mu2[2] = {x2.m1, x2.m2}, s2[2] = {x2.s1, x2.s2};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double mu = a1 * mu1[i] + a2 * mu2[j];
        double sd = std::sqrt(a1 * a1 * s1[i] * s1[i] + a2 * a2 * s2[j] * s2[j]);
        acc += w1[i] * w2[j] * normal_pdf((t - mu) / sd) / sd;
      }
    return acc;
  };
  return Density1D{pdf, -std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity(), g};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  if (cli.empty()) {
    const char* env = std::getenv("IGC_CLI");
    if (env) cli = env;
  }

  run_criterion(1, "information never increases under 10,000 random Markov maps", 10.0,
                [](std::string& detail) {
                  std::mt19937_64 rng(101);
                  for (int it = 0; it < 10000; ++it) {
                    int k = 2 + static_cast<int>(rng() % 5);
                    int m = 2 + static_cast<int>(rng() % 5);
                    LocalData a = random_local(rng, k);
                    MarkovKernel psi = random_markov(rng, k, m);
                    double before = fisher_info(a);
                    double after = fisher_info(pushforward(psi, a));
                    if (after > before + 1e-9) {
                      detail = "monotonicity violated at instance " + std::to_string(it);
                      return false;
                    }
                  }
                  return true;
                });

  run_criterion(2, "IID additivity and lossless score reduction on 1,000 instances", 10.0,
                [](std::string& detail) {
                  std::mt19937_64 rng(103);
                  for (int it = 0; it < 1000; ++it) {
                    int k = 2 + static_cast<int>(rng() % 3);
                    LocalData a = random_local(rng, k);
                    double j = fisher_info(a);
                    int n = 1 + static_cast<int>(rng() % 6);
                    if (std::pow(static_cast<double>(k), n) <= 1e6) {
                      double jn = fisher_info(iid_extend(a, n));
                      if (std::abs(jn - n * j) > 1e-9 * n) {
                        detail = "additivity failed at instance " + std::to_string(it);
                        return false;
                      }
                    }
                    ScoreReduction sr = score_reduction(a);
                    if (std::abs(fisher_info(sr.reduced) - j) > 1e-9) {
                      detail = "reduction changed the information";
                      return false;
                    }
                    LocalData back = pushforward(sr.reconstruction, sr.reduced);
                    for (int i = 0; i < a.size(); ++i)
                      if (std::abs(back.pmf[i] - a.pmf[i]) > 1e-9 ||
                          std::abs(back.tangent[i] - a.tangent[i]) > 1e-9) {
                        detail = "reconstruction round trip failed";
                        return false;
                      }
                  }
                  return true;
                });

  run_criterion(3, "Gaussian shift family has information 1/variance", 5.0,
                [](std::string& detail) {
                  for (double var : {0.25, 1.0, 4.0}) {
                    double got = gaussian_fisher(GaussianLocal(0.0, var, 1.0));
                    if (std::abs(got - 1.0 / var) > 1e-15) {
                      detail = "variance " + std::to_string(var);
                      return false;
                    }
                  }
                  return true;
                });

  run_criterion(4, "binomial-vs-Gaussian total variation under 1/(sqrt(n) sigma)", 30.0,
                [](std::string& detail) {
                  for (double eta : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
                    for (long n : {16L, 64L, 256L, 1024L, 4096L}) {
                      double tv = exact_binomial_gaussian_tv(eta, n);
                      double bound = 1.0 / (std::sqrt(static_cast<double>(n)) *
                                            std::sqrt(eta * (1.0 - eta)));
                      if (!(tv >= 0.0 && tv <= bound)) {
                        detail = "eta=" + std::to_string(eta) + " n=" + std::to_string(n);
                        return false;
                      }
                    }
                  }
                  return true;
                });

  run_criterion(
      5, "zero-bias identities, uniform transform of two-point laws, sum inequality", 20.0,
      [](std::string& detail) {
        std::vector<DiscreteLaw1D> laws{
            DiscreteLaw1D({{-0.3, 0.7}, {0.7, 0.3}}),
            DiscreteLaw1D({{-0.5, 0.5}, {0.5, 0.5}}),
            DiscreteLaw1D({{-0.8, 0.2}, {0.2, 0.8}}),
            DiscreteLaw1D({{-1.0, 0.25}, {0.0, 0.5}, {1.0, 0.25}}),
            DiscreteLaw1D({{-1.2, 0.3}, {-0.2, 0.3}, {0.3, 0.2}, {1.8, 0.2}})};
        using Fn = std::function<double(double)>;
        std::vector<std::pair<Fn, Fn>> fns;
        fns.push_back({[](double) { return 1.0; }, [](double) { return 0.0; }});
        for (int pw = 1; pw <= 5; ++pw)
          fns.push_back({[pw](double t) { return std::pow(t, pw); },
                         [pw](double t) { return pw * std::pow(t, pw - 1); }});
        for (auto& law : laws)
          for (auto& [f, fp] : fns)
            if (cov_identity_check(law, f, fp) >= 1e-7) {
              detail = "covariance identity residual too large";
              return false;
            }
        for (double eta : {0.2, 0.5, 0.7}) {
          DiscreteLaw1D b({{-eta, 1.0 - eta}, {1.0 - eta, eta}});
          Density1D w = zero_bias(b);
          for (int i = 1; i < 128; ++i) {
            double t = -eta + static_cast<double>(i) / 128.0;
            if (std::abs(w.pdf(t) - 1.0) >= 1e-8) {
              detail = "transform of the two-point law is not uniform";
              return false;
            }
          }
        }
        std::mt19937_64 rng(107);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        int checked = 0;
        for (int it = 0; it < 100; ++it) {
          Mixture x1 = random_mixture(rng), x2 = random_mixture(rng);
          double phi = 0.3 + unif(rng);
          double a1 = std::cos(phi), a2 = std::sin(phi);
          RatioVariance r1 = w_over_p_variance(mixture_density(x1));
          RatioVariance r2 = w_over_p_variance(mixture_density(x2));
          RatioVariance rs = w_over_p_variance(sum_density(x1, x2, a1, a2));
          if (!(r1.reliable && r2.reliable && rs.reliable)) continue;
          ++checked;
          if (rs.value > a1 * a1 * a1 * a1 * r1.value + a2 * a2 * a2 * a2 * r2.value + 1e-6) {
            detail = "sum inequality violated at instance " + std::to_string(it);
            return false;
          }
        }
        if (checked < 90) {
          detail = "only " + std::to_string(checked) + " reliable instances";
          return false;
        }
        return true;
      });

  run_criterion(6, "chain decomposition reproduces the information on 1,000 instances", 5.0,
                [](std::string& detail) {
                  std::mt19937_64 rng(109);
                  for (int it = 0; it < 1000; ++it) {
                    int k = 2 + static_cast<int>(rng() % 7);
                    LocalData a = random_local(rng, k);
                    double sum = 0.0;
                    for (const auto& s : fisher_chain(a)) sum += s.weight * fisher_info(s.binary);
                    if (std::abs(sum - fisher_info(a)) > 1e-10) {
                      detail = "chain mismatch at instance " + std::to_string(it);
                      return false;
                    }
                  }
                  return true;
                });

  run_criterion(
      7, "plan errors stay certified and decay at the fitted rates", 60.0,
      [](std::string& detail) {
        std::vector<long> grid{16, 64, 256, 1024, 4096};
        LocalData bin(FinitePmf({0.7, 0.3}), TangentVec({-0.3, 0.3}));
        std::vector<double> lx, ly;
        for (long n : grid) {
          SimulationPlan plan = binary_gaussian_plan(bin, n);
          ErrorReport r = evaluate_plan_error_exact(plan);
          if (r.max_error() > plan.error_state.certified + 1e-9) {
            detail = "binary plan exceeded its certificate at n=" + std::to_string(n);
            return false;
          }
          lx.push_back(std::log(static_cast<double>(n)));
          ly.push_back(std::log(r.tv_state_error));
        }
        LineFit fb = fit_line(lx, ly);
        if (fb.slope > -0.45) {
          detail = "binary slope " + std::to_string(fb.slope);
          return false;
        }
        LocalData tri(FinitePmf({1.0 / 3, 1.0 / 3, 1.0 / 3}), TangentVec({0.3, 0.0, -0.3}));
        lx.clear();
        ly.clear();
        for (long n : grid) {
          SimulationPlan plan = finite_plan(tri, n, 0.05);
          ErrorReport r = evaluate_plan_error_exact(plan);
          if (r.max_error() > plan.error_state.certified + 1e-9) {
            detail = "composite plan exceeded its certificate at n=" + std::to_string(n);
            return false;
          }
          lx.push_back(std::log(static_cast<double>(n)));
          ly.push_back(std::log(r.tv_state_error));
        }
        LineFit ff = fit_line(lx, ly);
        if (ff.slope > -0.2) {
          detail = "composite slope " + std::to_string(ff.slope);
          return false;
        }
        return true;
      });

  run_criterion(
      8, "channel metrics: grid cross-check, upper search, parallelogram defect", 60.0,
      [](std::string& detail) {
        std::mt19937_64 rng(113);
        std::uniform_real_distribution<double> unif(0.05, 1.0);
        for (int it = 0; it < 20; ++it) {
          // column 0 is a random source; the others are garblings of it, so a
          // shared exact-simulation program exists
          int in = 2 + static_cast<int>(rng() % 2);
          LocalData base = random_local(rng, 3);
          Channel ch;
          ChannelTangent tan;
          ch.columns.push_back(base.pmf);
          tan.columns.push_back(base.tangent);
          for (int x = 1; x < in; ++x) {
            LocalData img = pushforward(random_markov(rng, 3, 3), base);
            ch.columns.push_back(img.pmf);
            tan.columns.push_back(img.tangent);
          }
          ChannelLocal cl(std::move(ch), std::move(tan));
          double exact = g_min(cl).value;
          double grid = g_min_grid(cl, 200);
          if (std::abs(grid - exact) > 1e-6 * std::max(1.0, exact)) {
            detail = "grid sup disagrees at instance " + std::to_string(it);
            return false;
          }
          GMaxResult up = g_max_search(cl, 3, 4, 0x5EED + it);
          if (!up.feasible || up.value < exact - 1e-6) {
            detail = "upper search fell below the lower metric";
            return false;
          }
        }
        ParallelogramWitness w = parallelogram_witness(0x5EED);
        if (!(w.found && w.defect > 0.1 * w.scale)) {
          detail = "no parallelogram defect found";
          return false;
        }
        return true;
      });

  run_criterion(9, "vanishing perturbation with diverging per-copy information", 1.0,
                [](std::string& detail) {
                  double prev = 0.0;
                  for (long n = 5; n <= 300; ++n) {
                    CounterexampleResult r = continuity_counterexample(0.5, n);
                    if (r.divergence <= prev) {
                      detail = "sequence not increasing at n=" + std::to_string(n);
                      return false;
                    }
                    prev = r.divergence;
                  }
                  // regression baseline: the scaled gap exceeds 1e3 at n=251
                  CounterexampleResult at = continuity_counterexample(0.5, 251);
                  if (!(at.divergence > 1e3)) {
                    detail = "threshold not reached at the recorded baseline";
                    return false;
                  }
                  if (std::abs(at.divergence - 1004.0) > 1e-6) {
                    detail = "baseline value drifted";
                    return false;
                  }
                  if (!(at.tv_perturbation < 1e-9)) {
                    detail = "perturbation not negligible at the crossing";
                    return false;
                  }
                  return true;
                });

  run_criterion(
      10, "randomization distance: garbled pairs at zero, grid oracle agreement", 30.0,
      [](std::string& detail) {
        std::mt19937_64 rng(127);
        for (int it = 0; it < 100; ++it) {
          int mf = 2 + static_cast<int>(rng() % 3);
          int me = 2 + static_cast<int>(rng() % 3);
          MarkovKernel garble = random_markov(rng, mf, me);
          std::vector<FinitePmf> fl, el;
          for (int th = 0; th < 2; ++th) {
            FinitePmf q = random_pmf(rng, mf);
            el.emplace_back(garble.apply(q.probs()));
            fl.emplace_back(std::move(q));
          }
          double v = randomization_distance(FiniteExperiment(el), FiniteExperiment(fl)).value;
          if (v > 1e-8) {
            detail = "garbled pair at positive distance, instance " + std::to_string(it);
            return false;
          }
        }
        for (int it = 0; it < 10; ++it) {
          FiniteExperiment e({random_pmf(rng, 2), random_pmf(rng, 2)});
          FiniteExperiment f({random_pmf(rng, 2), random_pmf(rng, 2)});
          double lp = randomization_distance(e, f).value;
          double grid = randomization_distance_grid(e, f, 400);
          if (std::abs(lp - grid) > 1e-4) {
            detail = "grid oracle disagreement at instance " + std::to_string(it);
            return false;
          }
        }
        return true;
      });

  run_criterion(
      11, "command-line runs with a fixed seed are byte-identical", 60.0,
      [&cli](std::string& detail) {
        if (cli.empty()) {
          detail = "path to the command-line binary not provided";
          return false;
        }
        {
          std::ofstream in("acc11_local.json");
          in << "{\"k\":2,\"probs\":[0.7,0.3],\"weights\":[-0.3,0.3]}";
        }
        struct Run {
          std::string args, out1, out2;
        };
        std::vector<Run> runs{
            {"simulate --kind binary --n 256 --mode mc --seed 7 --input acc11_local.json",
             "acc11_sim1.json", "acc11_sim2.json"},
            {"sweep --family binary --mode both --seed 9 --n-grid 16,64,256,1024 "
             "--input acc11_local.json",
             "acc11_sweep1.csv", "acc11_sweep2.csv"},
            {"channel --action witness --seed 11", "acc11_wit1.json", "acc11_wit2.json"}};
        for (const auto& r : runs) {
          for (const std::string& out : {r.out1, r.out2}) {
            std::string cmd =
                "\"" + cli + "\" " + r.args + " --output " + out + " > /dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
              detail = "command failed: " + r.args;
              return false;
            }
          }
          std::string a = read_file(r.out1), b = read_file(r.out2);
          if (a.empty() || a != b) {
            detail = "outputs differ for: " + r.args;
            return false;
          }
        }
        return true;
      });

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
