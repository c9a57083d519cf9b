#include "igc/json_io.hpp"

#include <cmath>

#include "igc/fisher.hpp"
#include "igc/zerobias.hpp"

namespace igc {

namespace {

std::vector<double> number_array(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array())
    throw invalid_input(std::string("missing numeric array field: ") + field);
  std::vector<double> out;
  for (const auto& v : j[field]) {
    if (!v.is_number()) throw invalid_input(std::string("non-numeric entry in ") + field);
    out.push_back(v.get<double>());
  }
  return out;
}

json local_summary(const LocalData& a) {
  return json{{"k", a.size()}, {"probs", a.pmf.probs()}, {"weights", a.tangent.weights()}};
}

}  // namespace

LocalData local_data_from_json(const json& j) {
  std::vector<double> p = number_array(j, "probs");
  std::vector<double> d = number_array(j, "weights");
  if (j.contains("k") && j["k"].get<size_t>() != p.size())
    throw invalid_input("local data: declared k does not match probs length");
  if (p.size() != d.size()) throw invalid_input("local data: probs/weights length mismatch");
  return LocalData(FinitePmf(std::move(p)), TangentVec(std::move(d)));
}

json local_data_to_json(const LocalData& a) { return local_summary(a); }

ChannelLocal channel_from_json(const json& j) {
  if (!j.contains("cols") || !j.contains("tcols"))
    throw invalid_input("channel: need cols and tcols");
  Channel ch;
  ChannelTangent tan;
  for (const auto& col : j["cols"]) ch.columns.emplace_back(col.get<std::vector<double>>());
  for (const auto& col : j["tcols"]) tan.columns.emplace_back(col.get<std::vector<double>>());
  if (j.contains("in") && j["in"].get<int>() != ch.in_size())
    throw invalid_input("channel: declared input size mismatch");
  if (j.contains("out") && ch.in_size() > 0 && j["out"].get<int>() != ch.out_size())
    throw invalid_input("channel: declared output size mismatch");
  return ChannelLocal(std::move(ch), std::move(tan));
}

json channel_to_json(const ChannelLocal& cl) {
  json cols = json::array(), tcols = json::array();
  for (int x = 0; x < cl.in_size(); ++x) {
    cols.push_back(cl.channel.columns[x].probs());
    tcols.push_back(cl.tangent.columns[x].weights());
  }
  return json{{"in", cl.in_size()}, {"out", cl.out_size()}, {"cols", cols}, {"tcols", tcols}};
}

FiniteExperiment experiment_from_json(const json& j) {
  if (!j.contains("laws")) throw invalid_input("experiment: need laws");
  std::vector<FinitePmf> laws;
  for (const auto& l : j["laws"]) laws.emplace_back(l.get<std::vector<double>>());
  FiniteExperiment e(std::move(laws));
  if (j.contains("thetas") && j["thetas"].get<int>() != e.theta_count())
    throw invalid_input("experiment: declared theta count mismatch");
  if (j.contains("support") && j["support"].get<int>() != e.support_size())
    throw invalid_input("experiment: declared support mismatch");
  return e;
}

namespace {

json error_state_to_json(const ErrorState& es) {
  json j{{"certified", es.certified}};
  if (es.exact) j["exact"] = *es.exact;
  if (es.mc_estimate) j["mc_estimate"] = *es.mc_estimate;
  if (es.mc_ci_lo) j["mc_ci_lo"] = *es.mc_ci_lo;
  if (es.mc_ci_hi) j["mc_ci_hi"] = *es.mc_ci_hi;
  if (es.mc_bias) j["mc_bias"] = *es.mc_bias;
  return j;
}

json kernel_to_json(const KernelSpec& k);

json plan_to_json_impl(const SimulationPlan& plan) {
  return json{{"program_exponent", plan.program_exponent},
              {"n", plan.n},
              {"kernel", kernel_to_json(plan.kernel)},
              {"error_state", error_state_to_json(plan.error_state)}};
}

json kernel_to_json(const KernelSpec& k) {
  if (const auto* b = std::get_if<BinaryRoundingKernel>(&k))
    return json{{"rule", "binary_rounding"}, {"p1", b->p1}, {"delta1", b->delta1}};
  if (const auto* f = std::get_if<FiniteChainKernel>(&k)) {
    json stages = json::array();
    for (const auto& s : f->stages)
      stages.push_back(json{{"p1", s.p1},
                            {"delta1", s.delta1},
                            {"stage_j", s.stage_j},
                            {"copies", s.copies},
                            {"trunc_rate", s.trunc_rate},
                            {"leaf_constant", s.leaf_a}});
    return json{{"rule", "finite_chain"},
                {"probs", f->p},
                {"weights", f->delta},
                {"eps", f->eps},
                {"stages", stages}};
  }
  if (const auto* c = std::get_if<ContinuousScoreKernel>(&k))
    return json{{"rule", "continuous_score"}, {"j", c->j}, {"w_functional", c->w_functional}};
  if (const auto* g = std::get_if<GaussianSmoothingKernel>(&k))
    return json{{"rule", "gaussian_smoothing"}, {"eps", g->eps}, {"j", g->j}};
  if (const auto* comp = std::get_if<CompositeKernel>(&k)) {
    json stages = json::array();
    for (const auto& s : comp->stages) stages.push_back(plan_to_json_impl(s));
    return json{{"rule", "composite"}, {"stages", stages}};
  }
  return json{{"rule", "unknown"}};
}

}  // namespace

json plan_to_json(const SimulationPlan& plan) { return plan_to_json_impl(plan); }

json error_report_to_json(const ErrorReport& r) {
  return json{{"tv_state_error", r.tv_state_error},
              {"tv_tangent_error", r.tv_tangent_error},
              {"max_error", r.max_error()}};
}

json sweep_to_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& r : s.rows)
    rows.push_back(json{{"n", r.n},
                        {"exact", r.exact},
                        {"certified", r.certified},
                        {"mc", r.mc},
                        {"ci_lo", r.ci_lo},
                        {"ci_hi", r.ci_hi}});
  return json{{"rows", rows},
              {"fitted_slope", s.fitted_slope},
              {"fit_r2", s.fit_r2},
              {"degenerate", s.degenerate},
              {"excluded_smallest", s.excluded_smallest},
              {"csv", sweep_csv(s)}};
}

namespace {

json op_fisher(const json& req) {
  LocalData a = local_data_from_json(req.at("local"));
  json out{{"j", fisher_info(a)}};
  if (!std::isinf(fisher_info(a))) {
    ScoreReduction sr = score_reduction(a);
    out["score_values"] = sr.score_values;
    out["group_of"] = sr.group_of;
    out["reduced"] = local_summary(sr.reduced);
    json chain = json::array();
    for (const auto& st : fisher_chain(a))
      chain.push_back(json{{"weight", st.weight},
                           {"stage_j", fisher_info(st.binary)},
                           {"probs", st.binary.pmf.probs()},
                           {"weights", st.binary.tangent.weights()}});
    out["chain"] = chain;
  }
  return out;
}

json op_zerobias(const json& req) {
  std::vector<std::pair<double, double>> atoms;
  for (const auto& a : req.at("atoms"))
    atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
  DiscreteLaw1D law(std::move(atoms));
  int n = req.value("n", 1);
  Density1D w = n > 1 ? sum_zero_bias(law, n) : zero_bias(law);
  auto f = [](double x) { return x * x * x; };
  auto fp = [](double x) { return 3.0 * x * x; };
  json samples = json::array();
  double lo = w.lo, hi = w.hi;
  for (int i = 0; i <= 32; ++i) {
    double t = lo + (hi - lo) * i / 32.0;
    samples.push_back(json::array({t, w.pdf(t)}));
  }
  return json{{"mean", law.mean()},
              {"variance", law.variance()},
              {"cov_residual", cov_identity_check(law, f, fp)},
              {"density", samples}};
}

json op_w_variance(const json& req) {
  Density1D d;
  if (req.value("template", "") == std::string("normal")) {
    d = Density1D{[](double t) { return normal_pdf(t); },
                  -std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), GridSpec{}};
  } else {
    LocalData a = local_data_from_json(req.at("local"));
    d = smoothed_score_density(a, req.value("eps", 0.1));
  }
  Moments m = density_moments(d);
  double j = m.variance + m.mean * m.mean;
  WVarianceResult w = w_variance_functional(d, j);
  return json{{"finite", w.finite},
              {"value", w.value},
              {"tail_passes", w.tail.passes},
              {"tail_template", w.tail.tail_template},
              {"alpha_left", w.tail.alpha_left},
              {"alpha_right", w.tail.alpha_right}};
}

json op_simulate(const json& req) {
  std::string kind = req.value("kind", "binary");
  long n = req.value("n", 256L);
  double eps = req.value("eps", 0.05);
  SimulationPlan plan;
  if (kind == "binary") {
    plan = binary_gaussian_plan(local_data_from_json(req.at("local")), n);
  } else if (kind == "finite") {
    plan = finite_plan(local_data_from_json(req.at("local")), n, eps);
  } else if (kind == "gaussian_iid") {
    plan = gaussian_by_iid_plan(local_data_from_json(req.at("local")), n, eps);
  } else if (kind == "continuous_normal") {
    Density1D d{[](double t) { return normal_pdf(t); },
                -std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity(), GridSpec{}};
    plan = continuous_plan(d, n);
  } else {
    throw invalid_input("simulate: unknown kind " + kind);
  }
  json out{{"plan", plan_to_json(plan)}};
  std::string mode = req.value("mode", "exact");
  if (mode == "exact") {
    if (kind == "binary" || kind == "finite" || kind == "continuous_normal")
      out["error"] = error_report_to_json(evaluate_plan_error_exact(plan));
  } else if (mode == "mc") {
    McOptions o;
    o.seed = req.value("seed", static_cast<std::uint64_t>(0x5EED));
    o.samples = req.value("samples", 200000L);
    ErrorState es;
    ErrorReport r = evaluate_plan_error_mc(plan, o, &es);
    out["error"] = error_report_to_json(r);
    out["plan"]["error_state"]["mc_estimate"] = es.mc_estimate.value_or(0.0);
    out["plan"]["error_state"]["mc_ci_lo"] = es.mc_ci_lo.value_or(0.0);
    out["plan"]["error_state"]["mc_ci_hi"] = es.mc_ci_hi.value_or(0.0);
  } else {
    throw invalid_input("simulate: unknown mode " + mode);
  }
  return out;
}

json op_channel(const json& req) {
  std::string action = req.value("action", "gmin");
  if (action == "gmin") {
    ChannelLocal cl = channel_from_json(req.at("channel"));
    GMinResult r = g_min(cl);
    return json{{"value", r.value}, {"argmax", r.argmax}};
  }
  if (action == "gmax") {
    ChannelLocal cl = channel_from_json(req.at("channel"));
    GMaxResult r = g_max_search(cl, req.value("support", cl.out_size()),
                                req.value("restarts", 8),
                                req.value("seed", static_cast<std::uint64_t>(0x5EED)));
    return json{{"value", r.value},
                {"feasible", r.feasible},
                {"state_residual", r.state_residual},
                {"tangent_residual", r.tangent_residual},
                {"program_q", r.program_q},
                {"program_delta", r.program_delta}};
  }
  if (action == "sim") {
    ChannelLocal cl = channel_from_json(req.at("channel"));
    long n = req.value("n", 256L);
    ChannelSimPlan plan =
        channel_sim_plan(cl, n, req.value("eps", 0.1), req.value("c", 0.05));
    json measured = json::array();
    // constant input sequences are the cb-norm extreme points
    for (int x = 0; x < cl.in_size(); ++x) {
      std::vector<long> counts(cl.in_size(), 0);
      counts[x] = n;
      ErrorReport r = channel_sim_measured(cl, plan, counts);
      measured.push_back(json{{"letter", x}, {"error", error_report_to_json(r)}});
    }
    return json{{"program_exponent", plan.program_exponent},
                {"g_min", plan.g_min_value},
                {"certified", plan.certified},
                {"column_constants", plan.column_constants},
                {"measured_constant_profiles", measured}};
  }
  if (action == "counterexample") {
    CounterexampleResult r =
        continuity_counterexample(req.value("t", 0.5), req.value("n", 50L));
    return json{{"tv_perturbation", r.tv_perturbation},
                {"divergence", r.divergence},
                {"underflow_tail", r.underflow_tail}};
  }
  if (action == "witness") {
    ParallelogramWitness w =
        parallelogram_witness(req.value("seed", static_cast<std::uint64_t>(0x5EED)));
    json cols = json::array(), d1 = json::array(), d2 = json::array();
    for (size_t x = 0; x < w.channel.columns.size(); ++x) {
      cols.push_back(w.channel.columns[x].probs());
      d1.push_back(w.delta1.columns[x].weights());
      d2.push_back(w.delta2.columns[x].weights());
    }
    return json{{"found", w.found},       {"defect", w.defect}, {"scale", w.scale},
                {"values", w.values},     {"cols", cols},       {"delta1", d1},
                {"delta2", d2}};
  }
  throw invalid_input("channel: unknown action " + action);
}

json op_deficiency(const json& req) {
  std::string action = req.value("action", "distance");
  if (action == "distance") {
    FiniteExperiment e = experiment_from_json(req.at("e"));
    FiniteExperiment f = experiment_from_json(req.at("f"));
    RandomizationResult r = randomization_distance(e, f);
    return json{{"value", r.value}, {"kernel", r.kernel.table()}};
  }
  if (action == "local") {
    LocalData e = local_data_from_json(req.at("e_local"));
    LocalData f = local_data_from_json(req.at("f_local"));
    LocalDeficiencyResult r = local_deficiency(e, f, req.value("relax", 0.0));
    if (!r.feasible) throw numeric_error("local deficiency: no kernel carries q onto p");
    return json{{"feasible", r.feasible},
                {"tangent_error", r.tangent_error},
                {"kernel", r.kernel.table()}};
  }
  throw invalid_input("deficiency: unknown action " + action);
}

json op_sweep(const json& req) {
  std::string family = req.value("family", "binary");
  LocalData a = local_data_from_json(req.at("local"));
  std::vector<long> grid;
  for (const auto& v : req.at("n_grid")) grid.push_back(v.get<long>());
  double eps = req.value("eps", 0.05);
  std::function<SimulationPlan(long)> fam;
  if (family == "binary") {
    fam = [a](long n) { return binary_gaussian_plan(a, n); };
  } else if (family == "finite") {
    fam = [a, eps](long n) { return finite_plan(a, n, eps); };
  } else {
    throw invalid_input("sweep: unknown family " + family);
  }
  std::string mode = req.value("mode", "exact");
  SweepMode sm = mode == "exact"  ? SweepMode::kExact
                 : mode == "mc"   ? SweepMode::kMonteCarlo
                 : mode == "both" ? SweepMode::kBoth
                                  : throw invalid_input("sweep: unknown mode " + mode);
  McOptions mc;
  mc.seed = req.value("seed", static_cast<std::uint64_t>(0x5EED));
  mc.samples = req.value("samples", 100000L);
  return sweep_to_json(convergence_sweep(fam, grid, sm, mc));
}

}  // namespace

std::string run_request(const std::string& request_json, int* code) {
  json resp;
  int rc = 0;
  try {
    json req = json::parse(request_json);
    std::string op = req.value("op", "");
    json result;
    if (op == "fisher")
      result = op_fisher(req);
    else if (op == "zerobias")
      result = op_zerobias(req);
    else if (op == "w_variance")
      result = op_w_variance(req);
    else if (op == "simulate")
      result = op_simulate(req);
    else if (op == "channel")
      result = op_channel(req);
    else if (op == "deficiency")
      result = op_deficiency(req);
    else if (op == "sweep")
      result = op_sweep(req);
    else
      throw invalid_input("unknown op: " + op);
    resp = json{{"ok", true}, {"result", result}};
  } catch (const json::exception& e) {
    rc = 1;
    resp = json{{"ok", false}, {"error", {{"code", 1}, {"message", e.what()}}}};
  } catch (const invalid_input& e) {
    rc = 1;
    resp = json{{"ok", false}, {"error", {{"code", 1}, {"message", e.what()}}}};
  } catch (const numeric_error& e) {
    rc = 2;
    resp = json{{"ok", false}, {"error", {{"code", 2}, {"message", e.what()}}}};
  } catch (const std::exception& e) {
    rc = 2;
    resp = json{{"ok", false}, {"error", {{"code", 2}, {"message", e.what()}}}};
  }
  if (code) *code = rc;
  return resp.dump(2);
}

}  // namespace igc
