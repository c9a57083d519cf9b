#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "igc/igc.h"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--input", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// temp-file-and-rename so a failed run never leaves partial output
void write_atomic(const std::string& path, const std::string& body) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << body;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move output into place: " + path);
}

struct Common {
  std::string input, output;
  std::uint64_t seed = 0x5EED;
  int threads = 1;
  std::string n_grid;
  double eps = 0.05;
  double c = 0.05;
  std::string mode = "exact";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--input", c.input, "input JSON file");
  cmd->add_option("--output", c.output, "output file (JSON, or CSV for sweeps)");
  cmd->add_option("--seed", c.seed, "random seed")->default_val(0x5EED);
  cmd->add_option("--threads", c.threads, "worker cap (1 = serial)")->default_val(1);
  cmd->add_option("--n-grid", c.n_grid, "comma separated n values");
  cmd->add_option("--eps", c.eps, "truncation / smoothing parameter");
  cmd->add_option("--c", c.c, "exponent slack for channel plans");
  cmd->add_option("--mode", c.mode, "exact|mc|both");
}

json parse_grid(const std::string& s) {
  json g = json::array();
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) g.push_back(std::stol(tok));
  }
  return g;
}

json input_json(const Common& c) {
  if (c.input.empty()) return json::object();
  return json::parse(read_file(c.input));
}

int dispatch(const json& request, const Common& common,
             const std::vector<std::string>& summary_keys) {
  igc_result* res = igc_run(request.dump().c_str());
  int code = igc_result_code(res);
  std::string body = igc_result_json(res);
  igc_result_free(res);
  json resp = json::parse(body);
  if (code != 0) {
    std::fprintf(stderr, "error: %s\n",
                 resp["error"]["message"].get<std::string>().c_str());
    return code;
  }
  const json& result = resp["result"];
  for (const auto& key : summary_keys) {
    if (result.contains(key)) std::printf("%s = %s\n", key.c_str(), result[key].dump().c_str());
  }
  if (!common.output.empty()) {
    bool csv = common.output.size() > 4 &&
               common.output.compare(common.output.size() - 4, 4, ".csv") == 0;
    if (csv && result.contains("csv"))
      write_atomic(common.output, result["csv"].get<std::string>());
    else
      write_atomic(common.output, result.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"information-geometry toolkit: Fisher metrics, zero-bias "
               "transforms, tangent-simulation plans, channel metrics, and "
               "experiment deficiency"};
  app.require_subcommand(1);

  Common common;
  std::string kind = "binary", action = "gmin", family = "binary";
  long n = 256;
  double t = 0.5;
  int support = 0, restarts = 8;

  auto* fisher = app.add_subcommand("fisher", "Fisher information, score reduction, chain");
  add_common(fisher, common);

  auto* zb = app.add_subcommand("zerobias", "zero-bias transform and identities");
  add_common(zb, common);
  long zb_n = 1;
  zb->add_option("--n", zb_n, "IID sum length for the transform");

  auto* sim = app.add_subcommand("simulate", "tangent-simulation plans and errors");
  add_common(sim, common);
  sim->add_option("--kind", kind, "binary|finite|continuous_normal|gaussian_iid");
  sim->add_option("--n", n, "number of copies");

  auto* chan = app.add_subcommand("channel", "channel metrics and constructions");
  add_common(chan, common);
  chan->add_option("--action", action, "gmin|gmax|sim|counterexample|witness");
  chan->add_option("--n", n, "number of copies");
  chan->add_option("--t", t, "perturbation parameter of the counterexample");
  chan->add_option("--support", support, "program support size for gmax");
  chan->add_option("--restarts", restarts, "search restarts for gmax");

  auto* def = app.add_subcommand("deficiency", "experiment comparison");
  add_common(def, common);
  std::string def_action = "distance";
  def->add_option("--action", def_action, "distance|local");
  double relax = 0.0;
  def->add_option("--relax", relax, "state-error tolerance for local mode");

  auto* sweep = app.add_subcommand("sweep", "convergence experiments");
  add_common(sweep, common);
  sweep->add_option("--family", family, "binary|finite");

  CLI11_PARSE(app, argc, argv);
  if (common.threads < 1) {
    std::fprintf(stderr, "error: --threads must be >= 1\n");
    return 1;
  }

  try {
    json in = input_json(common);
    if (fisher->parsed()) {
      json req{{"op", "fisher"}, {"local", in}};
      return dispatch(req, common, {"j"});
    }
    if (zb->parsed()) {
      json req{{"op", "zerobias"}, {"atoms", in.value("atoms", json::array())}, {"n", zb_n}};
      return dispatch(req, common, {"mean", "variance", "cov_residual"});
    }
    if (sim->parsed()) {
      json req{{"op", "simulate"}, {"kind", kind},          {"n", n},
               {"eps", common.eps}, {"mode", common.mode},  {"seed", common.seed}};
      if (kind != "continuous_normal") req["local"] = in;
      return dispatch(req, common, {"error"});
    }
    if (chan->parsed()) {
      json req{{"op", "channel"}, {"action", action}, {"n", n},
               {"eps", common.eps}, {"c", common.c},  {"seed", common.seed},
               {"t", t},            {"restarts", restarts}};
      if (support > 0) req["support"] = support;
      if (action == "gmin" || action == "gmax" || action == "sim") req["channel"] = in;
      return dispatch(req, common,
                      {"value", "argmax", "certified", "divergence", "tv_perturbation",
                       "defect", "scale", "found"});
    }
    if (def->parsed()) {
      json req{{"op", "deficiency"}, {"action", def_action}, {"relax", relax}};
      if (def_action == "distance") {
        req["e"] = in.at("e");
        req["f"] = in.at("f");
      } else {
        req["e_local"] = in.at("e_local");
        req["f_local"] = in.at("f_local");
      }
      return dispatch(req, common, {"value", "tangent_error", "feasible"});
    }
    if (sweep->parsed()) {
      json req{{"op", "sweep"},    {"family", family},    {"local", in},
               {"eps", common.eps}, {"mode", common.mode}, {"seed", common.seed},
               {"n_grid", parse_grid(common.n_grid)}};
      return dispatch(req, common, {"fitted_slope", "fit_r2", "degenerate"});
    }
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
