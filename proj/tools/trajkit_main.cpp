// trajkit — synthesize, analyze, cluster, classify, augment and evaluate
// 2D trajectory datasets from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 data/runtime error. Every
// subcommand echoes its resolved configuration as JSON (stdout, and under
// "resolved_config" inside JSON reports) so runs can be reproduced from
// their artifacts alone.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trajkit/analysis.hpp"
#include "trajkit/baselines.hpp"
#include "trajkit/cluster.hpp"
#include "trajkit/generators.hpp"
#include "trajkit/hmm.hpp"
#include "trajkit/io.hpp"
#include "trajkit/metrics.hpp"
#include "trajkit/neural.hpp"
#include "trajkit/rl.hpp"
#include "trajkit/rng.hpp"
#include "trajkit/synth.hpp"

namespace {

using nlohmann::json;
using namespace trajkit;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

/// Inserts resolved_config into a JSON report string and re-serializes.
std::string with_config(const std::string& report_json, const json& cfg) {
  json j = json::parse(report_json);
  j["resolved_config"] = cfg;
  return j.dump();
}

void echo_config(const json& cfg) { std::cout << cfg.dump() << "\n"; }

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  return out;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string kind;
  std::string spec_path;
  int count = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string state_log;
};

void run_generate(const GenerateArgs& a) {
  const std::string spec_text = a.spec_path.empty() ? "{}" : slurp(a.spec_path);
  const json spec_json = json::parse(spec_text);
  SeededRng rng(a.seed);

  Dataset d;
  if (a.kind == "newton" || a.kind == "noisy") {
    NewtonSpec spec = newton_spec_from_json(spec_text);
    const double sigma = spec_json.value("sigma", 0.0);
    if (a.kind == "noisy" && sigma <= 0.0)
      throw std::invalid_argument("noisy generation needs spec 'sigma' > 0");
    Vec2 spread{0.0, 0.0};
    if (spec_json.contains("x0_spread"))
      spread = {spec_json["x0_spread"][0].get<double>(),
                spec_json["x0_spread"][1].get<double>()};
    std::vector<Trajectory> trajs;
    trajs.reserve(a.count);
    for (int i = 0; i < a.count; ++i) {
      SeededRng r = rng.derive(i);
      NewtonSpec s = spec;
      s.x0 = {s.x0.x + r.uniform(0.0, spread.x),
              s.x0.y + r.uniform(0.0, spread.y)};
      Trajectory t = gen_newton(s, r);
      if (a.kind == "noisy") t = add_noise(t, {sigma}, r);
      trajs.push_back(std::move(t));
    }
    d = Dataset::from_trajectories(std::move(trajs), a.kind);
  } else if (a.kind == "curve") {
    CurveSpec spec = curve_spec_from_json(spec_text);
    const double phase_spread = spec_json.value("phase_spread", 0.0);
    const double center_spread = spec_json.value("center_spread", 0.0);
    std::vector<Trajectory> trajs;
    trajs.reserve(a.count);
    for (int i = 0; i < a.count; ++i) {
      SeededRng r = rng.derive(i);
      CurveSpec s = spec;
      s.phase += r.uniform(0.0, phase_spread);
      s.center += Vec2{r.uniform(0.0, center_spread),
                       r.uniform(0.0, center_spread)};
      trajs.push_back(gen_curve(s, r));
    }
    d = Dataset::from_trajectories(std::move(trajs), "curve");
  } else if (a.kind == "hmm") {
    const SceneConfig scene = scene_config_from_json(spec_text);
    json logs = json::array();
    for (int i = 0; i < a.count; ++i) {
      SeededRng r = rng.derive(i);
      SimResult sim = simulate_scene(scene, r);
      sim.scene.id = i;
      d.scenes.push_back(std::move(sim.scene));
      if (!a.state_log.empty())
        logs.push_back(json::parse(state_log_json(sim)));
    }
    d.label = "hmm";
    if (!a.state_log.empty()) spit(a.state_log, logs.dump());
  } else {
    throw CLI::ValidationError("--kind must be newton, noisy, curve or hmm");
  }

  write_dataset(d, a.out);
  echo_config(json{{"command", "generate"},
                   {"kind", a.kind},
                   {"spec", spec_json},
                   {"count", a.count},
                   {"seed", a.seed},
                   {"out", a.out}});
}

// ---------------------------------------------------------------------------
// synth / mix

void run_synth(const std::string& target_path, int count, std::uint64_t seed,
               const std::string& out) {
  ProfileTarget target = target_path.empty()
                             ? default_profile_target()
                             : profile_target_from_json(slurp(target_path));
  SeededRng rng(seed);
  Dataset d = gen_synsdd(target, count, rng);
  write_dataset(d, out);
  echo_config(json{{"command", "synth"},
                   {"target", json::parse(to_json(target))},
                   {"count", count},
                   {"seed", seed},
                   {"out", out}});
}

void run_mix(const std::string& base_path, const std::string& synth_path,
             double fraction, std::uint64_t seed, const std::string& out) {
  const Dataset base = parse_dataset(base_path);
  const Dataset synth = parse_dataset(synth_path);
  SeededRng rng(seed);
  const Dataset mixed = mix(base, synth, fraction, rng);
  write_dataset(mixed, out);
  echo_config(json{{"command", "mix"},
                   {"base", base_path},
                   {"synth", synth_path},
                   {"fraction", fraction},
                   {"seed", seed},
                   {"base_trajectories", base.trajectory_count()},
                   {"added_trajectories",
                    mixed.trajectory_count() - base.trajectory_count()},
                   {"out", out}});
}

// ---------------------------------------------------------------------------
// analyze / classify / cluster

void run_analyze(const std::string& in, const std::string& report,
                 const std::string& csv) {
  const Dataset d = parse_dataset(in);
  const DatasetProfile prof = profile(d);
  const json cfg{{"command", "analyze"}, {"in", in}, {"report", report},
                 {"csv", csv}};
  spit(report, with_config(to_json(prof), cfg));
  if (!csv.empty()) write_analysis_csv(d, csv);
  echo_config(cfg);
}

void run_classify(const std::string& in, const std::string& out) {
  const Dataset d = parse_dataset(in);
  write_analysis_csv(d, out);
  echo_config(json{{"command", "classify"}, {"in", in}, {"out", out}});
}

void run_cluster(const std::string& in, int k, const std::string& norm,
                 std::uint64_t seed, const std::string& out,
                 const std::string& summary) {
  const Dataset d = parse_dataset(in);
  const NormKind nk = norm_from_string(norm);
  SeededRng rng(seed);
  const Clustering c = kmedoids(d, k, nk, rng);
  write_clustering_csv(c, out);
  const json cfg{{"command", "cluster"}, {"in", in},     {"k", k},
                 {"norm", norm},         {"seed", seed}, {"out", out}};
  if (!summary.empty())
    spit(summary, with_config(clustering_summary_json(c, d, nk), cfg));
  echo_config(cfg);
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string in;
  std::string predictor = "cv";
  int k = 20;
  bool decoupled = false;
  double std_param = 1.0;
  bool legacy_scale_bug = false;
  double jitter = 0.0;
  std::uint64_t seed = 0;
  std::string report;
};

void run_eval_cmd(const EvalArgs& a) {
  const Dataset d = parse_dataset(a.in);
  Predictor p;
  p.kind = Predictor::kind_from_string(a.predictor);
  p.k_samples = a.k;
  p.jitter_sigma = a.jitter;
  EvalConfig cfg;
  cfg.k = a.k;
  cfg.decoupled = a.decoupled;
  cfg.standardization = a.std_param;
  cfg.legacy_scale_bug = a.legacy_scale_bug;
  SeededRng rng(a.seed);
  const EvalRunReport rep = run_eval(d, p, cfg, rng);
  const json jcfg{{"command", "eval"},
                  {"in", a.in},
                  {"predictor", a.predictor},
                  {"k", a.k},
                  {"decoupled", a.decoupled},
                  {"std", a.std_param},
                  {"legacy_scale_bug", a.legacy_scale_bug},
                  {"jitter", a.jitter},
                  {"seed", a.seed}};
  spit(a.report, with_config(to_json(rep), jcfg));
  echo_config(jcfg);
}

// ---------------------------------------------------------------------------
// rl-train

struct RlArgs {
  std::string env_path;
  std::string profile_path;
  int iters = 40;
  int episodes = 32;
  double lr = 0.05;
  std::string hidden = "32,32";
  std::uint64_t seed = 1;
  std::string curve;
  std::string policy;
  std::string export_tsv;
  int export_episodes = 10;
};

void run_rl_train(const RlArgs& a) {
  const RlEnvConfig env = rl_env_from_json(slurp(a.env_path));
  const AgentProfile profile = agent_profile_from_json(slurp(a.profile_path));

  std::vector<int> dims{env.feature_dim()};
  for (int h : parse_int_list(a.hidden)) dims.push_back(h);
  dims.push_back(4);
  std::vector<Activation> acts(dims.size() - 1, Activation::relu);
  acts.back() = Activation::identity;
  Mlp net = Mlp::make(dims, acts);
  SeededRng init_rng(a.seed);
  random_init(net, init_rng);

  TrainConfig tc;
  tc.iters = a.iters;
  tc.episodes_per_iter = a.episodes;
  tc.lr = a.lr;
  tc.seed = a.seed;
  const auto curve = train(net, env, profile, tc);

  if (!a.curve.empty()) {
    std::ostringstream os;
    os << "iter,mean_return,mean_final_dist\n";
    for (const auto& pt : curve)
      os << pt.iter << ',' << format_double(pt.mean_return) << ','
         << format_double(pt.mean_final_dist) << '\n';
    spit(a.curve, os.str());
  }
  if (!a.policy.empty()) spit(a.policy, mlp_to_json(net));
  if (!a.export_tsv.empty()) {
    std::vector<Trajectory> trajs;
    SeededRng rng(a.seed);
    for (int e = 0; e < a.export_episodes; ++e) {
      SeededRng ep = rng.derive(0xE0000000ULL + e);
      const EpisodeLog log = run_episode(net, env, profile, ep);
      Trajectory t;
      t.points = log.positions;
      const int n = static_cast<int>(t.points.size());
      if (n >= 2) {
        t.obs_len = n == 20 ? 8 : std::min(8, n - 1);
        t.pred_len = n - t.obs_len;
        trajs.push_back(std::move(t));
      }
    }
    write_dataset(Dataset::from_trajectories(std::move(trajs), "rl"),
                  a.export_tsv);
  }
  echo_config(json{{"command", "rl-train"},
                   {"env", a.env_path},
                   {"profile", a.profile_path},
                   {"iters", a.iters},
                   {"episodes_per_iter", a.episodes},
                   {"lr", a.lr},
                   {"hidden", a.hidden},
                   {"seed", a.seed}});
}

// ---------------------------------------------------------------------------
// siren-fit

struct SirenArgs {
  std::string signal;
  std::string layers = "64,64,64";
  int epochs = 2000;
  double lr = 0.0;  // 0 = use the calibrated default for the layer stack
  double omega0 = 30.0;
  std::uint64_t seed = 7;
  std::string curve;
};

void run_siren_fit(const SirenArgs& a) {
  std::ifstream in(a.signal);
  if (!in) throw IoError("cannot open '" + a.signal + "'");
  std::vector<std::pair<double, std::vector<double>>> samples;
  std::string line;
  std::size_t out_dim = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (vals.size() < 2)
      throw ParseError("signal line " + std::to_string(line_no) +
                       ": need t and at least one value");
    if (out_dim == 0) out_dim = vals.size() - 1;
    if (vals.size() - 1 != out_dim)
      throw ParseError("signal line " + std::to_string(line_no) +
                       ": inconsistent column count");
    samples.push_back({vals[0], {vals.begin() + 1, vals.end()}});
  }
  if (samples.empty()) throw ParseError("signal file has no samples");

  std::vector<int> dims{1};
  for (int h : parse_int_list(a.layers)) dims.push_back(h);
  dims.push_back(static_cast<int>(out_dim));
  std::vector<Activation> acts(dims.size() - 1, Activation::sine);
  acts.back() = Activation::identity;
  Mlp net = Mlp::make(dims, acts, a.omega0);
  SeededRng rng(a.seed);
  siren_init(net, rng);

  const double lr = a.lr > 0.0 ? a.lr : 0.0002;
  const auto curve = fit_signal(net, samples, a.epochs, lr);

  std::ostringstream os;
  os << "epoch,mse\n";
  for (std::size_t e = 0; e < curve.size(); ++e)
    os << e << ',' << format_double(curve[e]) << '\n';
  spit(a.curve, os.str());
  echo_config(json{{"command", "siren-fit"},
                   {"signal", a.signal},
                   {"layers", a.layers},
                   {"epochs", a.epochs},
                   {"lr", lr},
                   {"omega0", a.omega0},
                   {"seed", a.seed},
                   {"final_mse", curve.back()}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajkit — trajectory synthesis, analysis and evaluation"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* cgen = app.add_subcommand("generate", "Generate a synthetic dataset");
  cgen->add_option("--kind", gen.kind, "newton | noisy | curve | hmm")
      ->required();
  cgen->add_option("--spec", gen.spec_path, "Generator spec JSON file");
  cgen->add_option("--count", gen.count, "Trajectories (or scenes for hmm)");
  cgen->add_option("--seed", gen.seed, "Seed");
  cgen->add_option("--out", gen.out, "Output TSV path")->required();
  cgen->add_option("--state-log", gen.state_log,
                   "Sidecar JSON state log (hmm only)");

  std::string synth_target, synth_out;
  int synth_count = 1000;
  std::uint64_t synth_seed = 0;
  auto* csynth = app.add_subcommand("synth", "Statistics-matched dataset");
  csynth->add_option("--target", synth_target,
                     "ProfileTarget JSON (defaults to the built-in profile)");
  csynth->add_option("--count", synth_count, "Trajectory count");
  csynth->add_option("--seed", synth_seed, "Seed");
  csynth->add_option("--out", synth_out, "Output TSV path")->required();

  std::string mix_base, mix_synth, mix_out;
  double mix_fraction = 0.05;
  std::uint64_t mix_seed = 0;
  auto* cmix = app.add_subcommand("mix", "Blend base and synthetic datasets");
  cmix->add_option("--base", mix_base, "Base TSV")->required();
  cmix->add_option("--synth", mix_synth, "Synthetic pool TSV")->required();
  cmix->add_option("--fraction", mix_fraction,
                   "Synthetic share of the result, in (0, 1]");
  cmix->add_option("--seed", mix_seed, "Seed");
  cmix->add_option("--out", mix_out, "Output TSV path")->required();

  std::string an_in, an_report, an_csv;
  auto* can = app.add_subcommand("analyze", "Histogram + abscore report");
  can->add_option("--in", an_in, "Input TSV")->required();
  can->add_option("--report", an_report, "Report JSON path")->required();
  can->add_option("--csv", an_csv, "Optional per-trajectory CSV");

  std::string cl_in, cl_norm = "fro", cl_out, cl_summary;
  int cl_k = 2;
  std::uint64_t cl_seed = 0;
  auto* ccl = app.add_subcommand("cluster", "k-medoids clustering");
  ccl->add_option("--in", cl_in, "Input TSV")->required();
  ccl->add_option("--k", cl_k, "Cluster count")->required();
  ccl->add_option("--norm", cl_norm, "fro | l1 | l2op | linf");
  ccl->add_option("--seed", cl_seed, "Seed");
  ccl->add_option("--out", cl_out, "Assignments CSV path")->required();
  ccl->add_option("--summary", cl_summary, "Optional JSON summary path");

  std::string cf_in, cf_out;
  auto* ccf = app.add_subcommand("classify", "Per-trajectory class CSV");
  ccf->add_option("--in", cf_in, "Input TSV")->required();
  ccf->add_option("--out", cf_out, "Output CSV path")->required();

  EvalArgs ev;
  auto* cev = app.add_subcommand("eval", "Baseline prediction evaluation");
  cev->add_option("--in", ev.in, "Input TSV")->required();
  cev->add_option("--predictor", ev.predictor, "cv | linfit | stationary");
  cev->add_option("--k", ev.k, "Samples per trajectory");
  cev->add_flag("--decoupled", ev.decoupled, "Report per-metric minima");
  cev->add_option("--std", ev.std_param, "Standardization parameter");
  cev->add_flag("--legacy-scale-bug", ev.legacy_scale_bug,
                "Divide reported ADE by --std (compat mode)");
  cev->add_option("--jitter", ev.jitter, "Endpoint jitter sigma for K > 1");
  cev->add_option("--seed", ev.seed, "Seed");
  cev->add_option("--report", ev.report, "Report JSON path")->required();

  RlArgs rl;
  auto* crl = app.add_subcommand("rl-train", "Policy-gradient agent training");
  crl->add_option("--env", rl.env_path, "Environment JSON")->required();
  crl->add_option("--profile", rl.profile_path, "Agent profile JSON")
      ->required();
  crl->add_option("--iters", rl.iters, "Training iterations");
  crl->add_option("--episodes", rl.episodes, "Episodes per iteration");
  crl->add_option("--lr", rl.lr, "Learning rate");
  crl->add_option("--hidden", rl.hidden, "Hidden layer sizes, e.g. 32,32");
  crl->add_option("--seed", rl.seed, "Seed");
  crl->add_option("--curve", rl.curve, "Learning-curve CSV path");
  crl->add_option("--policy", rl.policy, "Trained policy JSON path");
  crl->add_option("--export", rl.export_tsv, "Rollout TSV path");
  crl->add_option("--export-episodes", rl.export_episodes,
                  "Episodes to roll out for --export");

  SirenArgs si;
  auto* csi = app.add_subcommand("siren-fit", "Fit a sine network to a signal");
  csi->add_option("--signal", si.signal, "CSV of t,y rows")->required();
  csi->add_option("--layers", si.layers, "Hidden sizes, e.g. 64,64,64");
  csi->add_option("--epochs", si.epochs, "Training epochs");
  csi->add_option("--lr", si.lr, "Learning rate (0 = calibrated default)");
  csi->add_option("--omega0", si.omega0, "Sine frequency factor");
  csi->add_option("--seed", si.seed, "Seed");
  csi->add_option("--curve", si.curve, "Loss-curve CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (cgen->parsed()) run_generate(gen);
    else if (csynth->parsed()) run_synth(synth_target, synth_count, synth_seed, synth_out);
    else if (cmix->parsed()) run_mix(mix_base, mix_synth, mix_fraction, mix_seed, mix_out);
    else if (can->parsed()) run_analyze(an_in, an_report, an_csv);
    else if (ccl->parsed()) run_cluster(cl_in, cl_k, cl_norm, cl_seed, cl_out, cl_summary);
    else if (ccf->parsed()) run_classify(cf_in, cf_out);
    else if (cev->parsed()) run_eval_cmd(ev);
    else if (crl->parsed()) run_rl_train(rl);
    else if (csi->parsed()) run_siren_fit(si);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
