// hex: command-line entry points for classifier training, policy synthesis,
// explanation and evaluation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hex/classifiers.hpp"
#include "hex/dataset.hpp"
#include "hex/evaluation.hpp"
#include "hex/growing_spheres.hpp"
#include "hex/svg.hpp"
#include "hex/synthesis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hex;

namespace {

// Bad arguments, files or configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr const char* kModelFormat = "hex.model";

fs::path output_path(const std::string& name, const std::string& output_dir) {
  fs::path p(name);
  if (p.is_absolute()) return p;
  std::string dir = output_dir;
  if (const char* env = std::getenv("HEX_OUTPUT_DIR"); env && *env) dir = env;
  return dir.empty() ? p : fs::path(dir) / p;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_text(const fs::path& p, const std::string& text) {
  ensure_parent(p);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << text;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

// Where a model's data came from, so later commands can rebuild the same
// split.
struct DataSource {
  std::string csv;
  std::string label_column;
  std::string synthetic;  // boundary kind when the data is generated
  std::size_t n = 400;
  std::size_t p = 2;
  std::uint64_t data_seed = 0;

  json to_json() const {
    if (!synthetic.empty()) return {{"synthetic", synthetic}, {"n", n}, {"p", p}, {"seed", data_seed}};
    return {{"csv", csv}, {"label_column", label_column}};
  }
  static DataSource from_json(const json& j) {
    DataSource s;
    if (j.contains("synthetic")) {
      s.synthetic = j.at("synthetic").get<std::string>();
      s.n = j.at("n").get<std::size_t>();
      s.p = j.at("p").get<std::size_t>();
      s.data_seed = j.at("seed").get<std::uint64_t>();
    } else {
      s.csv = j.at("csv").get<std::string>();
      s.label_column = j.at("label_column").get<std::string>();
    }
    return s;
  }
};

Dataset load_source(const DataSource& src, const std::optional<std::vector<FeatureScaling>>& scaling) {
  if (!src.synthetic.empty()) {
    return synth_boundary(boundary_kind_from_string(src.synthetic), src.n, src.p, src.data_seed);
  }
  if (!fs::exists(src.csv)) throw UsageError("data file '" + src.csv + "' does not exist");
  CsvOptions opt;
  opt.label_column = src.label_column;
  opt.scaling = scaling;
  return load_csv(src.csv, opt);
}

struct ModelFile {
  hex::ClassifierModel model;
  std::vector<std::string> feature_names;
  std::vector<FeatureScaling> scaling;
  DataSource source;
  std::uint64_t split_seed = 0;
};

ModelFile load_model_file(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("model file '" + path + "' does not exist");
  const json j = read_json(path);
  if (j.value("format", "") != kModelFormat) throw UsageError("'" + path + "' is not a model file");
  try {
    return ModelFile{hex::ClassifierModel::from_json(j.at("model")),
                     j.at("feature_names").get<std::vector<std::string>>(), scaling_from_json(j.at("scaling")),
                     DataSource::from_json(j.at("data")), j.at("split_seed").get<std::uint64_t>()};
  } catch (const json::exception& e) {
    throw UsageError("malformed model file '" + path + "': " + e.what());
  }
}

DatasetSplit model_split(const ModelFile& mf) {
  const Dataset data = load_source(mf.source, mf.scaling);
  if (data.dim() != mf.feature_names.size()) throw UsageError("data no longer matches the model's features");
  SplitSpec spec;
  spec.seed = mf.split_seed;
  return split(data, spec);
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

// ---------------------------------------------------------------- train-classifier

struct TrainClassifierArgs {
  DataSource source;
  std::string kind = "lr";
  std::uint64_t seed = 0;
  double omega = 0.5;
  int max_epochs = 4000;
  std::string out = "model.json";
};

int cmd_train_classifier(const TrainClassifierArgs& a, const std::string& output_dir) {
  if (a.source.csv.empty() == a.source.synthetic.empty()) {
    throw UsageError("give exactly one of --data or --synthetic");
  }
  if (!a.source.csv.empty() && a.source.label_column.empty()) throw UsageError("--label is required with --data");
  const auto kind = model_kind_from_string(a.kind);
  const Dataset data = load_source(a.source, std::nullopt);
  SplitSpec spec;
  spec.seed = a.seed;
  const auto parts = split(data, spec);

  ClassifierTrainConfig cfg;
  cfg.seed = hex::Rng(a.seed).fork("classifier").seed();
  cfg.omega = a.omega;
  cfg.max_epochs = a.max_epochs;
  const auto trained = train_classifier(kind, parts.train, parts.validation, cfg);

  json file = {{"format", kModelFormat},
               {"version", 1},
               {"model", trained.model.to_json()},
               {"hyperparameters", trained.hyperparameters},
               {"feature_names", data.feature_names},
               {"scaling", hex::to_json(data.scaling)},
               {"data", a.source.to_json()},
               {"split_seed", a.seed},
               {"label_column", a.source.synthetic.empty() ? a.source.label_column : "label"}};
  const auto path = output_path(a.out, output_dir);
  write_text(path, file.dump(2) + "\n");

  std::cout << "split,accuracy,auc\n";
  for (const auto& [name, part] : {std::pair<const char*, const Dataset*>{"train", &parts.train},
                                   {"validation", &parts.validation},
                                   {"test", &parts.test}}) {
    std::cout << name << ',' << fmt(accuracy(trained.model, *part)) << ',' << fmt(auc(trained.model, *part))
              << '\n';
  }
  std::cerr << "model written to " << path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- synthesize

struct TrainFlags {
  int episodes = 1000;
  int iterations = 300;
  int batch = 64;
  int window = 5;
  int cold_start = 0;
  int smote_neighbors = 5;
  double gamma = 0.99;
  double tau = 0.005;
  double sigma = 0.1;
  double lr = 0.001;
  double alpha = 4.0;
  double beta = 10.0;

  void add(CLI::App* app) {
    app->add_option("--episodes,-E", episodes, "Episodes")->check(CLI::PositiveNumber);
    app->add_option("--iterations,-T", iterations, "Steps per episode")->check(CLI::PositiveNumber);
    app->add_option("--batch-size,-N", batch, "Minibatch size")->check(CLI::PositiveNumber);
    app->add_option("--window,-w", window, "Selective buffering window")->check(CLI::PositiveNumber);
    app->add_option("--cold-start", cold_start, "Random tuples before learning (0: batch size)");
    app->add_option("--smote-neighbors", smote_neighbors, "SMOTE neighbour count");
    app->add_option("--gamma", gamma, "Discount factor");
    app->add_option("--tau", tau, "Soft update rate");
    app->add_option("--sigma", sigma, "Exploration noise standard deviation");
    app->add_option("--learning-rate", lr, "Adam learning rate");
    app->add_option("--alpha", alpha, "Boundary term weight");
    app->add_option("--beta", beta, "Class-change term weight");
  }

  TrainConfig build(double omega) const {
    TrainConfig c;
    c.episodes = episodes;
    c.inner_iterations = iterations;
    c.batch_size = batch;
    c.selective_window = window;
    c.cold_start_count = cold_start;
    c.smote_neighbors = smote_neighbors;
    c.policy.gamma = gamma;
    c.policy.tau = tau;
    c.policy.exploration_sigma = sigma;
    c.policy.learning_rate = lr;
    c.reward.alpha = alpha;
    c.reward.beta = beta;
    c.reward.omega = omega;
    return c;
  }
};

struct SynthesizeArgs {
  std::string model;
  std::string algorithm = "td3";
  bool selective = true;
  bool smote = false;
  std::string decider;
  std::uint64_t seed = 0;
  std::size_t rolling = 40;
  std::string out = "policy.json";
  std::string curve = "curve.csv";
  TrainFlags train;
};

int cmd_synthesize(const SynthesizeArgs& a, const std::string& output_dir) {
  const ModelFile mf = load_model_file(a.model);
  const auto parts = model_split(mf);
  TrainConfig cfg = a.train.build(mf.model.omega());
  cfg.policy.algorithm = algorithm_from_string(a.algorithm);
  cfg.selective_buffering = a.selective;
  cfg.smote = a.smote;
  cfg.seed = a.seed;
  if (!a.decider.empty()) {
    if (!fs::exists(a.decider)) throw UsageError("decider profile '" + a.decider + "' does not exist");
    cfg.hitl = DeciderProfile::load(a.decider, mf.feature_names);
  }
  const auto result = synthesize_policy(mf.model, parts.validation, cfg);

  const auto policy_path = output_path(a.out, output_dir);
  write_text(policy_path, policy_manifest(result.policy, cfg).dump(2) + "\n");
  std::ostringstream curve;
  write_learning_curve_csv(result.episode_rewards, a.rolling, curve);
  const auto curve_path = output_path(a.curve, output_dir);
  write_text(curve_path, curve.str());

  const auto smooth = rolling_curve(result.episode_rewards, a.rolling);
  std::cerr << "episodes " << result.episode_rewards.size() << ", steps " << result.environment_steps
            << ", updates " << result.updates << ", final rolling reward " << fmt(smooth.back()) << "\n"
            << "policy written to " << policy_path.string() << ", curve to " << curve_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- explain

struct ExplainArgs {
  std::string model;
  std::string policy;
  std::string explainer = "policy";
  std::string input;  // raw-valued CSV of instances; defaults to the test split
  std::size_t count = 10;
  std::size_t top_q = 5;
  std::string decider;
  std::string svg_dir;
  std::uint64_t seed = 0;
  std::string out = "explanations.csv";
};

int cmd_explain(const ExplainArgs& a, const std::string& output_dir) {
  const ModelFile mf = load_model_file(a.model);
  std::vector<Instance> instances;
  if (!a.input.empty()) {
    if (!fs::exists(a.input)) throw UsageError("input file '" + a.input + "' does not exist");
    CsvOptions opt;
    opt.label_column = mf.source.synthetic.empty() ? mf.source.label_column : "label";
    opt.scaling = mf.scaling;
    instances = load_csv(a.input, opt).features;
  } else {
    const auto parts = model_split(mf);
    for (std::size_t i = 0; i < std::min(a.count, parts.test.size()); ++i) instances.push_back(parts.test.features[i]);
  }
  const std::size_t p = mf.feature_names.size();

  std::optional<DeciderProfile> profile;
  if (!a.decider.empty()) profile = DeciderProfile::load(a.decider, mf.feature_names);

  std::optional<ActorCriticPolicy> policy;
  const bool use_grow = a.explainer == "grow";
  if (!use_grow) {
    if (a.explainer != "policy") throw UsageError("--explainer must be 'policy' or 'grow'");
    if (a.policy.empty()) throw UsageError("--policy is required unless --explainer grow");
    if (!fs::exists(a.policy)) throw UsageError("policy file '" + a.policy + "' does not exist");
    auto manifest = load_policy_manifest(read_json(a.policy));
    if (manifest.policy.state_dim() != p) {
      throw UsageError("policy expects " + std::to_string(manifest.policy.state_dim()) + " features, model has " +
                       std::to_string(p));
    }
    if (!profile) profile = manifest.profile;
    policy.emplace(std::move(manifest.policy));
  }

  std::ostringstream csv;
  csv << "instance,found,f_x,f_x_prime,dbd";
  for (const auto& n : mf.feature_names) csv << ",z_" << n;
  for (const auto& n : mf.feature_names) csv << ",xp_" << n;
  csv << ",ranking\n" << std::setprecision(17);

  const hex::Rng root(a.seed);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& x = instances[i];
    std::optional<std::pair<ActionVector, Instance>> result;
    if (use_grow) {
      GrowConfig gc;
      gc.seed = root.fork(static_cast<std::uint64_t>(i)).seed();
      if (auto g = growing_spheres_explain(mf.model, x, gc)) result = std::make_pair(g->z, g->x_prime);
    } else {
      result = policy->explain(x, profile ? &*profile : nullptr);
    }
    const ActionVector z = result ? result->first : ActionVector::Zero(static_cast<Eigen::Index>(p));
    const Instance xp = result ? result->second : x;
    const auto ranking = explanation_ranking(z, mf.feature_names, std::min(a.top_q, p));
    csv << i << ',' << (result ? 1 : 0) << ',' << mf.model.predict_proba(x) << ',' << mf.model.predict_proba(xp)
        << ',';
    if (result) csv << dbd(mf.model, xp);
    for (Eigen::Index j = 0; j < z.size(); ++j) csv << ',' << z(j);
    for (Eigen::Index j = 0; j < xp.size(); ++j) csv << ',' << xp(j);
    csv << ",\"";
    for (std::size_t k = 0; k < ranking.size(); ++k) {
      csv << (k ? ";" : "") << ranking[k].first << ':' << ranking[k].second;
    }
    csv << "\"\n";
    if (!a.svg_dir.empty()) {
      write_text(output_path(a.svg_dir, output_dir) / ("instance_" + std::to_string(i) + ".svg"),
                 ranking_bar_svg("instance " + std::to_string(i), ranking));
    }
  }
  const auto path = output_path(a.out, output_dir);
  write_text(path, csv.str());
  std::cerr << instances.size() << " explanations written to " << path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::vector<std::string> models;
  std::vector<std::string> explainers = {"hex-td3", "grow"};
  std::string scenario = "decider_free";
  int trials = 10;
  std::size_t instances = 100;
  std::vector<double> uaps = {0.1, 0.5, 0.9};
  std::uint64_t seed = 0;
  std::size_t rolling = 40;
  std::string out_dir = "evaluation";
  TrainFlags train;
};

int cmd_evaluate(const EvaluateArgs& a, const std::string& output_dir) {
  if (a.models.empty()) throw UsageError("at least one --model is required");
  std::vector<ModelFile> files;
  std::vector<DatasetSplit> splits;
  for (const auto& path : a.models) {
    files.push_back(load_model_file(path));
    splits.push_back(model_split(files.back()));
  }
  for (const auto& f : files) {
    if (f.feature_names != files.front().feature_names) throw UsageError("all models must share one feature set");
  }
  std::vector<ExplainerKind> kinds;
  for (const auto& e : a.explainers) kinds.push_back(explainer_from_string(e));

  ScenarioConfig sc;
  sc.scenario = scenario_from_string(a.scenario);
  sc.trials = a.trials;
  sc.test_instances = a.instances;
  sc.uaps = a.uaps;
  sc.train = a.train.build(files.front().model.omega());
  sc.seed = a.seed;

  std::vector<ModelEntry> entries;
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::string name = to_string(files[i].model.kind());
    if (int k = seen[name]++; k > 0) name += "_" + std::to_string(k);
    entries.push_back({name, &files[i].model, &splits[i].validation, &splits[i].test});
  }

  const auto reports = run_scenario(sc, entries, kinds);
  const auto rows = aggregate(reports);
  const fs::path dir = output_path(a.out_dir, output_dir);

  std::ostringstream records;
  write_records_csv(reports, files.front().feature_names, records);
  write_text(dir / "records.csv", records.str());
  write_text(dir / "aggregates.json", aggregates_json(rows).dump(2) + "\n");
  for (const auto& r : reports) {
    if (r.learning_curve.empty()) continue;
    std::string name = r.model + "_" + r.explainer + "_trial" + std::to_string(r.trial);
    if (r.uap) name += "_uap" + fmt(*r.uap, 2);
    std::ostringstream curve;
    write_learning_curve_csv(r.learning_curve, a.rolling, curve);
    write_text(dir / "curves" / (name + ".csv"), curve.str());
  }

  std::cout << "model,explainer,scenario,uap,trials,mean_dbd,mean_uep,mean_reward,found_fraction\n";
  for (const auto& r : rows) {
    std::cout << r.model << ',' << r.explainer << ',' << to_string(r.scenario) << ','
              << (r.uap ? fmt(*r.uap, 2) : "") << ',' << r.trials << ',' << fmt(r.mean_dbd) << ','
              << (std::isnan(r.mean_uep) ? "" : fmt(r.mean_uep)) << ',' << fmt(r.mean_reward) << ','
              << fmt(r.found_fraction) << '\n';
  }
  std::cerr << reports.size() << " reports written under " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::vector<std::string> curves;  // label=path or path
  std::size_t rolling = 40;
  int columns = 3;
  std::string out = "curves.svg";
};

std::vector<double> read_curve_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open curve '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("episode,raw_reward", 0) != 0) {
    throw UsageError("'" + path + "' is not a learning-curve CSV");
  }
  std::vector<double> raw;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    if (a == std::string::npos) throw UsageError("malformed row in '" + path + "'");
    raw.push_back(std::stod(line.substr(a + 1, b - a - 1)));
  }
  return raw;
}

int cmd_report(const ReportArgs& a, const std::string& output_dir) {
  if (a.curves.empty()) throw UsageError("at least one --curve is required");
  // Curves sharing a label prefix before '/' share a panel.
  std::vector<CurvePanel> panels;
  std::map<std::string, std::size_t> panel_index;
  for (const auto& spec : a.curves) {
    std::string label = spec;
    std::string path = spec;
    if (const auto eq = spec.find('='); eq != std::string::npos) {
      label = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    } else {
      label = fs::path(spec).stem().string();
    }
    std::string panel = label;
    std::string series = label;
    if (const auto slash = label.find('/'); slash != std::string::npos) {
      panel = label.substr(0, slash);
      series = label.substr(slash + 1);
    }
    auto [it, inserted] = panel_index.try_emplace(panel, panels.size());
    if (inserted) panels.push_back({panel, {}});
    panels[it->second].series.push_back({series, rolling_curve(read_curve_column(path), a.rolling)});
  }
  const auto path = output_path(a.out, output_dir);
  write_text(path, learning_curve_grid_svg(panels, a.columns));
  std::cerr << panels.size() << " panels written to " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explanation policy synthesis toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI configuration file; flags override it");
  std::string output_dir;
  app.add_option("--output-dir", output_dir, "Directory for relative output paths (HEX_OUTPUT_DIR overrides)");

  TrainClassifierArgs tc;
  auto* train = app.add_subcommand("train-classifier", "Fit a classifier and save it as JSON");
  train->add_option("--data", tc.source.csv, "CSV file with a header row");
  train->add_option("--label", tc.source.label_column, "Label column name");
  train->add_option("--synthetic", tc.source.synthetic, "Generate data instead: linear, radial or xor");
  train->add_option("--n", tc.source.n, "Synthetic row count");
  train->add_option("--p", tc.source.p, "Synthetic feature count");
  train->add_option("--data-seed", tc.source.data_seed, "Synthetic data seed");
  train->add_option("--kind", tc.kind, "lr, nn, dt, rf or svm");
  train->add_option("--seed", tc.seed, "Root seed (split and fitting)");
  train->add_option("--omega", tc.omega, "Decision threshold");
  train->add_option("--max-epochs", tc.max_epochs, "Gradient-trained model epoch cap");
  train->add_option("--out,-o", tc.out, "Model file");

  SynthesizeArgs sy;
  auto* synth = app.add_subcommand("synthesize", "Learn an explanation policy");
  synth->add_option("--model,-m", sy.model, "Model file")->required();
  synth->add_option("--algorithm", sy.algorithm, "ddpg or td3");
  synth->add_flag("--selective,!--no-selective", sy.selective, "Selective buffering");
  synth->add_flag("--smote,!--no-smote", sy.smote, "Balance the policy data with SMOTE");
  synth->add_option("--decider", sy.decider, "Decider profile JSON (trusted features)");
  synth->add_option("--seed", sy.seed, "Root seed");
  synth->add_option("--rolling", sy.rolling, "Rolling window for the curve CSV")->check(CLI::PositiveNumber);
  synth->add_option("--out,-o", sy.out, "Policy manifest");
  synth->add_option("--curve", sy.curve, "Learning-curve CSV");
  sy.train.add(synth);

  ExplainArgs ex;
  auto* explain = app.add_subcommand("explain", "Explain instances with a policy or Growing Spheres");
  explain->add_option("--model,-m", ex.model, "Model file")->required();
  explain->add_option("--policy", ex.policy, "Policy manifest");
  explain->add_option("--explainer", ex.explainer, "policy or grow");
  explain->add_option("--input", ex.input, "CSV of instances in raw units (default: test split)");
  explain->add_option("--count", ex.count, "Test-split instances to explain");
  explain->add_option("--top-q", ex.top_q, "Features shown per ranking")->check(CLI::PositiveNumber);
  explain->add_option("--decider", ex.decider, "Decider profile JSON");
  explain->add_option("--svg-dir", ex.svg_dir, "Write one bar chart per instance here");
  explain->add_option("--seed", ex.seed, "Seed for Growing Spheres");
  explain->add_option("--out,-o", ex.out, "Explanation CSV");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Run a decider-free or hitl experiment matrix");
  evaluate->add_option("--model,-m", ev.models, "Model files")->required();
  evaluate->add_option("--explainers", ev.explainers, "ddpg, td3, hex-ddpg, hex-td3, grow, random");
  evaluate->add_option("--scenario", ev.scenario, "decider_free or hitl");
  evaluate->add_option("--trials", ev.trials, "Trials")->check(CLI::PositiveNumber);
  evaluate->add_option("--instances", ev.instances, "Held-out instances per trial");
  evaluate->add_option("--uaps", ev.uaps, "Untrusted fractions for hitl");
  evaluate->add_option("--seed", ev.seed, "Root seed");
  evaluate->add_option("--rolling", ev.rolling, "Rolling window for curve CSVs")->check(CLI::PositiveNumber);
  evaluate->add_option("--out-dir", ev.out_dir, "Report directory");
  ev.train.add(evaluate);

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Render learning-curve CSVs as an SVG grid");
  report->add_option("--curve", rp.curves, "label=path; 'panel/series=path' groups curves")->required();
  report->add_option("--rolling", rp.rolling, "Rolling window")->check(CLI::PositiveNumber);
  report->add_option("--columns", rp.columns, "Panels per row")->check(CLI::PositiveNumber);
  report->add_option("--out,-o", rp.out, "SVG file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*train) return cmd_train_classifier(tc, output_dir);
    if (*synth) return cmd_synthesize(sy, output_dir);
    if (*explain) return cmd_explain(ex, output_dir);
    if (*evaluate) return cmd_evaluate(ev, output_dir);
    if (*report) return cmd_report(rp, output_dir);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hex::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
