/*
 * Copyright 2026 The PACL Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pacl/cluster.h"
#include "pacl/embeddings_io.h"
#include "pacl/error.h"
#include "pacl/experiment.h"
#include "pacl/metrics.h"
#include "pacl/pair_builder.h"
#include "pacl/partition.h"
#include "pacl/probe.h"
#include "pacl/synth.h"
#include "pacl/trainer.h"
#include "pacl/tsv.h"
#include "render.h"
#include "run_manifest.h"

namespace pacl::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string OneLine(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

// Dataset location shared by most subcommands.
struct DataArgs {
  std::string dir;
  std::string manifest;

  void Register(CLI::App* app, bool required = true) {
    auto* opt = app->add_option("--data", dir, "Dataset directory (manifest.jsonl, images.emb, texts.emb)");
    if (required) opt->required();
    app->add_option("--manifest", manifest, "Manifest path overriding <data>/manifest.jsonl");
  }

  DatasetPaths Paths() const {
    DatasetPaths paths = DatasetPaths::InDirectory(dir);
    if (!manifest.empty()) paths.manifest = manifest;
    return paths;
  }

  PairedDataset Load(RunManifest& run) const {
    const DatasetPaths paths = Paths();
    PairedDataset dataset = LoadDataset(paths);
    run.AddInput("manifest", paths.manifest);
    run.AddInput("images", paths.images);
    run.AddInput("texts", paths.texts);
    for (const auto& [role, p] :
         {std::pair{"factual_image_eval", paths.factual_image_eval},
          std::pair{"factual_text_eval", paths.factual_text_eval},
          std::pair{"emotional_image_eval", paths.emotional_image_eval},
          std::pair{"emotional_text_eval", paths.emotional_text_eval}}) {
      if (fs::exists(p)) run.AddInput(role, p);
    }
    return dataset;
  }
};

// Training hyperparameters shared by train and ablate.
struct TrainArgs {
  TrainConfig config;
  std::string usage = "all";
  std::string mode = "both";

  void Register(CLI::App* app) {
    app->add_option("--sigma", config.sigma, "Partition threshold")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app->add_option("--k", config.k, "Clusters per modality")
        ->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--tau", config.tau, "Temperature")->capture_default_str();
    app->add_option("--epochs", config.epochs)->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--batch", config.batch_size)->check(CLI::Range(2, 1 << 20))->capture_default_str();
    app->add_option("--lr", config.lr)->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--wd", config.weight_decay, "Decoupled weight decay")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--seed", config.seed)->capture_default_str();
    app->add_option("--d-proj", config.d_proj, "Projection width")
        ->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--hidden-dim", config.hidden_dim, "Hidden tanh layer width (0 = affine)")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_flag("--freeze-text", config.freeze_text_projector, "Keep the text projector fixed");
    app->add_option("--usage", usage, "Partitions used for training")
        ->check(CLI::IsMember({"strong", "strong_partial", "all"}))->capture_default_str();
    app->add_option("--mode", mode, "Partition mode")
        ->check(CLI::IsMember({"none", "factual", "emotional", "both"}))->capture_default_str();
  }

  TrainConfig Resolved() const {
    TrainConfig c = config;
    c.usage = ParseSampleUsage(usage);
    return c;
  }
};

ojson TrainConfigJson(const TrainConfig& c, const std::string& mode) {
  return ojson{{"epochs", c.epochs},
               {"batch", c.batch_size},
               {"tau", c.tau},
               {"sigma", c.sigma},
               {"k", c.k},
               {"lr", c.lr},
               {"wd", c.weight_decay},
               {"seed", c.seed},
               {"d_proj", c.d_proj},
               {"hidden_dim", c.hidden_dim},
               {"freeze_text", c.freeze_text_projector},
               {"usage", std::string(SampleUsageName(c.usage))},
               {"mode", mode}};
}

void EnsureParent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  SynthConfig config;
  std::string out;
};

void RegisterSynth(CLI::App* app, SynthArgs& a) {
  SynthConfig& c = a.config;
  app->add_option("--out", a.out, "Output directory")->required();
  app->add_option("--n", c.n, "Samples")->check(CLI::NonNegativeNumber)->capture_default_str();
  app->add_option("--d-img", c.d_img)->capture_default_str();
  app->add_option("--d-txt", c.d_txt)->capture_default_str();
  app->add_option("--d-eval", c.d_eval)->capture_default_str();
  app->add_option("-G,--factual-factors", c.num_factual)->capture_default_str();
  app->add_option("-H,--emotional-factors", c.num_emotional)->capture_default_str();
  app->add_option("--noise", c.noise_std)->check(CLI::NonNegativeNumber)->capture_default_str();
  app->add_option("--p-factual", c.p_factual_mismatch, "Factual mismatch probability")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app->add_option("--p-emotional", c.p_emotional_mismatch, "Emotional mismatch probability")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app->add_option("--seed", c.seed)->capture_default_str();
  app->add_flag("--evaluator-embeddings", c.evaluator_embeddings,
                "Emit evaluator embeddings instead of scores");
  app->add_option("--prompts-per-class", c.prompts_per_class)->capture_default_str();
}

int RunSynth(const SynthArgs& a, std::ostream& out) {
  const SynthCorpus corpus = GenerateSynthetic(a.config);
  const fs::path dir = a.out;
  WriteSyntheticCorpus(dir, corpus);
  const SynthConfig& c = a.config;
  RunManifest run("synth");
  run.SetConfig(ojson{{"n", c.n},
                      {"d_img", c.d_img},
                      {"d_txt", c.d_txt},
                      {"d_eval", c.d_eval},
                      {"G", c.num_factual},
                      {"H", c.num_emotional},
                      {"noise", c.noise_std},
                      {"p_factual", c.p_factual_mismatch},
                      {"p_emotional", c.p_emotional_mismatch},
                      {"seed", c.seed},
                      {"evaluator_embeddings", c.evaluator_embeddings},
                      {"prompts_per_class", c.prompts_per_class}});
  run.AddOutput("dataset", dir);
  run.Write(ManifestPathFor(dir, true));
  size_t strong = 0;
  for (PartitionTag t : corpus.truth.tags) strong += t == PartitionTag::kStrongCoupled;
  out << "synth: wrote " << corpus.dataset.size() << " samples to " << dir.generic_string()
      << " (true strong " << strong << ")\n";
  return kExitOk;
}

// ------------------------------------------------------------ partition

struct PartitionArgs {
  DataArgs data;
  double sigma = 0.7;
  std::optional<double> emotional_sigma;
  std::string mode = "both";
  std::string out;
};

void RegisterPartition(CLI::App* app, PartitionArgs& a) {
  a.data.Register(app);
  app->add_option("--sigma", a.sigma, "Match threshold")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app->add_option("--emotional-sigma", a.emotional_sigma, "Separate emotional threshold")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--mode", a.mode)
      ->check(CLI::IsMember({"none", "factual", "emotional", "both"}))->capture_default_str();
  app->add_option("--out", a.out, "Partition TSV")->required();
}

int RunPartition(const PartitionArgs& a, std::ostream& out) {
  RunManifest run("partition");
  const PairedDataset dataset = a.data.Load(run);
  PartitionOptions opts;
  opts.sigma = a.sigma;
  opts.emotional_sigma = a.emotional_sigma;
  const PartitionAssignment assignment =
      ApplyPartitionMode(PartitionDataset(dataset, opts), ParsePartitionMode(a.mode));
  const fs::path path = a.out;
  EnsureParent(path);
  WritePartitionTsv(path, dataset, assignment);
  ojson config{{"sigma", a.sigma}, {"mode", a.mode}};
  config["emotional_sigma"] = a.emotional_sigma ? ojson(*a.emotional_sigma) : ojson(nullptr);
  run.SetConfig(config);
  run.AddOutput("partition", path);
  run.Write(ManifestPathFor(path, false));
  const PartitionSummary s = SummarizePartition(assignment);
  out << "partition: fractions strong=" << s.strong << " partial_emotional=" << s.partial_emotional
      << " partial_factual=" << s.partial_factual << " weak=" << s.weak << "\n";
  return kExitOk;
}

// -------------------------------------------------------------- cluster

struct ClusterArgs {
  DataArgs data;
  KMeansOptions kmeans;
  std::string out;
};

void RegisterCluster(CLI::App* app, ClusterArgs& a) {
  a.data.Register(app);
  app->add_option("--k", a.kmeans.k)->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--seed", a.kmeans.seed)->capture_default_str();
  app->add_option("--restarts", a.kmeans.restarts)->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--max-iter", a.kmeans.max_iter)->check(CLI::PositiveNumber)->capture_default_str();
  app->add_flag("--normalize", a.kmeans.normalize, "Cluster L2-normalized rows");
  app->add_option("--out", a.out, "Pseudo-label TSV")->required();
}

int RunCluster(const ClusterArgs& a, std::ostream& out) {
  RunManifest run("cluster");
  const PairedDataset dataset = a.data.Load(run);
  const PseudoLabels labels = AssignPseudoLabels(dataset, a.kmeans);
  const fs::path path = a.out;
  EnsureParent(path);
  WritePseudoLabelsTsv(path, dataset, labels);
  run.SetConfig(ojson{{"k", a.kmeans.k},
                      {"seed", a.kmeans.seed},
                      {"restarts", a.kmeans.restarts},
                      {"max_iter", a.kmeans.max_iter},
                      {"tol", a.kmeans.tol},
                      {"normalize", a.kmeans.normalize}});
  run.AddOutput("pseudo_labels", path);
  run.Write(ManifestPathFor(path, false));
  out << "cluster: k=" << labels.k << " over " << dataset.size() << " samples\n";
  return kExitOk;
}

// ---------------------------------------------------------------- train

struct TrainCmdArgs {
  DataArgs data;
  TrainArgs train;
  std::string partition;
  std::string labels;
  std::string out;
  std::string resume;
  std::string dump_pairs;
  bool record_timings = false;
};

void RegisterTrain(CLI::App* app, TrainCmdArgs& a) {
  a.data.Register(app);
  a.train.Register(app);
  app->add_option("--partition", a.partition, "Partition TSV (default: computed with --sigma)");
  app->add_option("--labels", a.labels, "Pseudo-label TSV (default: computed with --k)");
  app->add_option("--out", a.out, "Output directory")->required();
  app->add_option("--resume", a.resume, "Checkpoint directory to continue from");
  app->add_option("--dump-pairs", a.dump_pairs, "Write the first epoch's pair sets as TSV");
  app->add_flag("--record-timings", a.record_timings, "Store wall-clock timings in run.json");
}

void DumpPairs(const fs::path& path, const PairedDataset& dataset,
               const PartitionAssignment& assignment, const PseudoLabels& labels,
               const TrainConfig& config) {
  const TrainState state = InitTrainState(dataset, config);
  std::string text;
  std::array<bool, 4> seen{};
  for (const PlannedBatch& batch : PlanEpoch(assignment, config, 0)) {
    const size_t t = static_cast<size_t>(batch.tag);
    if (seen[t]) continue;
    seen[t] = true;
    const BatchFeatures features = ProjectBatch(state.projectors, dataset, batch.indices, labels);
    text += "# partition=" + std::string(PartitionTagName(batch.tag)) + " strategy=" +
            std::string(PairStrategyName(StrategyForTag(batch.tag))) + " samples=";
    for (size_t i = 0; i < batch.indices.size(); ++i) {
      text += (i ? "," : "") + dataset.samples[batch.indices[i]].id;
    }
    text += "\n" + PairSpecToTsv(BuildPairs(StrategyForTag(batch.tag), features));
  }
  WriteFileAtomically(path, text);
}

int RunTrain(const TrainCmdArgs& a, std::ostream& out, std::ostream& err) {
  Stopwatch total;
  RunManifest run("train");
  const PairedDataset dataset = a.data.Load(run);
  TrainConfig config = a.train.Resolved();

  PartitionAssignment assignment;
  if (!a.partition.empty()) {
    assignment = ReadPartitionTsv(a.partition, dataset);
    run.AddInput("partition", a.partition);
  } else {
    PartitionOptions popts;
    popts.sigma = config.sigma;
    assignment = PartitionDataset(dataset, popts);
  }
  assignment = ApplyPartitionMode(assignment, ParsePartitionMode(a.train.mode));

  PseudoLabels labels;
  if (!a.labels.empty()) {
    labels = ReadPseudoLabelsTsv(a.labels, dataset);
    run.AddInput("pseudo_labels", a.labels);
    config.k = labels.k;
  } else {
    KMeansOptions kopts;
    kopts.k = config.k;
    kopts.seed = config.seed;
    labels = AssignPseudoLabels(dataset, kopts);
  }
  config.Validate();

  const fs::path dir = a.out;
  fs::create_directories(dir);
  if (!a.dump_pairs.empty()) {
    EnsureParent(a.dump_pairs);
    DumpPairs(a.dump_pairs, dataset, assignment, labels, config);
    run.AddOutput("pairs", a.dump_pairs);
  }

  TrainOptions topts;
  topts.checkpoint_dir = dir / "checkpoint";
  if (!a.resume.empty()) {
    topts.resume_from = fs::path(a.resume);
    run.AddInput("resume", a.resume);
  }
  topts.warn = [&err](const std::string& msg) { err << "warning: " << OneLine(msg) << "\n"; };
  topts.on_epoch = [&out](const EpochLog& e) {
    out << "epoch " << e.epoch << " " << PhaseName(e.phase) << " total=" << FormatDouble(e.total)
        << "\n";
  };
  Stopwatch train_clock;
  const TrainState state = Train(dataset, assignment, labels, config, topts);
  const double train_seconds = train_clock.Seconds();
  if (!fs::exists(dir / "checkpoint")) SaveCheckpoint(dir / "checkpoint", state, config);

  std::string log;
  for (const EpochLog& e : state.log) log += EpochLogToJson(e) + "\n";
  WriteFileAtomically(dir / "log.jsonl", log);
  WriteEmbeddingMatrix(dir / "image_features.emb",
                       EmbeddingMatrix::FromMatrix(ProjectImages(state.projectors, dataset)));

  run.SetConfig(TrainConfigJson(config, a.train.mode));
  run.AddOutput("log", dir / "log.jsonl");
  run.AddOutput("checkpoint", dir / "checkpoint");
  run.AddOutput("image_features", dir / "image_features.emb");
  if (a.record_timings) {
    run.AddTiming("train", train_seconds);
    run.AddTiming("total", total.Seconds());
  }
  run.Write(ManifestPathFor(dir, true));
  out << "train: " << state.epochs_completed << " epochs, " << state.global_step
      << " steps\n";
  return kExitOk;
}

// ------------------------------------------------------- eval, zeroshot

struct ZeroShotArgs {
  DataArgs data;
  std::string checkpoint;
  std::string prompts;
  std::string prompt_classes;
  std::string out;
};

void RegisterZeroShot(CLI::App* app, ZeroShotArgs& a, bool data_required) {
  a.data.Register(app, data_required);
  app->add_option("--checkpoint", a.checkpoint, "Training checkpoint directory");
  app->add_option("--prompts", a.prompts, "Prompt embeddings (default <data>/prompts.emb)");
  app->add_option("--prompt-classes", a.prompt_classes,
                  "Prompt class TSV (default <data>/prompts.tsv)");
}

struct EvalArgs {
  std::string probe = "linear";
  std::string features;
  std::string labels;
  ZeroShotArgs zeroshot;
  double test_fraction = 0.3;
  uint64_t seed = 0;
  ProbeOptions probe_options;
  std::string out;
};

void RegisterEval(CLI::App* app, EvalArgs& a) {
  app->add_option("--probe", a.probe)
      ->check(CLI::IsMember({"linear", "zeroshot"}))->capture_default_str();
  app->add_option("--features", a.features, "Feature matrix, one row per sample");
  app->add_option("--labels", a.labels, "Manifest carrying the labels");
  RegisterZeroShot(app, a.zeroshot, false);
  app->add_option("--test-fraction", a.test_fraction)
      ->check(CLI::Range(0.01, 0.99))->capture_default_str();
  app->add_option("--seed", a.seed)->capture_default_str();
  app->add_option("--probe-epochs", a.probe_options.max_epochs)
      ->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--probe-lr", a.probe_options.lr)
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  app->add_option("--out", a.out, "Metric report (JSON)")->required();
}

Matrix RowsOf(const Matrix& m, const std::vector<size_t>& rows) {
  Matrix r(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (size_t i = 0; i < rows.size(); ++i) r.row(i) = m.row(rows[i]);
  return r;
}

MetricReport LinearProbeReport(const Matrix& features, const std::vector<PairedSample>& samples,
                               const EvalArgs& a) {
  if (static_cast<size_t>(features.rows()) != samples.size()) {
    throw Error(ErrorCode::kDimMismatch,
                "features have " + std::to_string(features.rows()) + " rows but manifest has " +
                    std::to_string(samples.size()) + " samples");
  }
  if (samples.empty()) throw Error(ErrorCode::kEmptyDataset, "no samples to evaluate");
  const size_t kind = samples.front().label.index();
  for (const PairedSample& s : samples) {
    if (s.label.index() != kind || kind == 0) {
      throw Error(ErrorCode::kParseError,
                  "sample '" + s.id + "': all samples need labels of one kind");
    }
  }
  std::vector<size_t> train, test;
  SplitIndices(samples.size(), a.test_fraction, a.seed, train, test);
  ProbeOptions popts = a.probe_options;
  popts.seed = a.seed;
  const Matrix x_train = RowsOf(features, train);
  const Matrix x_test = RowsOf(features, test);

  if (kind == 1) {
    std::vector<int> y_train, y_test;
    int classes = 0;
    for (const PairedSample& s : samples) classes = std::max(classes, std::get<int>(s.label) + 1);
    for (size_t i : train) y_train.push_back(std::get<int>(samples[i].label));
    for (size_t i : test) y_test.push_back(std::get<int>(samples[i].label));
    popts.num_classes = classes;
    const LinearClassifier clf = TrainLinearProbe(x_train, y_train, popts);
    return SingleLabelReport(clf.Predict(x_test), y_test);
  }
  if (kind == 2) {
    std::vector<std::vector<int>> y_train, y_test;
    int classes = 0;
    for (const PairedSample& s : samples) {
      for (int c : std::get<std::vector<int>>(s.label)) classes = std::max(classes, c + 1);
    }
    for (size_t i : train) y_train.push_back(std::get<std::vector<int>>(samples[i].label));
    for (size_t i : test) y_test.push_back(std::get<std::vector<int>>(samples[i].label));
    const MultiLabelProbe probe = TrainMultiLabelProbe(x_train, y_train, classes, popts);
    return MultiLabelReport(probe.Scores(x_test), y_test);
  }
  auto targets = [&](const std::vector<size_t>& rows) {
    Matrix t(static_cast<Eigen::Index>(rows.size()), 3);
    for (size_t r = 0; r < rows.size(); ++r) {
      const VadTriple& v = std::get<VadTriple>(samples[rows[r]].label);
      for (int c = 0; c < 3; ++c) t(r, c) = v[c];
    }
    return t;
  };
  const LinearRegressor reg = FitLinearRegressor(x_train, targets(train));
  return RegressionReport(reg.Predict(x_test), targets(test));
}

MetricReport ZeroShotReport(const ZeroShotArgs& a, RunManifest& run, ojson& config) {
  if (a.data.dir.empty()) throw Error(ErrorCode::kInvalidArgument, "--data is required");
  if (a.checkpoint.empty()) throw Error(ErrorCode::kInvalidArgument, "--checkpoint is required");
  const PairedDataset dataset = a.data.Load(run);
  const fs::path prompts_path =
      a.prompts.empty() ? fs::path(a.data.dir) / "prompts.emb" : fs::path(a.prompts);
  const fs::path classes_path = a.prompt_classes.empty() ? fs::path(a.data.dir) / "prompts.tsv"
                                                         : fs::path(a.prompt_classes);
  const TrainConfig tconfig = LoadCheckpointConfig(a.checkpoint);
  const TrainState state = LoadCheckpoint(a.checkpoint, tconfig);
  run.AddInput("checkpoint", a.checkpoint);
  run.AddInput("prompts", prompts_path);
  run.AddInput("prompt_classes", classes_path);

  const Matrix prompts = LoadEmbeddingMatrix(prompts_path).ToMatrix();
  const TsvTable table = ReadTsv(classes_path, {"row", "class"});
  std::vector<int> prompt_classes(static_cast<size_t>(prompts.rows()), -1);
  for (const auto& row : table.rows) {
    const long long r = ParseInt(row[0]);
    if (r < 0 || r >= prompts.rows()) {
      throw Error(ErrorCode::kIndexOutOfBounds, "prompt row " + row[0] + " out of range");
    }
    prompt_classes[static_cast<size_t>(r)] = static_cast<int>(ParseInt(row[1]));
  }
  for (int c : prompt_classes) {
    if (c < 0) throw Error(ErrorCode::kParseError, "prompt row without a class");
  }
  const std::vector<int> labels = ClassLabels(dataset);
  int classes = *std::max_element(prompt_classes.begin(), prompt_classes.end()) + 1;
  for (int l : labels) classes = std::max(classes, l + 1);
  const std::vector<int> preds = ZeroShotClassify(dataset.ImageEmbeddings(), prompts,
                                                  prompt_classes, classes, state.projectors);
  config["num_classes"] = classes;
  return SingleLabelReport(preds, labels);
}

int WriteReport(const MetricReport& report, const fs::path& path, RunManifest& run,
                std::ostream& out) {
  EnsureParent(path);
  WriteFileAtomically(path, report.ToJson() + "\n");
  run.AddOutput("report", path);
  run.Write(ManifestPathFor(path, false));
  out << TaskKindName(report.kind) << ":";
  for (const auto& [name, value] : report.values) out << " " << name << "=" << FormatDouble(value);
  out << "\n";
  return kExitOk;
}

int RunEval(const EvalArgs& a, std::ostream& out) {
  RunManifest run("eval");
  ojson config{{"probe", a.probe}};
  if (a.probe == "zeroshot") {
    const MetricReport report = ZeroShotReport(a.zeroshot, run, config);
    run.SetConfig(config);
    return WriteReport(report, a.out, run, out);
  }
  if (a.features.empty()) throw Error(ErrorCode::kInvalidArgument, "--features is required");
  fs::path manifest = a.labels;
  if (manifest.empty()) {
    if (a.zeroshot.data.dir.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--labels or --data is required");
    }
    manifest = a.zeroshot.data.Paths().manifest;
  }
  const Matrix features = LoadEmbeddingMatrix(a.features).ToMatrix();
  const std::vector<PairedSample> samples = LoadManifest(manifest);
  run.AddInput("features", a.features);
  run.AddInput("labels", manifest);
  const MetricReport report = LinearProbeReport(features, samples, a);
  config["test_fraction"] = a.test_fraction;
  config["seed"] = a.seed;
  config["probe_epochs"] = a.probe_options.max_epochs;
  config["probe_lr"] = a.probe_options.lr;
  config["probe_tol"] = a.probe_options.tol;
  run.SetConfig(config);
  return WriteReport(report, a.out, run, out);
}

int RunZeroShot(const ZeroShotArgs& a, const std::string& out_path, std::ostream& out) {
  RunManifest run("zeroshot");
  ojson config = ojson::object();
  const MetricReport report = ZeroShotReport(a, run, config);
  run.SetConfig(config);
  return WriteReport(report, out_path, run, out);
}

// --------------------------------------------------------------- ablate

struct AblateArgs {
  DataArgs data;
  TrainArgs train;
  std::string axis;
  std::vector<std::string> values;
  double test_fraction = 0.3;
  std::string out;
};

void RegisterAblate(CLI::App* app, AblateArgs& a) {
  a.data.Register(app);
  a.train.Register(app);
  app->add_option("--axis", a.axis, "Sweep axis")
      ->required()
      ->check(CLI::IsMember({"partition_mode", "sample_usage", "sigma", "k", "tau"}));
  app->add_option("--values", a.values, "Override the default grid")->delimiter(',');
  app->add_option("--test-fraction", a.test_fraction)
      ->check(CLI::Range(0.01, 0.99))->capture_default_str();
  app->add_option("--out", a.out, "Sweep TSV")->required();
}

std::vector<std::string> DefaultGrid(const std::string& axis) {
  if (axis == "partition_mode") return {"none", "factual", "emotional", "both"};
  if (axis == "sample_usage") return {"strong", "strong_partial", "all"};
  if (axis == "sigma") return {"0", "0.3", "0.5", "0.7", "0.9", "1"};
  if (axis == "k") return {"2", "3", "6", "10", "15", "25"};
  return {"0.01", "0.03", "0.05", "0.07", "0.5", "1"};
}

ExperimentConfig CellConfig(const AblateArgs& a, const std::string& value) {
  ExperimentConfig ec;
  ec.train = a.train.Resolved();
  ec.partition_mode = ParsePartitionMode(a.train.mode);
  ec.test_fraction = a.test_fraction;
  if (a.axis == "partition_mode") {
    ec.partition_mode = ParsePartitionMode(value);
  } else if (a.axis == "sample_usage") {
    ec.train.usage = ParseSampleUsage(value);
  } else if (a.axis == "sigma") {
    ec.train.sigma = ParseDouble(value);
  } else if (a.axis == "k") {
    ec.train.k = static_cast<int>(ParseInt(value));
  } else {
    ec.train.tau = ParseDouble(value);
  }
  return ec;
}

int RunAblate(const AblateArgs& a, std::ostream& out, std::ostream& err) {
  RunManifest run("ablate");
  const PairedDataset dataset = a.data.Load(run);
  const std::vector<std::string> grid = a.values.empty() ? DefaultGrid(a.axis) : a.values;
  TsvWriter w({"axis", "value", "status", "probe_accuracy", "weighted_f1", "frac_strong",
               "frac_partial_emotional", "frac_partial_factual", "frac_weak",
               "final_total_loss"});
  w.SetMeta("axis", a.axis);
  w.SetMeta("seed", std::to_string(a.train.config.seed));
  size_t failed = 0;
  for (const std::string& value : grid) {
    std::vector<std::string> row{a.axis, value};
    try {
      const ExperimentConfig ec = CellConfig(a, value);
      const ExperimentResult r = RunExperiment(dataset, ec, [&](const std::string& msg) {
        err << "warning: " << a.axis << "=" << value << ": " << OneLine(msg) << "\n";
      });
      row.insert(row.end(),
                 {"ok", FormatDouble(r.probe_accuracy), FormatDouble(r.probe_weighted_f1),
                  FormatDouble(r.summary.strong), FormatDouble(r.summary.partial_emotional),
                  FormatDouble(r.summary.partial_factual), FormatDouble(r.summary.weak),
                  r.log.empty() ? "NA" : FormatDouble(r.log.back().total)});
    } catch (const Error& e) {
      ++failed;
      row.push_back("failed:" + std::string(ErrorCodeName(e.code())));
      row.insert(row.end(), 7, "NA");
      err << "warning: " << a.axis << "=" << value << " failed: " << OneLine(e.what()) << "\n";
    }
    out << a.axis << "=" << value << " " << row[2] << " acc=" << row[3] << "\n";
    w.AddRow(std::move(row));
  }
  const fs::path path = a.out;
  EnsureParent(path);
  w.Write(path);
  ojson config = TrainConfigJson(a.train.Resolved(), a.train.mode);
  config["axis"] = a.axis;
  config["values"] = grid;
  config["test_fraction"] = a.test_fraction;
  run.SetConfig(config);
  run.AddOutput("sweep", path);
  run.Write(ManifestPathFor(path, false));
  out << "ablate: " << grid.size() << " cells, " << failed << " failed\n";
  return kExitOk;
}

// --------------------------------------------------------------- report

struct ReportArgs {
  std::string in;
  std::string out;
  std::string plot;
  std::string y = "probe_accuracy";
};

void RegisterReport(CLI::App* app, ReportArgs& a) {
  app->add_option("--in", a.in, "Metric report (.json), sweep/partition table (.tsv) or log (.jsonl)")
      ->required();
  app->add_option("--out", a.out, "Text output (default stdout)");
  app->add_option("--plot", a.plot, "SVG line chart of a sweep table");
  app->add_option("--y", a.y, "Column plotted by --plot")->capture_default_str();
}

int RunReport(const ReportArgs& a, std::ostream& out) {
  const fs::path in = a.in;
  const std::string bytes = ReadFileBytes(in);
  const std::string ext = in.extension().string();
  std::string text;
  std::optional<TsvTable> table;
  if (ext == ".jsonl") {
    text = RenderTrainLog(bytes);
  } else if (ext == ".json") {
    text = RenderMetricReport(MetricReport::FromJson(bytes));
  } else {
    table = ParseTsv(bytes);
    text = RenderTsvTable(*table);
  }
  if (!a.plot.empty()) {
    if (!table) throw Error(ErrorCode::kInvalidArgument, "--plot needs a sweep table");
    EnsureParent(a.plot);
    WriteFileAtomically(a.plot, SweepSvg(*table, "value", a.y));
  }
  if (a.out.empty()) {
    out << text;
  } else {
    EnsureParent(a.out);
    WriteFileAtomically(a.out, text);
  }
  return kExitOk;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadConfig:
    case ErrorCode::kInvalidArgument:
      return kExitUsageError;
    default:
      return kExitDataError;
  }
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partitioned affective contrastive learning toolkit", "pacl"};
  app.set_config("--config", "", "TOML or INI config file; command-line flags take precedence");
  app.require_subcommand(1);
  app.set_version_flag("--version", PACL_VERSION_STRING);

  SynthArgs synth;
  PartitionArgs partition;
  ClusterArgs cluster;
  TrainCmdArgs train;
  EvalArgs eval;
  ZeroShotArgs zeroshot;
  std::string zeroshot_out;
  AblateArgs ablate;
  ReportArgs report;

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  RegisterSynth(synth_cmd, synth);
  auto* partition_cmd = app.add_subcommand("partition", "Split samples by coupling");
  RegisterPartition(partition_cmd, partition);
  auto* cluster_cmd = app.add_subcommand("cluster", "K-means pseudo-labels per modality");
  RegisterCluster(cluster_cmd, cluster);
  auto* train_cmd = app.add_subcommand("train", "Progressive contrastive training");
  RegisterTrain(train_cmd, train);
  auto* eval_cmd = app.add_subcommand("eval", "Linear-probe or zero-shot evaluation");
  RegisterEval(eval_cmd, eval);
  auto* zeroshot_cmd = app.add_subcommand("zeroshot", "Prompt-based zero-shot classification");
  RegisterZeroShot(zeroshot_cmd, zeroshot, true);
  zeroshot_cmd->get_option("--checkpoint")->required();
  zeroshot_cmd->add_option("--out", zeroshot_out, "Metric report (JSON)")->required();
  auto* ablate_cmd = app.add_subcommand("ablate", "Sweep one axis and probe each cell");
  RegisterAblate(ablate_cmd, ablate);
  auto* report_cmd = app.add_subcommand("report", "Render reports, tables and sweep plots");
  RegisterReport(report_cmd, report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << OneLine(e.what()) << "\n";
    return kExitUsageError;
  }

  try {
    if (synth_cmd->parsed()) return RunSynth(synth, out);
    if (partition_cmd->parsed()) return RunPartition(partition, out);
    if (cluster_cmd->parsed()) return RunCluster(cluster, out);
    if (train_cmd->parsed()) return RunTrain(train, out, err);
    if (eval_cmd->parsed()) return RunEval(eval, out);
    if (zeroshot_cmd->parsed()) return RunZeroShot(zeroshot, zeroshot_out, out);
    if (ablate_cmd->parsed()) return RunAblate(ablate, out, err);
    if (report_cmd->parsed()) return RunReport(report, out);
  } catch (const Error& e) {
    err << "error: " << ErrorCodeName(e.code()) << ": " << OneLine(e.what()) << "\n";
    return ExitCodeFor(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: io: " << OneLine(e.what()) << "\n";
    return kExitDataError;
  }
  err << "error: usage: no subcommand\n";
  return kExitUsageError;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("pacl");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pacl::cli
