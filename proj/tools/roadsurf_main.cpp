// Command-line front end: synthetic scenario generation, training, streaming
// classification, evaluation and latency benchmarking.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "roadsurf/eval.hpp"
#include "roadsurf/io.hpp"
#include "roadsurf/pipeline.hpp"
#include "roadsurf/synthgen.hpp"
#include "roadsurf/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace roadsurf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
  std::uint64_t seed = 1;
  std::string config_path;
};

// Configuration layering: defaults < config file < explicit flags. The config
// file may override any of the keys below.
struct FileConfig {
  TrainConfig train;
  FusionConfig fusion;
  CorpusConfig corpus;
};

void apply_config_file(const std::string& path, FileConfig& cfg) {
  if (path.empty()) return;
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  const json j = json::parse(is);
  if (j.contains("lambda")) cfg.train.lambda = j["lambda"];
  if (j.contains("batch_size")) cfg.train.batch_size = j["batch_size"];
  if (j.contains("max_epochs")) cfg.train.max_epochs = j["max_epochs"];
  if (j.contains("patience")) cfg.train.patience = j["patience"];
  if (j.contains("stack_steps")) cfg.fusion.stack_steps = j["stack_steps"];
  if (j.contains("sample_time")) cfg.fusion.sample_time = j["sample_time"];
  if (j.contains("beta1")) cfg.fusion.beta1 = j["beta1"];
  if (j.contains("train_streams_per_class"))
    cfg.corpus.train_streams_per_class = j["train_streams_per_class"];
  if (j.contains("val_streams_per_class"))
    cfg.corpus.val_streams_per_class = j["val_streams_per_class"];
  if (j.contains("frames_per_stream"))
    cfg.corpus.frames_per_stream = j["frames_per_stream"];
}

fs::path model_path(const fs::path& dir, Region r) {
  return dir / (std::string("model_") + to_string(r) + ".rsnm");
}

PipelineModels load_models(const fs::path& dir) {
  return PipelineModels{load_model(model_path(dir, Region::LN)),
                        load_model(model_path(dir, Region::RN)),
                        load_model(model_path(dir, Region::LF)),
                        load_model(model_path(dir, Region::RF))};
}

void print_class_counts(const Dataset& ds, const std::string& name) {
  std::array<std::array<long, kNumClasses>, 4> counts{};
  for (const auto& s : ds.samples) {
    Eigen::Index c = 0;
    s.target.maxCoeff(&c);
    counts[static_cast<std::size_t>(s.region)][static_cast<std::size_t>(c)]++;
  }
  std::cout << name << " samples per class (rows: region)\n";
  for (Region r : kAllRegions) {
    std::cout << "  " << to_string(r) << ":";
    for (long n : counts[static_cast<std::size_t>(r)]) std::cout << " " << n;
    std::cout << "\n";
  }
}

json metrics_to_json(const MetricsReport& m) {
  json j;
  j["accuracy"] = m.accuracy;
  for (int c = 0; c < kNumClasses; ++c) {
    const auto& name = class_names()[static_cast<std::size_t>(c)];
    j["precision"][name] = m.precision(c);
    j["recall"][name] = m.recall(c);
  }
  j["risk_snow_as_clear"] = m.risk_snow_as_clear;
  j["risk_wet_as_dry"] = m.risk_wet_as_dry;
  return j;
}

void print_confusion(const ConfusionMatrix& cm, const std::string& title) {
  std::cout << title << " (rows: predicted, cols: actual)\n";
  for (int r = 0; r < kNumClasses; ++r) {
    std::cout << "  " << std::setw(12) << class_names()[static_cast<std::size_t>(r)];
    for (int c = 0; c < kNumClasses; ++c)
      std::cout << std::setw(7) << cm.counts(r, c);
    std::cout << "\n";
  }
}

void emit_csv(const ConfusionMatrix& cm, const fs::path& path) {
  std::ofstream os(path);
  os << "predicted";
  for (const auto& n : class_names()) os << "," << n;
  os << "\n";
  for (int r = 0; r < kNumClasses; ++r) {
    os << class_names()[static_cast<std::size_t>(r)];
    for (int c = 0; c < kNumClasses; ++c) os << "," << cm.counts(r, c);
    os << "\n";
  }
}

int cmd_simulate(const CommonOpts& common, const FileConfig& fc,
                 const std::string& spec_path, const std::string& profiles_path,
                 const fs::path& out_dir) {
  ProfileMap profiles =
      profiles_path.empty() ? default_profiles() : load_profiles(profiles_path);
  fs::create_directories(out_dir);

  if (!spec_path.empty()) {
    ScenarioSpec spec = load_scenario(spec_path);
    spec.seed = common.seed;
    const LabeledStream stream = generate_stream(spec, profiles);
    write_stream_jsonl(stream.frames, out_dir / "stream.jsonl");
    write_labels_jsonl(stream, out_dir / "stream.labels.jsonl");
    const Dataset ds = assemble_dataset(stream);
    save_dataset(ds, out_dir / "dataset.rsds");
    print_class_counts(ds, "stream");
    return kExitOk;
  }

  CorpusConfig cc = fc.corpus;
  cc.seed = common.seed;
  const Corpus corpus = generate_corpus(cc, profiles);
  save_dataset(corpus.train, out_dir / "train.rsds");
  save_dataset(corpus.val, out_dir / "val.rsds");
  save_profiles(profiles, out_dir / "profiles.json");
  fs::create_directories(out_dir / "streams");
  for (std::size_t i = 0; i < corpus.val_streams.size(); ++i) {
    const auto& stream = corpus.val_streams[i];
    const std::string base = "val_" + std::to_string(i);
    write_stream_jsonl(stream.frames, out_dir / "streams" / (base + ".jsonl"));
    write_labels_jsonl(stream, out_dir / "streams" / (base + ".labels.jsonl"));
  }
  print_class_counts(corpus.train, "train");
  print_class_counts(corpus.val, "val");
  return kExitOk;
}

int cmd_train(const CommonOpts& common, const FileConfig& fc,
              const fs::path& corpus_dir, const std::string& region_arg,
              const fs::path& out_dir, bool verbose) {
  const Dataset train_ds = load_dataset(corpus_dir / "train.rsds");
  const Dataset val_ds = load_dataset(corpus_dir / "val.rsds");
  fs::create_directories(out_dir);

  std::vector<Region> regions;
  if (region_arg == "all")
    regions.assign(kAllRegions.begin(), kAllRegions.end());
  else
    regions.push_back(region_from_string(region_arg));

  TrainConfig cfg = fc.train;
  cfg.rng_seed = common.seed;
  cfg.verbose = verbose;
  for (Region r : regions) {
    const NetworkModel model =
        train(slice_region(train_ds, r), slice_region(val_ds, r), r, cfg);
    save_model(model, model_path(out_dir, r));
    const auto cm = evaluate_model(model, slice_region(val_ds, r));
    std::cout << to_string(r) << " val accuracy "
              << compute_metrics(cm).accuracy << "\n";
  }
  return kExitOk;
}

int cmd_run(const fs::path& models_dir, const fs::path& stream_path,
            const fs::path& out_path, bool eq11_literal) {
  const PipelineModels models = load_models(models_dir);
  const auto frames = read_stream_jsonl(stream_path);
  FusionConfig fusion;
  fusion.literal_normalizer = eq11_literal;
  StreamPipeline pipeline(models, {}, fusion);
  std::ofstream os(out_path);
  if (!os) throw std::runtime_error("cannot open for write: " + out_path.string());
  for (const auto& frame : frames) {
    const auto out = pipeline.process(frame);
    if (!out) continue;
    os << to_output_record((*out)[0]) << "\n"
       << to_output_record((*out)[1]) << "\n";
  }
  return kExitOk;
}

struct StreamCorpus {
  std::vector<LabeledStream> streams;
};

StreamCorpus load_val_streams(const fs::path& corpus_dir) {
  StreamCorpus sc;
  std::vector<fs::path> paths;
  for (const auto& e : fs::directory_iterator(corpus_dir / "streams"))
    if (e.path().extension() == ".jsonl" &&
        e.path().stem().string().find(".labels") == std::string::npos)
      paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    LabeledStream s;
    s.frames = read_stream_jsonl(p);
    fs::path lbl = p;
    lbl.replace_extension(".labels.jsonl");
    s.labels = read_labels_jsonl(lbl);
    if (s.labels.size() != s.frames.size())
      throw std::runtime_error("labels/frames length mismatch for " + p.string());
    sc.streams.push_back(std::move(s));
  }
  if (sc.streams.empty())
    throw std::runtime_error("no validation streams under " +
                             (corpus_dir / "streams").string());
  return sc;
}

int cmd_eval(const CommonOpts& common, const FileConfig& fc,
             const fs::path& models_dir, const fs::path& corpus_dir,
             const std::string& baseline, const std::string& ablation,
             bool eq11_literal, bool csv, const fs::path& out_path) {
  const Dataset val_ds = load_dataset(corpus_dir / "val.rsds");
  json report;

  ConfusionMatrix cm_ln, cm_rn;
  if (baseline == "knn") {
    const Dataset train_ds = load_dataset(corpus_dir / "train.rsds");
    const auto knn_ln = KnnClassifier::fit(slice_region(train_ds, Region::LN));
    const auto knn_rn = KnnClassifier::fit(slice_region(train_ds, Region::RN));
    const auto sc = load_val_streams(corpus_dir);
    const auto acc = score_streams_knn(knn_ln, knn_rn, sc.streams);
    cm_ln = acc.fused_ln;
    cm_rn = acc.fused_rn;
    report["method"] = "knn";
  } else {
    const PipelineModels models = load_models(models_dir);
    FusionConfig fusion = fc.fusion;
    fusion.literal_normalizer = eq11_literal;
    StreamPipeline pipeline(models, {}, fusion);
    pipeline.fusion_enabled = baseline != "twm";
    const auto sc = load_val_streams(corpus_dir);
    const auto acc = score_streams(pipeline, sc.streams);
    cm_ln = acc.fused_ln;
    cm_rn = acc.fused_rn;
    report["method"] = baseline.empty() ? "fused" : baseline;
  }

  report["LN"] = metrics_to_json(compute_metrics(cm_ln));
  report["RN"] = metrics_to_json(compute_metrics(cm_rn));
  print_confusion(cm_ln, "LN");
  print_confusion(cm_rn, "RN");

  if (ablation == "velocity") {
    const Dataset train_ds = load_dataset(corpus_dir / "train.rsds");
    TrainConfig cfg = fc.train;
    cfg.rng_seed = common.seed;
    for (Region r : {Region::LN, Region::RN}) {
      const auto train_r = slice_region(train_ds, r);
      const auto val_r = slice_region(val_ds, r);
      const auto with_v = train(train_r, val_r, r, cfg);
      const auto without_v =
          train(train_r.without_velocity(), val_r.without_velocity(), r, cfg);
      const double acc_with =
          compute_metrics(evaluate_model(with_v, val_r)).accuracy;
      const double acc_without =
          compute_metrics(evaluate_model(without_v, val_r.without_velocity()))
              .accuracy;
      report["ablation_velocity"][to_string(r)] = {
          {"with_velocity", acc_with}, {"without_velocity", acc_without}};
      std::cout << to_string(r) << " with velocity " << acc_with
                << " without " << acc_without << "\n";
    }
  }

  if (csv) {
    emit_csv(cm_ln, out_path.empty() ? fs::path("confusion_LN.csv")
                                     : out_path.parent_path() / "confusion_LN.csv");
    emit_csv(cm_rn, out_path.empty() ? fs::path("confusion_RN.csv")
                                     : out_path.parent_path() / "confusion_RN.csv");
  }

  std::cout << "LN accuracy " << report["LN"]["accuracy"] << "\n"
            << "RN accuracy " << report["RN"]["accuracy"] << "\n";
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    os << report.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_bench(const fs::path& models_dir, const fs::path& stream_path,
              int warmup) {
  const PipelineModels models = load_models(models_dir);
  auto frames = read_stream_jsonl(stream_path);
  StreamPipeline pipeline(models);
  const LatencyReport rep = bench_latency(pipeline, frames, warmup);
  std::cout << "frames " << rep.frames << "\n"
            << "mean_ms " << rep.mean_ms << "\n"
            << "p95_ms " << rep.p95_ms << "\n"
            << "max_ms " << rep.max_ms << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Road surface condition/type classification toolkit"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--seed", common.seed, "RNG seed")->capture_default_str();
  app.add_option("--config", common.config_path, "JSON config file");

  std::string spec_path, profiles_path, region_arg = "all";
  std::string baseline, ablation;
  std::string out_arg, corpus_arg, models_arg, stream_arg;
  bool eq11_literal = false, csv = false, verbose = false;
  int warmup = 20;

  auto* simulate = app.add_subcommand("simulate", "Generate streams/datasets");
  simulate->add_option("--spec", spec_path, "Scenario spec (JSON)");
  simulate->add_option("--profiles", profiles_path, "Class profile config");
  simulate->add_option("--out", out_arg, "Output directory")->required();

  auto* train_cmd = app.add_subcommand("train", "Train per-region networks");
  train_cmd->add_option("--corpus", corpus_arg, "Corpus directory")->required();
  train_cmd->add_option("--region", region_arg, "LN|RN|LF|RF|all")
      ->capture_default_str();
  train_cmd->add_option("--out", out_arg, "Model output directory")->required();
  train_cmd->add_flag("--verbose", verbose, "Per-epoch progress");

  auto* run = app.add_subcommand("run", "Stream classification with fusion");
  run->add_option("--models", models_arg, "Model directory")->required();
  run->add_option("--stream", stream_arg, "Frame stream (JSON-lines)")
      ->required();
  run->add_option("--out", out_arg, "Output JSON-lines path")->required();
  run->add_flag("--eq11-literal", eq11_literal,
                "Use the literal printed weight normalizer");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate models and baselines");
  eval_cmd->add_option("--models", models_arg, "Model directory");
  eval_cmd->add_option("--corpus", corpus_arg, "Corpus directory")->required();
  eval_cmd->add_option("--baseline", baseline, "knn|twm")
      ->check(CLI::IsMember({"knn", "twm"}));
  eval_cmd->add_option("--ablation", ablation, "velocity")
      ->check(CLI::IsMember({"velocity"}));
  eval_cmd->add_flag("--eq11-literal", eq11_literal);
  eval_cmd->add_flag("--emit-csv", csv, "Write confusion counts as CSV");
  eval_cmd->add_option("--out", out_arg, "Report JSON path");

  auto* bench = app.add_subcommand("bench", "Per-frame latency benchmark");
  bench->add_option("--models", models_arg, "Model directory")->required();
  bench->add_option("--stream", stream_arg, "Frame stream")->required();
  bench->add_option("--warmup", warmup, "Warmup frames")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    FileConfig fc;
    apply_config_file(common.config_path, fc);
    if (simulate->parsed())
      return cmd_simulate(common, fc, spec_path, profiles_path, out_arg);
    if (train_cmd->parsed())
      return cmd_train(common, fc, corpus_arg, region_arg, out_arg, verbose);
    if (run->parsed())
      return cmd_run(models_arg, stream_arg, out_arg, eq11_literal);
    if (eval_cmd->parsed())
      return cmd_eval(common, fc, models_arg, corpus_arg, baseline, ablation,
                      eq11_literal, csv, out_arg);
    if (bench->parsed()) return cmd_bench(models_arg, stream_arg, warmup);
  } catch (const TrainingDiverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
