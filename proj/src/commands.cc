#include "ngdr/commands.h"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "ngdr/learn.h"
#include "ngdr/metrics.h"
#include "ngdr/parallel.h"
#include "ngdr/scene.h"

namespace ngdr {

namespace fs = std::filesystem;

PolicyKind PolicyKindFromString(const std::string& s) {
  if (s == "oracle") return PolicyKind::kOracle;
  if (s == "similarity") return PolicyKind::kSimilarity;
  if (s == "learned") return PolicyKind::kLearned;
  if (s == "uniform") return PolicyKind::kUniform;
  throw ParseError("unknown policy '" + s + "'");
}

namespace {

std::string Join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

bool Exists(const std::string& path) { return fs::exists(path); }

}  // namespace

SceneInputs LoadSceneInputs(const std::string& dir,
                            const std::string& depth_override) {
  SceneInputs in;
  in.intr = ReadIntrinsicsJson(Join(dir, files::kIntrinsics));
  in.depth = ReadDepthPfm(depth_override.empty() ? Join(dir, files::kDepthInit)
                                                 : depth_override);
  in.normals.normals = ReadNormalsPfm(Join(dir, files::kNormals));
  const std::string kappa_path = Join(dir, files::kKappa);
  if (Exists(kappa_path)) {
    in.normals.kappa = ReadDepthPfm(kappa_path);
  } else {
    in.normals.kappa = Image<double>(in.normals.normals.width(),
                                     in.normals.normals.height(), 1.0);
  }
  auto check = [&](int w, int h, const std::string& what) {
    if (w != in.intr.width || h != in.intr.height) {
      throw DomainError(what + " is " + std::to_string(w) + "x" +
                        std::to_string(h) + " but intrinsics are " +
                        std::to_string(in.intr.width) + "x" +
                        std::to_string(in.intr.height));
    }
  };
  check(in.depth.width(), in.depth.height(), "depth map");
  check(in.normals.width(), in.normals.height(), "normal map");
  check(in.normals.kappa.width(), in.normals.kappa.height(), "kappa map");
  ValidateDepth(in.depth);
  ValidateNormals(in.normals);

  if (Exists(Join(dir, files::kDepthGt))) {
    in.gt_depth = ReadDepthPfm(Join(dir, files::kDepthGt));
    check(in.gt_depth->width(), in.gt_depth->height(), "ground-truth depth");
  }
  if (Exists(Join(dir, files::kNormalsGt))) {
    in.gt_normals = ReadNormalsPfm(Join(dir, files::kNormalsGt));
    check(in.gt_normals->width(), in.gt_normals->height(),
          "ground-truth normals");
  }
  if (Exists(Join(dir, files::kLabels))) {
    in.labels = ReadLabelsPgm(Join(dir, files::kLabels));
    check(in.labels->width(), in.labels->height(), "label map");
  }
  if (Exists(Join(dir, files::kScene))) {
    const SceneSpec spec = ReadSceneSpec(Join(dir, files::kScene));
    for (const auto& p : spec.primitives) {
      if (p.kind == PrimitiveKind::kPlane) in.planar_ids.push_back(p.id);
    }
  }
  return in;
}

namespace {

// Moves each anchor's depth along its pixel's normal to the center ray of
// its coarse cell. The first anchor in a cell wins.
AnchorSet CoarsenAnchors(const CameraIntrinsics& intr, const AnchorSet& anchors,
                         const NormalMap& normals, int s) {
  AnchorSet out;
  std::vector<std::pair<int, int>> taken;
  for (const Anchor& a : anchors) {
    const int x = a.u / s;
    const int y = a.v / s;
    if (std::find(taken.begin(), taken.end(), std::make_pair(x, y)) !=
        taken.end()) {
      continue;
    }
    taken.emplace_back(x, y);
    const auto ratio =
        PropagationRatio(intr, a.u, a.v, normals.normals(a.u, a.v),
                         CoarseCellCenter(x, s), CoarseCellCenter(y, s));
    out.push_back({x, y, ratio ? *ratio * a.depth : a.depth});
  }
  return out;
}

NormalMap GtNormalMap(const SceneInputs& in) {
  if (!in.gt_normals) return in.normals;
  NormalMap n;
  n.normals = *in.gt_normals;
  n.kappa = Image<double>(n.normals.width(), n.normals.height(), 1.0);
  return n;
}

std::unique_ptr<WeightPolicy> MakePolicy(const RunConfig& config,
                                         const SceneInputs& in,
                                         const DepthMap* coarse_gt) {
  switch (config.policy) {
    case PolicyKind::kOracle:
      if (!coarse_gt) {
        throw DomainError("oracle policy needs " +
                          std::string(files::kDepthGt) + " in the input");
      }
      return std::make_unique<OraclePolicy>(*coarse_gt);
    case PolicyKind::kSimilarity: {
      SimilarityOptions opts;
      opts.temperature = config.temperature;
      opts.kappa_gate = config.kappa_gate;
      double kmax = 0.0;
      for (double k : in.normals.kappa.data()) kmax = std::max(kmax, k);
      opts.kappa_max = kmax > 0.0 ? kmax : 1.0;
      return std::make_unique<SimilarityPolicy>(opts);
    }
    case PolicyKind::kLearned: {
      if (config.params_path.empty()) {
        throw DomainError("learned policy needs --params");
      }
      return std::make_unique<LearnedPolicy>(
          ReadPolicyParams(config.params_path));
    }
    case PolicyKind::kUniform:
      return std::make_unique<UniformPolicy>();
  }
  return nullptr;
}

DepthMap Upsample(const SceneInputs& in, const RunConfig& config,
                  UpsampleMode mode, const DepthMap& coarse,
                  const NormalMap& coarse_normals) {
  const int s = config.stride;
  if (s == 1) return coarse;
  switch (mode) {
    case UpsampleMode::kNearest:
      return UpsampleNearest(coarse, s);
    case UpsampleMode::kBilinear:
      return UpsampleBilinear(coarse, s);
    case UpsampleMode::kNormalGuided: {
      const CameraIntrinsics intr_c = CoarseIntrinsics(in.intr, s);
      const CandidateField cands =
          UpCandidates(in.intr, intr_c, coarse, coarse_normals, s);
      const WeightField w =
          (config.policy == PolicyKind::kOracle && in.gt_depth)
              ? OracleWeights(cands, *in.gt_depth, kContainingCell)
              : UpSimilarityWeights(cands, coarse_normals, s, &in.normals,
                                    config.temperature);
      return UpStep(cands, w);
    }
  }
  return coarse;
}

}  // namespace

PipelineResult RunPipeline(const SceneInputs& in, const RunConfig& config,
                           const AnchorSet& anchors) {
  ValidateAnchors(anchors, in.intr.width, in.intr.height);
  PipelineResult result;
  DepthMap d0 = in.depth;
  if (config.scale_match && !anchors.empty()) {
    ScaleMatchResult sm = ScaleMatch(d0, anchors);
    d0 = std::move(sm.depth);
    result.scale = sm.scale;
  }
  const int s = config.stride;
  const CameraIntrinsics intr_c = CoarseIntrinsics(in.intr, s);
  const DepthMap dc = s == 1 ? d0 : DownsampleDepth(in.intr, d0, in.normals, s);
  const NormalMap nc = s == 1 ? in.normals : DownsampleNormals(in.normals, s);

  std::optional<DepthMap> coarse_gt;
  if (in.gt_depth) {
    coarse_gt = s == 1 ? *in.gt_depth
                       : DownsampleDepth(in.intr, *in.gt_depth, GtNormalMap(in), s);
  }
  const auto policy = MakePolicy(config, in, coarse_gt ? &*coarse_gt : nullptr);

  auto lift = [&](const DepthMap& d) {
    DepthMap full = Upsample(in, config, config.upsample, d, nc);
    ImposeAnchors(anchors, &full);
    return full;
  };

  RefineOptions opts;
  opts.n_iter = config.n_iter;
  opts.beta = config.beta;
  opts.anchors = s == 1 ? anchors : CoarsenAnchors(in.intr, anchors, in.normals, s);
  if (in.gt_depth) {
    opts.trace = TraceMode::kSummaries;
    opts.summarize = MakeTraceSummarizer(
        in.intr, *in.gt_depth, in.gt_normals ? &*in.gt_normals : nullptr,
        lift);
  }
  const RefineResult r = Refine(intr_c, dc, nc, *policy, opts);
  result.depth = lift(r.depth);
  result.trace = r.trace.summaries;
  return result;
}

std::vector<std::pair<UpsampleMode, DepthMap>> AblateUpsampling(
    const SceneInputs& in, const RunConfig& config) {
  const int s = config.stride;
  if (s < 2) throw ConfigError("upsampling ablation needs stride >= 2");
  const CameraIntrinsics intr_c = CoarseIntrinsics(in.intr, s);
  const DepthMap dc = DownsampleDepth(in.intr, in.depth, in.normals, s);
  const NormalMap nc = DownsampleNormals(in.normals, s);
  std::optional<DepthMap> coarse_gt;
  if (in.gt_depth) {
    coarse_gt = DownsampleDepth(in.intr, *in.gt_depth, GtNormalMap(in), s);
  }
  const auto policy = MakePolicy(config, in, coarse_gt ? &*coarse_gt : nullptr);
  RefineOptions opts;
  opts.n_iter = config.n_iter;
  opts.beta = config.beta;
  const DepthMap coarse = Refine(intr_c, dc, nc, *policy, opts).depth;
  std::vector<std::pair<UpsampleMode, DepthMap>> out;
  for (UpsampleMode mode : {UpsampleMode::kNearest, UpsampleMode::kBilinear,
                            UpsampleMode::kNormalGuided}) {
    out.emplace_back(mode, Upsample(in, config, mode, coarse, nc));
  }
  return out;
}

MetricsReport Evaluate(const SceneInputs& in, const DepthMap& pred) {
  if (!in.gt_depth) {
    throw DomainError("evaluation needs " + std::string(files::kDepthGt));
  }
  MetricsReport report;
  report.depth = ComputeDepthMetrics(pred, *in.gt_depth);
  if (in.gt_normals) {
    const NormalMap pca = NormalsFromDepth(in.intr, pred, kPcaWindow);
    report.has_normals = true;
    report.normals = ComputeNormalMetrics(pca.normals, *in.gt_normals);
    if (in.labels) {
      report.has_planarity = true;
      report.planarity = ComputePlanarityMetrics(
          in.intr, pred, *in.labels, GtNormalMap(in), in.planar_ids);
      for (int label : report.planarity.skipped) {
        std::cerr << "warning: planar region " << label
                  << " has fewer than 3 pixels; skipped\n";
      }
    }
  }
  return report;
}

namespace {

std::string CsvLine(const std::vector<std::string>& cells) {
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ",";
    line += cells[i];
  }
  return line + "\n";
}

void EnsureDir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("output directory is required");
  fs::create_directories(dir);
}

struct SceneArgs {
  std::string spec_path;
  std::string output_dir;
  int anchors = 0;
};

int CmdScene(const SceneArgs& args) {
  const SceneSpec spec = ReadSceneSpec(args.spec_path);
  const GroundTruth gt = Render(spec);
  const CorruptionResult init = Corrupt(gt.depth, spec.corruption);
  const NormalMap normals = SynthConfidence(gt, spec.confidence);
  const AnchorSet anchors =
      SampleAnchors(gt, args.anchors, StreamSeed(spec.seed, 3));

  EnsureDir(args.output_dir);
  const std::string& out = args.output_dir;
  WriteIntrinsicsJson(Join(out, files::kIntrinsics), spec.intrinsics);
  WriteTextFile(Join(out, files::kScene), SceneSpecToJson(spec));
  WriteDepthPfm(Join(out, files::kDepthGt), gt.depth);
  WriteNormalsPfm(Join(out, files::kNormalsGt), gt.normals.normals);
  WriteDepthPfm(Join(out, files::kDepthInit), init.depth);
  WriteNormalsPfm(Join(out, files::kNormals), normals.normals);
  WriteDepthPfm(Join(out, files::kKappa), normals.kappa);
  WriteLabelsPgm(Join(out, files::kLabels), gt.surface_id);
  WriteAnchorsCsv(Join(out, files::kAnchors), anchors);
  std::cout << "rendered " << spec.intrinsics.width << "x"
            << spec.intrinsics.height << " scene; " << init.clamped
            << " corrupted depths clamped to " << kMinCorruptedDepth << " m\n";
  return 0;
}

AnchorSet LoadAnchors(const RunConfig& config, const SceneInputs& in) {
  if (config.anchors_path.empty()) return {};
  return ReadAnchorsCsv(config.anchors_path, in.intr.width, in.intr.height);
}

void WriteRunOutputs(const RunConfig& config, const SceneInputs& in,
                     const PipelineResult& r, const std::string& depth_name) {
  EnsureDir(config.output_dir);
  WriteDepthPfm(Join(config.output_dir, depth_name), r.depth);
  if (in.gt_depth) {
    WriteTraceCsv(Join(config.output_dir, "trace.csv"), r.trace);
    WriteTextFile(Join(config.output_dir, "metrics.json"),
                  MetricsReportToJson(Evaluate(in, r.depth)));
  }
}

int CmdRefine(const RunConfig& config) {
  const SceneInputs in = LoadSceneInputs(config.input_dir, config.depth_path);
  const AnchorSet anchors = LoadAnchors(config, in);
  const PipelineResult r = RunPipeline(in, config, anchors);
  WriteRunOutputs(config, in, r, "depth_refined.pfm");
  if (!r.trace.empty()) {
    std::cout << "rmse " << FormatDouble(r.trace.front().rmse) << " -> "
              << FormatDouble(r.trace.back().rmse) << "\n";
  }
  return 0;
}

const std::vector<int>& SweepCounts() {
  static const std::vector<int> counts = {0, 10, 50, 100, 200};
  return counts;
}

int CmdComplete(const RunConfig& config, bool sweep) {
  const SceneInputs in = LoadSceneInputs(config.input_dir, config.depth_path);
  if (!sweep) {
    RunConfig c = config;
    if (c.anchors_path.empty()) c.anchors_path = Join(config.input_dir, files::kAnchors);
    const AnchorSet anchors = LoadAnchors(c, in);
    const PipelineResult r = RunPipeline(in, c, anchors);
    WriteRunOutputs(c, in, r, "depth_completed.pfm");
    return 0;
  }
  if (!in.gt_depth) {
    throw DomainError("anchor sweep needs " + std::string(files::kDepthGt));
  }
  GroundTruth gt;
  gt.depth = *in.gt_depth;
  std::vector<std::string> header = {"anchors", "scale_match", "scale"};
  for (auto& h : MetricsCsvHeader()) header.push_back(h);
  std::string csv = CsvLine(header);
  for (int count : SweepCounts()) {
    const AnchorSet anchors = SampleAnchors(gt, count, config.seed);
    for (bool scale : {false, true}) {
      RunConfig c = config;
      c.scale_match = scale;
      const PipelineResult r = RunPipeline(in, c, anchors);
      std::vector<std::string> row = {std::to_string(count),
                                      scale ? "1" : "0", FormatDouble(r.scale)};
      for (auto& cell : MetricsCsvRow(Evaluate(in, r.depth))) {
        row.push_back(cell);
      }
      csv += CsvLine(row);
    }
  }
  EnsureDir(config.output_dir);
  WriteTextFile(Join(config.output_dir, "sweep.csv"), csv);
  return 0;
}

int CmdAblateUpsample(const RunConfig& config) {
  const SceneInputs in = LoadSceneInputs(config.input_dir, config.depth_path);
  const auto results = AblateUpsampling(in, config);
  EnsureDir(config.output_dir);
  std::vector<std::string> header = {"method"};
  for (auto& h : MetricsCsvHeader()) header.push_back(h);
  std::string csv = CsvLine(header);
  for (const auto& [mode, full] : results) {
    WriteDepthPfm(Join(config.output_dir, "depth_" + ToString(mode) + ".pfm"),
                  full);
    std::vector<std::string> row = {ToString(mode)};
    if (in.gt_depth) {
      for (auto& cell : MetricsCsvRow(Evaluate(in, full))) row.push_back(cell);
    }
    csv += CsvLine(row);
  }
  WriteTextFile(Join(config.output_dir, "ablation.csv"), csv);
  return 0;
}

int CmdEval(const std::string& pred_path, const std::string& input_dir,
            const std::string& output_dir) {
  const SceneInputs in = LoadSceneInputs(input_dir);
  const DepthMap pred = ReadDepthPfm(pred_path);
  if (!pred.SameShape(in.depth)) throw DomainError("prediction size mismatch");
  const MetricsReport report = Evaluate(in, pred);
  const std::string json = MetricsReportToJson(report);
  if (output_dir.empty()) {
    std::cout << json;
    return 0;
  }
  EnsureDir(output_dir);
  WriteTextFile(Join(output_dir, "metrics.json"), json);
  WriteTextFile(Join(output_dir, "metrics.csv"),
                CsvLine(MetricsCsvHeader()) + CsvLine(MetricsCsvRow(report)));
  return 0;
}

struct TrainArgs {
  std::vector<std::string> specs;
  std::string output_dir;
  TrainConfig config;
  int stride = 1;
};

int CmdTrain(const TrainArgs& args) {
  std::vector<SceneSpec> scenes;
  for (const auto& path : args.specs) scenes.push_back(ReadSceneSpec(path));
  const TrainResult r = Train(scenes, args.config, args.stride);
  EnsureDir(args.output_dir);
  WritePolicyParams(Join(args.output_dir, "params.json"), r.params);
  WriteTrainLogCsv(Join(args.output_dir, "train_log.csv"), r.loss_log);
  if (!r.loss_log.empty()) {
    std::cout << "loss " << FormatDouble(r.loss_log.front()) << " -> "
              << FormatDouble(r.loss_log.back()) << "\n";
  }
  return 0;
}

void AddRunOptions(CLI::App* sub, RunConfig* c, std::string* policy,
                   std::string* upsample) {
  sub->add_option("--input", c->input_dir, "Scene directory")->required();
  sub->add_option("--out", c->output_dir, "Output directory")->required();
  sub->add_option("--depth", c->depth_path,
                  "Initial depth PFM (default <input>/depth_init.pfm)");
  sub->add_option("--policy", *policy, "oracle | similarity | learned | uniform")
      ->check(CLI::IsMember({"oracle", "similarity", "learned", "uniform"}));
  sub->add_option("--params", c->params_path, "Learned policy coefficients (JSON)");
  sub->add_option("--beta", c->beta, "Stencil radius")->check(CLI::Range(0, 16));
  sub->add_option("--stride", c->stride, "Refinement stride")->check(CLI::Range(1, 64));
  sub->add_option("--iters", c->n_iter, "Refinement rounds")->check(CLI::Range(0, 100000));
  sub->add_option("--upsample", *upsample, "nearest | bilinear | normal-guided")
      ->check(CLI::IsMember({"nearest", "bilinear", "normal-guided"}));
  sub->add_option("--temperature", c->temperature, "Similarity temperature")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--kappa-gate", c->kappa_gate, "Gate similarity by confidence");
  sub->add_option("--seed", c->seed, "Random seed");
}

}  // namespace

int RunCli(int argc, char** argv) {
  CLI::App app{"Normal-guided iterative depth refinement"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")
      ->check(CLI::Range(0, 1024));

  SceneArgs scene_args;
  auto* scene = app.add_subcommand("scene", "Render a scene spec to files");
  scene->add_option("--spec", scene_args.spec_path, "Scene spec JSON")->required();
  scene->add_option("--out", scene_args.output_dir, "Output directory")->required();
  scene->add_option("--anchors", scene_args.anchors, "Anchor count to sample")
      ->check(CLI::NonNegativeNumber);

  RunConfig refine_config;
  std::string refine_policy = "similarity", refine_up = "normal-guided";
  auto* refine = app.add_subcommand("refine", "Refine an initial depth map");
  AddRunOptions(refine, &refine_config, &refine_policy, &refine_up);
  refine->add_option("--anchors-csv", refine_config.anchors_path, "Anchor CSV");
  refine->add_flag("--scale-match", refine_config.scale_match,
                   "Scale the initial depth to the anchors first");

  RunConfig complete_config;
  std::string complete_policy = "similarity", complete_up = "normal-guided";
  bool sweep = false;
  auto* complete = app.add_subcommand("complete", "Depth completion with anchors");
  AddRunOptions(complete, &complete_config, &complete_policy, &complete_up);
  complete->add_option("--anchors-csv", complete_config.anchors_path,
                       "Anchor CSV (default <input>/anchors.csv)");
  complete->add_flag("--scale-match", complete_config.scale_match,
                     "Scale the initial depth to the anchors first");
  complete->add_flag("--sweep", sweep,
                     "Sweep 0/10/50/100/200 sampled anchors with and without "
                     "scale matching");

  RunConfig ablate_config;
  ablate_config.stride = 8;
  std::string ablate_policy = "similarity", ablate_up = "normal-guided";
  auto* ablate = app.add_subcommand("upsample-ablate",
                                    "Compare nearest, bilinear and "
                                    "normal-guided upsampling");
  AddRunOptions(ablate, &ablate_config, &ablate_policy, &ablate_up);

  std::string eval_pred, eval_input, eval_out;
  auto* eval = app.add_subcommand("eval", "Evaluate a depth map");
  eval->add_option("--pred", eval_pred, "Predicted depth PFM")->required();
  eval->add_option("--input", eval_input, "Scene directory")->required();
  eval->add_option("--out", eval_out, "Output directory (default: stdout)");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train-policy", "Train the linear weight policy");
  train->add_option("--spec", train_args.specs, "Scene spec JSON files")
      ->required()
      ->expected(1, -1);
  train->add_option("--out", train_args.output_dir, "Output directory")->required();
  train->add_option("--gamma", train_args.config.gamma, "Loss discount")
      ->check(CLI::Range(0.0, 1.0));
  train->add_option("--iters", train_args.config.n_iter_train, "Unrolled rounds")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--lr", train_args.config.learning_rate, "Learning rate")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--epochs", train_args.config.epochs, "Epochs")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--beta", train_args.config.beta, "Stencil radius")
      ->check(CLI::Range(0, 16));
  train->add_option("--stride", train_args.stride, "Training stride")
      ->check(CLI::Range(1, 64));
  train->add_option("--seed", train_args.config.seed, "Random seed");
  train->add_flag("--truncate", train_args.config.truncate,
                  "Stop gradients between rounds");
  train->add_flag("--upsample-loss", train_args.config.upsample_loss,
                  "With --stride > 1, score normal-guided upsampled depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    SetNumThreads(threads);
    if (*scene) return CmdScene(scene_args);
    auto finish = [](RunConfig* c, const std::string& policy,
                     const std::string& up) {
      c->policy = PolicyKindFromString(policy);
      c->upsample = UpsampleModeFromString(up);
    };
    if (*refine) {
      finish(&refine_config, refine_policy, refine_up);
      return CmdRefine(refine_config);
    }
    if (*complete) {
      finish(&complete_config, complete_policy, complete_up);
      return CmdComplete(complete_config, sweep);
    }
    if (*ablate) {
      finish(&ablate_config, ablate_policy, ablate_up);
      return CmdAblateUpsample(ablate_config);
    }
    if (*eval) return CmdEval(eval_pred, eval_input, eval_out);
    if (*train) return CmdTrain(train_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace ngdr
