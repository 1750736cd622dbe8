#pragma once

#include <array>
#include <deque>
#include <optional>
#include <utility>

#include "roadsurf/eval.hpp"
#include "roadsurf/fusion.hpp"
#include "roadsurf/network.hpp"
#include "roadsurf/synthgen.hpp"

namespace roadsurf {

struct PipelineModels {
  NetworkModel ln, rn, lf, rf;

  const NetworkModel& at(Region r) const;
};

struct FrameOutput {
  std::int64_t t_ms = 0;
  Region region = Region::LN; // LN or RN
  ProbVector p_raw;           // network output of the near region
  ProbVector p_final;         // after spatiotemporal fusion
  int cls = 0;                // argmax of p_final
  Eigen::VectorXd alpha;      // fusion weights applied
};

// Streaming classifier: per-region feature windows, four forward passes and
// speed-weighted fusion of past far-region outputs into the near regions.
class StreamPipeline {
 public:
  StreamPipeline(PipelineModels models, RoiConfig roi = {},
                 FusionConfig fusion = {}, int window_steps = kWindowSteps);

  // Returns {LN output, RN output} once the window is warm, nullopt before.
  std::optional<std::array<FrameOutput, 2>> process(
      const PointCloudFrame& frame);

  void reset();
  bool fusion_enabled = true; // disabled -> TWM baseline

 private:
  PipelineModels models_;
  RoiConfig roi_;
  FusionConfig fusion_;
  int window_steps_;
  std::array<std::deque<std::pair<RegionFeatures, double>>, 4> history_;
  FusionState left_state_, right_state_;
  int warm_k_ = 0;
  std::int64_t last_t_ms_ = 0;
  bool seen_frame_ = false;
};

struct StreamAccuracy {
  ConfusionMatrix fused_ln, fused_rn; // or raw when fusion disabled
};

// Runs the pipeline over labeled streams and scores LN/RN fused decisions.
StreamAccuracy score_streams(StreamPipeline& pipeline,
                             std::span<const LabeledStream> streams);

// Scores a KNN baseline on the near-region feature windows of the streams.
StreamAccuracy score_streams_knn(const KnnClassifier& knn_ln,
                                 const KnnClassifier& knn_rn,
                                 std::span<const LabeledStream> streams,
                                 const RoiConfig& roi = {},
                                 int window_steps = kWindowSteps);

// Wall-clock per-frame cost of feature stacking, forwards and fusion;
// excludes I/O and generation.
LatencyReport bench_latency(StreamPipeline& pipeline,
                            std::span<const PointCloudFrame> frames,
                            int warmup_frames = 20);

}  // namespace roadsurf
