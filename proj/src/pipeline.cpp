#include "roadsurf/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace roadsurf {

const NetworkModel& PipelineModels::at(Region r) const {
  switch (r) {
    case Region::LN: return ln;
    case Region::RN: return rn;
    case Region::LF: return lf;
    case Region::RF: return rf;
  }
  throw std::logic_error("invalid Region value");
}

StreamPipeline::StreamPipeline(PipelineModels models, RoiConfig roi,
                               FusionConfig fusion, int window_steps)
    : models_(std::move(models)),
      roi_(roi),
      fusion_(fusion),
      window_steps_(window_steps) {
  roi_.validate();
}

void StreamPipeline::reset() {
  for (auto& h : history_) h.clear();
  left_state_ = {};
  right_state_ = {};
  warm_k_ = 0;
  seen_frame_ = false;
}

std::optional<std::array<FrameOutput, 2>> StreamPipeline::process(
    const PointCloudFrame& frame) {
  if (seen_frame_ && frame.t_ms <= last_t_ms_)
    throw std::invalid_argument("pipeline: non-monotone frame timestamp");
  last_t_ms_ = frame.t_ms;
  seen_frame_ = true;

  const PointCloudFrame filtered = filter_roi(frame, roi_);
  for (Region region : kAllRegions) {
    auto& h = history_[static_cast<std::size_t>(region)];
    h.emplace_back(aggregate_region(filtered, region, roi_), filtered.speed);
    if (static_cast<int>(h.size()) > window_steps_ + 1) h.pop_front();
  }
  if (static_cast<int>(history_[0].size()) < window_steps_ + 1)
    return std::nullopt;
  ++warm_k_;

  std::array<ProbVector, 4> p;
  for (Region region : kAllRegions) {
    const auto& h = history_[static_cast<std::size_t>(region)];
    const std::vector<std::pair<RegionFeatures, double>> window(h.begin(),
                                                                h.end());
    p[static_cast<std::size_t>(region)] =
        predict(models_.at(region), stack_window(window, window_steps_));
  }

  std::array<FrameOutput, 2> out;
  const std::array<std::tuple<Region, Region, FusionState*>, 2> pairs{
      std::tuple{Region::LN, Region::LF, &left_state_},
      std::tuple{Region::RN, Region::RF, &right_state_}};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [near, far, state] = pairs[i];
    const ProbVector& near_p = p[static_cast<std::size_t>(near)];
    const ProbVector& far_p = p[static_cast<std::size_t>(far)];
    FrameOutput& o = out[i];
    o.t_ms = frame.t_ms;
    o.region = near;
    o.p_raw = near_p;
    if (fusion_enabled) {
      const FusionResult r =
          fusion_step(*state, warm_k_, near_p, far_p, frame.speed, fusion_);
      o.p_final = r.final;
      o.alpha = r.alpha;
    } else {
      o.p_final = near_p;
      o.alpha = Eigen::VectorXd::Zero(fusion_.stack_steps + 1);
      o.alpha(0) = 1.0;
    }
    o.cls = classify(o.p_final).index;
  }
  return out;
}

StreamAccuracy score_streams(StreamPipeline& pipeline,
                             std::span<const LabeledStream> streams) {
  StreamAccuracy acc;
  for (const LabeledStream& stream : streams) {
    pipeline.reset();
    for (std::size_t i = 0; i < stream.frames.size(); ++i) {
      const auto out = pipeline.process(stream.frames[i]);
      if (!out) continue;
      acc.fused_ln.add((*out)[0].cls, stream.labels[i].first.index);
      acc.fused_rn.add((*out)[1].cls, stream.labels[i].second.index);
    }
  }
  return acc;
}

StreamAccuracy score_streams_knn(const KnnClassifier& knn_ln,
                                 const KnnClassifier& knn_rn,
                                 std::span<const LabeledStream> streams,
                                 const RoiConfig& roi, int window_steps) {
  StreamAccuracy acc;
  for (const LabeledStream& stream : streams) {
    std::array<std::vector<std::pair<RegionFeatures, double>>, 2> history;
    for (std::size_t i = 0; i < stream.frames.size(); ++i) {
      const PointCloudFrame filtered = filter_roi(stream.frames[i], roi);
      history[0].emplace_back(aggregate_region(filtered, Region::LN, roi),
                              filtered.speed);
      history[1].emplace_back(aggregate_region(filtered, Region::RN, roi),
                              filtered.speed);
      if (static_cast<int>(i) < window_steps) continue;
      acc.fused_ln.add(knn_ln.classify(stack_window(history[0], window_steps)),
                       stream.labels[i].first.index);
      acc.fused_rn.add(knn_rn.classify(stack_window(history[1], window_steps)),
                       stream.labels[i].second.index);
    }
  }
  return acc;
}

LatencyReport bench_latency(StreamPipeline& pipeline,
                            std::span<const PointCloudFrame> frames,
                            int warmup_frames) {
  if (static_cast<int>(frames.size()) <= warmup_frames)
    throw std::invalid_argument("bench_latency: stream shorter than warmup");
  using clock = std::chrono::steady_clock;
  pipeline.reset();
  std::vector<double> ms;
  ms.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto t0 = clock::now();
    (void)pipeline.process(frames[i]);
    const auto t1 = clock::now();
    if (static_cast<int>(i) >= warmup_frames)
      ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  std::sort(ms.begin(), ms.end());
  LatencyReport rep;
  rep.frames = static_cast<int>(ms.size());
  rep.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / ms.size();
  rep.p95_ms = ms[static_cast<std::size_t>(0.95 * (ms.size() - 1))];
  rep.max_ms = ms.back();
  return rep;
}

}  // namespace roadsurf
