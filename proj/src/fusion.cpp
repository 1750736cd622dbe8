#include "roadsurf/fusion.hpp"

#include <algorithm>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace roadsurf {

OmegaWeights omega_weights(std::span<const double> past_speeds,
                           const FusionConfig& cfg) {
  if (static_cast<int>(past_speeds.size()) != cfg.stack_steps)
    throw std::invalid_argument("omega_weights: expected l_s speed values");
  Eigen::VectorXd raw(cfg.stack_steps + 1);
  raw(0) = cfg.beta1;
  for (int l = 1; l <= cfg.stack_steps; ++l) {
    const double v = past_speeds[static_cast<std::size_t>(l - 1)];
    if (v < 0.0) throw std::invalid_argument("omega_weights: negative speed");
    // Overlap of the step-(k-l) far slice with the current near region.
    raw(l) = std::min(static_cast<double>(l) * cfg.sample_time * v, cfg.beta1);
  }
  double norm = raw.sum();
  if (cfg.literal_normalizer) {
    norm = cfg.beta1;
    for (int l = 2; l <= cfg.stack_steps; ++l) norm += raw(l);
  }
  return OmegaWeights{raw / norm};
}

ProbVector fuse(const ProbStack& stack, const OmegaWeights& w) {
  const int n_stack = static_cast<int>(stack.past.size()) + 1;
  if (w.alpha.size() != n_stack)
    throw std::invalid_argument("fuse: weight/stack length mismatch");
  const Eigen::Index nc = stack.current.size();
  Eigen::VectorXd stacked(nc * n_stack);
  stacked.head(nc) = stack.current;
  for (int i = 0; i < n_stack - 1; ++i) {
    if (stack.past[static_cast<std::size_t>(i)].size() != nc)
      throw std::invalid_argument("fuse: probability dimension mismatch");
    stacked.segment(nc * (i + 1), nc) = stack.past[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixXd omega_row = w.alpha.transpose();
  const Eigen::MatrixXd k = Eigen::kroneckerProduct(
      omega_row, Eigen::MatrixXd::Identity(nc, nc));
  return k * stacked;
}

FusionResult fusion_step(FusionState& state, int k, const ProbVector& near_p,
                         const ProbVector& far_p, double speed,
                         const FusionConfig& cfg) {
  if (k != state.last_k + 1)
    throw std::invalid_argument("fusion_step: out-of-order frame index");
  state.last_k = k;

  FusionResult result;
  if (k <= cfg.stack_steps) {
    result.final = near_p;
    result.alpha = Eigen::VectorXd::Zero(cfg.stack_steps + 1);
    result.alpha(0) = 1.0;
  } else {
    ProbStack stack;
    stack.current = near_p;
    std::vector<double> speeds;
    for (int i = 0; i < cfg.stack_steps; ++i) {
      const auto& [p, v] = state.buffer[static_cast<std::size_t>(i)];
      stack.past.push_back(p);
      speeds.push_back(v);
    }
    const OmegaWeights w = omega_weights(speeds, cfg);
    result.final = fuse(stack, w);
    result.alpha = w.alpha;
  }

  state.buffer.emplace_front(far_p, speed);
  while (static_cast<int>(state.buffer.size()) > cfg.stack_steps)
    state.buffer.pop_back();
  return result;
}

ClassLabel classify(const ProbVector& p) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < p.size(); ++i)
    if (p(i) > p(best)) best = i;
  return ClassLabel(static_cast<int>(best));
}

}  // namespace roadsurf
