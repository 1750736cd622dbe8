#pragma once

#include <Eigen/Dense>
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "roadsurf/types.hpp"

namespace roadsurf {

using ProbVector = Eigen::VectorXd;

struct FusionConfig {
  int stack_steps = 5;      // l_s
  double sample_time = 0.1; // T_s [s]
  double beta1 = 12.0;      // near-region length [m]
  // Normalize by the literal printed form (sum starting at the l=2 term)
  // instead of the sum of all entries.
  bool literal_normalizer = false;
};

// Convex weights [alpha_k, alpha_{k-1}, ..., alpha_{k-l_s}].
struct OmegaWeights {
  Eigen::VectorXd alpha;
};

// Current near-region probabilities plus the past l_s far-region ones,
// newest first.
struct ProbStack {
  ProbVector current;
  std::vector<ProbVector> past;
};

// Unnormalized entries [beta1, 1*T_s*V(k-1), ..., l_s*T_s*V(k-l_s)], each
// past entry clamped at beta1. past_speeds is [V(k-1), ..., V(k-l_s)].
OmegaWeights omega_weights(std::span<const double> past_speeds,
                           const FusionConfig& cfg);

// F(p~) = (Omega (x) I_nc) p~, built as an explicit Kronecker product.
ProbVector fuse(const ProbStack& stack, const OmegaWeights& w);

// Per (near, far) pair streaming state for Algorithm-style fusion.
struct FusionState {
  int last_k = 0;
  std::deque<std::pair<ProbVector, double>> buffer; // newest first
};

struct FusionResult {
  ProbVector final;
  Eigen::VectorXd alpha; // weights actually applied (e_1 during warm-up)
};

// One frame of the streaming fusion. k is 1-based and must advance by one.
// For k <= l_s the near prediction passes through; afterwards the buffered
// far-region history is fused in. (far_p, speed) is pushed after computing.
FusionResult fusion_step(FusionState& state, int k, const ProbVector& near_p,
                         const ProbVector& far_p, double speed,
                         const FusionConfig& cfg);

// Argmax with ties broken toward the lowest index.
ClassLabel classify(const ProbVector& p);

}  // namespace roadsurf
