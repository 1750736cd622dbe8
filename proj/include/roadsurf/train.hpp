#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "roadsurf/network.hpp"
#include "roadsurf/scg.hpp"

namespace roadsurf {

struct TrainConfig {
  double lambda = 1e-3; // L2 penalty
  int batch_size = 256;
  int max_epochs = 200;
  int patience = 20; // early-stop patience on validation loss, in epochs
  std::uint64_t rng_seed = 0;
  ScgConfig scg;
  int scg_iters_per_batch = 2;
  std::vector<int> hidden_dims{100, 80, 40, 40, 20, 10};
  bool verbose = false;
};

struct TrainingDiverged : std::runtime_error {
  explicit TrainingDiverged(const std::string& trace)
      : std::runtime_error("training diverged: " + trace) {}
};

// Trains one per-region network with mini-batch SCG and returns the snapshot
// with minimal validation loss. Deterministic given cfg.rng_seed.
NetworkModel train(const RegionDataset& train_set, const RegionDataset& val_set,
                   Region region, const TrainConfig& cfg);

}  // namespace roadsurf
