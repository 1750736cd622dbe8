#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "roadsurf/eval.hpp"
#include "roadsurf/train.hpp"

using namespace roadsurf;

namespace {

// Two well-separated Gaussian blobs mapped to classes 0 and 8.
RegionDataset blobs(int n_per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.5);
  RegionDataset ds;
  ds.x = Eigen::MatrixXd(4, 2 * n_per_class);
  ds.t = Eigen::MatrixXd::Zero(kNumClasses, 2 * n_per_class);
  for (int i = 0; i < n_per_class; ++i) {
    for (int d = 0; d < 4; ++d) ds.x(d, i) = -2.0 + g(rng);
    ds.t(0, i) = 1.0;
    for (int d = 0; d < 4; ++d) ds.x(d, n_per_class + i) = 2.0 + g(rng);
    ds.t(8, n_per_class + i) = 1.0;
  }
  return ds;
}

double accuracy(const NetworkModel& m, const RegionDataset& ds) {
  const auto cm = evaluate_model(m, ds);
  return static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
}

}  // namespace

TEST_CASE("training separates two Gaussian blobs to >= 99%") {
  const auto train_set = blobs(200, 1);
  const auto val_set = blobs(100, 2);
  TrainConfig cfg;
  cfg.hidden_dims = {16};
  cfg.max_epochs = 100;
  cfg.batch_size = 64;
  cfg.rng_seed = 5;
  const auto model = train(train_set, val_set, Region::LN, cfg);
  CHECK(accuracy(model, train_set) >= 0.99);
  CHECK(accuracy(model, val_set) >= 0.99);
}

TEST_CASE("training is deterministic for a fixed seed") {
  const auto train_set = blobs(120, 3);
  const auto val_set = blobs(60, 4);
  TrainConfig cfg;
  cfg.hidden_dims = {8};
  cfg.max_epochs = 20;
  cfg.batch_size = 32;
  cfg.rng_seed = 9;
  const auto a = train(train_set, val_set, Region::LN, cfg);
  const auto b = train(train_set, val_set, Region::LN, cfg);
  CHECK((a.flatten() - b.flatten()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.norm.mean - b.norm.mean).cwiseAbs().maxCoeff() == 0.0);

  TrainConfig other = cfg;
  other.rng_seed = 10;
  const auto c = train(train_set, val_set, Region::LN, other);
  CHECK((a.flatten() - c.flatten()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("the returned snapshot standardizes with training statistics") {
  const auto train_set = blobs(100, 11);
  const auto val_set = blobs(50, 12);
  TrainConfig cfg;
  cfg.hidden_dims = {8};
  cfg.max_epochs = 5;
  cfg.rng_seed = 1;
  const auto model = train(train_set, val_set, Region::RN, cfg);
  const auto ref = Standardizer::fit(train_set.x);
  CHECK((model.norm.mean - ref.mean).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((model.norm.stddev - ref.stddev).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(model.region == Region::RN);
  CHECK(model.layer_dims == std::vector<int>{4, 8, 9});
}
