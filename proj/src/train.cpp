#include "roadsurf/train.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

namespace roadsurf {

namespace {

struct BatchObjective {
  NetworkModel* scratch;
  const Eigen::MatrixXd* x;
  const Eigen::MatrixXd* t;
  double lambda;

  double loss(const Eigen::VectorXd& theta) {
    scratch->unflatten(theta);
    return roadsurf::loss(*scratch, *x, *t, lambda);
  }
  Eigen::VectorXd grad(const Eigen::VectorXd& theta) {
    scratch->unflatten(theta);
    return roadsurf::gradient(*scratch, *x, *t, lambda);
  }
};

}  // namespace

NetworkModel train(const RegionDataset& train_set, const RegionDataset& val_set,
                   Region region, const TrainConfig& cfg) {
  if (train_set.size() == 0 || val_set.size() == 0)
    throw std::invalid_argument("train: empty dataset");
  if (train_set.x.rows() != val_set.x.rows())
    throw std::invalid_argument("train: train/val dimension mismatch");

  std::vector<int> dims{static_cast<int>(train_set.x.rows())};
  dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
  dims.push_back(kNumClasses);

  NetworkModel model = NetworkModel::init(
      region, dims, cfg.rng_seed * 4 + static_cast<std::uint64_t>(region));
  model.norm = Standardizer::fit(train_set.x);
  const Eigen::MatrixXd x_train = model.norm.apply(train_set.x);
  const Eigen::MatrixXd x_val = model.norm.apply(val_set.x);

  NetworkModel scratch = model;
  std::mt19937_64 rng(cfg.rng_seed * 4 + static_cast<std::uint64_t>(region) +
                      0x9e3779b97f4a7c15ULL);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(train_set.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  Eigen::VectorXd theta = model.flatten();
  Eigen::VectorXd best_theta = theta;
  double best_val = std::numeric_limits<double>::infinity();
  int epochs_since_best = 0;
  std::vector<double> epoch_trace;

  const Eigen::Index n = train_set.size();
  const Eigen::Index bs = std::min<Eigen::Index>(cfg.batch_size, n);
  Eigen::MatrixXd bx(train_set.x.rows(), bs);
  Eigen::MatrixXd bt(kNumClasses, bs);

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start + bs <= n; start += bs) {
      for (Eigen::Index i = 0; i < bs; ++i) {
        bx.col(i) = x_train.col(order[static_cast<std::size_t>(start + i)]);
        bt.col(i) = train_set.t.col(order[static_cast<std::size_t>(start + i)]);
      }
      BatchObjective obj{&scratch, &bx, &bt, cfg.lambda};
      ScgState state = scg_init(std::move(theta), obj, cfg.scg);
      for (int it = 0; it < cfg.scg_iters_per_batch; ++it) scg_step(state, obj);
      theta = std::move(state.theta);
    }

    scratch.unflatten(theta);
    const double val_loss = loss(scratch, x_val, val_set.t, cfg.lambda);
    epoch_trace.push_back(val_loss);
    if (!std::isfinite(val_loss)) {
      std::ostringstream trace;
      for (std::size_t i = 0; i < epoch_trace.size(); ++i)
        trace << (i ? " " : "") << epoch_trace[i];
      throw TrainingDiverged("val loss per epoch: " + trace.str());
    }
    if (cfg.verbose)
      std::cerr << "[train " << to_string(region) << "] epoch " << epoch
                << " val_loss " << val_loss << "\n";
    if (val_loss < best_val) {
      best_val = val_loss;
      best_theta = theta;
      epochs_since_best = 0;
    } else if (++epochs_since_best >= cfg.patience) {
      break;
    }
  }

  model.unflatten(best_theta);
  return model;
}

}  // namespace roadsurf
