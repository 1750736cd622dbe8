#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "roadsurf/features.hpp"
#include "roadsurf/network.hpp"
#include "roadsurf/types.hpp"

namespace roadsurf {

// Rows are predicted classes, columns actual classes.
struct ConfusionMatrix {
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(kNumClasses, kNumClasses);

  void add(int predicted, int actual) { counts(predicted, actual) += 1; }
  long total() const { return counts.sum(); }
  long trace() const { return counts.diagonal().sum(); }
};

struct MetricsReport {
  double accuracy = 0.0;
  Eigen::VectorXd precision; // row-normalized diagonal
  Eigen::VectorXd recall;    // column-normalized diagonal
  // Risk components, reported separately:
  double risk_snow_as_clear = 0.0; // P(pred dry or wet | actual snow)
  double risk_wet_as_dry = 0.0;    // P(pred dry | actual wet)
};

MetricsReport compute_metrics(const ConfusionMatrix& cm);

// Per-sample network evaluation over a raw (unstandardized) region dataset.
ConfusionMatrix evaluate_model(const NetworkModel& model,
                               const RegionDataset& val);

// Majority vote among the k Euclidean-nearest standardized neighbors.
// Distance ties resolve by dataset order, vote ties by lowest class index.
class KnnClassifier {
 public:
  static KnnClassifier fit(const RegionDataset& train, int k = 5);
  int classify(const Eigen::VectorXd& raw_x) const;
  int k() const { return k_; }

 private:
  int k_ = 5;
  Eigen::MatrixXd x_; // standardized, columns are samples
  std::vector<int> labels_;
  Standardizer norm_;
};

struct LatencyReport {
  double mean_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
  int frames = 0;
};

}  // namespace roadsurf
