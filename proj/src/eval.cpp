#include "roadsurf/eval.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace roadsurf {

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  MetricsReport rep;
  const double total = static_cast<double>(cm.total());
  if (total <= 0.0) throw std::invalid_argument("compute_metrics: empty matrix");
  rep.accuracy = static_cast<double>(cm.trace()) / total;

  rep.precision.resize(kNumClasses);
  rep.recall.resize(kNumClasses);
  for (int c = 0; c < kNumClasses; ++c) {
    const double row = cm.counts.row(c).sum();
    const double col = cm.counts.col(c).sum();
    rep.precision(c) = row > 0.0 ? cm.counts(c, c) / row : 0.0;
    rep.recall(c) = col > 0.0 ? cm.counts(c, c) / col : 0.0;
  }

  // Risk components: snow called dry/wet, and wet called dry.
  const double snow_total = cm.counts.col(8).sum();
  double snow_as_clear = 0.0;
  for (int pred = 0; pred < 8; ++pred) snow_as_clear += cm.counts(pred, 8);
  rep.risk_snow_as_clear = snow_total > 0.0 ? snow_as_clear / snow_total : 0.0;

  double wet_total = 0.0, wet_as_dry = 0.0;
  for (int actual = 4; actual < 8; ++actual) {
    wet_total += cm.counts.col(actual).sum();
    for (int pred = 0; pred < 4; ++pred) wet_as_dry += cm.counts(pred, actual);
  }
  rep.risk_wet_as_dry = wet_total > 0.0 ? wet_as_dry / wet_total : 0.0;
  return rep;
}

ConfusionMatrix evaluate_model(const NetworkModel& model,
                               const RegionDataset& val) {
  if (val.size() == 0) throw std::invalid_argument("evaluate_model: empty set");
  ConfusionMatrix cm;
  const Eigen::MatrixXd p = forward_batch(model, model.norm.apply(val.x));
  for (Eigen::Index i = 0; i < p.cols(); ++i) {
    Eigen::Index pred = 0;
    p.col(i).maxCoeff(&pred);
    cm.add(static_cast<int>(pred), val.label_of(i));
  }
  return cm;
}

KnnClassifier KnnClassifier::fit(const RegionDataset& train, int k) {
  if (train.size() == 0)
    throw std::invalid_argument("KnnClassifier: empty training set");
  if (k < 1 || static_cast<Eigen::Index>(k) > train.size())
    throw std::invalid_argument("KnnClassifier: invalid k");
  KnnClassifier knn;
  knn.k_ = k;
  knn.norm_ = Standardizer::fit(train.x);
  knn.x_ = knn.norm_.apply(train.x);
  knn.labels_.resize(static_cast<std::size_t>(train.size()));
  for (Eigen::Index i = 0; i < train.size(); ++i)
    knn.labels_[static_cast<std::size_t>(i)] = train.label_of(i);
  return knn;
}

int KnnClassifier::classify(const Eigen::VectorXd& raw_x) const {
  const Eigen::VectorXd q = norm_.apply(raw_x);
  const Eigen::VectorXd d2 =
      (x_.colwise() - q).colwise().squaredNorm().transpose();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d2.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  // Ties in distance resolve by dataset order.
  std::partial_sort(idx.begin(), idx.begin() + k_, idx.end(),
                    [&](Eigen::Index a, Eigen::Index b) {
                      return d2(a) != d2(b) ? d2(a) < d2(b) : a < b;
                    });
  std::array<int, kNumClasses> votes{};
  for (int i = 0; i < k_; ++i)
    votes[static_cast<std::size_t>(
        labels_[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])])]++;
  int best = 0; // vote ties toward the lowest class index
  for (int c = 1; c < kNumClasses; ++c)
    if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)])
      best = c;
  return best;
}

}  // namespace roadsurf
