#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "roadsurf/features.hpp"
#include "roadsurf/types.hpp"

namespace roadsurf {

// Feed-forward classifier: tanh hidden layers, softmax output.
// Default architecture 33-100-80-40-40-20-10-9.
struct NetworkModel {
  Region region = Region::LN;
  std::vector<int> layer_dims;
  std::vector<Eigen::MatrixXd> weights; // weights[l]: dims[l+1] x dims[l]
  std::vector<Eigen::VectorXd> biases;
  Standardizer norm;
  std::vector<std::string> classes;

  int input_dim() const { return layer_dims.front(); }
  int output_dim() const { return layer_dims.back(); }
  Eigen::Index num_params() const;

  Eigen::VectorXd flatten() const;
  void unflatten(const Eigen::VectorXd& theta);

  // Symmetric uniform init scaled by fan-in/fan-out, seeded.
  static NetworkModel init(Region region, const std::vector<int>& dims,
                           std::uint64_t seed);
};

std::vector<int> default_layer_dims(int input_dim = kNumFeatures *
                                                    (kWindowSteps + 1));

// Softmax probabilities for one standardized input.
Eigen::VectorXd forward(const NetworkModel& model, const Eigen::VectorXd& x);
// Same, columns are samples.
Eigen::MatrixXd forward_batch(const NetworkModel& model,
                              const Eigen::MatrixXd& x);
// Standardizes with model.norm first.
Eigen::VectorXd predict(const NetworkModel& model, const Eigen::VectorXd& raw_x);

// (1/N) sum E^T E + (lambda/2) ||theta||^2 with E = f(x) - t.
double loss(const NetworkModel& model, const Eigen::MatrixXd& x,
            const Eigen::MatrixXd& t, double lambda);

// Analytic gradient of `loss` w.r.t. theta, flattened like flatten().
Eigen::VectorXd gradient(const NetworkModel& model, const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& t, double lambda);

void save_model(const NetworkModel& model, const std::filesystem::path& path);
NetworkModel load_model(const std::filesystem::path& path);

}  // namespace roadsurf
