#include "roadsurf/network.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace roadsurf {

namespace {

// Column-wise softmax with max subtraction.
Eigen::MatrixXd softmax_cols(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd out(z.rows(), z.cols());
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const double m = z.col(c).maxCoeff();
    Eigen::ArrayXd e = (z.col(c).array() - m).exp();
    out.col(c) = e / e.sum();
  }
  return out;
}

void check_dims(const NetworkModel& model, const Eigen::MatrixXd& x) {
  if (x.rows() != model.input_dim())
    throw std::invalid_argument("network: input dimension mismatch");
  if (!x.allFinite())
    throw std::invalid_argument("network: non-finite input");
}

}  // namespace

std::vector<int> default_layer_dims(int input_dim) {
  return {input_dim, 100, 80, 40, 40, 20, 10, kNumClasses};
}

Eigen::Index NetworkModel::num_params() const {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l)
    n += weights[l].size() + biases[l].size();
  return n;
}

Eigen::VectorXd NetworkModel::flatten() const {
  Eigen::VectorXd theta(num_params());
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    theta.segment(off, weights[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(weights[l].data(), weights[l].size());
    off += weights[l].size();
    theta.segment(off, biases[l].size()) = biases[l];
    off += biases[l].size();
  }
  return theta;
}

void NetworkModel::unflatten(const Eigen::VectorXd& theta) {
  if (theta.size() != num_params())
    throw std::invalid_argument("unflatten: parameter count mismatch");
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    Eigen::Map<Eigen::VectorXd>(weights[l].data(), weights[l].size()) =
        theta.segment(off, weights[l].size());
    off += weights[l].size();
    biases[l] = theta.segment(off, biases[l].size());
    off += biases[l].size();
  }
}

NetworkModel NetworkModel::init(Region region, const std::vector<int>& dims,
                                std::uint64_t seed) {
  if (dims.size() < 2)
    throw std::invalid_argument("NetworkModel: need at least two layers");
  NetworkModel m;
  m.region = region;
  m.layer_dims = dims;
  m.classes.assign(class_names().begin(), class_names().end());
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
    m.weights.push_back(std::move(w));
    m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  m.norm.mean = Eigen::VectorXd::Zero(dims.front());
  m.norm.stddev = Eigen::VectorXd::Ones(dims.front());
  return m;
}

Eigen::MatrixXd forward_batch(const NetworkModel& model,
                              const Eigen::MatrixXd& x) {
  check_dims(model, x);
  Eigen::MatrixXd a = x;
  const std::size_t n_layers = model.weights.size();
  for (std::size_t l = 0; l + 1 < n_layers; ++l)
    a = ((model.weights[l] * a).colwise() + model.biases[l]).array().tanh();
  const Eigen::MatrixXd z =
      (model.weights.back() * a).colwise() + model.biases.back();
  return softmax_cols(z);
}

Eigen::VectorXd forward(const NetworkModel& model, const Eigen::VectorXd& x) {
  return forward_batch(model, x);
}

Eigen::VectorXd predict(const NetworkModel& model,
                        const Eigen::VectorXd& raw_x) {
  return forward(model, model.norm.apply(raw_x));
}

double loss(const NetworkModel& model, const Eigen::MatrixXd& x,
            const Eigen::MatrixXd& t, double lambda) {
  if (x.cols() == 0) throw std::invalid_argument("loss: empty batch");
  const Eigen::MatrixXd e = forward_batch(model, x) - t;
  const double mse = e.array().square().sum() / static_cast<double>(x.cols());
  const double reg = 0.5 * lambda * model.flatten().squaredNorm();
  return mse + reg;
}

Eigen::VectorXd gradient(const NetworkModel& model, const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& t, double lambda) {
  if (x.cols() == 0) throw std::invalid_argument("gradient: empty batch");
  check_dims(model, x);
  const std::size_t n_layers = model.weights.size();
  const double inv_n = 1.0 / static_cast<double>(x.cols());

  std::vector<Eigen::MatrixXd> activations;
  activations.reserve(n_layers + 1);
  activations.push_back(x);
  for (std::size_t l = 0; l + 1 < n_layers; ++l)
    activations.push_back(((model.weights[l] * activations.back()).colwise() +
                           model.biases[l])
                              .array()
                              .tanh());
  const Eigen::MatrixXd p = softmax_cols(
      (model.weights.back() * activations.back()).colwise() +
      model.biases.back());

  // d(E^T E)/dz through softmax: 2/N * (p .* e - p * (p^T e)) per column.
  const Eigen::MatrixXd e = p - t;
  Eigen::MatrixXd delta(p.rows(), p.cols());
  for (Eigen::Index c = 0; c < p.cols(); ++c) {
    const double dot = p.col(c).dot(e.col(c));
    delta.col(c) =
        2.0 * inv_n * (p.col(c).array() * e.col(c).array() -
                       p.col(c).array() * dot);
  }

  std::vector<Eigen::MatrixXd> grad_w(n_layers);
  std::vector<Eigen::VectorXd> grad_b(n_layers);
  for (std::size_t l = n_layers; l-- > 0;) {
    grad_w[l] = delta * activations[l].transpose() + lambda * model.weights[l];
    grad_b[l] = delta.rowwise().sum() + lambda * model.biases[l];
    if (l > 0) {
      delta = (model.weights[l].transpose() * delta).array() *
              (1.0 - activations[l].array().square());
    }
  }

  Eigen::VectorXd g(model.num_params());
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < n_layers; ++l) {
    g.segment(off, grad_w[l].size()) =
        Eigen::Map<const Eigen::VectorXd>(grad_w[l].data(), grad_w[l].size());
    off += grad_w[l].size();
    g.segment(off, grad_b[l].size()) = grad_b[l];
    off += grad_b[l].size();
  }
  return g;
}

// ---------------------------------------------------------------------------
// Model file "RSNM" v1: magic, version u32, region u8, n_layers u32,
// dims u32[], norm mean/std f64[], then row-major f64 weights and biases.

namespace {

constexpr char kModelMagic[4] = {'R', 'S', 'N', 'M'};
constexpr std::uint32_t kModelVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("model file truncated");
  return v;
}

}  // namespace

void save_model(const NetworkModel& model, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for write: " + path.string());
  os.write(kModelMagic, 4);
  put(os, kModelVersion);
  put(os, static_cast<std::uint8_t>(model.region));
  put(os, static_cast<std::uint32_t>(model.layer_dims.size()));
  for (int d : model.layer_dims) put(os, static_cast<std::uint32_t>(d));
  for (Eigen::Index i = 0; i < model.norm.mean.size(); ++i)
    put(os, model.norm.mean(i));
  for (Eigen::Index i = 0; i < model.norm.stddev.size(); ++i)
    put(os, model.norm.stddev(i));
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    const auto& w = model.weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) put(os, w(r, c));
    for (Eigen::Index i = 0; i < model.biases[l].size(); ++i)
      put(os, model.biases[l](i));
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

NetworkModel load_model(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open model file: " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kModelMagic, 4) != 0)
    throw std::runtime_error("not a model file: " + path.string());
  const auto version = get<std::uint32_t>(is);
  if (version != kModelVersion)
    throw std::runtime_error("unsupported model version " +
                             std::to_string(version));
  NetworkModel m;
  m.region = static_cast<Region>(get<std::uint8_t>(is));
  const auto n_layers = get<std::uint32_t>(is);
  if (n_layers < 2 || n_layers > 64)
    throw std::runtime_error("corrupt model header");
  m.layer_dims.resize(n_layers);
  for (auto& d : m.layer_dims) d = static_cast<int>(get<std::uint32_t>(is));
  const int in_dim = m.layer_dims.front();
  m.norm.mean.resize(in_dim);
  m.norm.stddev.resize(in_dim);
  for (int i = 0; i < in_dim; ++i) m.norm.mean(i) = get<double>(is);
  for (int i = 0; i < in_dim; ++i) m.norm.stddev(i) = get<double>(is);
  for (std::size_t l = 0; l + 1 < m.layer_dims.size(); ++l) {
    Eigen::MatrixXd w(m.layer_dims[l + 1], m.layer_dims[l]);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = get<double>(is);
    Eigen::VectorXd b(m.layer_dims[l + 1]);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = get<double>(is);
    m.weights.push_back(std::move(w));
    m.biases.push_back(std::move(b));
  }
  m.classes.assign(class_names().begin(), class_names().end());
  return m;
}

}  // namespace roadsurf
