#include "deft/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "deft/rng.hpp"

namespace deft::models {

SynthDataset make_blobs(std::uint64_t seed, int n, int d, int c, double separation,
                        double noise) {
  if (c < 2 || n < c) throw std::invalid_argument("make_blobs: need n >= c >= 2");
  if (d < 1) throw std::invalid_argument("make_blobs: d must be >= 1");
  if (noise < 0.0 || separation < 0.0)
    throw std::invalid_argument("make_blobs: negative scale");

  // center for class q: separation * (1 + q/d) along axis q mod d
  SynthDataset out;
  out.inputs = RealMatrix(n, d);
  out.labels.resize(n);
  out.seed = seed;
  out.classes = c;
  out.separation = separation;
  out.noise = noise;

  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const int label = i % c;
    out.labels[i] = label;
    const int axis = label % d;
    const double center = separation * (1.0 + static_cast<double>(label / d));
    for (int j = 0; j < d; ++j) {
      const double base = j == axis ? center : 0.0;
      out.inputs(i, j) = base + noise * rng.normal();
    }
  }
  return out;
}

std::pair<double, RealMatrix> quadratic_bowl(const RealMatrix& w,
                                             const RealMatrix& w_target) {
  if (w.rows() != w_target.rows() || w.cols() != w_target.cols())
    throw std::invalid_argument("quadratic_bowl: shape mismatch");
  RealMatrix grad = w - w_target;
  const double f = grad.frobenius_norm();
  return {0.5 * f * f, std::move(grad)};
}

std::pair<double, RealMatrix> linreg(const RealMatrix& w, const RealMatrix& x,
                                     const RealMatrix& y) {
  if (x.cols() != w.rows() || x.rows() != y.rows() || w.cols() != y.cols())
    throw std::invalid_argument("linreg: shape mismatch");
  const int n = x.rows();
  const RealMatrix resid = matmul(x, w) - y;
  const double f = resid.frobenius_norm();
  RealMatrix grad = scaled(matmul(x.transposed(), resid), 1.0 / n);
  return {f * f / (2.0 * n), std::move(grad)};
}

Evaluation mlp2(const std::vector<RealMatrix>& params, const RealMatrix& x,
                const std::vector<int>& labels, int classes) {
  if (params.size() != 4) throw std::invalid_argument("mlp2: expected 4 parameter matrices");
  const RealMatrix& w1 = params[0];
  const RealMatrix& b1 = params[1];
  const RealMatrix& w2 = params[2];
  const RealMatrix& b2 = params[3];
  const int batch = x.rows();
  const int hidden = w1.cols();
  if (b1.rows() != 1 || b1.cols() != hidden || w2.rows() != hidden ||
      w2.cols() != classes || b2.rows() != 1 || b2.cols() != classes ||
      w1.rows() != x.cols() || static_cast<int>(labels.size()) != batch)
    throw std::invalid_argument("mlp2: shape mismatch");

  RealMatrix a1 = matmul(x, w1);
  for (int i = 0; i < batch; ++i)
    for (int j = 0; j < hidden; ++j) a1(i, j) = std::tanh(a1(i, j) + b1(0, j));
  if (!a1.all_finite()) throw std::runtime_error("mlp2: non-finite activations");

  RealMatrix z2 = matmul(a1, w2);
  double loss = 0.0;
  RealMatrix dz2(batch, classes);  // softmax - onehot, scaled by 1/batch
  for (int i = 0; i < batch; ++i) {
    double zmax = -1e300;
    for (int j = 0; j < classes; ++j) {
      z2(i, j) += b2(0, j);
      zmax = std::max(zmax, z2(i, j));
    }
    double denom = 0.0;
    for (int j = 0; j < classes; ++j) denom += std::exp(z2(i, j) - zmax);
    const double logdenom = std::log(denom) + zmax;
    loss += logdenom - z2(i, labels[i]);
    for (int j = 0; j < classes; ++j) {
      const double p = std::exp(z2(i, j) - logdenom);
      dz2(i, j) = (p - (j == labels[i] ? 1.0 : 0.0)) / batch;
    }
  }
  loss /= batch;
  if (!std::isfinite(loss)) throw std::runtime_error("mlp2: non-finite loss");

  Evaluation out;
  out.loss = loss;
  RealMatrix gw2 = matmul(a1.transposed(), dz2);
  RealMatrix gb2(1, classes);
  for (int i = 0; i < batch; ++i)
    for (int j = 0; j < classes; ++j) gb2(0, j) += dz2(i, j);

  RealMatrix dz1 = matmul(dz2, w2.transposed());
  for (int i = 0; i < batch; ++i)
    for (int j = 0; j < hidden; ++j) dz1(i, j) *= 1.0 - a1(i, j) * a1(i, j);

  RealMatrix gw1 = matmul(x.transposed(), dz1);
  RealMatrix gb1(1, hidden);
  for (int i = 0; i < batch; ++i)
    for (int j = 0; j < hidden; ++j) gb1(0, j) += dz1(i, j);

  out.grads.push_back(std::move(gw1));
  out.grads.push_back(std::move(gb1));
  out.grads.push_back(std::move(gw2));
  out.grads.push_back(std::move(gb2));
  return out;
}

namespace {

class QuadraticProblem final : public Problem {
 public:
  QuadraticProblem(int rows, int cols, std::uint64_t seed)
      : target_(gaussian_matrix(rows, cols, seed)) {}

  std::string name() const override { return "quadratic"; }
  std::vector<std::pair<int, int>> shapes() const override {
    return {{target_.rows(), target_.cols()}};
  }
  std::vector<RealMatrix> initial_params(std::uint64_t seed) const override {
    return {gaussian_matrix(target_.rows(), target_.cols(), seed ^ 0x9e3779b97f4a7c15ULL)};
  }
  Evaluation eval(const std::vector<RealMatrix>& params) const override {
    auto [loss, grad] = quadratic_bowl(params.at(0), target_);
    Evaluation e;
    e.loss = loss;
    e.grads.push_back(std::move(grad));
    return e;
  }

 private:
  RealMatrix target_;
};

class LinregProblem final : public Problem {
 public:
  LinregProblem(int n, int d, int outputs, std::uint64_t seed) {
    Rng rng(seed);
    x_ = gaussian_matrix(n, d, rng);
    const RealMatrix w_true = gaussian_matrix(d, outputs, rng);
    y_ = matmul(x_, w_true);
    for (int i = 0; i < y_.rows(); ++i)
      for (int j = 0; j < y_.cols(); ++j) y_(i, j) += 0.01 * rng.normal();
  }

  std::string name() const override { return "linreg"; }
  std::vector<std::pair<int, int>> shapes() const override {
    return {{x_.cols(), y_.cols()}};
  }
  std::vector<RealMatrix> initial_params(std::uint64_t seed) const override {
    return {gaussian_matrix(x_.cols(), y_.cols(), seed ^ 0xda942042e4dd58b5ULL)};
  }
  Evaluation eval(const std::vector<RealMatrix>& params) const override {
    auto [loss, grad] = linreg(params.at(0), x_, y_);
    Evaluation e;
    e.loss = loss;
    e.grads.push_back(std::move(grad));
    return e;
  }

 private:
  RealMatrix x_;
  RealMatrix y_;
};

class MlpBlobsProblem final : public Problem {
 public:
  MlpBlobsProblem(SynthDataset data, int hidden) : data_(std::move(data)), hidden_(hidden) {}

  std::string name() const override { return "mlp_blobs"; }
  std::vector<std::pair<int, int>> shapes() const override {
    const int d = data_.inputs.cols();
    return {{d, hidden_}, {1, hidden_}, {hidden_, data_.classes}, {1, data_.classes}};
  }
  std::vector<RealMatrix> initial_params(std::uint64_t seed) const override {
    Rng rng(seed ^ 0xa0761d6478bd642fULL);
    const int d = data_.inputs.cols();
    std::vector<RealMatrix> params;
    params.push_back(scaled(gaussian_matrix(d, hidden_, rng), 1.0 / std::sqrt(d)));
    params.emplace_back(1, hidden_);
    params.push_back(
        scaled(gaussian_matrix(hidden_, data_.classes, rng), 1.0 / std::sqrt(hidden_)));
    params.emplace_back(1, data_.classes);
    return params;
  }
  Evaluation eval(const std::vector<RealMatrix>& params) const override {
    return mlp2(params, data_.inputs, data_.labels, data_.classes);
  }

 private:
  SynthDataset data_;
  int hidden_;
};

}  // namespace

std::unique_ptr<Problem> make_quadratic_problem(int rows, int cols, std::uint64_t seed) {
  return std::make_unique<QuadraticProblem>(rows, cols, seed);
}

std::unique_ptr<Problem> make_linreg_problem(int n, int d, int outputs,
                                             std::uint64_t seed) {
  return std::make_unique<LinregProblem>(n, d, outputs, seed);
}

std::unique_ptr<Problem> make_mlp_blobs_problem(const SynthDataset& data, int hidden,
                                                std::uint64_t seed) {
  (void)seed;
  return std::make_unique<MlpBlobsProblem>(data, hidden);
}

double gradient_check(const Problem& problem, const std::vector<RealMatrix>& params,
                      double h) {
  const Evaluation base = problem.eval(params);
  double worst = 0.0;
  std::vector<RealMatrix> work = params;
  for (std::size_t p = 0; p < params.size(); ++p) {
    RealMatrix fd(params[p].rows(), params[p].cols());
    for (int r = 0; r < params[p].rows(); ++r)
      for (int c = 0; c < params[p].cols(); ++c) {
        const double orig = work[p](r, c);
        work[p](r, c) = orig + h;
        const double lp = problem.loss(work);
        work[p](r, c) = orig - h;
        const double lm = problem.loss(work);
        work[p](r, c) = orig;
        fd(r, c) = (lp - lm) / (2.0 * h);
      }
    const double denom = std::max(fd.frobenius_norm(), 1e-12);
    worst = std::max(worst, (fd - base.grads[p]).frobenius_norm() / denom);
  }
  return worst;
}

}  // namespace deft::models
