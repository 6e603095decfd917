#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "deft/matrix.hpp"

namespace deft::models {

struct SynthDataset {
  RealMatrix inputs;        // N x d
  std::vector<int> labels;  // N, in [0, classes)
  std::uint64_t seed = 0;
  int classes = 0;
  double separation = 0.0;
  double noise = 0.0;
};

/// C Gaussian clusters on axis-aligned centers at distance `separation`
/// from the origin; labels assigned round-robin so counts balance within 1.
SynthDataset make_blobs(std::uint64_t seed, int n, int d, int c, double separation,
                        double noise);

struct Evaluation {
  double loss = 0.0;
  std::vector<RealMatrix> grads;
};

/// A differentiable training problem over a list of weight matrices.
class Problem {
 public:
  virtual ~Problem() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::pair<int, int>> shapes() const = 0;
  virtual std::vector<RealMatrix> initial_params(std::uint64_t seed) const = 0;
  virtual Evaluation eval(const std::vector<RealMatrix>& params) const = 0;
  double loss(const std::vector<RealMatrix>& params) const { return eval(params).loss; }
};

/// loss = 0.5 ||W - W*||_F^2, grad = W - W*.
std::pair<double, RealMatrix> quadratic_bowl(const RealMatrix& w,
                                             const RealMatrix& w_target);

/// loss = (1/2N) ||X W - Y||_F^2, grad = (1/N) X^T (X W - Y).
std::pair<double, RealMatrix> linreg(const RealMatrix& w, const RealMatrix& x,
                                     const RealMatrix& y);

/// Two-layer tanh MLP with softmax cross-entropy over a labeled batch.
/// params = {W1 d x h, b1 1 x h, W2 h x c, b2 1 x c}.
Evaluation mlp2(const std::vector<RealMatrix>& params, const RealMatrix& x,
                const std::vector<int>& labels, int classes);

std::unique_ptr<Problem> make_quadratic_problem(int rows, int cols, std::uint64_t seed);
std::unique_ptr<Problem> make_linreg_problem(int n, int d, int outputs,
                                             std::uint64_t seed);
std::unique_ptr<Problem> make_mlp_blobs_problem(const SynthDataset& data, int hidden,
                                                std::uint64_t seed);

/// Max relative Frobenius gap between analytic and central-difference
/// gradients over all parameter matrices at the given point.
double gradient_check(const Problem& problem, const std::vector<RealMatrix>& params,
                      double h = 1e-5);

}  // namespace deft::models
