#include "deft/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace deft::optim {

using projectors::Method;
using projectors::ProjectorBasis;
using projectors::Side;

void AdamWConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("adamw: learning_rate must be > 0");
  if (beta1 < 0.0 || beta1 >= 1.0) throw std::invalid_argument("adamw: beta1 must be in [0,1)");
  if (beta2 < 0.0 || beta2 >= 1.0) throw std::invalid_argument("adamw: beta2 must be in [0,1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("adamw: epsilon must be > 0");
  if (weight_decay < 0.0) throw std::invalid_argument("adamw: weight_decay must be >= 0");
}

namespace {

struct ProjectedShape {
  int rows;
  int cols;
};

ProjectedShape projected_shape(const ParamState& s) {
  const int m = s.weights.rows(), n = s.weights.cols();
  if (s.proj_cfg.method == Method::Identity) return {m, n};
  const int k = s.proj_cfg.rank;
  if (s.proj_cfg.two_sided) return {k, k};
  const Side side = projectors::choose_side(m, n, s.proj_cfg.side_mode);
  return side == Side::Left ? ProjectedShape{k, n} : ProjectedShape{m, k};
}

ProjectorBasis build_side(const ParamState& s, const RealMatrix& g, Side side) {
  const RealMatrix src = side == Side::Left ? g : g.transposed();
  const int k = s.proj_cfg.method == Method::Identity ? src.rows() : s.proj_cfg.rank;
  ProjectorBasis basis = projectors::build_projector(src, k, s.proj_cfg);
  basis.side = side;
  basis.built_at_step = s.step;
  return basis;
}

}  // namespace

ParamState init_state(const RealMatrix& w0, const projectors::ProjectionConfig& proj_cfg,
                      const AdamWConfig& adamw_cfg) {
  if (!w0.all_finite()) throw std::invalid_argument("init_state: non-finite weights");
  proj_cfg.validate();
  adamw_cfg.validate();
  const int minmn = std::min(w0.rows(), w0.cols());
  if (proj_cfg.method != Method::Identity && proj_cfg.rank > minmn)
    throw std::invalid_argument("init_state: rank exceeds min(m, n)");

  ParamState s;
  s.weights = w0;
  s.proj_cfg = proj_cfg;
  s.adamw_cfg = adamw_cfg;
  s.step = 0;
  const ProjectedShape shape = projected_shape(s);
  s.first_moment = RealMatrix(shape.rows, shape.cols);
  s.second_moment = RealMatrix(shape.rows, shape.cols);
  return s;
}

bool refresh_projector_if_due(ParamState& state, const RealMatrix& g) {
  if (g.rows() != state.weights.rows() || g.cols() != state.weights.cols())
    throw std::invalid_argument("refresh_projector: gradient shape mismatch");
  const bool due =
      !state.projector.has_value() || state.step % state.proj_cfg.update_interval == 0;
  if (!due) return false;

  if (state.proj_cfg.two_sided) {
    state.projector = build_side(state, g, Side::Left);
    state.projector_right = build_side(state, g, Side::Right);
  } else if (state.proj_cfg.method == Method::Identity) {
    state.projector = build_side(state, g, Side::Left);
  } else {
    const Side side = projectors::choose_side(g.rows(), g.cols(), state.proj_cfg.side_mode);
    state.projector = build_side(state, g, side);
  }
  return true;
}

StepReport step(ParamState& state, const RealMatrix& g) {
  if (!g.all_finite()) throw std::invalid_argument("step: non-finite gradient");

  StepReport report;
  const auto t0 = std::chrono::steady_clock::now();
  report.projector_rebuilt = refresh_projector_if_due(state, g);
  if (report.projector_rebuilt) {
    const auto t1 = std::chrono::steady_clock::now();
    report.projector_build_seconds = std::chrono::duration<double>(t1 - t0).count();
  }

  RealMatrix r = state.proj_cfg.two_sided
                     ? projectors::project(*state.projector_right,
                                           projectors::project(*state.projector, g))
                     : projectors::project(*state.projector, g);

  state.step += 1;
  const double b1 = state.adamw_cfg.beta1, b2 = state.adamw_cfg.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step));

  RealMatrix n(r.rows(), r.cols());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double ri = r.data()[i];
    double& m = state.first_moment.data()[i];
    double& v = state.second_moment.data()[i];
    m = b1 * m + (1.0 - b1) * ri;
    v = b2 * v + (1.0 - b2) * ri * ri;
    const double mhat = m / corr1;
    const double vhat = v / corr2;
    n.data()[i] = mhat / (std::sqrt(vhat) + state.adamw_cfg.epsilon);
  }

  RealMatrix delta = state.proj_cfg.two_sided
                         ? projectors::project_back(
                               *state.projector_right,
                               projectors::project_back(*state.projector, n))
                         : projectors::project_back(*state.projector, n);
  for (std::size_t i = 0; i < delta.size(); ++i)
    delta.data()[i] = state.proj_cfg.scale * delta.data()[i];

  const double eta = state.adamw_cfg.learning_rate;
  const double decay = 1.0 - eta * state.adamw_cfg.weight_decay;
  for (std::size_t i = 0; i < state.weights.size(); ++i) {
    double& w = state.weights.data()[i];
    w -= eta * delta.data()[i];
    w *= decay;  // decoupled decay as one exact factor per step
  }
  if (!state.weights.all_finite())
    throw std::runtime_error("step: weights diverged to non-finite values");

  report.step = state.step;
  report.update_norm = delta.frobenius_norm();
  report.state_elements = state_element_count(state);
  return report;
}

void dense_adamw_step(RealMatrix& w, RealMatrix& m, RealMatrix& v, long& t,
                      const RealMatrix& g, const AdamWConfig& cfg) {
  if (!g.all_finite()) throw std::invalid_argument("dense_adamw_step: non-finite gradient");
  if (g.rows() != w.rows() || g.cols() != w.cols())
    throw std::invalid_argument("dense_adamw_step: shape mismatch");

  t += 1;
  const double corr1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double corr2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  const double decay = 1.0 - cfg.learning_rate * cfg.weight_decay;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double gi = g.data()[i];
    double& mi = m.data()[i];
    double& vi = v.data()[i];
    mi = cfg.beta1 * mi + (1.0 - cfg.beta1) * gi;
    vi = cfg.beta2 * vi + (1.0 - cfg.beta2) * gi * gi;
    const double mhat = mi / corr1;
    const double vhat = vi / corr2;
    double& wi = w.data()[i];
    wi -= cfg.learning_rate * (mhat / (std::sqrt(vhat) + cfg.epsilon));
    wi *= decay;
  }
  if (!w.all_finite())
    throw std::runtime_error("dense_adamw_step: weights diverged to non-finite values");
}

long state_element_count(const ParamState& state) {
  const long moments = 2L * state.first_moment.rows() * state.first_moment.cols();
  if (state.proj_cfg.method == Method::Identity) return moments;
  long basis = 0;
  const int k = state.proj_cfg.rank;
  if (state.proj_cfg.two_sided) {
    basis = static_cast<long>(state.weights.rows()) * k +
            static_cast<long>(state.weights.cols()) * k;
  } else {
    const Side side =
        projectors::choose_side(state.weights.rows(), state.weights.cols(),
                                state.proj_cfg.side_mode);
    basis = side == Side::Left ? static_cast<long>(state.weights.rows()) * k
                               : static_cast<long>(state.weights.cols()) * k;
  }
  return moments + basis;
}

}  // namespace deft::optim
