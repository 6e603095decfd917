#pragma once

#include <optional>

#include "deft/matrix.hpp"
#include "deft/projector.hpp"

namespace deft::optim {

struct AdamWConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;

  void validate() const;
};

/// Training state for one weight matrix under projected AdamW.
struct ParamState {
  RealMatrix weights;       // m x n
  RealMatrix first_moment;  // projected-gradient shape
  RealMatrix second_moment; // same shape, entries >= 0
  long step = 0;
  std::optional<projectors::ProjectorBasis> projector;
  std::optional<projectors::ProjectorBasis> projector_right;  // two-sided only
  projectors::ProjectionConfig proj_cfg;
  AdamWConfig adamw_cfg;
};

struct StepReport {
  long step = 0;
  bool projector_rebuilt = false;
  double projector_build_seconds = 0.0;
  double update_norm = 0.0;
  long state_elements = 0;
};

ParamState init_state(const RealMatrix& w0, const projectors::ProjectionConfig& proj_cfg,
                      const AdamWConfig& adamw_cfg);

/// Rebuilds the projector(s) from g when step % T == 0 or none exists yet.
/// Returns whether a rebuild happened.
bool refresh_projector_if_due(ParamState& state, const RealMatrix& g);

StepReport step(ParamState& state, const RealMatrix& g);

/// Textbook decoupled-weight-decay AdamW on dense matrices, bias correction
/// timed as in the projected step (t incremented before the moment update).
/// Kept as an independent code path for equivalence checks.
void dense_adamw_step(RealMatrix& w, RealMatrix& m, RealMatrix& v, long& t,
                      const RealMatrix& g, const AdamWConfig& cfg);

/// Stored optimizer-state scalars: 2 x projected shape + projector entries.
/// The identity method stores no basis.
long state_element_count(const ParamState& state);

}  // namespace deft::optim
