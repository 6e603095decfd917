#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deft/matrix.hpp"

namespace deft::projectors {

enum class Method { Deft, Svd, Rsvd, Dct, Identity };
enum class Side { Left, Right };
enum class SideMode { Std, ReverseStd };
enum class SketchLayout { Interleaved, Block };

std::string to_string(Method m);
std::string to_string(Side s);
std::string to_string(SideMode m);
std::string to_string(SketchLayout l);

/// Orthonormal low-rank basis plus the side it applies to.
struct ProjectorBasis {
  RealMatrix basis;  // d x k, orthonormal columns
  Side side = Side::Left;
  long built_at_step = 0;
  Method method = Method::Identity;

  int dim() const { return basis.rows(); }
  int rank() const { return basis.cols(); }
};

struct ProjectionConfig {
  Method method = Method::Deft;
  int rank = 128;
  int update_interval = 50;
  SideMode side_mode = SideMode::ReverseStd;
  SketchLayout sketch_layout = SketchLayout::Interleaved;
  double scale = 1.0;
  bool two_sided = false;
  int rsvd_oversampling = 8;
  std::uint64_t rsvd_seed = 0;

  void validate() const;
};

/// Energy scores per frequency column and the retained top-k index set.
struct FrequencySelection {
  std::vector<double> scores;  // length n, all >= 0
  std::vector<int> indices;    // k distinct indices, ascending
};

/// s_j = sum_i |Gf(i,j)|^2 over rows.
std::vector<double> energy_spectrum(const ComplexMatrix& gf);

/// Indices of the k largest scores, ties to the lower index, sorted ascending.
std::vector<int> select_top_k(const std::vector<double>& s, int k);

ProjectorBasis deft_build(const RealMatrix& g, int k,
                          SketchLayout layout = SketchLayout::Interleaved);
ProjectorBasis svd_build(const RealMatrix& g, int k);
ProjectorBasis rsvd_build(const RealMatrix& g, int k, int oversampling,
                          std::uint64_t seed);
ProjectorBasis dct_build(const RealMatrix& g, int k);
ProjectorBasis identity_build(int d);

/// Dispatch on cfg.method for a left-side basis built from g (d = rows).
ProjectorBasis build_projector(const RealMatrix& g, int k, const ProjectionConfig& cfg);

/// std: project over the smaller dimension; reverse_std: over the larger.
Side choose_side(int m, int n, SideMode mode);

/// Left: P^T G (k x n). Right: G P (m x k).
RealMatrix project(const ProjectorBasis& p, const RealMatrix& g);

/// Left: P N (m x n). Right: N P^T (m x n).
RealMatrix project_back(const ProjectorBasis& p, const RealMatrix& n);

/// Frobenius norm of G - project_back(P, project(P, G)).
double projection_error(const RealMatrix& g, const ProjectorBasis& p);

}  // namespace deft::projectors
