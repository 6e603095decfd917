#include "deft/projector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "deft/fft.hpp"
#include "deft/qr.hpp"
#include "deft/rng.hpp"
#include "deft/svd.hpp"

namespace deft::projectors {

std::string to_string(Method m) {
  switch (m) {
    case Method::Deft: return "deft";
    case Method::Svd: return "svd";
    case Method::Rsvd: return "rsvd";
    case Method::Dct: return "dct";
    case Method::Identity: return "identity";
  }
  return "?";
}

std::string to_string(Side s) { return s == Side::Left ? "left" : "right"; }

std::string to_string(SideMode m) {
  return m == SideMode::Std ? "std" : "reverse_std";
}

std::string to_string(SketchLayout l) {
  return l == SketchLayout::Interleaved ? "interleaved" : "block";
}

void ProjectionConfig::validate() const {
  if (rank < 1) throw std::invalid_argument("projection: rank must be >= 1");
  if (update_interval < 1)
    throw std::invalid_argument("projection: update_interval must be >= 1");
  if (!(scale > 0.0)) throw std::invalid_argument("projection: scale must be > 0");
  if (rsvd_oversampling < 0)
    throw std::invalid_argument("projection: rsvd_oversampling must be >= 0");
}

std::vector<double> energy_spectrum(const ComplexMatrix& gf) {
  if (!gf.all_finite()) throw std::invalid_argument("energy_spectrum: non-finite entry");
  std::vector<double> s(gf.cols(), 0.0);
  for (int i = 0; i < gf.rows(); ++i)
    for (int j = 0; j < gf.cols(); ++j) s[j] += std::norm(gf(i, j));
  return s;
}

std::vector<int> select_top_k(const std::vector<double>& s, int k) {
  const int n = static_cast<int>(s.size());
  if (k < 1 || k > n) throw std::invalid_argument("select_top_k: k out of range");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return s[a] > s[b]; });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

ProjectorBasis deft_build(const RealMatrix& g, int k, SketchLayout layout) {
  const int m = g.rows(), n = g.cols();
  if (k < 1 || k > std::min(m, n))
    throw std::invalid_argument("deft_build: k out of range");

  const ComplexMatrix gf = linalg::fft_rows(g);
  const std::vector<double> s = energy_spectrum(gf);
  const std::vector<int> sel = select_top_k(s, k);

  ComplexMatrix yc(m, k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) yc(i, j) = gf(i, sel[j]);

  const linalg::QrComplex cqr = linalg::qr_complex(yc);

  RealMatrix yr(m, 2 * k);
  if (layout == SketchLayout::Interleaved) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) {
        yr(i, 2 * j) = cqr.q(i, j).real();
        yr(i, 2 * j + 1) = cqr.q(i, j).imag();
      }
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) {
        yr(i, j) = cqr.q(i, j).real();
        yr(i, k + j) = cqr.q(i, j).imag();
      }
  }

  const linalg::QrReal rqr = linalg::qr_real(yr);  // economy: min(m, 2k) columns

  ProjectorBasis out;
  out.basis = RealMatrix(m, k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) out.basis(i, j) = rqr.q(i, j);
  out.method = Method::Deft;
  return out;
}

ProjectorBasis svd_build(const RealMatrix& g, int k) {
  const int m = g.rows(), n = g.cols();
  if (k < 1 || k > std::min(m, n))
    throw std::invalid_argument("svd_build: k out of range");
  const linalg::SvdResult dec = linalg::svd(g);
  ProjectorBasis out;
  out.basis = RealMatrix(m, k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) out.basis(i, j) = dec.u(i, j);
  out.method = Method::Svd;
  return out;
}

ProjectorBasis rsvd_build(const RealMatrix& g, int k, int oversampling,
                          std::uint64_t seed) {
  const int m = g.rows(), n = g.cols();
  if (k < 1 || oversampling < 0 || k + oversampling > std::min(m, n))
    throw std::invalid_argument("rsvd_build: k + oversampling out of range");
  const int kp = k + oversampling;

  const RealMatrix omega = gaussian_matrix(n, kp, seed);
  RealMatrix y = matmul(g, omega);
  RealMatrix q = linalg::qr_real(y).q;

  // one power iteration
  const RealMatrix z = matmul(g.transposed(), q);
  const RealMatrix qz = linalg::qr_real(z).q;
  y = matmul(g, qz);
  q = linalg::qr_real(y).q;

  ProjectorBasis out;
  out.basis = RealMatrix(m, k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) out.basis(i, j) = q(i, j);
  out.method = Method::Rsvd;
  return out;
}

ProjectorBasis dct_build(const RealMatrix& g, int k) {
  const int m = g.rows(), n = g.cols();
  if (k < 1 || k > std::min(m, n))
    throw std::invalid_argument("dct_build: k out of range");

  // orthonormal DCT-II basis column c_j, scored by ||G c_j||^2
  RealMatrix gc(m, n);
  const double pi = 3.14159265358979323846;
  std::vector<double> col(n);
  for (int j = 0; j < n; ++j) {
    const double cj = j == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int l = 0; l < n; ++l)
      col[l] = cj * std::cos(pi * (2.0 * l + 1.0) * j / (2.0 * n));
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      const double* gi = g.row_ptr(i);
      for (int l = 0; l < n; ++l) acc += gi[l] * col[l];
      gc(i, j) = acc;
    }
  }
  std::vector<double> score(n, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) score[j] += gc(i, j) * gc(i, j);

  const std::vector<int> sel = select_top_k(score, k);
  RealMatrix sketch(m, k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) sketch(i, j) = gc(i, sel[j]);

  const linalg::QrReal qr = linalg::qr_real(sketch);
  ProjectorBasis out;
  out.basis = RealMatrix(m, k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) out.basis(i, j) = qr.q(i, j);
  out.method = Method::Dct;
  return out;
}

ProjectorBasis identity_build(int d) {
  if (d < 1) throw std::invalid_argument("identity_build: d must be >= 1");
  ProjectorBasis out;
  out.basis = RealMatrix::identity(d);
  out.method = Method::Identity;
  return out;
}

ProjectorBasis build_projector(const RealMatrix& g, int k, const ProjectionConfig& cfg) {
  switch (cfg.method) {
    case Method::Deft: return deft_build(g, k, cfg.sketch_layout);
    case Method::Svd: return svd_build(g, k);
    case Method::Rsvd: return rsvd_build(g, k, cfg.rsvd_oversampling, cfg.rsvd_seed);
    case Method::Dct: return dct_build(g, k);
    case Method::Identity: return identity_build(g.rows());
  }
  throw std::logic_error("build_projector: unknown method");
}

Side choose_side(int m, int n, SideMode mode) {
  if (m < 1 || n < 1) throw std::invalid_argument("choose_side: empty shape");
  const bool tall = m >= n;
  if (mode == SideMode::Std) return tall ? Side::Right : Side::Left;
  return tall ? Side::Left : Side::Right;
}

RealMatrix project(const ProjectorBasis& p, const RealMatrix& g) {
  if (p.side == Side::Left) {
    if (p.basis.rows() != g.rows())
      throw std::invalid_argument("project: left basis rows must match gradient rows");
    return matmul(p.basis.transposed(), g);
  }
  if (p.basis.rows() != g.cols())
    throw std::invalid_argument("project: right basis rows must match gradient cols");
  return matmul(g, p.basis);
}

RealMatrix project_back(const ProjectorBasis& p, const RealMatrix& n) {
  if (p.side == Side::Left) {
    if (p.basis.cols() != n.rows())
      throw std::invalid_argument("project_back: rank must match projected rows");
    return matmul(p.basis, n);
  }
  if (p.basis.cols() != n.cols())
    throw std::invalid_argument("project_back: rank must match projected cols");
  return matmul(n, p.basis.transposed());
}

double projection_error(const RealMatrix& g, const ProjectorBasis& p) {
  const RealMatrix restored = project_back(p, project(p, g));
  return (g - restored).frobenius_norm();
}

}  // namespace deft::projectors
