#include "deft/qr.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace deft::linalg {

namespace {

// Reflector vectors are stored column by column; v_j lives in rows j..m-1
// with tau_j = 2/(v'v). tau_j == 0 marks a skipped (zero pivot) column.
// Applies run in two row-major passes (gather s = tau * W^T v, then the
// rank-1 update) so the inner loops stay contiguous.
void apply_real_reflector_left(RealMatrix& w, const std::vector<double>& v, double tau,
                               int j0, int c0, std::vector<double>& scratch) {
  if (tau == 0.0) return;
  const int m = w.rows(), n = w.cols();
  const int width = n - c0;
  if (width <= 0) return;
  double* s = scratch.data();
  std::fill(s, s + width, 0.0);
  for (int r = j0; r < m; ++r) {
    const double vr = v[r - j0];
    const double* wr = w.row_ptr(r) + c0;
    for (int c = 0; c < width; ++c) s[c] += vr * wr[c];
  }
  for (int c = 0; c < width; ++c) s[c] *= tau;
  for (int r = j0; r < m; ++r) {
    const double vr = v[r - j0];
    double* wr = w.row_ptr(r) + c0;
    for (int c = 0; c < width; ++c) wr[c] -= vr * s[c];
  }
}

void apply_complex_reflector_left(ComplexMatrix& w, const std::vector<std::complex<double>>& v,
                                  double tau, int j0, int c0,
                                  std::vector<std::complex<double>>& scratch) {
  using C = std::complex<double>;
  if (tau == 0.0) return;
  const int m = w.rows(), n = w.cols();
  const int width = n - c0;
  if (width <= 0) return;
  C* s = scratch.data();
  std::fill(s, s + width, C(0.0, 0.0));
  for (int r = j0; r < m; ++r) {
    const C vr = std::conj(v[r - j0]);
    const C* wr = w.data() + static_cast<std::size_t>(r) * n + c0;
    for (int c = 0; c < width; ++c) s[c] += vr * wr[c];
  }
  for (int c = 0; c < width; ++c) s[c] *= tau;
  for (int r = j0; r < m; ++r) {
    const C vr = v[r - j0];
    C* wr = w.data() + static_cast<std::size_t>(r) * n + c0;
    for (int c = 0; c < width; ++c) wr[c] -= vr * s[c];
  }
}

}  // namespace

QrReal qr_real(const RealMatrix& a) {
  const int m = a.rows(), n = a.cols();
  if (m < 1 || n < 1) throw std::invalid_argument("qr_real: empty matrix");
  if (!a.all_finite()) throw std::invalid_argument("qr_real: non-finite entry");
  const int p = std::min(m, n);

  RealMatrix w = a;
  std::vector<std::vector<double>> vs(p);
  std::vector<double> taus(p, 0.0);
  std::vector<double> scratch(n);

  for (int j = 0; j < p; ++j) {
    double norm2 = 0.0;
    for (int r = j; r < m; ++r) norm2 += w(r, j) * w(r, j);
    const double alpha = std::sqrt(norm2);
    if (alpha == 0.0) {
      w(j, j) = 0.0;
      continue;  // zero pivot: R(j,j) = 0, Q column completed later
    }
    std::vector<double> v(m - j);
    for (int r = j; r < m; ++r) v[r - j] = w(r, j);
    const double sign = v[0] >= 0.0 ? 1.0 : -1.0;
    v[0] += sign * alpha;
    double vv = 0.0;
    for (double x : v) vv += x * x;
    const double tau = 2.0 / vv;

    apply_real_reflector_left(w, v, tau, j, j + 1, scratch);
    w(j, j) = -sign * alpha;
    for (int r = j + 1; r < m; ++r) w(r, j) = 0.0;
    vs[j] = std::move(v);
    taus[j] = tau;
  }

  QrReal out;
  out.r = RealMatrix(p, n);
  for (int i = 0; i < p; ++i)
    for (int c = i; c < n; ++c) out.r(i, c) = w(i, c);

  // Backward accumulation of Q = H_0 ... H_{p-1} applied to the leading
  // m x p identity; skipped reflectors contribute identity, which yields
  // the deterministic completion for rank-deficient columns.
  RealMatrix q(m, p);
  for (int i = 0; i < p; ++i) q(i, i) = 1.0;
  std::vector<double> qscratch(p);
  for (int j = p - 1; j >= 0; --j)
    apply_real_reflector_left(q, vs[j], taus[j], j, j, qscratch);

  // sign pass: non-negative diagonal of R
  for (int j = 0; j < p; ++j) {
    if (out.r(j, j) < 0.0) {
      for (int c = j; c < n; ++c) out.r(j, c) = -out.r(j, c);
      for (int r = 0; r < m; ++r) q(r, j) = -q(r, j);
    }
  }
  out.q = std::move(q);
  return out;
}

QrComplex qr_complex(const ComplexMatrix& a) {
  using C = std::complex<double>;
  const int m = a.rows(), k = a.cols();
  if (m < 1 || k < 1) throw std::invalid_argument("qr_complex: empty matrix");
  if (k > m) throw std::invalid_argument("qr_complex: cols exceed rows");
  if (!a.all_finite()) throw std::invalid_argument("qr_complex: non-finite entry");

  ComplexMatrix w = a;
  std::vector<std::vector<C>> vs(k);
  std::vector<double> taus(k, 0.0);
  std::vector<C> scratch(k);

  for (int j = 0; j < k; ++j) {
    double norm2 = 0.0;
    for (int r = j; r < m; ++r) norm2 += std::norm(w(r, j));
    const double alpha = std::sqrt(norm2);
    if (alpha == 0.0) {
      w(j, j) = C(0.0, 0.0);
      continue;
    }
    std::vector<C> v(m - j);
    for (int r = j; r < m; ++r) v[r - j] = w(r, j);
    const C x0 = v[0];
    const C phase = std::abs(x0) == 0.0 ? C(1.0, 0.0) : x0 / std::abs(x0);
    v[0] += phase * alpha;
    double vv = 0.0;
    for (const C& x : v) vv += std::norm(x);
    const double tau = 2.0 / vv;

    apply_complex_reflector_left(w, v, tau, j, j + 1, scratch);
    w(j, j) = -phase * alpha;
    for (int r = j + 1; r < m; ++r) w(r, j) = C(0.0, 0.0);
    vs[j] = std::move(v);
    taus[j] = tau;
  }

  QrComplex out;
  out.r = ComplexMatrix(k, k);
  for (int i = 0; i < k; ++i)
    for (int c = i; c < k; ++c) out.r(i, c) = w(i, c);

  ComplexMatrix q(m, k);
  for (int i = 0; i < k; ++i) q(i, i) = C(1.0, 0.0);
  for (int j = k - 1; j >= 0; --j)
    apply_complex_reflector_left(q, vs[j], taus[j], j, j, scratch);

  // phase pass: real non-negative diagonal of R
  for (int j = 0; j < k; ++j) {
    const C d = out.r(j, j);
    const double mag = std::abs(d);
    if (mag == 0.0) continue;
    const C phi = std::conj(d) / mag;
    for (int c = j; c < k; ++c) out.r(j, c) *= phi;
    out.r(j, j) = C(mag, 0.0);
    const C qphi = std::conj(phi);
    for (int r = 0; r < m; ++r) q(r, j) *= qphi;
  }
  out.q = std::move(q);
  return out;
}

}  // namespace deft::linalg
