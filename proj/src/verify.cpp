#include "deft/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>

#include "deft/config.hpp"
#include "deft/fft.hpp"
#include "deft/matrix.hpp"
#include "deft/optimizer.hpp"
#include "deft/problems.hpp"
#include "deft/projector.hpp"
#include "deft/qr.hpp"
#include "deft/rng.hpp"
#include "deft/svd.hpp"

namespace deft::verify {

namespace {

using linalg::SvdResult;
using projectors::Method;
using projectors::ProjectionConfig;
using projectors::ProjectorBasis;
using projectors::Side;
using projectors::SideMode;

// shared corpus: 10 shapes x 10 seeds, mixed square/tall/wide with odd sizes
const std::vector<std::pair<int, int>> kCorpusShapes = {
    {16, 16}, {24, 16}, {16, 24}, {32, 32}, {48, 32},
    {32, 48}, {33, 47}, {47, 33}, {64, 64}, {40, 56}};

std::vector<RealMatrix> corpus() {
  std::vector<RealMatrix> out;
  for (int s = 0; s < 10; ++s)
    for (const auto& [m, n] : kCorpusShapes)
      out.push_back(gaussian_matrix(m, n, 1000 + 17 * s + m + 131 * n));
  return out;
}

double ortho_gap(const RealMatrix& q) {
  const RealMatrix gram = matmul(q.transposed(), q);
  return max_abs_diff(gram, RealMatrix::identity(q.cols()));
}

double ortho_gap_complex(const ComplexMatrix& q) {
  const ComplexMatrix gram = conj_transpose_times(q, q);
  return cmax_abs_diff(gram, ComplexMatrix::identity(q.cols()));
}

RealMatrix reconstruct(const SvdResult& dec) {
  RealMatrix us = dec.u;
  for (int i = 0; i < us.rows(); ++i)
    for (int j = 0; j < us.cols(); ++j) us(i, j) *= dec.s[j];
  return matmul(us, dec.v.transposed());
}

PropertyResult fft_matches_naive(int max_n) {
  PropertyResult r{"fft-matches-naive-dft", false, 0.0, 1e-9,
                   "max abs gap over n in [2, " + std::to_string(max_n) + "]"};
  for (int n = 2; n <= max_n; ++n) {
    const RealMatrix g = gaussian_matrix(2, n, 77 + n);
    const ComplexMatrix gf = linalg::fft_rows(g);
    for (int i = 0; i < 2; ++i) {
      linalg::CVec row(n);
      for (int j = 0; j < n; ++j) row[j] = {g(i, j), 0.0};
      const linalg::CVec ref = linalg::naive_dft(row);
      for (int j = 0; j < n; ++j)
        r.worst = std::max(r.worst, std::abs(gf(i, j) - ref[j]));
    }
  }
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult fft_parseval() {
  PropertyResult r{"fft-parseval", false, 0.0, 1e-10,
                   "relative gap of sum_j s_j vs n*||G||_F^2"};
  for (const RealMatrix& g : corpus()) {
    const std::vector<double> s = projectors::energy_spectrum(linalg::fft_rows(g));
    double total = 0.0;
    for (double v : s) total += v;
    const double f = g.frobenius_norm();
    const double expected = g.cols() * f * f;
    r.worst = std::max(r.worst, std::abs(total - expected) / std::max(1.0, expected));
  }
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult qr_real_contract() {
  PropertyResult r{"qr-real-contract", false, 0.0, 1e-10,
                   "orthonormality, triangularity, sign and reconstruction"};
  auto check = [&](const RealMatrix& a) {
    const linalg::QrReal qr = linalg::qr_real(a);
    r.worst = std::max(r.worst, ortho_gap(qr.q));
    for (int i = 0; i < qr.r.rows(); ++i) {
      if (qr.r(i, i) < 0.0) r.worst = std::max(r.worst, std::abs(qr.r(i, i)));
      for (int j = 0; j < std::min(i, qr.r.cols()); ++j)
        r.worst = std::max(r.worst, std::abs(qr.r(i, j)));
    }
    if (a.cols() <= a.rows()) {
      const double gap = (matmul(qr.q, qr.r) - a).frobenius_norm() /
                         std::max(1.0, a.frobenius_norm());
      r.worst = std::max(r.worst, gap);
    }
  };
  for (const RealMatrix& g : corpus()) check(g);
  // rank-deficient: a zero column and a duplicated column
  RealMatrix d(8, 4);
  Rng rng(5);
  for (int i = 0; i < 8; ++i) d(i, 0) = rng.normal();
  for (int i = 0; i < 8; ++i) d(i, 2) = rng.normal();
  for (int i = 0; i < 8; ++i) d(i, 3) = d(i, 0);  // column 1 stays zero
  check(d);
  const linalg::QrReal qd = linalg::qr_real(d);
  if (qd.r(1, 1) != 0.0 || std::abs(qd.r(3, 3)) > 1e-10)
    r.worst = std::max(r.worst, 1.0);
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult qr_complex_contract() {
  PropertyResult r{"qr-complex-contract", false, 0.0, 1e-10,
                   "orthonormality, real non-negative diagonal, reconstruction"};
  for (int s = 0; s < 30; ++s) {
    const int m = 8 + (s % 5) * 7;
    const int k = 1 + s % std::min(m, 6);
    Rng rng(9000 + s);
    ComplexMatrix a(m, k);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) a(i, j) = {rng.normal(), rng.normal()};
    const linalg::QrComplex qr = linalg::qr_complex(a);
    r.worst = std::max(r.worst, ortho_gap_complex(qr.q));
    for (int i = 0; i < k; ++i) {
      r.worst = std::max(r.worst, std::abs(qr.r(i, i).imag()));
      if (qr.r(i, i).real() < 0.0) r.worst = std::max(r.worst, -qr.r(i, i).real());
      for (int j = 0; j < i; ++j) r.worst = std::max(r.worst, std::abs(qr.r(i, j)));
    }
    const ComplexMatrix back = cmatmul(qr.q, qr.r);
    r.worst = std::max(r.worst,
                       cmax_abs_diff(back, a) / std::max(1.0, a.frobenius_norm()));
  }
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult svd_contract() {
  PropertyResult r{"svd-contract", false, 0.0, 1e-10,
                   "ordering, orthonormality, sign convention, reconstruction"};
  for (const RealMatrix& g : corpus()) {
    const SvdResult dec = linalg::svd(g);
    for (std::size_t i = 0; i + 1 < dec.s.size(); ++i)
      if (dec.s[i] < dec.s[i + 1]) r.worst = std::max(r.worst, dec.s[i + 1] - dec.s[i]);
    if (!dec.s.empty() && dec.s.back() < 0.0) r.worst = std::max(r.worst, -dec.s.back());
    r.worst = std::max(r.worst, ortho_gap(dec.u));
    r.worst = std::max(r.worst, ortho_gap(dec.v));
    for (int j = 0; j < dec.u.cols(); ++j) {
      int arg = 0;
      for (int i = 1; i < dec.u.rows(); ++i)
        if (std::abs(dec.u(i, j)) > std::abs(dec.u(arg, j))) arg = i;
      if (dec.u(arg, j) < 0.0) r.worst = std::max(r.worst, -dec.u(arg, j));
    }
    const double gap =
        (reconstruct(dec) - g).frobenius_norm() / std::max(1.0, g.frobenius_norm());
    r.worst = std::max(r.worst, gap);
  }
  // degenerate inputs
  const RealMatrix zero(3, 2);
  const SvdResult zd = linalg::svd(zero);
  r.worst = std::max(r.worst, std::abs(zd.s[0]) + std::abs(zd.s[1]));
  r.worst = std::max(r.worst, ortho_gap(zd.u));
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult svd_eckart_young_sanity() {
  PropertyResult r{"svd-eckart-young-sanity", false, 0.0, 1e-8,
                   "||A - U_k U_k^T A||_F^2 vs tail sum of squared singular values"};
  for (const RealMatrix& g : corpus()) {
    const SvdResult dec = linalg::svd(g);
    const int p = static_cast<int>(dec.s.size());
    for (const int k : {1, p / 2}) {
      if (k < 1 || k >= p) continue;
      RealMatrix uk(g.rows(), k);
      for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < k; ++j) uk(i, j) = dec.u(i, j);
      const RealMatrix resid = g - matmul(uk, matmul(uk.transposed(), g));
      const double lhs = std::pow(resid.frobenius_norm(), 2);
      double rhs = 0.0;
      for (int i = k; i < p; ++i) rhs += dec.s[i] * dec.s[i];
      r.worst = std::max(r.worst, std::abs(lhs - rhs) / std::max(1e-30, rhs));
    }
  }
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult kernel_determinism(bool perturb) {
  PropertyResult r{"kernel-determinism", false, 0.0, 0.0,
                   "bitwise repeatability of fft/qr/svd on identical input"};
  int mismatches = 0;
  const auto mats = corpus();
  for (int s = 0; s < 10; ++s) {
    const RealMatrix& g = mats[s * 7 % mats.size()];
    if (!(linalg::fft_rows(g) == linalg::fft_rows(g))) ++mismatches;

    const linalg::QrReal q1 = linalg::qr_real(g);
    linalg::QrReal q2 = linalg::qr_real(g);
    if (perturb && s == 3)
      for (int i = 0; i < q2.q.rows(); ++i) q2.q(i, 0) = -q2.q(i, 0);
    if (!(q1.q == q2.q) || !(q1.r == q2.r)) ++mismatches;

    const SvdResult s1 = linalg::svd(g);
    const SvdResult s2 = linalg::svd(g);
    if (!(s1.u == s2.u) || s1.s != s2.s || !(s1.v == s2.v)) ++mismatches;
  }
  r.worst = mismatches;
  r.pass = mismatches == 0;
  return r;
}

PropertyResult projector_orthonormality() {
  PropertyResult r{"projector-orthonormality", false, 0.0, 1e-10,
                   "||M^T M - I||_max over all five builders on the corpus"};
  for (const RealMatrix& g : corpus()) {
    const int minmn = std::min(g.rows(), g.cols());
    for (const int k : {1, minmn / 4, minmn / 2}) {
      if (k < 1) continue;
      r.worst = std::max(r.worst, ortho_gap(projectors::deft_build(g, k).basis));
      r.worst = std::max(r.worst, ortho_gap(projectors::svd_build(g, k).basis));
      const int p = std::min(8, minmn - k);
      r.worst =
          std::max(r.worst, ortho_gap(projectors::rsvd_build(g, k, p, 42).basis));
      r.worst = std::max(r.worst, ortho_gap(projectors::dct_build(g, k).basis));
    }
  }
  r.worst = std::max(r.worst, ortho_gap(projectors::identity_build(16).basis));
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult projector_determinism() {
  PropertyResult r{"projector-determinism", false, 0.0, 0.0,
                   "bitwise repeatability of all builders (seeded rsvd)"};
  int mismatches = 0;
  const auto mats = corpus();
  for (int s = 0; s < 8; ++s) {
    const RealMatrix& g = mats[(3 + 13 * s) % mats.size()];
    const int k = 1 + s % 4;
    if (!(projectors::deft_build(g, k).basis == projectors::deft_build(g, k).basis))
      ++mismatches;
    if (!(projectors::deft_build(g, k, projectors::SketchLayout::Block).basis ==
          projectors::deft_build(g, k, projectors::SketchLayout::Block).basis))
      ++mismatches;
    if (!(projectors::svd_build(g, k).basis == projectors::svd_build(g, k).basis))
      ++mismatches;
    if (!(projectors::dct_build(g, k).basis == projectors::dct_build(g, k).basis))
      ++mismatches;
    if (!(projectors::rsvd_build(g, k, 8, 99).basis ==
          projectors::rsvd_build(g, k, 8, 99).basis))
      ++mismatches;
  }
  r.worst = mismatches;
  r.pass = mismatches == 0;
  return r;
}

PropertyResult deft_column_space() {
  PropertyResult r{"deft-column-space-containment", false, 0.0, 1e-8,
                   "residual of DEFT basis columns outside col(G)"};
  // tall shapes with odd column counts and centered rows, so the selected
  // frequency columns are genuinely complex and the real sketch keeps full
  // column rank
  const std::vector<std::pair<int, int>> shapes = {{47, 33}, {31, 25}, {63, 41}};
  for (int s = 0; s < 7; ++s) {
    for (const auto& [m, n] : shapes) {
      RealMatrix g = gaussian_matrix(m, n, 4000 + s * 31 + m);
      for (int i = 0; i < m; ++i) {
        double mean = 0.0;
        for (int j = 0; j < n; ++j) mean += g(i, j);
        mean /= n;
        for (int j = 0; j < n; ++j) g(i, j) -= mean;
      }
      const RealMatrix colbasis = linalg::qr_real(g).q;  // m x n, full rank
      for (const int k : {2, 4}) {
        const ProjectorBasis basis = projectors::deft_build(g, k);
        const RealMatrix proj =
            matmul(colbasis, matmul(colbasis.transposed(), basis.basis));
        r.worst = std::max(r.worst, max_abs_diff(proj, basis.basis));
      }
    }
  }
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult eckart_young_ordering() {
  PropertyResult r{"eckart-young-ordering", false, 0.0, 1e-10,
                   "svd error minus each builder's error (must not exceed slack)"};
  for (const RealMatrix& g : corpus()) {
    const int minmn = std::min(g.rows(), g.cols());
    for (const int k : {1, 4, 16, minmn / 2}) {
      if (k < 1 || k > minmn) continue;
      ProjectorBasis svd_basis = projectors::svd_build(g, k);
      const double best = projectors::projection_error(g, svd_basis);
      const int p = std::min(8, minmn - k);
      const double candidates[] = {
          projectors::projection_error(g, projectors::deft_build(g, k)),
          projectors::projection_error(g, projectors::rsvd_build(g, k, p, 7)),
          projectors::projection_error(g, projectors::dct_build(g, k))};
      for (const double err : candidates)
        r.worst = std::max(r.worst, best - err);  // > 0 would beat the optimum
    }
  }
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult non_expansiveness() {
  PropertyResult r{"projection-non-expansiveness", false, 0.0, 1e-12,
                   "projection_error minus ||G||_F (never positive)"};
  for (const RealMatrix& g : corpus()) {
    const int minmn = std::min(g.rows(), g.cols());
    const double norm = g.frobenius_norm();
    for (const int k : {1, minmn / 2}) {
      if (k < 1) continue;
      const int p = std::min(8, minmn - k);
      const double errs[] = {
          projectors::projection_error(g, projectors::deft_build(g, k)),
          projectors::projection_error(g, projectors::svd_build(g, k)),
          projectors::projection_error(g, projectors::rsvd_build(g, k, p, 11)),
          projectors::projection_error(g, projectors::dct_build(g, k))};
      for (const double e : errs) r.worst = std::max(r.worst, e - norm);
    }
  }
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult deft_exact_recovery() {
  PropertyResult r{"deft-exact-recovery", false, 0.0, 1e-8,
                   "projection_error of DEFT with k = 2r on exact rank-r inputs"};
  const std::vector<std::pair<int, int>> shapes = {{32, 24}, {48, 48}, {40, 64}};
  for (const int rank : {1, 2, 4}) {
    for (int s = 0; s < 3; ++s) {
      for (const auto& [m, n] : shapes) {
        const RealMatrix g = low_rank_matrix(m, n, rank, 600 + 7 * s + rank);
        // svd oracle: the input really is rank r with zero optimal error
        const SvdResult dec = linalg::svd(g);
        const double tail = dec.s[rank] / dec.s[0];
        if (tail > 1e-10) r.worst = std::max(r.worst, tail);
        for (const int k : {2 * rank, 2 * rank + 2}) {
          const double err =
              projectors::projection_error(g, projectors::deft_build(g, k)) /
              std::max(1.0, g.frobenius_norm());
          r.worst = std::max(r.worst, err);
        }
      }
    }
  }
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult side_selection() {
  PropertyResult r{"side-selection-and-symmetry", false, 0.0, 0.0,
                   "choose_side table plus right basis == builder on G^T"};
  int bad = 0;
  if (projectors::choose_side(10, 4, SideMode::Std) != Side::Right) ++bad;
  if (projectors::choose_side(10, 4, SideMode::ReverseStd) != Side::Left) ++bad;
  if (projectors::choose_side(4, 10, SideMode::Std) != Side::Left) ++bad;
  if (projectors::choose_side(4, 10, SideMode::ReverseStd) != Side::Right) ++bad;
  if (projectors::choose_side(6, 6, SideMode::Std) != Side::Right) ++bad;

  // a tall matrix under std projects the right side with a basis built on G^T
  const RealMatrix g = gaussian_matrix(24, 10, 321);
  ProjectionConfig pc;
  pc.method = Method::Deft;
  pc.rank = 3;
  pc.side_mode = SideMode::Std;
  optim::AdamWConfig ac;
  optim::ParamState st = optim::init_state(RealMatrix(24, 10), pc, ac);
  optim::refresh_projector_if_due(st, g);
  if (st.projector->side != Side::Right) ++bad;
  if (!(st.projector->basis == projectors::deft_build(g.transposed(), 3).basis)) ++bad;
  r.worst = bad;
  r.pass = bad == 0;
  return r;
}

PropertyResult optimizer_identity_equivalence() {
  PropertyResult r{"optimizer-identity-equivalence", false, 0.0, 1e-12,
                   "per-element gap: identity/two-sided projected step vs dense AdamW"};
  optim::AdamWConfig ac;
  ac.learning_rate = 0.05;
  ac.weight_decay = 0.01;

  for (const bool two_sided : {false, true}) {
    ProjectionConfig pc;
    pc.method = Method::Identity;
    pc.two_sided = two_sided;
    const RealMatrix w0 = gaussian_matrix(8, 6, 11);
    optim::ParamState st = optim::init_state(w0, pc, ac);

    RealMatrix w = w0, m(8, 6), v(8, 6);
    long t = 0;
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
      const RealMatrix g = gaussian_matrix(8, 6, rng);
      optim::step(st, g);
      optim::dense_adamw_step(w, m, v, t, g, ac);
      r.worst = std::max(r.worst, max_abs_diff(st.weights, w));
      for (std::size_t e = 0; e < st.second_moment.size(); ++e)
        if (st.second_moment.data()[e] < 0.0) r.worst = std::max(r.worst, 1.0);
    }
  }
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult refresh_cadence() {
  PropertyResult r{"refresh-cadence", false, 0.0, 0.0,
                   "rebuilds happen exactly when the pre-step counter hits 0 mod T"};
  ProjectionConfig pc;
  pc.method = Method::Deft;
  pc.rank = 3;
  pc.update_interval = 50;
  optim::AdamWConfig ac;
  optim::ParamState st = optim::init_state(RealMatrix(12, 10), pc, ac);
  Rng rng(77);
  int bad = 0;
  for (int i = 0; i < 200; ++i) {
    const RealMatrix g = gaussian_matrix(12, 10, rng);
    const optim::StepReport rep = optim::step(st, g);
    const bool expect = i % 50 == 0;
    if (rep.projector_rebuilt != expect) ++bad;
    if (!rep.projector_rebuilt && rep.projector_build_seconds != 0.0) ++bad;
  }
  r.worst = bad;
  r.pass = bad == 0;
  return r;
}

PropertyResult zero_grad_decay() {
  PropertyResult r{"zero-gradient-decay", false, 0.0, 0.0,
                   "zero gradients with decay follow W0*(1-eta*lambda)^t exactly"};
  ProjectionConfig pc;
  pc.method = Method::Deft;
  pc.rank = 2;
  optim::AdamWConfig ac;
  ac.learning_rate = 0.1;
  ac.weight_decay = 0.03;
  const RealMatrix w0 = gaussian_matrix(6, 9, 40);
  optim::ParamState st = optim::init_state(w0, pc, ac);
  const RealMatrix zero(6, 9);
  RealMatrix expected = w0;
  const double factor = 1.0 - ac.learning_rate * ac.weight_decay;
  int bad = 0;
  for (int i = 0; i < 60; ++i) {
    optim::step(st, zero);
    for (std::size_t e = 0; e < expected.size(); ++e) expected.data()[e] *= factor;
    if (!(st.weights == expected)) ++bad;
  }
  r.worst = bad;
  r.pass = bad == 0;
  return r;
}

PropertyResult scale_linearity() {
  PropertyResult r{"scale-linearity", false, 0.0, 1e-15,
                   "relative gap between 2*||dW(alpha)|| and ||dW(2*alpha)||"};
  optim::AdamWConfig ac;
  ac.learning_rate = 0.01;
  for (const double alpha : {0.5, 1.0, 1.7}) {
    ProjectionConfig pa;
    pa.method = Method::Deft;
    pa.rank = 3;
    pa.scale = alpha;
    ProjectionConfig pb = pa;
    pb.scale = 2.0 * alpha;
    optim::ParamState sa = optim::init_state(RealMatrix(10, 8), pa, ac);
    optim::ParamState sb = optim::init_state(RealMatrix(10, 8), pb, ac);
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
      const RealMatrix g = gaussian_matrix(10, 8, rng);
      const optim::StepReport ra = optim::step(sa, g);
      const optim::StepReport rb = optim::step(sb, g);
      const double gap = std::abs(2.0 * ra.update_norm - rb.update_norm) /
                         std::max(rb.update_norm, 1e-300);
      r.worst = std::max(r.worst, gap);
    }
  }
  r.pass = r.worst <= r.limit;
  return r;
}

PropertyResult update_containment() {
  PropertyResult r{"update-containment", false, 0.0, 1e-12,
                   "weight deltas stay in span(P) between rebuilds (lambda = 0)"};
  ProjectionConfig pc;
  pc.method = Method::Deft;
  pc.rank = 3;
  pc.side_mode = SideMode::ReverseStd;  // tall input -> left side
  optim::AdamWConfig ac;
  ac.learning_rate = 0.1;
  const RealMatrix w0 = gaussian_matrix(14, 6, 90);
  optim::ParamState st = optim::init_state(w0, pc, ac);
  Rng rng(91);
  for (int i = 0; i < 60; ++i) {
    const RealMatrix before = st.weights;
    const RealMatrix g = gaussian_matrix(14, 6, rng);
    optim::step(st, g);
    const RealMatrix delta = scaled(before - st.weights, 1.0 / ac.learning_rate);
    const RealMatrix& p = st.projector->basis;
    const RealMatrix resid = delta - matmul(p, matmul(p.transposed(), delta));
    r.worst = std::max(r.worst, resid.frobenius_norm());
  }
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult model_gradient_checks() {
  PropertyResult r{"model-gradient-checks", false, 0.0, 1e-6,
                   "central finite differences vs analytic gradients, 10 points each"};
  const auto quad = models::make_quadratic_problem(8, 6, 5);
  const auto lin = models::make_linreg_problem(32, 8, 2, 6);
  const auto blobs = models::make_blobs(7, 64, 8, 3, 5.0, 0.7);
  const auto mlp = models::make_mlp_blobs_problem(blobs, 10, 7);
  for (const models::Problem* prob : {quad.get(), lin.get(), mlp.get()}) {
    for (int point = 0; point < 10; ++point) {
      const auto params = prob->initial_params(200 + point);
      r.worst = std::max(r.worst, models::gradient_check(*prob, params));
    }
  }
  r.pass = r.worst < r.limit;
  return r;
}

PropertyResult dataset_determinism() {
  PropertyResult r{"dataset-determinism", false, 0.0, 0.0,
                   "seeded blob regeneration, zero-noise centers, centroid accuracy"};
  int bad = 0;
  const auto a = models::make_blobs(123, 256, 8, 4, 6.0, 0.5);
  const auto b = models::make_blobs(123, 256, 8, 4, 6.0, 0.5);
  if (!(a.inputs == b.inputs) || a.labels != b.labels) ++bad;

  const auto pure = models::make_blobs(5, 64, 8, 4, 3.0, 0.0);
  for (int i = 0; i < 64; ++i) {
    const int label = pure.labels[i];
    for (int j = 0; j < 8; ++j) {
      const double want = j == label % 8 ? 3.0 * (1.0 + label / 8) : 0.0;
      if (pure.inputs(i, j) != want) ++bad;
    }
  }

  const auto wide = models::make_blobs(8, 512, 16, 4, 10.0, 0.05);
  for (int i = 0; i < 512; ++i) {
    int best = -1;
    double bestd = 1e300;
    for (int q = 0; q < 4; ++q) {
      double dist = 0.0;
      for (int j = 0; j < 16; ++j) {
        const double c = j == q % 16 ? 10.0 * (1.0 + q / 16) : 0.0;
        dist += (wide.inputs(i, j) - c) * (wide.inputs(i, j) - c);
      }
      if (dist < bestd) {
        bestd = dist;
        best = q;
      }
    }
    if (best != wide.labels[i]) ++bad;
  }
  r.worst = bad;
  r.pass = bad == 0;
  return r;
}

}  // namespace

std::vector<PropertyResult> run_all_properties(const VerifyOptions& opts) {
  std::vector<PropertyResult> out;
  out.push_back(fft_matches_naive(opts.fft_max_n));
  out.push_back(fft_parseval());
  out.push_back(qr_real_contract());
  out.push_back(qr_complex_contract());
  out.push_back(svd_contract());
  out.push_back(svd_eckart_young_sanity());
  out.push_back(kernel_determinism(opts.perturb_qr_sign));
  out.push_back(projector_orthonormality());
  out.push_back(projector_determinism());
  out.push_back(deft_column_space());
  out.push_back(eckart_young_ordering());
  out.push_back(non_expansiveness());
  out.push_back(deft_exact_recovery());
  out.push_back(side_selection());
  out.push_back(optimizer_identity_equivalence());
  out.push_back(refresh_cadence());
  out.push_back(zero_grad_decay());
  out.push_back(scale_linearity());
  out.push_back(update_containment());
  out.push_back(model_gradient_checks());
  out.push_back(dataset_determinism());
  return out;
}

bool all_pass(const std::vector<PropertyResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

void print_report(std::ostream& out, const std::vector<PropertyResult>& results) {
  for (const auto& r : results) {
    out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
        << "  worst=" << bench::format_double(r.worst)
        << " limit=" << bench::format_double(r.limit) << "  (" << r.detail << ")\n";
  }
  int passed = 0;
  for (const auto& r : results) passed += r.pass ? 1 : 0;
  out << passed << "/" << results.size() << " properties passed\n";
}

void write_report_json(std::ostream& out, const std::vector<PropertyResult>& results) {
  out << "[\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    out << "  {\"name\":\"" << r.name << "\",\"pass\":" << (r.pass ? "true" : "false")
        << ",\"worst\":" << bench::format_double(r.worst)
        << ",\"limit\":" << bench::format_double(r.limit) << ",\"detail\":\"" << r.detail
        << "\"}" << (i + 1 < results.size() ? "," : "") << "\n";
  }
  out << "]\n";
}

}  // namespace deft::verify
