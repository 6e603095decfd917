#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "deft/fft.hpp"
#include "deft/matrix.hpp"
#include "deft/qr.hpp"
#include "deft/rng.hpp"
#include "deft/svd.hpp"

using namespace deft;
using linalg::CVec;

namespace {

RealMatrix mat(int rows, int cols, std::vector<double> vals) {
  return RealMatrix(rows, cols, std::move(vals));
}

double ortho_gap(const RealMatrix& q) {
  return max_abs_diff(matmul(q.transposed(), q), RealMatrix::identity(q.cols()));
}

double svd_recon_gap(const RealMatrix& a, const linalg::SvdResult& dec) {
  RealMatrix us = dec.u;
  for (int i = 0; i < us.rows(); ++i)
    for (int j = 0; j < us.cols(); ++j) us(i, j) *= dec.s[j];
  return (matmul(us, dec.v.transposed()) - a).frobenius_norm() /
         std::max(1.0, a.frobenius_norm());
}

}  // namespace

TEST_CASE("naive_dft on tiny frozen inputs") {
  CVec a = linalg::naive_dft({{1, 0}, {0, 0}});
  CHECK(std::abs(a[0] - std::complex<double>(1, 0)) < 1e-15);
  CHECK(std::abs(a[1] - std::complex<double>(1, 0)) < 1e-15);

  CVec b = linalg::naive_dft({{1, 0}, {1, 0}});
  CHECK(std::abs(b[0] - std::complex<double>(2, 0)) < 1e-15);
  CHECK(std::abs(b[1]) < 1e-15);

  // unit impulse at index 1: X_k = exp(-2*pi*i*k/4)
  CVec c = linalg::naive_dft({{0, 0}, {1, 0}, {0, 0}, {0, 0}});
  CHECK(std::abs(c[0] - std::complex<double>(1, 0)) < 1e-12);
  CHECK(std::abs(c[1] - std::complex<double>(0, -1)) < 1e-12);
  CHECK(std::abs(c[2] - std::complex<double>(-1, 0)) < 1e-12);
  CHECK(std::abs(c[3] - std::complex<double>(0, 1)) < 1e-12);
}

TEST_CASE("fft_rows on frozen inputs") {
  const ComplexMatrix f = linalg::fft_rows(mat(2, 2, {1, 2, 3, 4}));
  CHECK(std::abs(f(0, 0) - std::complex<double>(3, 0)) < 1e-15);
  CHECK(std::abs(f(0, 1) - std::complex<double>(-1, 0)) < 1e-15);
  CHECK(std::abs(f(1, 0) - std::complex<double>(7, 0)) < 1e-15);
  CHECK(std::abs(f(1, 1) - std::complex<double>(-1, 0)) < 1e-15);

  const ComplexMatrix z = linalg::fft_rows(mat(1, 4, {0, 0, 0, 0}));
  for (int j = 0; j < 4; ++j) CHECK(std::abs(z(0, j)) == 0.0);

  const ComplexMatrix imp = linalg::fft_rows(mat(1, 4, {1, 0, 0, 0}));
  for (int j = 0; j < 4; ++j)
    CHECK(std::abs(imp(0, j) - std::complex<double>(1, 0)) < 1e-15);
}

TEST_CASE("fft_rows rejects non-finite input") {
  RealMatrix g(2, 3);
  g(1, 2) = std::nan("");
  CHECK_THROWS_AS(linalg::fft_rows(g), std::invalid_argument);
}

TEST_CASE("fft matches the naive oracle across mixed lengths") {
  // powers of two exercise radix-2, everything else Bluestein
  const std::vector<int> lengths = {2,   3,   4,   5,    6,    7,   8,   12,  16,  17,
                                    31,  32,  33,  48,   63,   64,  96,  100, 128, 255,
                                    256, 257, 384, 500,  512,  729, 768, 999, 1000,
                                    1023, 1024};
  double worst = 0.0;
  for (const int n : lengths) {
    const RealMatrix g = gaussian_matrix(3, n, 700 + n);
    const ComplexMatrix f = linalg::fft_rows(g);
    for (int i = 0; i < 3; ++i) {
      CVec row(n);
      for (int j = 0; j < n; ++j) row[j] = {g(i, j), 0.0};
      const CVec ref = linalg::naive_dft(row);
      for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(f(i, j) - ref[j]));
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("fft parseval identity") {
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{
           {8, 13}, {16, 16}, {5, 32}, {24, 7}, {33, 47}}) {
    const RealMatrix g = gaussian_matrix(m, n, 81 + m * n);
    const ComplexMatrix f = linalg::fft_rows(g);
    double total = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) total += std::norm(f(i, j));
    const double fn = g.frobenius_norm();
    CHECK(std::abs(total - n * fn * fn) / (n * fn * fn) < 1e-10);
  }
}

TEST_CASE("qr_real frozen examples") {
  const linalg::QrReal a = linalg::qr_real(mat(2, 1, {3, 4}));
  CHECK(a.q(0, 0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(a.q(1, 0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(a.r(0, 0) == doctest::Approx(5.0).epsilon(1e-14));

  const linalg::QrReal b = linalg::qr_real(RealMatrix::identity(2));
  CHECK(max_abs_diff(b.q, RealMatrix::identity(2)) == 0.0);
  CHECK(max_abs_diff(b.r, RealMatrix::identity(2)) == 0.0);

  const linalg::QrReal c = linalg::qr_real(mat(2, 2, {1, 1, 0, 1}));
  CHECK(max_abs_diff(c.q, RealMatrix::identity(2)) < 1e-15);
  CHECK(max_abs_diff(c.r, mat(2, 2, {1, 1, 0, 1})) < 1e-15);
}

TEST_CASE("qr_real handles rank deficiency deterministically") {
  RealMatrix a(5, 3);
  Rng rng(3);
  for (int i = 0; i < 5; ++i) a(i, 0) = rng.normal();
  for (int i = 0; i < 5; ++i) a(i, 2) = 2.0 * a(i, 0);  // column 1 zero, column 2 dependent
  const linalg::QrReal qr = linalg::qr_real(a);
  CHECK(qr.r(1, 1) == 0.0);
  CHECK(std::abs(qr.r(2, 2)) < 1e-12);
  CHECK(ortho_gap(qr.q) < 1e-12);
  CHECK((matmul(qr.q, qr.r) - a).frobenius_norm() < 1e-12);
  const linalg::QrReal again = linalg::qr_real(a);
  CHECK(qr.q == again.q);
  CHECK(qr.r == again.r);
}

TEST_CASE("qr_real wide input keeps the economy contract") {
  const RealMatrix a = gaussian_matrix(4, 9, 44);
  const linalg::QrReal qr = linalg::qr_real(a);
  CHECK(qr.q.rows() == 4);
  CHECK(qr.q.cols() == 4);
  CHECK(qr.r.rows() == 4);
  CHECK(qr.r.cols() == 9);
  CHECK(ortho_gap(qr.q) < 1e-12);
}

TEST_CASE("qr_complex frozen examples") {
  using C = std::complex<double>;
  ComplexMatrix a(2, 1);
  a(0, 0) = C(2, 0);
  const linalg::QrComplex qa = linalg::qr_complex(a);
  CHECK(std::abs(qa.q(0, 0) - C(1, 0)) < 1e-15);
  CHECK(std::abs(qa.q(1, 0)) < 1e-15);
  CHECK(std::abs(qa.r(0, 0) - C(2, 0)) < 1e-15);

  ComplexMatrix b(2, 1);
  b(0, 0) = C(0, 1);
  const linalg::QrComplex qb = linalg::qr_complex(b);
  CHECK(std::abs(qb.q(0, 0) - C(0, 1)) < 1e-15);
  CHECK(std::abs(qb.r(0, 0) - C(1, 0)) < 1e-15);

  const linalg::QrComplex qc = linalg::qr_complex(ComplexMatrix::identity(2));
  CHECK(cmax_abs_diff(qc.q, ComplexMatrix::identity(2)) < 1e-15);
  CHECK(cmax_abs_diff(qc.r, ComplexMatrix::identity(2)) < 1e-15);
}

TEST_CASE("qr_complex rejects wide input") {
  CHECK_THROWS_AS(linalg::qr_complex(ComplexMatrix(1, 3)), std::invalid_argument);
}

TEST_CASE("qr round-trips on random full-rank inputs") {
  for (int s = 0; s < 20; ++s) {
    const int m = 6 + s, q = 2 + s % 6;
    const RealMatrix a = gaussian_matrix(m, q, 500 + s);
    const linalg::QrReal qr = linalg::qr_real(a);
    CHECK((matmul(qr.q, qr.r) - a).frobenius_norm() / a.frobenius_norm() < 1e-10);
    CHECK(ortho_gap(qr.q) < 1e-10);
  }
}

TEST_CASE("svd frozen examples") {
  const linalg::SvdResult a = linalg::svd(mat(2, 2, {3, 0, 0, 1}));
  CHECK(a.s[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(a.s[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_abs_diff(a.u, RealMatrix::identity(2)) < 1e-14);
  CHECK(max_abs_diff(a.v, RealMatrix::identity(2)) < 1e-14);

  const linalg::SvdResult z = linalg::svd(RealMatrix(3, 2));
  CHECK(z.s[0] == 0.0);
  CHECK(z.s[1] == 0.0);
  CHECK(ortho_gap(z.u) < 1e-14);

  const linalg::SvdResult p = linalg::svd(mat(2, 2, {0, 2, 1, 0}));
  CHECK(p.s[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(p.s[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(max_abs_diff(p.u, RealMatrix::identity(2)) < 1e-14);
  CHECK(max_abs_diff(p.v, mat(2, 2, {0, 1, 1, 0})) < 1e-14);
}

TEST_CASE("svd contract on random matrices") {
  for (const auto& [m, n] : std::vector<std::pair<int, int>>{
           {12, 12}, {20, 8}, {8, 20}, {33, 17}, {17, 33}, {40, 40}}) {
    for (int s = 0; s < 4; ++s) {
      const RealMatrix a = gaussian_matrix(m, n, 900 + 7 * s + m);
      const linalg::SvdResult dec = linalg::svd(a);
      CHECK(svd_recon_gap(a, dec) < 1e-10);
      CHECK(ortho_gap(dec.u) < 1e-10);
      CHECK(ortho_gap(dec.v) < 1e-10);
      for (std::size_t i = 0; i + 1 < dec.s.size(); ++i) CHECK(dec.s[i] >= dec.s[i + 1]);
      CHECK(dec.s.back() >= 0.0);
      for (int j = 0; j < dec.u.cols(); ++j) {
        int arg = 0;
        for (int r = 1; r < dec.u.rows(); ++r)
          if (std::abs(dec.u(r, j)) > std::abs(dec.u(arg, j))) arg = r;
        CHECK(dec.u(arg, j) >= 0.0);
      }
    }
  }
}

TEST_CASE("svd eckart-young tail identity") {
  const RealMatrix a = gaussian_matrix(18, 12, 321);
  const linalg::SvdResult dec = linalg::svd(a);
  for (const int k : {1, 3, 6, 11}) {
    RealMatrix uk(a.rows(), k);
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < k; ++j) uk(i, j) = dec.u(i, j);
    const RealMatrix resid = a - matmul(uk, matmul(uk.transposed(), a));
    double tail = 0.0;
    for (std::size_t i = k; i < dec.s.size(); ++i) tail += dec.s[i] * dec.s[i];
    const double lhs = std::pow(resid.frobenius_norm(), 2);
    CHECK(std::abs(lhs - tail) / std::max(tail, 1e-30) < 1e-8);
  }
}

TEST_CASE("svd handles rank-deficient and near-degenerate inputs") {
  const RealMatrix low = low_rank_matrix(20, 14, 3, 5);
  const linalg::SvdResult dec = linalg::svd(low);
  CHECK(svd_recon_gap(low, dec) < 1e-10);
  CHECK(dec.s[3] / dec.s[0] < 1e-12);

  RealMatrix ones(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) ones(i, j) = 1.0;
  const linalg::SvdResult od = linalg::svd(ones);
  CHECK(od.s[0] == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(od.s[1] < 1e-12);
  CHECK(svd_recon_gap(ones, od) < 1e-12);
}

TEST_CASE("kernels are bitwise deterministic") {
  const RealMatrix a = gaussian_matrix(23, 17, 77);
  CHECK(linalg::fft_rows(a) == linalg::fft_rows(a));
  const auto q1 = linalg::qr_real(a), q2 = linalg::qr_real(a);
  CHECK(q1.q == q2.q);
  CHECK(q1.r == q2.r);
  const auto s1 = linalg::svd(a), s2 = linalg::svd(a);
  CHECK(s1.u == s2.u);
  CHECK(s1.s == s2.s);
  CHECK(s1.v == s2.v);
}
