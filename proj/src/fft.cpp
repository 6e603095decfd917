#include "deft/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace deft::linalg {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<std::complex<double>> twiddle_table(std::size_t n) {
  std::vector<std::complex<double>> table(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double ang = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    table[k] = {std::cos(ang), std::sin(ang)};
  }
  return table;
}

// Iterative radix-2 Cooley-Tukey, n a power of two. Every stage reads the
// shared table at stride n/len, so angles are computed directly rather
// than by recurrence.
void fft_radix2(CVec& x, const std::vector<std::complex<double>>& table) {
  const std::size_t n = x.size();
  if (n <= 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w = table[k * stride];
        const std::complex<double> u = x[i + k];
        const std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
      }
    }
  }
}

void ifft_radix2(CVec& x, const std::vector<std::complex<double>>& table) {
  for (auto& v : x) v = std::conj(v);
  fft_radix2(x, table);
  const double inv = 1.0 / static_cast<double>(x.size());
  for (auto& v : x) v = std::conj(v) * inv;
}

// Bluestein chirp-z: X_k = c_k * (a (*) b)_k with a_j = x_j c_j,
// b_j = conj(c_j), c_j = exp(-i*pi*j^2/n). The convolution runs on a
// padded power-of-two radix-2 grid; the chirp and the transform of b
// depend only on n, so they live in the plan. Angles use j^2 mod 2n to
// keep trig arguments small.
struct BluesteinPlan {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::complex<double>> chirp;     // length n
  std::vector<std::complex<double>> b_spectrum;  // FFT of the padded chirp kernel
  std::vector<std::complex<double>> table;     // radix-2 twiddles for length m

  explicit BluesteinPlan(std::size_t length) : n(length), m(next_pow2(2 * length - 1)) {
    chirp.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t j2 = (static_cast<std::uint64_t>(j) * j) % (2 * n);
      const double ang = -kTwoPi * static_cast<double>(j2) / (2.0 * static_cast<double>(n));
      chirp[j] = {std::cos(ang), std::sin(ang)};
    }
    table = twiddle_table(m);
    CVec b(m, {0.0, 0.0});
    b[0] = std::conj(chirp[0]);
    for (std::size_t j = 1; j < n; ++j) b[j] = b[m - j] = std::conj(chirp[j]);
    fft_radix2(b, table);
    b_spectrum = std::move(b);
  }

  void run(CVec& x, CVec& work) const {
    work.assign(m, {0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) work[j] = x[j] * chirp[j];
    fft_radix2(work, table);
    for (std::size_t j = 0; j < m; ++j) work[j] *= b_spectrum[j];
    ifft_radix2(work, table);
    for (std::size_t k = 0; k < n; ++k) x[k] = work[k] * chirp[k];
  }
};

}  // namespace

void fft_inplace(CVec& x) {
  if (x.empty()) throw std::invalid_argument("fft: empty input");
  if (is_pow2(x.size())) {
    const auto table = twiddle_table(x.size());
    fft_radix2(x, table);
  } else {
    const BluesteinPlan plan(x.size());
    CVec work;
    plan.run(x, work);
  }
}

ComplexMatrix fft_rows(const RealMatrix& g) {
  if (g.rows() < 1 || g.cols() < 1) throw std::invalid_argument("fft_rows: empty matrix");
  if (!g.all_finite()) throw std::invalid_argument("fft_rows: non-finite input entry");

  const std::size_t n = static_cast<std::size_t>(g.cols());
  ComplexMatrix out(g.rows(), g.cols());
  CVec row(n);

  if (is_pow2(n)) {
    const auto table = twiddle_table(n);
    for (int i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < n; ++j) row[j] = {g(i, static_cast<int>(j)), 0.0};
      fft_radix2(row, table);
      for (std::size_t j = 0; j < n; ++j) out(i, static_cast<int>(j)) = row[j];
    }
  } else {
    const BluesteinPlan plan(n);
    CVec work;
    for (int i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < n; ++j) row[j] = {g(i, static_cast<int>(j)), 0.0};
      plan.run(row, work);
      for (std::size_t j = 0; j < n; ++j) out(i, static_cast<int>(j)) = row[j];
    }
  }
  return out;
}

CVec naive_dft(const CVec& x) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("naive_dft: empty input");

  // exp(-2*pi*i*j*k/n) indexed by j*k mod n, precomputed once
  std::vector<std::complex<double>> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double ang = -kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    w[j] = {std::cos(ang), std::sin(ang)};
  }

  CVec out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) s += x[j] * w[(j * k) % n];
    out[k] = s;
  }
  return out;
}

}  // namespace deft::linalg
