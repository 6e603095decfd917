#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace deft {

/// Dense real matrix, row-major, double precision.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(int rows, int cols);
  RealMatrix(int rows, int cols, std::vector<double> data);

  static RealMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row_ptr(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  const double* row_ptr(int r) const {
    return data_.data() + static_cast<std::size_t>(r) * cols_;
  }

  bool all_finite() const;
  double frobenius_norm() const;
  double max_abs() const;
  RealMatrix transposed() const;

  bool operator==(const RealMatrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  using value_type = std::complex<double>;

  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols);

  static ComplexMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  value_type& operator()(int r, int c) {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }
  value_type operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  value_type* data() { return data_.data(); }
  const value_type* data() const { return data_.data(); }

  bool all_finite() const;
  double frobenius_norm() const;

  bool operator==(const ComplexMatrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<value_type> data_;
};

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator+(const RealMatrix& a, const RealMatrix& b);
RealMatrix scaled(const RealMatrix& a, double factor);

/// max_ij |a - b|; matrices must have equal shape.
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);

ComplexMatrix conj_transpose_times(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix cmatmul(const ComplexMatrix& a, const ComplexMatrix& b);
double cmax_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace deft
