// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cmfsep {

using Complex = std::complex<double>;

/// Dense row-major matrix. Dimensions given at construction must both be at
/// least one; a default-constructed matrix is empty (0 x 0) and only useful as
/// a placeholder to be assigned over.
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{});
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

/// "3x4" style shape string for error messages.
template <typename T>
std::string shape_str(const Matrix<T>& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
/// aᵀ·b without materializing the transpose.
RealMatrix matmul_tn(const RealMatrix& a, const RealMatrix& b);
/// a·bᵀ without materializing the transpose.
RealMatrix matmul_nt(const RealMatrix& a, const RealMatrix& b);
RealMatrix transpose(const RealMatrix& a);

/// Complex bases times real weights; each part is a real matmul with h.
ComplexMatrix complex_matmul_real(const ComplexMatrix& x, const RealMatrix& h);

double frobenius_norm_sq(const RealMatrix& a);
double frobenius_norm_sq(const ComplexMatrix& a);
/// ‖a − b‖², shapes must match.
double frobenius_dist_sq(const RealMatrix& a, const RealMatrix& b);
double frobenius_dist_sq(const ComplexMatrix& a, const ComplexMatrix& b);

RealMatrix real_part(const ComplexMatrix& a);
RealMatrix imag_part(const ComplexMatrix& a);
ComplexMatrix make_complex(const RealMatrix& re, const RealMatrix& im);
ComplexMatrix to_complex(const RealMatrix& a);

/// Columns [first, first + count).
template <typename T>
Matrix<T> col_slice(const Matrix<T>& a, std::size_t first, std::size_t count);
/// Rows [first, first + count).
template <typename T>
Matrix<T> row_slice(const Matrix<T>& a, std::size_t first, std::size_t count);
/// [a | b]; row counts must match.
template <typename T>
Matrix<T> hconcat(const Matrix<T>& a, const Matrix<T>& b);

}  // namespace cmfsep
