// Copyright 2026 The cmfsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cmfsep/tensor.hpp"

#include <stdexcept>

namespace cmfsep {

namespace {

void require_dims(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("matrix dimensions must be >= 1, got " +
                                std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
}

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                shape_str(a) + " vs " + shape_str(b));
  }
}

}  // namespace

template <typename T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols, T fill)
    : rows_(rows), cols_(cols) {
  require_dims(rows, cols);
  data_.assign(rows * cols, fill);
}

template <typename T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require_dims(rows, cols);
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("matrix data length " +
                                std::to_string(data_.size()) +
                                " does not match " + std::to_string(rows) +
                                "x" + std::to_string(cols));
  }
}

template class Matrix<double>;
template class Matrix<Complex>;

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions differ (" +
                                shape_str(a) + " x " + shape_str(b) + ")");
  }
  RealMatrix out(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* o = out.row(i).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const double* brow = b.row(k).data();
      for (std::size_t j = 0; j < n; ++j) o[j] += aik * brow[j];
    }
  }
  return out;
}

RealMatrix matmul_tn(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("matmul_tn: row counts differ (" +
                                shape_str(a) + "ᵀ x " + shape_str(b) + ")");
  }
  RealMatrix out(a.cols(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* arow = a.row(k).data();
    const double* brow = b.row(k).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = arow[i];
      double* o = out.row(i).data();
      for (std::size_t j = 0; j < n; ++j) o[j] += aki * brow[j];
    }
  }
  return out;
}

RealMatrix matmul_nt(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("matmul_nt: column counts differ (" +
                                shape_str(a) + " x " + shape_str(b) + "ᵀ)");
  }
  RealMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i).data();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* brow = b.row(j).data();
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += arow[k] * brow[k];
      out(i, j) = acc;
    }
  }
  return out;
}

RealMatrix transpose(const RealMatrix& a) {
  RealMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

ComplexMatrix complex_matmul_real(const ComplexMatrix& x, const RealMatrix& h) {
  if (x.cols() != h.rows()) {
    throw std::invalid_argument("complex_matmul_real: inner dimensions differ (" +
                                shape_str(x) + " x " + shape_str(h) + ")");
  }
  return make_complex(matmul(real_part(x), h), matmul(imag_part(x), h));
}

double frobenius_norm_sq(const RealMatrix& a) {
  double acc = 0.0;
  for (double v : a.data()) acc += v * v;
  return acc;
}

double frobenius_norm_sq(const ComplexMatrix& a) {
  double acc = 0.0;
  for (const Complex& v : a.data()) acc += std::norm(v);
  return acc;
}

double frobenius_dist_sq(const RealMatrix& a, const RealMatrix& b) {
  require_same_shape(a, b, "frobenius_dist_sq");
  double acc = 0.0;
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) {
    const double d = ad[i] - bd[i];
    acc += d * d;
  }
  return acc;
}

double frobenius_dist_sq(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "frobenius_dist_sq");
  double acc = 0.0;
  auto ad = a.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < ad.size(); ++i) acc += std::norm(ad[i] - bd[i]);
  return acc;
}

RealMatrix real_part(const ComplexMatrix& a) {
  RealMatrix out(a.rows(), a.cols());
  auto src = a.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].real();
  return out;
}

RealMatrix imag_part(const ComplexMatrix& a) {
  RealMatrix out(a.rows(), a.cols());
  auto src = a.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].imag();
  return out;
}

ComplexMatrix make_complex(const RealMatrix& re, const RealMatrix& im) {
  require_same_shape(re, im, "make_complex");
  ComplexMatrix out(re.rows(), re.cols());
  auto r = re.data();
  auto i = im.data();
  auto dst = out.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = Complex(r[k], i[k]);
  return out;
}

ComplexMatrix to_complex(const RealMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  auto src = a.data();
  auto dst = out.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = Complex(src[k], 0.0);
  return out;
}

template <typename T>
Matrix<T> col_slice(const Matrix<T>& a, std::size_t first, std::size_t count) {
  if (first + count > a.cols()) {
    throw std::out_of_range("col_slice: columns [" + std::to_string(first) +
                            ", " + std::to_string(first + count) +
                            ") outside " + shape_str(a));
  }
  Matrix<T> out(a.rows(), count);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = a(i, first + j);
  return out;
}

template <typename T>
Matrix<T> row_slice(const Matrix<T>& a, std::size_t first, std::size_t count) {
  if (first + count > a.rows()) {
    throw std::out_of_range("row_slice: rows [" + std::to_string(first) + ", " +
                            std::to_string(first + count) + ") outside " +
                            shape_str(a));
  }
  Matrix<T> out(count, a.cols());
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(first + i, j);
  return out;
}

template <typename T>
Matrix<T> hconcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("hconcat: row counts differ (" + shape_str(a) +
                                " | " + shape_str(b) + ")");
  }
  Matrix<T> out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

template RealMatrix col_slice(const RealMatrix&, std::size_t, std::size_t);
template ComplexMatrix col_slice(const ComplexMatrix&, std::size_t, std::size_t);
template RealMatrix row_slice(const RealMatrix&, std::size_t, std::size_t);
template ComplexMatrix row_slice(const ComplexMatrix&, std::size_t, std::size_t);
template RealMatrix hconcat(const RealMatrix&, const RealMatrix&);
template ComplexMatrix hconcat(const ComplexMatrix&, const ComplexMatrix&);

}  // namespace cmfsep
