#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lobe {

using cplx = std::complex<double>;

/// Dense column-major-agnostic complex matrix, sized for desk-scale
/// verification work (oracle matrices, extracted blocks, small unitaries).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  Matrix operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix shape mismatch");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = 0; k < cols_; ++k) {
        const cplx a = (*this)(r, k);
        if (a == cplx{}) continue;
        for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
      }
    return out;
  }

  Matrix operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
      throw std::invalid_argument("matrix shape mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
  }

  Matrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  /// Largest entrywise |a - b|.
  static double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("matrix shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      m = std::max(m, std::abs(a.data_[i] - b.data_[i]));
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c <= r; ++c)
        if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
  }

  /// Spectral norm via power iteration on A†A. Deterministic start vector.
  double spectral_norm(int iters = 200) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline double Matrix::spectral_norm(int iters) const {
  if (rows_ == 0 || cols_ == 0) return 0.0;
  std::vector<cplx> v(cols_);
  for (std::size_t i = 0; i < cols_; ++i)
    v[i] = cplx{1.0 + 1.0 / double(i + 1), double(i % 7) * 0.125};
  double norm = 0.0;
  std::vector<cplx> w(rows_), u(cols_);
  for (int it = 0; it < iters; ++it) {
    // w = A v; u = A† w
    for (std::size_t r = 0; r < rows_; ++r) {
      cplx acc{};
      for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
      w[r] = acc;
    }
    for (std::size_t c = 0; c < cols_; ++c) {
      cplx acc{};
      for (std::size_t r = 0; r < rows_; ++r) acc += std::conj((*this)(r, c)) * w[r];
      u[c] = acc;
    }
    double nu = 0.0;
    for (const auto& x : u) nu += std::norm(x);
    nu = std::sqrt(nu);
    if (nu == 0.0) return 0.0;
    for (std::size_t c = 0; c < cols_; ++c) v[c] = u[c] / nu;
    norm = std::sqrt(nu);
  }
  return norm;
}

}  // namespace lobe
