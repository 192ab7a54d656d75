#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ttcast {

struct Vector {
  std::vector<double> data;

  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data(n, fill) {}
  Vector(std::initializer_list<double> xs) : data(xs) {}
  explicit Vector(std::span<const double> xs) : data(xs.begin(), xs.end()) {}

  std::size_t size() const { return data.size(); }
  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }
  std::span<const double> span() const { return data; }

  friend bool operator==(const Vector& a, const Vector& b) { return a.data == b.data; }
};

// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data).subspan(i * cols, cols);
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
  }
};

inline bool all_finite(std::span<const double> xs) {
  for (double x : xs) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace ttcast
