#pragma once

#include <cstddef>
#include <vector>

namespace rocoin {

/// Dense row-major matrix of doubles. Just enough surface for the graph and
/// eigensolver code; not a general linear-algebra type.
class Matrix {
public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix& other) const = default;

private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

}  // namespace rocoin
