#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "nmf/errors.hpp"

namespace nmf {

// Dense row-major matrix of doubles. Constructors reject non-finite values;
// every routine in the library may assume stored data is finite.
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}

  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (!std::isfinite(fill)) throw Error("DenseMatrix: non-finite fill");
  }

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols)
      throw Error("DenseMatrix: data length != rows*cols");
    for (double v : data_)
      if (!std::isfinite(v)) throw Error("DenseMatrix: non-finite entry");
  }

  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
      : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw Error("DenseMatrix: ragged initializer");
      for (double v : row) {
        if (!std::isfinite(v)) throw Error("DenseMatrix: non-finite entry");
        data_.push_back(v);
      }
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool all_nonnegative() const {
    for (double v : data_)
      if (v < 0.0) return false;
    return true;
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  void set_column(std::size_t j, const std::vector<double>& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  std::vector<double> row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
  }

  void set_row(std::size_t i, const std::vector<double>& v) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           data_ == other.data_;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

}  // namespace nmf
