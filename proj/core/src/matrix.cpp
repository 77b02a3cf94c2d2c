// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/matrix.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "moodpupilar/error.hpp"

namespace moodpupilar::learn {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) {
      throw Error(ErrorCode::DimensionMismatch,
                  fmt::format("row {} has {} columns, expected {}", r, rows[r].size(), m.cols_));
    }
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> indices) const {
  Matrix out(rows_, indices.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < indices.size(); ++j) out(r, j) = (*this)(r, indices[j]);
  }
  return out;
}

Matrix Matrix::hconcat(const Matrix& right) const {
  if (right.rows_ != rows_) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("cannot concatenate {} rows with {} rows", rows_, right.rows_));
  }
  Matrix out(rows_, cols_ + right.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto dst = out.row(r);
    std::copy(row(r).begin(), row(r).end(), dst.begin());
    std::copy(right.row(r).begin(), right.row(r).end(), dst.begin() + static_cast<std::ptrdiff_t>(cols_));
  }
  return out;
}

}  // namespace moodpupilar::learn
