#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "shared_dining/gf256.hpp"

namespace shared_dining::gf256 {

// Dense row-major matrix over GF(2^8).
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  FieldMatrix(std::size_t rows, std::size_t cols, std::vector<FieldElement> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
      throw std::invalid_argument("FieldMatrix: entry count does not match shape");
    }
  }

  static FieldMatrix identity(std::size_t size) {
    FieldMatrix m(size, size);
    for (std::size_t i = 0; i < size; ++i) m.at(i, i) = FieldElement(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const FieldElement> entries() const { return entries_; }

  FieldElement& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  FieldElement at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<FieldElement> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
  std::span<const FieldElement> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }

  FieldMatrix transposed() const {
    FieldMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
  }

  // [this | column]
  FieldMatrix augmented(std::span<const FieldElement> column) const {
    if (column.size() != rows_) throw std::invalid_argument("augmented: column length mismatch");
    FieldMatrix a(rows_, cols_ + 1);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) a.at(r, c) = at(r, c);
      a.at(r, cols_) = column[r];
    }
    return a;
  }

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<FieldElement> entries_;
};

struct EchelonForm {
  std::size_t rank = 0;
  FieldMatrix reduced;                     // reduced row-echelon form
  std::vector<std::size_t> pivot_columns;  // one per non-zero row, ascending
};

// Gauss-Jordan elimination. Pivots are normalised to 1 and cleared above and
// below, so free columns can be read off directly.
inline EchelonForm solve_rank(FieldMatrix m) {
  EchelonForm out;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
    std::size_t sel = pivot_row;
    while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    if (sel != pivot_row) {
      auto a = m.row(sel);
      auto b = m.row(pivot_row);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    const FieldElement scale = inv(m.at(pivot_row, col));
    for (auto& e : m.row(pivot_row)) e = e * scale;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == pivot_row) continue;
      const FieldElement factor = m.at(r, col);
      if (factor.is_zero()) continue;
      auto target = m.row(r);
      auto source = m.row(pivot_row);
      for (std::size_t c = col; c < m.cols(); ++c) target[c] += factor * source[c];
    }
    out.pivot_columns.push_back(col);
    ++pivot_row;
  }
  out.rank = pivot_row;
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const FieldMatrix& m) { return solve_rank(m).rank; }

// The solution of A x = b when it exists and is unique.
inline std::optional<std::vector<FieldElement>> solve_unique(const FieldMatrix& a, std::span<const FieldElement> b) {
  const EchelonForm e = solve_rank(a.augmented(b));
  if (e.rank != a.cols()) return std::nullopt;
  if (!e.pivot_columns.empty() && e.pivot_columns.back() == a.cols()) return std::nullopt;
  std::vector<FieldElement> x(a.cols());
  for (std::size_t r = 0; r < e.rank; ++r) x[e.pivot_columns[r]] = e.reduced.at(r, a.cols());
  return x;
}

}  // namespace shared_dining::gf256
