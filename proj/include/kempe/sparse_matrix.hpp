#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "kempe/integer.hpp"

namespace kempe {

struct Triplet {
  int64_t row;  // 0-based
  int64_t col;  // 0-based
  Integer value;
};

// Sparse integer matrix as a list of triplets. Insertion order is preserved so
// that the text format round-trips byte for byte.
class SparseIntMatrix {
 public:
  SparseIntMatrix() = default;
  SparseIntMatrix(int64_t rows, int64_t cols) : rows_(rows), cols_(cols) {}

  int64_t rows() const { return rows_; }
  int64_t cols() const { return cols_; }
  const std::vector<Triplet>& entries() const { return entries_; }
  size_t nonzeros() const { return entries_.size(); }

  // Zero values are skipped. Duplicates are detected by validate().
  void add(int64_t row, int64_t col, const Integer& value);
  // Appends a column given as (row, value) pairs; returns its index.
  int64_t append_column(const std::vector<std::pair<int64_t, Integer>>& column);
  void set_shape(int64_t rows, int64_t cols);

  // Throws std::invalid_argument on duplicate positions or explicit zeros.
  void validate() const;

  // Column-major view: for each column, (row, value) sorted by row.
  std::vector<std::vector<std::pair<int64_t, Integer>>> columns() const;
  std::vector<std::vector<std::pair<int64_t, Integer>>> row_lists() const;
  SparseIntMatrix transposed() const;

  // "rows cols M" header, 1-based "i j v" lines, "0 0 0" terminator.
  static SparseIntMatrix read_text(std::istream& in);
  void write_text(std::ostream& out) const;
  std::string to_text() const;

 private:
  int64_t rows_ = 0;
  int64_t cols_ = 0;
  std::string header_tag_ = "M";
  std::vector<Triplet> entries_;
};

}  // namespace kempe
