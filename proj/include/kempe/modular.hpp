#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "kempe/sparse_matrix.hpp"

namespace kempe {

using ModEntry = std::pair<int64_t, uint32_t>;  // (column, value in [0, p))

// Incremental row-echelon basis over F_p. Columns are renumbered by a
// priority order (position 0 is preferred as a pivot); each stored row is
// normalized to leading coefficient 1 at its smallest position.
class ModularEliminator {
 public:
  // `priority[c]` orders the columns (smaller = earlier). Empty = identity.
  ModularEliminator(int64_t ncols, uint32_t p, const std::vector<int64_t>& priority = {});

  // Adds v to the span; returns true if the rank grew.
  bool insert(std::span<const ModEntry> v);
  bool in_span(std::span<const ModEntry> v);

  int64_t rank() const { return static_cast<int64_t>(rows_.size()); }
  uint32_t prime() const { return p_; }
  size_t stored_entries() const { return stored_; }
  // Columns (original numbering) that hold a pivot.
  std::vector<int64_t> pivot_columns() const;

 private:
  // Reduces v into scratch; returns the first position without a pivot that
  // remains nonzero, or -1 if v reduces to zero.
  int64_t reduce(std::span<const ModEntry> v);

  int64_t ncols_;
  uint32_t p_;
  std::vector<int64_t> pos_of_col_;
  std::vector<int64_t> col_of_pos_;
  std::vector<int32_t> pivot_row_;  // by position
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> rows_;  // (position, value)
  std::vector<uint32_t> scratch_;
  std::vector<uint8_t> touched_;
  std::vector<uint32_t> heap_;
  std::vector<uint32_t> live_;
  size_t stored_ = 0;
};

// Rank of M over F_p; rows are inserted with sparse columns preferred as pivots.
int64_t rank_mod_p(const SparseIntMatrix& m, uint32_t p);

}  // namespace kempe
