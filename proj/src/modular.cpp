#include "kempe/modular.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "kempe/ring.hpp"

namespace kempe {

ModularEliminator::ModularEliminator(int64_t ncols, uint32_t p, const std::vector<int64_t>& priority)
    : ncols_(ncols), p_(p), pos_of_col_(ncols), col_of_pos_(ncols), pivot_row_(ncols, -1), scratch_(ncols, 0),
      touched_(ncols, 0) {
  if (p < 2 || p >= (1u << 31)) throw std::invalid_argument("modulus must be a prime below 2^31");
  if (ncols >= (int64_t(1) << 32)) throw std::invalid_argument("too many columns");
  std::iota(col_of_pos_.begin(), col_of_pos_.end(), 0);
  if (!priority.empty()) {
    if (static_cast<int64_t>(priority.size()) != ncols) throw std::invalid_argument("priority has the wrong size");
    std::stable_sort(col_of_pos_.begin(), col_of_pos_.end(),
                     [&](int64_t a, int64_t b) { return priority[a] < priority[b]; });
  }
  for (int64_t pos = 0; pos < ncols; ++pos) pos_of_col_[col_of_pos_[pos]] = pos;
}

int64_t ModularEliminator::reduce(std::span<const ModEntry> v) {
  heap_.clear();
  live_.clear();
  auto touch = [&](uint32_t pos) {
    if (!touched_[pos]) {
      touched_[pos] = 1;
      heap_.push_back(pos);
      std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
      live_.push_back(pos);
    }
  };
  for (const auto& [col, value] : v) {
    if (col < 0 || col >= ncols_) throw std::out_of_range("vector entry outside the column range");
    uint32_t pos = static_cast<uint32_t>(pos_of_col_[col]);
    scratch_[pos] = static_cast<uint32_t>((uint64_t(scratch_[pos]) + value % p_) % p_);
    touch(pos);
  }
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
    uint32_t pos = heap_.back();
    heap_.pop_back();
    uint32_t f = scratch_[pos];
    if (f == 0) continue;
    int32_t r = pivot_row_[pos];
    if (r < 0) {
      // Put it back so the caller can harvest the remaining entries.
      heap_.push_back(pos);
      std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
      return pos;
    }
    const uint64_t neg = p_ - f;
    for (const auto& [q, val] : rows_[r]) {
      scratch_[q] = static_cast<uint32_t>((scratch_[q] + neg * val) % p_);
      touch(q);
    }
  }
  return -1;
}

bool ModularEliminator::insert(std::span<const ModEntry> v) {
  int64_t lead = reduce(v);
  if (lead < 0) {
    for (uint32_t pos : live_) {
      scratch_[pos] = 0;
      touched_[pos] = 0;
    }
    return false;
  }
  std::vector<std::pair<uint32_t, uint32_t>> row;
  for (uint32_t pos : live_) {
    if (scratch_[pos] != 0 && pos >= static_cast<uint32_t>(lead)) row.emplace_back(pos, scratch_[pos]);
    scratch_[pos] = 0;
    touched_[pos] = 0;
  }
  std::sort(row.begin(), row.end());
  const uint64_t inv = inverse_mod(row.front().second, p_);
  for (auto& [pos, val] : row) val = static_cast<uint32_t>(val * inv % p_);
  pivot_row_[lead] = static_cast<int32_t>(rows_.size());
  stored_ += row.size();
  rows_.push_back(std::move(row));
  return true;
}

bool ModularEliminator::in_span(std::span<const ModEntry> v) {
  int64_t lead = reduce(v);
  for (uint32_t pos : live_) {
    scratch_[pos] = 0;
    touched_[pos] = 0;
  }
  return lead < 0;
}

std::vector<int64_t> ModularEliminator::pivot_columns() const {
  std::vector<int64_t> out;
  for (int64_t pos = 0; pos < ncols_; ++pos)
    if (pivot_row_[pos] >= 0) out.push_back(col_of_pos_[pos]);
  std::sort(out.begin(), out.end());
  return out;
}

int64_t rank_mod_p(const SparseIntMatrix& m, uint32_t p) {
  auto rows = m.row_lists();
  std::vector<int64_t> count(m.cols(), 0);
  for (const Triplet& t : m.entries()) ++count[t.col];
  ModularEliminator elim(m.cols(), p, count);
  std::vector<ModEntry> v;
  for (const auto& row : rows) {
    v.clear();
    for (const auto& [col, value] : row) {
      uint32_t r = value.mod(p);
      if (r) v.emplace_back(col, r);
    }
    if (!v.empty()) elim.insert(v);
    if (elim.rank() == std::min(m.rows(), m.cols())) break;
  }
  return elim.rank();
}

}  // namespace kempe
