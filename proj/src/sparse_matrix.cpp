#include "kempe/sparse_matrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace kempe {

void SparseIntMatrix::add(int64_t row, int64_t col, const Integer& value) {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
    throw std::out_of_range("matrix entry (" + std::to_string(row) + ", " + std::to_string(col) + ") out of range");
  }
  if (value.is_zero()) return;
  entries_.push_back({row, col, value});
}

int64_t SparseIntMatrix::append_column(const std::vector<std::pair<int64_t, Integer>>& column) {
  const int64_t col = cols_++;
  for (const auto& [row, value] : column) add(row, col, value);
  return col;
}

void SparseIntMatrix::set_shape(int64_t rows, int64_t cols) {
  for (const Triplet& t : entries_) {
    if (t.row >= rows || t.col >= cols) throw std::invalid_argument("new shape drops existing entries");
  }
  rows_ = rows;
  cols_ = cols;
}

void SparseIntMatrix::validate() const {
  std::unordered_set<uint64_t> seen;
  seen.reserve(entries_.size());
  for (const Triplet& t : entries_) {
    if (t.value.is_zero()) throw std::invalid_argument("explicit zero entry");
    uint64_t key = static_cast<uint64_t>(t.row) * static_cast<uint64_t>(cols_) + static_cast<uint64_t>(t.col);
    if (!seen.insert(key).second) {
      throw std::invalid_argument("duplicate entry at (" + std::to_string(t.row + 1) + ", " + std::to_string(t.col + 1) +
                                  ")");
    }
  }
}

std::vector<std::vector<std::pair<int64_t, Integer>>> SparseIntMatrix::columns() const {
  std::vector<std::vector<std::pair<int64_t, Integer>>> out(cols_);
  for (const Triplet& t : entries_) out[t.col].emplace_back(t.row, t.value);
  for (auto& c : out) std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<std::vector<std::pair<int64_t, Integer>>> SparseIntMatrix::row_lists() const {
  std::vector<std::vector<std::pair<int64_t, Integer>>> out(rows_);
  for (const Triplet& t : entries_) out[t.row].emplace_back(t.col, t.value);
  for (auto& r : out) std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

SparseIntMatrix SparseIntMatrix::transposed() const {
  SparseIntMatrix t(cols_, rows_);
  t.entries_.reserve(entries_.size());
  for (const Triplet& e : entries_) t.entries_.push_back({e.col, e.row, e.value});
  return t;
}

SparseIntMatrix SparseIntMatrix::read_text(std::istream& in) {
  SparseIntMatrix m;
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("missing matrix header");
  std::istringstream hs(header);
  if (!(hs >> m.rows_ >> m.cols_ >> m.header_tag_)) throw std::invalid_argument("bad matrix header: " + header);
  if (m.rows_ < 0 || m.cols_ < 0) throw std::invalid_argument("negative matrix shape");
  std::string line;
  bool terminated = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int64_t i, j;
    std::string v;
    if (!(ls >> i >> j >> v)) throw std::invalid_argument("bad triplet line: " + line);
    if (i == 0 && j == 0 && v == "0") {
      terminated = true;
      break;
    }
    Integer value = Integer::from_string(v);
    if (value.is_zero()) throw std::invalid_argument("explicit zero entry: " + line);
    if (i < 1 || i > m.rows_ || j < 1 || j > m.cols_) throw std::invalid_argument("triplet out of range: " + line);
    m.entries_.push_back({i - 1, j - 1, value});
  }
  if (!terminated) throw std::invalid_argument("missing 0 0 0 terminator");
  m.validate();
  return m;
}

void SparseIntMatrix::write_text(std::ostream& out) const {
  out << rows_ << ' ' << cols_ << ' ' << header_tag_ << '\n';
  for (const Triplet& t : entries_) out << t.row + 1 << ' ' << t.col + 1 << ' ' << t.value << '\n';
  out << "0 0 0\n";
}

std::string SparseIntMatrix::to_text() const {
  std::ostringstream os;
  write_text(os);
  return os.str();
}

}  // namespace kempe
