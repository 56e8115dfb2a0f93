#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "kempe/graph.hpp"
#include "kempe/ring.hpp"

namespace kempe {

// Finite formal combination of canonical graphs with nonzero coefficients.
template <class R>
class GraphVector {
 public:
  using Map = std::map<CanonicalGraph, R>;

  GraphVector() = default;

  static GraphVector single(const CanonicalGraph& g, const R& coeff) {
    GraphVector v;
    v.add(g, coeff);
    return v;
  }

  void add(const CanonicalGraph& g, const R& coeff) {
    if (ring_is_zero(coeff)) return;
    check_shape(g);
    auto [it, inserted] = terms_.try_emplace(g, coeff);
    if (!inserted) {
      it->second += coeff;
      if (ring_is_zero(it->second)) terms_.erase(it);
    }
  }

  void add(const SignedGraph& sg, const R& coeff) {
    if (sg.sign > 0) {
      add(sg.graph, coeff);
    } else {
      add(sg.graph, -coeff);
    }
  }

  const Map& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  R coefficient(const CanonicalGraph& g, const R& zero) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? zero : it->second;
  }

  GraphVector& operator+=(const GraphVector& other) {
    for (const auto& [g, c] : other.terms_) add(g, c);
    return *this;
  }
  GraphVector& operator-=(const GraphVector& other) {
    for (const auto& [g, c] : other.terms_) add(g, -c);
    return *this;
  }
  GraphVector scaled(const R& factor) const {
    GraphVector out;
    for (const auto& [g, c] : terms_) out.add(g, c * factor);
    return out;
  }

  friend GraphVector operator+(GraphVector a, const GraphVector& b) { return a += b; }
  friend GraphVector operator-(GraphVector a, const GraphVector& b) { return a -= b; }
  friend bool operator==(const GraphVector& a, const GraphVector& b) { return a.terms_ == b.terms_; }

 private:
  void check_shape(const CanonicalGraph& g) {
    if (terms_.empty()) return;
    const CanonicalGraph& first = terms_.begin()->first;
    if (first.n() != g.n() || first.edge_count() != g.edge_count()) {
      throw std::invalid_argument("graph vector terms must share vertex set and degree: " + g.to_string());
    }
  }

  Map terms_;
};

}  // namespace kempe
