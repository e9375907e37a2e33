// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ucmx/model.hpp"

namespace ucmx {

/// Strict partial order over the leaves of a seq/par tree. Leaves are
/// numbered in depth-first document order; a Seq orders its children
/// transitively and a Par leaves siblings unordered.
class PartialOrder {
 public:
  explicit PartialOrder(const Node& root) {
    collect(root);
    n_ = leaves_.size();
    rel_.assign(n_ * n_, 0);
    build(root, 0);
  }

  std::size_t size() const { return n_; }
  const Node& leaf(std::size_t i) const { return *leaves_[i]; }
  const std::string& id(std::size_t i) const { return leaf_id(*leaves_[i]); }
  bool before(std::size_t a, std::size_t b) const { return rel_[a * n_ + b] != 0; }
  bool concurrent(std::size_t a, std::size_t b) const {
    return a != b && !before(a, b) && !before(b, a);
  }

  /// Index of a leaf node by address, or size() when absent.
  std::size_t index_of(const Node* n) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (leaves_[i] == n) return i;
    return n_;
  }

 private:
  void collect(const Node& n) {
    if (n.is_leaf()) {
      leaves_.push_back(&n);
      return;
    }
    for (const auto& c : *children_of(n)) collect(c);
  }

  // Returns the number of leaves below n, whose indices start at `first`.
  std::size_t build(const Node& n, std::size_t first) {
    if (n.is_leaf()) return 1;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::size_t at = first;
    for (const auto& c : *children_of(n)) {
      std::size_t k = build(c, at);
      ranges.emplace_back(at, at + k);
      at += k;
    }
    if (n.is<Seq>()) {
      for (std::size_t i = 0; i < ranges.size(); ++i)
        for (std::size_t j = i + 1; j < ranges.size(); ++j)
          for (std::size_t a = ranges[i].first; a < ranges[i].second; ++a)
            for (std::size_t b = ranges[j].first; b < ranges[j].second; ++b) rel_[a * n_ + b] = 1;
    }
    return at - first;
  }

  std::vector<const Node*> leaves_;
  std::size_t n_ = 0;
  std::vector<std::uint8_t> rel_;
};

using IdPair = std::pair<std::string, std::string>;

/// All (a, b) such that a precedes b in every linearization of the tree.
inline std::set<IdPair> causal_pairs(const Node& body) {
  validate_structure(body);
  PartialOrder po(body);
  std::set<IdPair> out;
  for (std::size_t a = 0; a < po.size(); ++a)
    for (std::size_t b = 0; b < po.size(); ++b)
      if (po.before(a, b)) out.emplace(po.id(a), po.id(b));
  return out;
}

inline std::set<IdPair> causal_pairs(const Scenario& s) { return causal_pairs(s.body); }

namespace detail {

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(r);
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

inline std::size_t leaf_count(const Node& n) {
  if (n.is_leaf()) return 1;
  std::size_t k = 0;
  for (const auto& c : *children_of(n)) k += leaf_count(c);
  return k;
}

}  // namespace detail

/// Number of linearizations; saturates at UINT64_MAX.
inline std::uint64_t count_linearizations(const Node& n) {
  if (n.is_leaf()) return 1;
  std::uint64_t total = 1;
  std::uint64_t placed = 0;
  for (const auto& c : *children_of(n)) {
    total = detail::sat_mul(total, count_linearizations(c));
    if (n.is<Par>()) {
      std::uint64_t k = detail::leaf_count(c);
      placed += k;
      total = detail::sat_mul(total, detail::binomial(placed, k));
    }
  }
  return total;
}

/// Every linearization as a sequence of leaf indices (document numbering),
/// in lexicographic order. Throws an overflow error naming the count when it
/// exceeds `cap`.
inline std::vector<std::vector<std::size_t>> linearization_indices(const Node& body, std::size_t cap) {
  validate_structure(body);
  if (cap < 1) throw Error(ErrorKind::precondition, "scenario-model", "linearization cap must be >= 1");
  std::uint64_t count = count_linearizations(body);
  if (count > cap)
    throw Error(ErrorKind::overflow, "scenario-model",
                std::to_string(count) + " linearizations exceed cap " + std::to_string(cap));

  PartialOrder po(body);
  const std::size_t n = po.size();
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (po.before(a, b)) ++pending[b];

  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> current;
  std::vector<bool> done(n, false);
  auto rec = [&](auto&& self) -> void {
    if (current.size() == n) {
      out.push_back(current);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || pending[i] != 0) continue;
      done[i] = true;
      current.push_back(i);
      for (std::size_t b = 0; b < n; ++b)
        if (po.before(i, b)) --pending[b];
      self(self);
      for (std::size_t b = 0; b < n; ++b)
        if (po.before(i, b)) ++pending[b];
      current.pop_back();
      done[i] = false;
    }
  };
  rec(rec);
  return out;
}

/// Linearizations as id sequences.
inline std::vector<std::vector<std::string>> linearizations(const Node& body, std::size_t cap) {
  auto idx = linearization_indices(body, cap);
  PartialOrder po(body);
  std::vector<std::vector<std::string>> out;
  out.reserve(idx.size());
  for (const auto& seq : idx) {
    std::vector<std::string> ids;
    ids.reserve(seq.size());
    for (auto i : seq) ids.push_back(po.id(i));
    out.push_back(std::move(ids));
  }
  return out;
}

}  // namespace ucmx
