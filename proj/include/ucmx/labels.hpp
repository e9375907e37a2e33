// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ucmx/model.hpp"

namespace ucmx {

/// Positional parallel label of every leaf, in document order. Par blocks are
/// numbered p1, p2, ... in pre-order per scenario and their branches s1, s2,
/// ... left to right; nested blocks extend the path ("p1.s2.p2.s3"). Leaves
/// outside any Par get an empty label.
inline std::vector<std::string> par_labels(const Node& body) {
  std::vector<std::string> out;
  int par_counter = 0;
  auto rec = [&](auto&& self, const Node& n, const std::string& path) -> void {
    if (n.is_leaf()) {
      out.push_back(path);
      return;
    }
    if (n.is<Seq>()) {
      for (const auto& c : n.as<Seq>().children) self(self, c, path);
      return;
    }
    const int p = ++par_counter;
    int s = 0;
    for (const auto& c : n.as<Par>().children) {
      std::string seg = "p" + std::to_string(p) + ".s" + std::to_string(++s);
      self(self, c, path.empty() ? seg : path + "." + seg);
    }
  };
  rec(rec, body, std::string{});
  return out;
}

/// Writes each message's positional label into its para-label field.
inline void label_messages(Node& body) {
  auto labels = par_labels(body);
  std::size_t i = 0;
  auto rec = [&](auto&& self, Node& n) -> void {
    if (n.is_leaf()) {
      if (auto* m = n.get<Message>()) m->para_label = labels[i];
      ++i;
      return;
    }
    for (auto& c : *children_of(n)) self(self, c);
  };
  rec(rec, body);
}

inline ScenarioDocument assign_par_labels(ScenarioDocument doc) {
  doc.for_each_scenario([](Scenario& s) { label_messages(s.body); });
  return doc;
}

}  // namespace ucmx
