// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ucmx/error.hpp"

namespace ucmx::msc {

enum class EventType { out, in, action, condition, starttimer, stoptimer, timeout, par_begin, par_separator, par_end };

struct Event {
  EventType type;
  std::string name;  // message name, action text, condition label or timer name
  std::string id;    // message instance id for out/in
  std::string peer;  // receiver for out, sender for in

  bool operator==(const Event&) const = default;
};

struct Chart {
  std::string name;
  std::vector<std::string> instances;
  std::map<std::string, std::vector<Event>> events;
};

namespace detail {

inline constexpr const char* kReaderStage = "msc-reader";

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  // Next statement terminated by ';' outside quotes and parentheses; false at end.
  bool next(std::string& stmt, std::size_t& line) {
    skip_space();
    if (pos_ >= text_.size()) return false;
    line = line_;
    stmt.clear();
    bool quoted = false;
    int depth = 0;
    for (; pos_ < text_.size(); ++pos_) {
      char c = text_[pos_];
      if (c == '\n') ++line_;
      if (quoted) {
        stmt += c;
        if (c == '\'') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
            stmt += '\'';
            ++pos_;
          } else {
            quoted = false;
          }
        }
        continue;
      }
      if (c == '\'') quoted = true;
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ';' && depth == 0) {
        ++pos_;
        return true;
      }
      stmt += c;
    }
    throw Error(ErrorKind::syntax, kReaderStage, "line " + std::to_string(line) + ": unterminated statement");
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline bool is_ident(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s)
    if (!(std::isalnum(c) || c == '_')) return false;
  return true;
}

// name[(params)],id
inline bool split_message(const std::string& s, std::string& name, std::string& id) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      name = trim(s.substr(0, i));
      id = trim(s.substr(i + 1));
      auto open = name.find('(');
      return is_ident(name.substr(0, open)) && !id.empty();
    }
  }
  return false;
}

}  // namespace detail

/// Reads the textual MSC subset produced by emit_msc and checks it: declared
/// instances, balanced inline par expressions, and every message id occurring
/// exactly once as `out` and once as a matching `in`.
inline std::vector<Chart> read(std::string_view text) {
  using detail::trim;
  std::vector<Chart> charts;
  detail::Lexer lex(text);
  std::string stmt;
  std::size_t line = 0;
  Chart* cur = nullptr;
  std::set<std::string> open_instances;
  std::map<std::string, std::pair<int, int>> pairing;  // id -> (#out, #in)
  std::map<std::string, std::string> out_sig, in_sig;
  int par_depth = 0;

  auto fail = [&](const std::string& what) -> void {
    throw Error(ErrorKind::syntax, detail::kReaderStage, "line " + std::to_string(line) + ": " + what);
  };

  auto finish = [&]() {
    if (!open_instances.empty()) fail("instance '" + *open_instances.begin() + "' lacks endinstance");
    if (par_depth != 0) fail("unbalanced par expression");
    for (const auto& [id, counts] : pairing) {
      if (counts.first != 1 || counts.second != 1)
        fail("message id '" + id + "' appears " + std::to_string(counts.first) + " time(s) as out and " +
             std::to_string(counts.second) + " time(s) as in");
      if (out_sig[id] != in_sig[id]) fail("message id '" + id + "' has mismatched out/in endpoints");
    }
  };

  while (lex.next(stmt, line)) {
    std::string s = trim(stmt);
    if (!cur) {
      if (s.rfind("msc ", 0) != 0) fail("expected 'msc <name>'");
      std::string name = trim(s.substr(4));
      if (!detail::is_ident(name)) fail("bad chart name '" + name + "'");
      charts.push_back(Chart{name, {}, {}});
      cur = &charts.back();
      pairing.clear();
      out_sig.clear();
      in_sig.clear();
      par_depth = 0;
      continue;
    }
    if (s == "endmsc") {
      finish();
      cur = nullptr;
      continue;
    }
    auto colon = s.find(':');
    if (colon == std::string::npos) fail("expected '<instances>: <event>'");
    std::vector<std::string> who;
    {
      std::string list = s.substr(0, colon);
      std::size_t start = 0;
      while (start <= list.size()) {
        auto comma = list.find(',', start);
        std::string w = trim(list.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!detail::is_ident(w)) fail("bad instance name '" + w + "'");
        who.push_back(w);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    std::string body = trim(s.substr(colon + 1));

    if (body == "instance") {
      if (who.size() != 1) fail("instance declaration names one instance");
      if (cur->events.count(who[0])) fail("instance '" + who[0] + "' declared twice");
      cur->instances.push_back(who[0]);
      cur->events[who[0]];
      open_instances.insert(who[0]);
      continue;
    }
    for (const auto& w : who)
      if (!open_instances.count(w)) fail("instance '" + w + "' is not declared or already ended");
    if (body == "endinstance") {
      for (const auto& w : who) open_instances.erase(w);
      continue;
    }

    auto push_all = [&](Event e) {
      for (const auto& w : who) cur->events[w].push_back(e);
    };
    auto keyword = [&](std::string_view kw) { return body.rfind(kw, 0) == 0; };

    if (body == "par begin") {
      ++par_depth;
      push_all({EventType::par_begin, {}, {}, {}});
    } else if (body == "par") {
      if (par_depth == 0) fail("par separator outside par expression");
      push_all({EventType::par_separator, {}, {}, {}});
    } else if (body == "par end") {
      if (par_depth-- == 0) fail("par end without par begin");
      push_all({EventType::par_end, {}, {}, {}});
    } else if (keyword("condition ")) {
      std::string label = trim(body.substr(10));
      if (!detail::is_ident(label)) fail("bad condition label '" + label + "'");
      push_all({EventType::condition, label, {}, {}});
    } else if (keyword("action ")) {
      std::string q = trim(body.substr(7));
      if (q.size() < 2 || q.front() != '\'' || q.back() != '\'') fail("action text must be quoted");
      std::string text;
      for (std::size_t i = 1; i + 1 < q.size(); ++i) {
        text += q[i];
        if (q[i] == '\'') ++i;
      }
      if (who.size() != 1) fail("action is local to one instance");
      push_all({EventType::action, text, {}, {}});
    } else if (keyword("starttimer ") || keyword("stoptimer ") || keyword("timeout ")) {
      auto sp = body.find(' ');
      std::string kw = body.substr(0, sp), name = trim(body.substr(sp + 1));
      if (!detail::is_ident(name)) fail("bad timer name '" + name + "'");
      EventType t = kw == "starttimer" ? EventType::starttimer
                    : kw == "stoptimer" ? EventType::stoptimer
                                        : EventType::timeout;
      push_all({t, name, {}, {}});
    } else if (keyword("out ") || keyword("in ")) {
      const bool out = keyword("out ");
      if (who.size() != 1) fail("message events are local to one instance");
      std::string rest = trim(body.substr(out ? 4 : 3));
      const std::string sep = out ? " to " : " from ";
      auto at = rest.rfind(sep);
      if (at == std::string::npos) fail(std::string("expected '") + (out ? "to" : "from") + " <instance>'");
      std::string peer = trim(rest.substr(at + sep.size()));
      if (!cur->events.count(peer)) fail("unknown peer instance '" + peer + "'");
      std::string name, id;
      if (!detail::split_message(trim(rest.substr(0, at)), name, id)) fail("expected '<name>,<id>'");
      auto& counts = pairing[id];
      if (out) {
        ++counts.first;
        out_sig[id] = name + "|" + who[0] + "|" + peer;
      } else {
        ++counts.second;
        in_sig[id] = name + "|" + peer + "|" + who[0];
      }
      push_all({out ? EventType::out : EventType::in, name, id, peer});
    } else {
      fail("unrecognized event '" + body + "'");
    }
  }
  if (cur) fail("missing endmsc");
  return charts;
}

}  // namespace ucmx::msc
