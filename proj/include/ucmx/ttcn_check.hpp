// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ucmx::ttcn {

/// Structural facts about a TTCN-3 text in the subset emit_ttcn3 produces.
struct CheckResult {
  std::vector<std::string> problems;  // empty when well formed
  std::string module;
  std::vector<std::string> testcases;  // declaration order
  std::vector<std::string> executed;   // control part order

  bool ok() const { return problems.empty(); }
};

namespace detail {

struct Token {
  std::string text;
  bool string_literal = false;
};

inline std::vector<Token> tokenize(std::string_view s, std::vector<std::string>& problems) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (s.substr(i, 2) == "//") {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (s.substr(i, 2) == "/*") {
      auto e = s.find("*/", i + 2);
      if (e == std::string_view::npos) {
        problems.push_back("unterminated block comment");
        return out;
      }
      i = e + 2;
    } else if (c == '"') {
      std::string lit;
      ++i;
      while (i < s.size() && s[i] != '"') {
        if (s[i] == '\n') break;
        lit += s[i++];
      }
      if (i >= s.size() || s[i] != '"') {
        problems.push_back("unterminated string literal");
        return out;
      }
      ++i;
      out.push_back({lit, true});
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '.')) ++i;
      out.push_back({std::string(s.substr(b, i - b)), false});
    } else if (s.substr(i, 2) == ":=") {
      out.push_back({":=", false});
      i += 2;
    } else {
      out.push_back({std::string(1, c), false});
      ++i;
    }
  }
  return out;
}

}  // namespace detail

/// Checks balanced brackets, a single module, declared component and port
/// types, and that every testcase is executed exactly once by the control part
/// and nothing undeclared is executed.
inline CheckResult check(std::string_view text) {
  CheckResult r;
  auto toks = detail::tokenize(text, r.problems);
  const std::map<char, char> closing{{')', '('}, {']', '['}, {'}', '{'}};
  std::vector<char> stack;
  std::set<std::string> components, ports;
  int modules = 0;
  bool in_control = false;
  int control_depth = 0;

  auto at = [&](std::size_t i) -> const std::string& {
    static const std::string none;
    return i < toks.size() && !toks[i].string_literal ? toks[i].text : none;
  };

  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].string_literal) continue;
    const std::string& t = toks[i].text;
    if (t.size() == 1 && (t[0] == '(' || t[0] == '[' || t[0] == '{')) {
      stack.push_back(t[0]);
    } else if (t.size() == 1 && closing.count(t[0])) {
      if (stack.empty() || stack.back() != closing.at(t[0])) {
        r.problems.push_back("unbalanced '" + t + "'");
        return r;
      }
      stack.pop_back();
      if (in_control && static_cast<int>(stack.size()) < control_depth) in_control = false;
    } else if (t == "module") {
      ++modules;
      if (!stack.empty()) r.problems.push_back("nested module declaration");
      r.module = at(i + 1);
    } else if (t == "type" && at(i + 1) == "component") {
      components.insert(at(i + 2));
    } else if (t == "type" && at(i + 1) == "port") {
      ports.insert(at(i + 2));
    } else if (t == "port" && at(i - 1) != "type") {
      if (!ports.count(at(i + 1))) r.problems.push_back("undeclared port type '" + at(i + 1) + "'");
    } else if (t == "runs" && at(i + 1) == "on") {
      if (!components.count(at(i + 2))) r.problems.push_back("undeclared component type '" + at(i + 2) + "'");
    } else if (t == "testcase") {
      r.testcases.push_back(at(i + 1));
    } else if (t == "control" && at(i + 1) == "{") {
      in_control = true;
      control_depth = static_cast<int>(stack.size()) + 1;
    } else if (t == "execute" && at(i + 1) == "(") {
      if (!in_control) r.problems.push_back("execute outside control part");
      r.executed.push_back(at(i + 2));
    }
  }
  if (!stack.empty()) r.problems.push_back("unclosed '" + std::string(1, stack.back()) + "'");
  if (modules != 1) r.problems.push_back("expected exactly one module, found " + std::to_string(modules));

  std::set<std::string> declared(r.testcases.begin(), r.testcases.end());
  if (declared.size() != r.testcases.size()) r.problems.push_back("duplicate testcase name");
  std::map<std::string, int> runs;
  for (const auto& e : r.executed) {
    if (!declared.count(e)) r.problems.push_back("execute of undeclared testcase '" + e + "'");
    ++runs[e];
  }
  for (const auto& t : r.testcases)
    if (runs[t] != 1) r.problems.push_back("testcase '" + t + "' executed " + std::to_string(runs[t]) + " times");
  return r;
}

}  // namespace ucmx::ttcn
