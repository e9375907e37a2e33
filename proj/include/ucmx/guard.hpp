// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "ucmx/error.hpp"

namespace ucmx {

/// Boolean guard over declared variables.
///   expr := term ('|' term)*
///   term := factor ('&' factor)*
///   factor := '!' factor | '(' expr ')' | 'true' | 'false' | identifier
class Guard {
 public:
  Guard() = default;  // the constant `true`

  static Guard parse(std::string_view text, const std::string& stage = "ucm") {
    Parser p{text, 0, stage};
    Guard g;
    g.root_ = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
    g.text_ = std::string(text);
    return g;
  }

  bool eval(const std::map<std::string, bool>& store) const { return root_ ? eval(*root_, store) : true; }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    if (root_) collect(*root_, out);
    return out;
  }

  /// Source text; empty for the default guard.
  const std::string& text() const { return text_; }

 private:
  enum class Op { var, constant, neg, conj, disj };
  struct Expr {
    Op op;
    std::string name;
    bool value = false;
    std::shared_ptr<const Expr> lhs, rhs;
  };
  using Ptr = std::shared_ptr<const Expr>;

  struct Parser {
    std::string_view s;
    std::size_t pos;
    const std::string& stage;

    [[noreturn]] void fail(const std::string& what) const {
      throw Error(ErrorKind::validation, stage,
                  "guard '" + std::string(s) + "' at offset " + std::to_string(pos) + ": " + what);
    }
    void skip() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
      skip();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    Ptr expr() {
      Ptr l = term();
      while (eat('|')) l = std::make_shared<Expr>(Expr{Op::disj, {}, false, l, term()});
      return l;
    }
    Ptr term() {
      Ptr l = factor();
      while (eat('&')) l = std::make_shared<Expr>(Expr{Op::conj, {}, false, l, factor()});
      return l;
    }
    Ptr factor() {
      if (eat('!')) return std::make_shared<Expr>(Expr{Op::neg, {}, false, factor(), nullptr});
      if (eat('(')) {
        Ptr e = expr();
        if (!eat(')')) fail("expected ')'");
        return e;
      }
      skip();
      std::size_t b = pos;
      while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '-' ||
                                s[pos] == '.'))
        ++pos;
      if (b == pos) fail(pos < s.size() ? "unexpected '" + std::string(1, s[pos]) + "'" : "unexpected end");
      std::string id(s.substr(b, pos - b));
      if (id == "true" || id == "false") return std::make_shared<Expr>(Expr{Op::constant, {}, id == "true", {}, {}});
      return std::make_shared<Expr>(Expr{Op::var, id, false, {}, {}});
    }
  };

  static bool eval(const Expr& e, const std::map<std::string, bool>& store) {
    switch (e.op) {
      case Op::var: {
        auto it = store.find(e.name);
        if (it == store.end()) throw Error(ErrorKind::traversal, "ucm-traversal", "variable '" + e.name + "' has no value", e.name);
        return it->second;
      }
      case Op::constant: return e.value;
      case Op::neg: return !eval(*e.lhs, store);
      case Op::conj: return eval(*e.lhs, store) && eval(*e.rhs, store);
      case Op::disj: return eval(*e.lhs, store) || eval(*e.rhs, store);
    }
    return false;
  }

  static void collect(const Expr& e, std::set<std::string>& out) {
    if (e.op == Op::var) out.insert(e.name);
    if (e.lhs) collect(*e.lhs, out);
    if (e.rhs) collect(*e.rhs, out);
  }

  Ptr root_;
  std::string text_;
};

}  // namespace ucmx
