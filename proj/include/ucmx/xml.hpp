// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <expat.h>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ucmx/error.hpp"

namespace ucmx::xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;
  long line = 0;
  long column = 0;

  const std::string* attr(std::string_view key) const {
    for (const auto& [k, v] : attributes)
      if (k == key) return &v;
    return nullptr;
  }
};

namespace detail {

struct Builder {
  std::vector<Element*> stack;
  Element root_holder;
  bool have_root = false;
  XML_Parser parser = nullptr;

  static void on_start(void* ud, const XML_Char* name, const XML_Char** atts) {
    auto* b = static_cast<Builder*>(ud);
    Element e;
    e.name = name;
    e.line = static_cast<long>(XML_GetCurrentLineNumber(b->parser));
    e.column = static_cast<long>(XML_GetCurrentColumnNumber(b->parser)) + 1;
    for (int i = 0; atts[i]; i += 2) e.attributes.emplace_back(atts[i], atts[i + 1]);
    if (b->stack.empty()) {
      b->root_holder = std::move(e);
      b->have_root = true;
      b->stack.push_back(&b->root_holder);
    } else {
      auto& kids = b->stack.back()->children;
      kids.push_back(std::move(e));
      b->stack.push_back(&kids.back());
    }
  }

  static void on_end(void* ud, const XML_Char*) { static_cast<Builder*>(ud)->stack.pop_back(); }

  static void on_text(void* ud, const XML_Char* s, int len) {
    auto* b = static_cast<Builder*>(ud);
    if (!b->stack.empty()) b->stack.back()->text.append(s, static_cast<std::size_t>(len));
  }
};

}  // namespace detail

/// Parses a complete XML document into an element tree. Syntax errors carry
/// line and column.
inline Element parse(std::string_view text, const std::string& stage = "xml-io") {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate("UTF-8"), &XML_ParserFree);
  detail::Builder b;
  b.parser = parser.get();
  XML_SetUserData(parser.get(), &b);
  XML_SetElementHandler(parser.get(), &detail::Builder::on_start, &detail::Builder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &detail::Builder::on_text);
  if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE) == XML_STATUS_ERROR) {
    throw Error(ErrorKind::syntax, stage,
                "XML syntax error at line " + std::to_string(XML_GetCurrentLineNumber(parser.get())) +
                    ", column " + std::to_string(XML_GetCurrentColumnNumber(parser.get()) + 1) + ": " +
                    XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (!b.have_root) throw Error(ErrorKind::syntax, stage, "empty XML document");
  return std::move(b.root_holder);
}

inline std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

/// NMTOKEN: one or more name characters. Non-ASCII bytes are accepted.
inline bool is_nmtoken(std::string_view s) {
  if (s.empty()) return false;
  for (unsigned char c : s) {
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' ||
              c == '-' || c == '_' || c == ':' || c >= 0x80;
    if (!ok) return false;
  }
  return true;
}

using Attrs = std::vector<std::pair<std::string_view, std::string>>;

/// Minimal pretty printer: two-space indentation, LF endings, attributes in
/// the order given.
class Writer {
 public:
  Writer() { out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"; }

  void open(std::string_view name, const Attrs& attrs = {}) {
    tag(name, attrs);
    out_ += ">\n";
    ++depth_;
  }
  void empty(std::string_view name, const Attrs& attrs = {}) {
    tag(name, attrs);
    out_ += "/>\n";
  }
  void close(std::string_view name) {
    --depth_;
    indent();
    out_ += "</";
    out_ += name;
    out_ += ">\n";
  }
  void text_element(std::string_view name, std::string_view text) {
    indent();
    out_ += "<";
    out_ += name;
    out_ += ">";
    out_ += escape(text);
    out_ += "</";
    out_ += name;
    out_ += ">\n";
  }

  std::string str() && { return std::move(out_); }
  const std::string& str() const& { return out_; }

 private:
  void indent() { out_.append(static_cast<std::size_t>(depth_) * 2, ' '); }
  void tag(std::string_view name, const Attrs& attrs) {
    indent();
    out_ += "<";
    out_ += name;
    for (const auto& [k, v] : attrs) {
      out_ += " ";
      out_ += k;
      out_ += "=\"";
      out_ += escape(v);
      out_ += "\"";
    }
  }

  std::string out_;
  int depth_ = 0;
};

}  // namespace ucmx::xml
