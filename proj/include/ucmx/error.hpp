// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ucmx {

enum class ErrorKind {
  syntax,        // malformed XML or rule text
  validation,    // content violates a schema or model invariant
  structure,     // seq/par alternation broken
  config,        // bad customization rule set
  precondition,  // stage invoked on a document it cannot handle
  overflow,      // enumeration cap exceeded
  traversal,     // UCM traversal failure
  consistency,   // two inputs that must agree do not
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::validation: return "validation";
    case ErrorKind::structure: return "structure";
    case ErrorKind::config: return "config";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::traversal: return "traversal";
    case ErrorKind::consistency: return "consistency";
  }
  return "unknown";
}

// Every failure in the toolchain surfaces as this type. `stage` names the
// module that raised it and `element` the offending id, when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string stage, std::string message, std::string element = {})
      : std::runtime_error(format(stage, message, element)),
        kind_(kind),
        stage_(std::move(stage)),
        element_(std::move(element)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& element() const noexcept { return element_; }

 private:
  static std::string format(const std::string& stage, const std::string& message,
                            const std::string& element) {
    std::string s = stage + ": " + message;
    if (!element.empty()) s += " [element '" + element + "']";
    return s;
  }

  ErrorKind kind_;
  std::string stage_;
  std::string element_;
};

}  // namespace ucmx
