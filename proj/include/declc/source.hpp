#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace declc {

struct SourcePos {
  std::uint32_t line = 1;
  std::uint32_t column = 1;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  SourcePos pos;
  std::string message;

  /// Renders as `file:line:col: severity: message`.
  std::string format(const std::string& file) const;
};

/// Thrown by the lexer, parser and checker. Carries every diagnostic
/// collected before the stage gave up.
class CompileError : public std::runtime_error {
 public:
  explicit CompileError(std::vector<Diagnostic> diags);
  CompileError(SourcePos pos, const std::string& message);

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

}  // namespace declc
