#include "declc/source.hpp"

namespace declc {

namespace {

const char* severity_name(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
  }
  return "error";
}

std::string first_message(const std::vector<Diagnostic>& diags) {
  return diags.empty() ? std::string("compile error") : diags.front().message;
}

}  // namespace

std::string Diagnostic::format(const std::string& file) const {
  return file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
         severity_name(severity) + ": " + message;
}

CompileError::CompileError(std::vector<Diagnostic> diags)
    : std::runtime_error(first_message(diags)), diags_(std::move(diags)) {}

CompileError::CompileError(SourcePos pos, const std::string& message)
    : CompileError(std::vector<Diagnostic>{{Severity::Error, pos, message}}) {}

}  // namespace declc
