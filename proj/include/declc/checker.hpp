#pragma once

#include <string_view>
#include <vector>

#include "declc/ast.hpp"

namespace declc {

struct CheckOptions {
  /// Permit implicit int <-> bool conversion in assignments, constraints,
  /// arguments and returns. Off by default.
  bool int_bool_conversion = false;
};

/// Resolves identifiers, types every expression and enforces the HybridC
/// static rules. Annotates `prog` in place and returns all diagnostics;
/// an empty result means the program is well formed.
std::vector<Diagnostic> check(Program& prog, const CheckOptions& opts = {});

/// parse_source + check; throws CompileError carrying every diagnostic.
Program compile(std::string_view source, const CheckOptions& opts = {});

}  // namespace declc
