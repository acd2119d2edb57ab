#pragma once

#include <string_view>
#include <vector>

#include "declc/ast.hpp"
#include "declc/lexer.hpp"

namespace declc {

/// Recursive-descent parser for HybridC. Classes must be declared before
/// their name is used as a type. Throws CompileError on the first syntax
/// error, naming the offending token and what was expected.
Program parse_unit(const std::vector<Token>& tokens);

/// tokenize + parse_unit.
Program parse_source(std::string_view source);

}  // namespace declc
