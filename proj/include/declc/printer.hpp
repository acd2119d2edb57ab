#pragma once

#include <string>

#include "declc/ast.hpp"

namespace declc {

/// Expression text without any spaces, e.g. `p[x+y]`, `**x`, `a.f()`.
std::string compact(const Expr& e);

/// Expression text with spaces around binary operators, for diagnostics
/// and rendered code.
std::string pretty(const Expr& e);

std::string pretty(const Stmt& s, int indent = 0);

/// Source text that re-parses to a structurally identical program.
std::string pretty(const Program& p);

/// Structural equality of two syntax trees, ignoring positions and checker
/// annotations.
bool same_structure(const Expr& a, const Expr& b);
bool same_structure(const Stmt& a, const Stmt& b);
bool same_structure(const Program& a, const Program& b);

}  // namespace declc
