#pragma once

#include <string>
#include <vector>

#include "declc/ast.hpp"
#include "declc/interp.hpp"
#include "declc/result.hpp"
#include "declc/trace.hpp"

namespace declc::oracle {

struct Options {
  InterpLimits limits;
  int store_depth = 200;
};

/// Reference semantics: after every store, decides from scratch which
/// construct instances the stored cell triggers by re-evaluating every
/// involved l-value. Uses no redefinition graph and no generated code.
RunResult oracle_run(const Program& prog, Trace& trace, const Options& opts = {});

/// The l-values a construct side involves: outermost l-values, equal texts
/// once, token-substrings of others dropped.
std::vector<const Expr*> involved_lvalues(const Expr& e, const std::string& scope);
/// Every l-value whose value decides where `lv` is stored, transitively.
std::vector<const Expr*> nested_lvalues(const Expr& lv, const std::string& scope);

}  // namespace declc::oracle
