#pragma once

#include <string>
#include <vector>

#include "declc/ast.hpp"
#include "declc/lvgraph.hpp"

namespace declc::codegen {

enum class FnKind {
  Init,
  Redef,
  Assign,
  MonitorBody,
  PrecondTester,
  GuardTester,
  UnitInit,
  ObjectUpdate,
};

enum class InstrKind {
  RegRedefinition,  // lv.HandleRedefinition(fn, b)
  RegConstraint,    // lv.HandleConstraint(fn, b)
  RegDependency,    // target.HandleDependency(&lv, b); fn is the constraint's assign
  RegMonitor,       // lv.HandleMonitor(fn, b)
  RegPrecondition,  // lv.HandlePrecondition(fn, b)
  CallGen,          // fn(owner, b)
  ApplyOnInstall,   // if (b) fn(owner)
  EmbedStmt,        // user block; testers carry their condition in `expr`
  EmbedAssign,      // lhs = expr
  EmbedExpr,        // return expr (guard testers)
  SetUpdated,       // ((A*)owner)->SetUpdated()
};

struct GenInstr {
  InstrKind kind = InstrKind::CallGen;
  const Expr* lv = nullptr;    // bound l-value; the assigned l-value for EmbedAssign
  std::string lv_str;          // canonical text of `lv`
  std::string target_str;      // RegDependency: the constrained l-value, for rendering
  int fn = -1;                 // referenced generated function
  const Expr* expr = nullptr;  // EmbedAssign rhs, tester condition, guard
  const Stmt* stmt = nullptr;  // EmbedStmt
};

struct GenFunction {
  std::string name;
  FnKind kind = FnKind::Init;
  int construct = -1;  // owning construct; -1 for unit and class functions
  std::string scope;   // owning class, empty at file scope
  int guard = -1;      // Assign: its GuardTester, if any
  int frame_size = 0;  // locals of embedded user code
  std::vector<GenInstr> body;

  bool takes_flag() const {
    return kind == FnKind::Init || kind == FnKind::Redef || kind == FnKind::UnitInit;
  }
};

/// Generated functions of one declarative construct.
struct GenConstruct {
  int init = -1;    // init_<ordinal>
  int action = -1;  // assign / monitor body / tester
  int guard = -1;
  std::vector<int> functions;  // everything emitted for it, emission order
};

struct GenClass {
  std::string name;
  int update = -1;  // ObjectUpdate function
  int init = -1;    // unit init over the class-scope constructs
  std::vector<std::string> monitored;  // every data member
  std::vector<std::string> wrapped;    // every method, Suspend/Resume wrapped
};

struct GenUnit {
  std::vector<GenFunction> functions;
  std::vector<GenConstruct> constructs;  // by construct ordinal
  std::vector<GenClass> classes;
  int unit_init = -1;  // file-scope constructs
  const Program* program = nullptr;

  const GenFunction& fn(int i) const { return functions.at(static_cast<std::size_t>(i)); }
  int find(const std::string& name) const;
};

/// Identifier-safe name for a canonical l-value expression. Class members
/// get `own_<Class>_mem_` in place of the owner cast.
std::string mangle(const Expr& lv, const std::string& scope = "");

/// Storage classes that decide which generated functions an l-value gets.
enum class Storage { Scalar, Pointer, Array, Object, Method, Function, Unsupported };
Storage storage_of(const Expr& lv);
/// Whether writes to the l-value's storage can rebind other l-values.
bool capable(const Expr& lv);

GenUnit generate(const Program& prog, const lvgraph::RedefGraph& graph);

/// Pseudo-C++ transcript of the unit.
std::string render(const GenUnit& unit);
std::string render_function(const GenUnit& unit, const GenFunction& f);

}  // namespace declc::codegen
