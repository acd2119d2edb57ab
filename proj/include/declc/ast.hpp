#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "declc/source.hpp"
#include "declc/types.hpp"

namespace declc {

enum class ExprKind {
  IntLit,
  BoolLit,
  NullLit,
  Id,
  Deref,      // *E
  AddrOf,     // &E
  Neg,        // -E
  Not,        // !E
  Arrow,      // E->id
  Dot,        // E.id
  ArrowStar,  // E1->*E2
  DotStar,    // E1.*E2
  Index,      // E1[E2]
  Call,       // E(args)
  Binary,     // E1 op E2
  Paren,      // (E)
};

/// The l-value productions of the redefinition grammar. Every ExprKind that
/// can denote storage maps to exactly one of these.
enum class LvProduction { Id, Deref, Arrow, Dot, ArrowStar, DotStar, Index };

std::optional<LvProduction> lv_production(ExprKind kind);

/// What an identifier (or a member name after `.`/`->`) refers to; filled
/// in by the checker.
struct Ref {
  enum class Kind { None, Global, Local, Member, Function, Method };
  Kind kind = Kind::None;
  int index = -1;          // global / local slot / field / function / method index
  std::string class_name;  // owning class for Member and Method
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  std::string text;  // identifier, member name, operator or literal spelling
  std::vector<ExprPtr> kids;
  SourcePos pos;

  // Set by the checker.
  Type type;
  Ref ref;

  bool is_lvalue_form() const { return lv_production(kind).has_value(); }
};

ExprPtr make_expr(ExprKind kind, std::string text, SourcePos pos, std::vector<ExprPtr> kids = {});

struct VarDecl {
  std::string name;
  Type type;
  ExprPtr init;  // optional
  SourcePos pos;
};

enum class StmtKind { Block, Decl, Assign, If, While, Return, ExprStmt };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  StmtKind kind = StmtKind::Block;
  SourcePos pos;
  std::vector<StmtPtr> body;  // Block: statements; If: then [, else]; While: body
  ExprPtr lhs;                // Assign
  ExprPtr expr;               // Assign rhs, If/While condition, Return value, ExprStmt
  VarDecl decl;               // Decl
  int slot = -1;              // Decl: frame slot assigned by the checker
};

struct Function {
  std::string name;
  Type result;
  std::vector<VarDecl> params;
  StmtPtr body;
  SourcePos pos;
  std::string owner_class;  // empty for free functions
  int frame_size = 0;       // params + locals, set by the checker
};

enum class ConstructKind { Constraint, Monitor, Precond };

/// One declarative element: `lhs := rhs [given guard];`, `lhs ::= { body }`
/// or `cond ?? { body }`.
struct Construct {
  ConstructKind kind = ConstructKind::Constraint;
  ExprPtr lhs;    // constraint, monitor
  ExprPtr rhs;    // constraint
  ExprPtr guard;  // constraint, optional
  ExprPtr cond;   // precond
  StmtPtr body;   // monitor, precond (a block)
  SourcePos pos;
  std::string scope;  // owning class, empty at file scope
  int ordinal = -1;   // declaration order across the unit
  int frame_size = 0; // locals declared in the body, set by the checker
};

struct ClassDecl {
  std::string name;
  std::vector<VarDecl> fields;
  std::vector<Function> methods;
  std::vector<int> constructs;  // indices into Program::constructs
  SourcePos pos;

  int field_index(const std::string& n) const;
  int method_index(const std::string& n) const;
};

struct TopItem {
  enum class Kind { Global, Function, Class, Construct };
  Kind kind;
  int index;
};

struct Program {
  std::vector<TopItem> items;  // textual order of file-scope items
  std::vector<VarDecl> globals;
  std::vector<Function> functions;
  std::vector<ClassDecl> classes;
  std::vector<Construct> constructs;  // every construct, declaration order

  const ClassDecl* find_class(const std::string& name) const;
  int function_index(const std::string& name) const;
  int global_index(const std::string& name) const;
};

const char* construct_kind_name(ConstructKind kind);

}  // namespace declc
