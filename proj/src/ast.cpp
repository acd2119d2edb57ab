#include "declc/ast.hpp"

namespace declc {

std::optional<LvProduction> lv_production(ExprKind kind) {
  switch (kind) {
    case ExprKind::Id: return LvProduction::Id;
    case ExprKind::Deref: return LvProduction::Deref;
    case ExprKind::Arrow: return LvProduction::Arrow;
    case ExprKind::Dot: return LvProduction::Dot;
    case ExprKind::ArrowStar: return LvProduction::ArrowStar;
    case ExprKind::DotStar: return LvProduction::DotStar;
    case ExprKind::Index: return LvProduction::Index;
    default: return std::nullopt;
  }
}

ExprPtr make_expr(ExprKind kind, std::string text, SourcePos pos, std::vector<ExprPtr> kids) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->text = std::move(text);
  e->pos = pos;
  e->kids = std::move(kids);
  return e;
}

int ClassDecl::field_index(const std::string& n) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].name == n) return static_cast<int>(i);
  }
  return -1;
}

int ClassDecl::method_index(const std::string& n) const {
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (methods[i].name == n) return static_cast<int>(i);
  }
  return -1;
}

const ClassDecl* Program::find_class(const std::string& name) const {
  for (const auto& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

int Program::function_index(const std::string& name) const {
  for (std::size_t i = 0; i < functions.size(); ++i) {
    if (functions[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int Program::global_index(const std::string& name) const {
  for (std::size_t i = 0; i < globals.size(); ++i) {
    if (globals[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const char* construct_kind_name(ConstructKind kind) {
  switch (kind) {
    case ConstructKind::Constraint: return "constraint";
    case ConstructKind::Monitor: return "monitor";
    case ConstructKind::Precond: return "precondition";
  }
  return "?";
}

}  // namespace declc
