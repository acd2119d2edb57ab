#include "declc/printer.hpp"

namespace declc {

namespace {

std::string expr_text(const Expr& e, bool spaced) {
  auto k = [&](std::size_t i) { return expr_text(*e.kids[i], spaced); };
  switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::BoolLit:
    case ExprKind::NullLit:
    case ExprKind::Id: return e.text;
    case ExprKind::Deref: return "*" + k(0);
    case ExprKind::AddrOf: return "&" + k(0);
    case ExprKind::Neg: return "-" + k(0);
    case ExprKind::Not: return "!" + k(0);
    case ExprKind::Arrow: return k(0) + "->" + e.text;
    case ExprKind::Dot: return k(0) + "." + e.text;
    case ExprKind::ArrowStar: return k(0) + "->*" + k(1);
    case ExprKind::DotStar: return k(0) + ".*" + k(1);
    case ExprKind::Index: return k(0) + "[" + k(1) + "]";
    case ExprKind::Call: {
      std::string s = k(0) + "(";
      for (std::size_t i = 1; i < e.kids.size(); ++i) {
        if (i > 1) s += spaced ? ", " : ",";
        s += k(i);
      }
      return s + ")";
    }
    case ExprKind::Binary: return spaced ? k(0) + " " + e.text + " " + k(1) : k(0) + e.text + k(1);
    case ExprKind::Paren: return "(" + k(0) + ")";
  }
  return "?";
}

std::string decl_text(const VarDecl& d) {
  Type base = d.type;
  base.array_size.reset();
  base.depth = 0;
  std::string s = base.str() + " " + std::string(static_cast<std::size_t>(d.type.depth), '*') + d.name;
  if (d.type.array_size) s += "[" + std::to_string(*d.type.array_size) + "]";
  if (d.init) s += " = " + pretty(*d.init);
  return s + ";";
}

std::string function_text(const Function& f, int indent) {
  Type base = f.result;
  base.depth = 0;
  std::string s(static_cast<std::size_t>(indent), ' ');
  s += base.str() + " " + std::string(static_cast<std::size_t>(f.result.depth), '*') + f.name + "(";
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    if (i) s += ", ";
    Type pb = f.params[i].type;
    pb.depth = 0;
    s += pb.str() + " " + std::string(static_cast<std::size_t>(f.params[i].type.depth), '*') +
         f.params[i].name;
  }
  s += ") " + pretty(*f.body, indent);
  return s;
}

std::string construct_text(const Construct& c, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  switch (c.kind) {
    case ConstructKind::Constraint: {
      std::string s = pad + pretty(*c.lhs) + " := " + pretty(*c.rhs);
      if (c.guard) s += " given " + pretty(*c.guard);
      return s + ";\n";
    }
    case ConstructKind::Monitor:
      return pad + pretty(*c.lhs) + " ::= " + pretty(*c.body, indent);
    case ConstructKind::Precond:
      return pad + pretty(*c.cond) + " ?? " + pretty(*c.body, indent);
  }
  return {};
}

bool same_opt(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return same_structure(*a, *b);
}

bool same_opt(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return !a && !b;
  return same_structure(*a, *b);
}

bool same_decl(const VarDecl& a, const VarDecl& b) {
  return a.name == b.name && a.type == b.type && same_opt(a.init, b.init);
}

bool same_function(const Function& a, const Function& b) {
  if (a.name != b.name || !(a.result == b.result) || a.params.size() != b.params.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.params.size(); ++i) {
    if (!same_decl(a.params[i], b.params[i])) return false;
  }
  return same_opt(a.body, b.body);
}

bool same_construct(const Construct& a, const Construct& b) {
  return a.kind == b.kind && a.scope == b.scope && same_opt(a.lhs, b.lhs) &&
         same_opt(a.rhs, b.rhs) && same_opt(a.guard, b.guard) && same_opt(a.cond, b.cond) &&
         same_opt(a.body, b.body);
}

}  // namespace

std::string compact(const Expr& e) { return expr_text(e, false); }

std::string pretty(const Expr& e) { return expr_text(e, true); }

std::string pretty(const Stmt& s, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  switch (s.kind) {
    case StmtKind::Block: {
      std::string out = "{\n";
      for (const auto& b : s.body) out += pad + "  " + pretty(*b, indent + 2);
      return out + pad + "}\n";
    }
    case StmtKind::Decl: return decl_text(s.decl) + "\n";
    case StmtKind::Assign: return pretty(*s.lhs) + " = " + pretty(*s.expr) + ";\n";
    case StmtKind::If: {
      std::string out = "if (" + pretty(*s.expr) + ") " + pretty(*s.body[0], indent);
      if (s.body.size() > 1) out += pad + "else " + pretty(*s.body[1], indent);
      return out;
    }
    case StmtKind::While: return "while (" + pretty(*s.expr) + ") " + pretty(*s.body[0], indent);
    case StmtKind::Return: return s.expr ? "return " + pretty(*s.expr) + ";\n" : "return;\n";
    case StmtKind::ExprStmt: return pretty(*s.expr) + ";\n";
  }
  return {};
}

std::string pretty(const Program& p) {
  std::string out;
  for (const auto& item : p.items) {
    switch (item.kind) {
      case TopItem::Kind::Global: out += decl_text(p.globals[item.index]) + "\n"; break;
      case TopItem::Kind::Function: out += function_text(p.functions[item.index], 0); break;
      case TopItem::Kind::Construct: out += construct_text(p.constructs[item.index], 0); break;
      case TopItem::Kind::Class: {
        const ClassDecl& c = p.classes[item.index];
        out += "class " + c.name + " {\n private:\n";
        for (const auto& f : c.fields) out += "  " + decl_text(f) + "\n";
        out += " public:\n";
        for (const auto& m : c.methods) out += function_text(m, 2);
        for (int ci : c.constructs) out += construct_text(p.constructs[ci], 2);
        out += "};\n";
        break;
      }
    }
  }
  return out;
}

bool same_structure(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.text != b.text || a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (!same_structure(*a.kids[i], *b.kids[i])) return false;
  }
  return true;
}

bool same_structure(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.body.size() != b.body.size()) return false;
  for (std::size_t i = 0; i < a.body.size(); ++i) {
    if (!same_structure(*a.body[i], *b.body[i])) return false;
  }
  if (a.kind == StmtKind::Decl && !same_decl(a.decl, b.decl)) return false;
  return same_opt(a.lhs, b.lhs) && same_opt(a.expr, b.expr);
}

bool same_structure(const Program& a, const Program& b) {
  if (a.items.size() != b.items.size() || a.constructs.size() != b.constructs.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (a.items[i].kind != b.items[i].kind || a.items[i].index != b.items[i].index) return false;
  }
  for (std::size_t i = 0; i < a.globals.size(); ++i) {
    if (!same_decl(a.globals[i], b.globals[i])) return false;
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    if (!same_function(a.functions[i], b.functions[i])) return false;
  }
  if (a.classes.size() != b.classes.size()) return false;
  for (std::size_t i = 0; i < a.classes.size(); ++i) {
    const auto& x = a.classes[i];
    const auto& y = b.classes[i];
    if (x.name != y.name || x.fields.size() != y.fields.size() ||
        x.methods.size() != y.methods.size() || x.constructs != y.constructs) {
      return false;
    }
    for (std::size_t f = 0; f < x.fields.size(); ++f) {
      if (!same_decl(x.fields[f], y.fields[f])) return false;
    }
    for (std::size_t m = 0; m < x.methods.size(); ++m) {
      if (!same_function(x.methods[m], y.methods[m])) return false;
    }
  }
  for (std::size_t i = 0; i < a.constructs.size(); ++i) {
    if (!same_construct(a.constructs[i], b.constructs[i])) return false;
  }
  return true;
}

}  // namespace declc
