#include "declc/checker.hpp"

#include <map>
#include <set>

#include "declc/parser.hpp"
#include "declc/printer.hpp"

namespace declc {

namespace {

struct Local {
  int slot;
  Type type;
};

struct Context {
  const ClassDecl* cls = nullptr;  // enclosing class, if any
  const Function* fn = nullptr;    // enclosing function; null for construct bodies
  std::vector<std::map<std::string, Local>> scopes;
  int slots = 0;
  bool constant_only = false;  // global and field initializers
};

class Checker {
 public:
  Checker(Program& p, const CheckOptions& o) : prog_(p), opts_(o) {}

  std::vector<Diagnostic> run() {
    declare_functions();
    check_classes_shape();
    // File-scope items are visible only after their declaration.
    for (const auto& item : prog_.items) {
      switch (item.kind) {
        case TopItem::Kind::Global: check_global(item.index); break;
        case TopItem::Kind::Class: break;
        case TopItem::Kind::Function: break;
        case TopItem::Kind::Construct: {
          Context ctx;
          check_construct(prog_.constructs[item.index], ctx);
          break;
        }
      }
    }
    // Function and class bodies see every global, so they are checked last.
    for (auto& f : prog_.functions) check_function(f, nullptr);
    for (auto& c : prog_.classes) {
      for (auto& m : c.methods) check_function(m, &c);
      for (int ci : c.constructs) {
        Context ctx;
        ctx.cls = &c;
        check_construct(prog_.constructs[ci], ctx);
      }
    }
    int main_idx = prog_.function_index("main");
    if (main_idx >= 0) {
      const Function& m = prog_.functions[main_idx];
      if (!m.params.empty() || !(m.result.is_int() || m.result.base == Type::Base::Void)) {
        error(m.pos, "'main' must take no parameters and return int or void");
      }
    }
    return std::move(diags_);
  }

 private:
  void error(SourcePos p, std::string msg) { diags_.push_back({Severity::Error, p, std::move(msg)}); }

  // ---- declarations --------------------------------------------------------

  bool valid_value_type(const Type& t, SourcePos p, const std::string& what) {
    if (t.base == Type::Base::Void && t.depth == 0) {
      error(p, what + " cannot have type void");
      return false;
    }
    if (t.base == Type::Base::Class && !prog_.find_class(t.class_name)) {
      error(p, "unknown class '" + t.class_name + "'");
      return false;
    }
    if (t.is_array() && t.base == Type::Base::Class && t.depth == 0) {
      error(p, "arrays of objects are not supported");
      return false;
    }
    return true;
  }

  void declare_functions() {
    std::set<std::string> seen;
    for (const auto& f : prog_.functions) {
      if (!seen.insert(f.name).second) error(f.pos, "redefinition of function '" + f.name + "'");
    }
  }

  void check_classes_shape() {
    std::set<std::string> done;
    for (const auto& c : prog_.classes) {
      std::set<std::string> names;
      for (const auto& f : c.fields) {
        if (!names.insert(f.name).second) error(f.pos, "duplicate member '" + f.name + "'");
        if (!valid_value_type(f.type, f.pos, "member '" + f.name + "'")) continue;
        if (f.type.is_object() && !done.count(f.type.class_name)) {
          error(f.pos, "member '" + f.name + "' has incomplete type '" + f.type.class_name + "'");
        }
        if (f.init) {
          if (!f.type.is_assignable()) {
            error(f.pos, "member '" + f.name + "' cannot have an initializer");
          } else {
            Context ctx;
            ctx.constant_only = true;
            Type t = expr(*f.init, ctx);
            expect_assignable(f.type, t, f.init->pos);
          }
        }
      }
      for (const auto& m : c.methods) {
        if (!names.insert(m.name).second) error(m.pos, "duplicate member '" + m.name + "'");
      }
      done.insert(c.name);
    }
  }

  void check_global(int idx) {
    VarDecl& g = prog_.globals[idx];
    if (prog_.global_index(g.name) != idx || prog_.function_index(g.name) >= 0) {
      error(g.pos, "redefinition of '" + g.name + "'");
    }
    visible_globals_.insert(g.name);
    if (!valid_value_type(g.type, g.pos, "variable '" + g.name + "'")) return;
    if (g.init) {
      if (!g.type.is_assignable()) {
        error(g.pos, "'" + g.name + "' cannot have an initializer");
        return;
      }
      Context ctx;
      ctx.constant_only = true;
      Type t = expr(*g.init, ctx);
      expect_assignable(g.type, t, g.init->pos);
    }
  }

  void check_function(Function& f, const ClassDecl* cls) {
    Context ctx;
    ctx.cls = cls;
    ctx.fn = &f;
    ctx.scopes.emplace_back();
    all_globals_visible_ = true;
    if (f.result.is_array()) error(f.pos, "functions cannot return arrays");
    if (f.result.is_object()) error(f.pos, "functions cannot return objects");
    for (auto& p : f.params) {
      if (p.type.base == Type::Base::Void && p.type.depth == 0) {
        error(p.pos, "parameter cannot have type void");
      } else if (p.type.is_object()) {
        error(p.pos, "objects cannot be passed by value");
      } else {
        valid_value_type(p.type, p.pos, "parameter");
      }
      if (ctx.scopes.back().count(p.name)) error(p.pos, "duplicate parameter '" + p.name + "'");
      ctx.scopes.back()[p.name] = {ctx.slots++, p.type};
    }
    stmt(*f.body, ctx);
    f.frame_size = ctx.slots;
  }

  void check_construct(Construct& c, Context& ctx) {
    ctx.scopes.emplace_back();
    switch (c.kind) {
      case ConstructKind::Constraint: {
        Type lt = expr(*c.lhs, ctx);
        Type rt = expr(*c.rhs, ctx);
        if (!c.lhs->is_lvalue_form() || !lt.is_assignable()) {
          if (!lt.is_error()) error(c.lhs->pos, "left side must be an l-value");
        } else if (!assignable_from(lt, rt, opts_.int_bool_conversion)) {
          error(c.rhs->pos, "constraint sides are not assignment compatible: '" + lt.str() +
                                "' := '" + rt.str() + "'");
        }
        if (c.guard) {
          Type gt = expr(*c.guard, ctx);
          if (!gt.is_bool() && !gt.is_error()) error(c.guard->pos, "'given' guard must be bool");
        }
        break;
      }
      case ConstructKind::Monitor: {
        Type lt = expr(*c.lhs, ctx);
        if (!c.lhs->is_lvalue_form() || lt.is_callable()) {
          if (!lt.is_error()) error(c.lhs->pos, "left side must be an l-value");
        }
        stmt(*c.body, ctx);
        break;
      }
      case ConstructKind::Precond: {
        Type t = expr(*c.cond, ctx);
        if (!t.is_bool() && !t.is_error()) error(c.cond->pos, "precondition must be bool");
        stmt(*c.body, ctx);
        break;
      }
    }
    c.frame_size = ctx.slots;
  }

  // ---- statements ----------------------------------------------------------

  void stmt(Stmt& s, Context& ctx) {
    switch (s.kind) {
      case StmtKind::Block:
        ctx.scopes.emplace_back();
        for (auto& b : s.body) stmt(*b, ctx);
        ctx.scopes.pop_back();
        break;
      case StmtKind::Decl: {
        VarDecl& d = s.decl;
        if (valid_value_type(d.type, d.pos, "variable '" + d.name + "'") && d.type.is_object()) {
          error(d.pos, "local objects are not supported; declare '" + d.name + "' at file scope");
        }
        if (d.init) {
          Type t = expr(*d.init, ctx);
          if (d.type.is_array()) {
            error(d.pos, "arrays cannot have an initializer");
          } else {
            expect_assignable(d.type, t, d.init->pos);
          }
        }
        if (ctx.scopes.back().count(d.name)) error(d.pos, "redefinition of '" + d.name + "'");
        s.slot = ctx.slots++;
        ctx.scopes.back()[d.name] = {s.slot, d.type};
        break;
      }
      case StmtKind::Assign: {
        Type lt = expr(*s.lhs, ctx);
        Type rt = expr(*s.expr, ctx);
        if (!s.lhs->is_lvalue_form() || !lt.is_assignable()) {
          if (!lt.is_error()) error(s.lhs->pos, "left side of assignment must be an assignable l-value");
        } else {
          expect_assignable(lt, rt, s.expr->pos);
        }
        break;
      }
      case StmtKind::If:
      case StmtKind::While: {
        Type t = expr(*s.expr, ctx);
        if (!t.is_bool() && !t.is_error()) error(s.expr->pos, "condition must be bool");
        for (auto& b : s.body) {
          ctx.scopes.emplace_back();
          stmt(*b, ctx);
          ctx.scopes.pop_back();
        }
        break;
      }
      case StmtKind::Return: {
        if (!ctx.fn) {
          error(s.pos, "'return' outside a function");
          break;
        }
        bool is_void = ctx.fn->result.base == Type::Base::Void && ctx.fn->result.depth == 0;
        if (s.expr) {
          Type t = expr(*s.expr, ctx);
          if (is_void) {
            error(s.pos, "void function returns a value");
          } else {
            expect_assignable(ctx.fn->result, t, s.expr->pos);
          }
        } else if (!is_void) {
          error(s.pos, "non-void function must return a value");
        }
        break;
      }
      case StmtKind::ExprStmt:
        expr(*s.expr, ctx);
        if (s.expr->kind != ExprKind::Call) error(s.pos, "expression statement must be a call");
        break;
    }
  }

  void expect_assignable(const Type& to, const Type& from, SourcePos p) {
    if (!assignable_from(to, from, opts_.int_bool_conversion)) {
      error(p, "cannot assign '" + from.str() + "' to '" + to.str() + "'");
    }
  }

  // ---- expressions ---------------------------------------------------------

  Type set(Expr& e, Type t) {
    e.type = t;
    return t;
  }

  Type resolve_id(Expr& e, Context& ctx) {
    for (auto it = ctx.scopes.rbegin(); it != ctx.scopes.rend(); ++it) {
      auto f = it->find(e.text);
      if (f != it->end()) {
        e.ref = {Ref::Kind::Local, f->second.slot, ""};
        return set(e, f->second.type);
      }
    }
    if (ctx.cls) {
      int fi = ctx.cls->field_index(e.text);
      if (fi >= 0) {
        e.ref = {Ref::Kind::Member, fi, ctx.cls->name};
        return set(e, ctx.cls->fields[fi].type);
      }
      int mi = ctx.cls->method_index(e.text);
      if (mi >= 0) {
        e.ref = {Ref::Kind::Method, mi, ctx.cls->name};
        return set(e, Type::method_type());
      }
    }
    int gi = prog_.global_index(e.text);
    if (gi >= 0 && (all_globals_visible_ || visible_globals_.count(e.text))) {
      e.ref = {Ref::Kind::Global, gi, ""};
      return set(e, prog_.globals[gi].type);
    }
    int fi = prog_.function_index(e.text);
    if (fi >= 0) {
      e.ref = {Ref::Kind::Function, fi, ""};
      return set(e, Type::function_type());
    }
    error(e.pos, "unresolved identifier '" + e.text + "'");
    return set(e, Type::error_type());
  }

  Type member(Expr& e, const Type& obj, Context& ctx) {
    const ClassDecl* c = prog_.find_class(obj.class_name);
    if (!c) return set(e, Type::error_type());
    int fi = c->field_index(e.text);
    if (fi >= 0) {
      if (ctx.cls != c) {
        error(e.pos, "member '" + e.text + "' of class '" + c->name + "' is private");
        return set(e, Type::error_type());
      }
      e.ref = {Ref::Kind::Member, fi, c->name};
      return set(e, c->fields[fi].type);
    }
    int mi = c->method_index(e.text);
    if (mi >= 0) {
      e.ref = {Ref::Kind::Method, mi, c->name};
      return set(e, Type::method_type());
    }
    error(e.pos, "class '" + c->name + "' has no member '" + e.text + "'");
    return set(e, Type::error_type());
  }

  const Function* callee_of(const Expr& callee) const {
    switch (callee.ref.kind) {
      case Ref::Kind::Function: return &prog_.functions[callee.ref.index];
      case Ref::Kind::Method: {
        const ClassDecl* c = prog_.find_class(callee.ref.class_name);
        return c ? &c->methods[callee.ref.index] : nullptr;
      }
      default: return nullptr;
    }
  }

  Type expr(Expr& e, Context& ctx) {
    switch (e.kind) {
      case ExprKind::IntLit: return set(e, Type::int_type());
      case ExprKind::BoolLit: return set(e, Type::bool_type());
      case ExprKind::NullLit: return set(e, Type::null_type());
      case ExprKind::Paren: return set(e, expr(*e.kids[0], ctx));
      case ExprKind::Id: return resolve_id(e, ctx);
      case ExprKind::Deref: {
        Type t = expr(*e.kids[0], ctx);
        if (t.is_error()) return set(e, t);
        if (!t.is_pointer()) {
          error(e.pos, "cannot dereference a value of type '" + t.str() + "'");
          return set(e, Type::error_type());
        }
        return set(e, t.pointee());
      }
      case ExprKind::AddrOf: {
        Type t = expr(*e.kids[0], ctx);
        if (t.is_error()) return set(e, t);
        if (!e.kids[0]->is_lvalue_form() || t.is_callable() || t.is_array()) {
          error(e.pos, "cannot take the address of '" + pretty(*e.kids[0]) + "'");
          return set(e, Type::error_type());
        }
        return set(e, t.pointer_to());
      }
      case ExprKind::Neg: {
        Type t = expr(*e.kids[0], ctx);
        if (!t.is_int() && !t.is_error()) error(e.pos, "operand of '-' must be int");
        return set(e, Type::int_type());
      }
      case ExprKind::Not: {
        Type t = expr(*e.kids[0], ctx);
        if (!t.is_bool() && !t.is_error()) error(e.pos, "operand of '!' must be bool");
        return set(e, Type::bool_type());
      }
      case ExprKind::Dot: {
        Type t = expr(*e.kids[0], ctx);
        if (t.is_error()) return set(e, t);
        if (!t.is_object()) {
          error(e.pos, "'.' applied to non-object of type '" + t.str() + "'");
          return set(e, Type::error_type());
        }
        return member(e, t, ctx);
      }
      case ExprKind::Arrow: {
        Type t = expr(*e.kids[0], ctx);
        if (t.is_error()) return set(e, t);
        if (!(t.is_pointer() && t.depth == 1 && t.base == Type::Base::Class)) {
          error(e.pos, "'->' applied to non-object-pointer of type '" + t.str() + "'");
          return set(e, Type::error_type());
        }
        return member(e, t.pointee(), ctx);
      }
      case ExprKind::ArrowStar:
      case ExprKind::DotStar:
        // Pointer-to-member forms are graphed but carry no runtime meaning.
        expr(*e.kids[0], ctx);
        expr(*e.kids[1], ctx);
        return set(e, Type::int_type());
      case ExprKind::Index: {
        Type t = expr(*e.kids[0], ctx);
        Type i = expr(*e.kids[1], ctx);
        if (!i.is_int() && !i.is_error()) error(e.kids[1]->pos, "array index must be int");
        if (t.is_error()) return set(e, t);
        if (t.is_array()) return set(e, t.element());
        if (t.is_pointer()) return set(e, t.pointee());
        error(e.pos, "subscript of non-array of type '" + t.str() + "'");
        return set(e, Type::error_type());
      }
      case ExprKind::Call: return call(e, ctx);
      case ExprKind::Binary: return binary(e, ctx);
    }
    return set(e, Type::error_type());
  }

  Type call(Expr& e, Context& ctx) {
    Expr& callee = *e.kids[0];
    Type ct = expr(callee, ctx);
    std::vector<Type> args;
    for (std::size_t i = 1; i < e.kids.size(); ++i) args.push_back(expr(*e.kids[i], ctx));
    if (ct.is_error()) return set(e, ct);
    if (ctx.constant_only) {
      error(e.pos, "initializer must not call functions");
      return set(e, Type::error_type());
    }
    const Function* f = ct.is_callable() ? callee_of(callee) : nullptr;
    if (!f) {
      error(e.pos, "'" + pretty(callee) + "' is not callable");
      return set(e, Type::error_type());
    }
    if (f->params.size() != args.size()) {
      error(e.pos, "'" + f->name + "' expects " + std::to_string(f->params.size()) +
                       " argument(s), got " + std::to_string(args.size()));
    } else {
      for (std::size_t i = 0; i < args.size(); ++i) {
        expect_assignable(f->params[i].type, args[i], e.kids[i + 1]->pos);
      }
    }
    return set(e, f->result);
  }

  Type binary(Expr& e, Context& ctx) {
    Type a = expr(*e.kids[0], ctx);
    Type b = expr(*e.kids[1], ctx);
    const std::string& op = e.text;
    if (a.is_error() || b.is_error()) {
      bool boolean = op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
                     op == ">=" || op == "&&" || op == "||";
      return set(e, boolean ? Type::bool_type() : Type::int_type());
    }
    auto decay0 = [](Type t) { return t.is_array() ? t.element().pointer_to() : t; };
    if (op == "+" || op == "-") {
      // Pointer arithmetic stays inside the pointed-to block.
      Type da = decay0(a);
      Type db = decay0(b);
      if (da.is_pointer() && db.is_int()) return set(e, da);
      if (op == "+" && da.is_int() && db.is_pointer()) return set(e, db);
    }
    if (op == "+" || op == "-" || op == "*" || op == "/" || op == "%") {
      if (!a.is_int() || !b.is_int()) error(e.pos, "operands of '" + op + "' must be int");
      return set(e, Type::int_type());
    }
    if (op == "<" || op == "<=" || op == ">" || op == ">=") {
      if (!a.is_int() || !b.is_int()) error(e.pos, "operands of '" + op + "' must be int");
      return set(e, Type::bool_type());
    }
    if (op == "&&" || op == "||") {
      if (!a.is_bool() || !b.is_bool()) error(e.pos, "operands of '" + op + "' must be bool");
      return set(e, Type::bool_type());
    }
    // == and !=
    auto decay = [](Type t) { return t.is_array() ? t.element().pointer_to() : t; };
    a = decay(a);
    b = decay(b);
    bool ok = (a == b && a.is_assignable()) || (a.is_pointer() && b.base == Type::Base::Null) ||
              (b.is_pointer() && a.base == Type::Base::Null);
    if (!ok) error(e.pos, "cannot compare '" + a.str() + "' with '" + b.str() + "'");
    return set(e, Type::bool_type());
  }

  Program& prog_;
  const CheckOptions& opts_;
  std::vector<Diagnostic> diags_;
  std::set<std::string> visible_globals_;
  bool all_globals_visible_ = false;
};

}  // namespace

std::vector<Diagnostic> check(Program& prog, const CheckOptions& opts) {
  return Checker(prog, opts).run();
}

Program compile(std::string_view source, const CheckOptions& opts) {
  Program p = parse_source(source);
  auto diags = check(p, opts);
  if (!diags.empty()) throw CompileError(std::move(diags));
  return p;
}

}  // namespace declc
