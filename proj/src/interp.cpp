#include "declc/interp.hpp"

#include "declc/fault.hpp"

namespace declc {

struct Interp::Env {
  CellId owner = kNullCell;
  std::string scope;
  std::string label;  // prefix for local cell names
  std::vector<CellId> slots;
};

namespace {

[[noreturn]] void fault(const SourcePos& pos, const std::string& msg, bool unresolvable = false) {
  throw RuntimeFault(msg, static_cast<int>(pos.line), static_cast<int>(pos.column), unresolvable);
}

const Expr& strip(const Expr& e) { return e.kind == ExprKind::Paren ? strip(*e.kids[0]) : e; }

}  // namespace

Interp::Interp(const Program& prog, Memory& mem, InterpHooks& hooks, InterpLimits limits)
    : prog_(prog), mem_(mem), hooks_(hooks), limits_(limits) {}

void Interp::step(const SourcePos& pos) {
  if (++steps_ > limits_.steps) fault(pos, "step limit exceeded");
}

void Interp::init_object(CellId header, const std::string& cls) {
  const ClassDecl* c = prog_.find_class(cls);
  if (!c) return;
  for (std::size_t i = 0; i < c->fields.size(); ++i) {
    const VarDecl& f = c->fields[i];
    CellId m = mem_.member(header, static_cast<int>(i));
    if (f.type.is_object()) {
      init_object(m, f.type.class_name);
    } else if (f.init) {
      mem_.set(m, eval(*f.init, kNullCell, ""));
    }
  }
}

void Interp::construct_object(CellId header, const std::string& cls) {
  const ClassDecl* c = prog_.find_class(cls);
  if (!c) return;
  for (std::size_t i = 0; i < c->fields.size(); ++i) {
    if (c->fields[i].type.is_object()) {
      construct_object(mem_.member(header, static_cast<int>(i)), c->fields[i].type.class_name);
    }
  }
  for (int k : c->constructs) {
    instances_.emplace_back(k, header);
    hooks_.instantiate_construct(k, header);
  }
}

void Interp::load() {
  globals_.assign(prog_.globals.size(), kNullCell);
  for (const TopItem& item : prog_.items) {
    if (item.kind == TopItem::Kind::Global) {
      const VarDecl& g = prog_.globals[static_cast<std::size_t>(item.index)];
      CellId cell = mem_.alloc_decl(g.name, g.type);
      globals_[static_cast<std::size_t>(item.index)] = cell;
      if (g.type.is_object()) {
        init_object(cell, g.type.class_name);
        construct_object(cell, g.type.class_name);
      } else if (g.init) {
        mem_.set(cell, eval(*g.init, kNullCell, ""));
      }
    } else if (item.kind == TopItem::Kind::Construct) {
      const Construct& c = prog_.constructs[static_cast<std::size_t>(item.index)];
      if (!c.scope.empty()) continue;
      instances_.emplace_back(c.ordinal, kNullCell);
      hooks_.instantiate_construct(c.ordinal, kNullCell);
    }
  }
}

Value Interp::run_main() {
  int idx = prog_.function_index("main");
  if (idx < 0) return 0;
  return invoke(prog_.functions[static_cast<std::size_t>(idx)], kNullCell, {});
}

void Interp::teardown() {
  for (auto it = instances_.rbegin(); it != instances_.rend(); ++it) {
    hooks_.teardown_construct(it->first, it->second);
  }
}

std::vector<CellId> Interp::bind(const Expr& lv, CellId owner, const std::string& scope) {
  const Expr& e = strip(lv);
  if (e.type.base == Type::Base::Function) return {};
  Env env{owner, scope, "", {}};
  CellId c = lvalue(e, env);
  if (e.type.is_array()) {
    std::vector<CellId> out;
    for (int k = 0; k < *e.type.array_size; ++k) out.push_back(c + k);
    return out;
  }
  return {c};
}

CellId Interp::locate(const Expr& lv, CellId owner, const std::string& scope) {
  Env env{owner, scope, "", {}};
  return lvalue(lv, env);
}

Value Interp::eval(const Expr& e, CellId owner, const std::string& scope) {
  Env env{owner, scope, "", {}};
  return value(e, env);
}

void Interp::run_assign(int construct, CellId owner) {
  const Construct& c = prog_.constructs.at(static_cast<std::size_t>(construct));
  Env env{owner, c.scope, "", {}};
  CellId cell = lvalue(*c.lhs, env);
  Value v = value(*c.rhs, env);
  hooks_.store(cell, v);
}

bool Interp::eval_guard(int construct, CellId owner) {
  const Construct& c = prog_.constructs.at(static_cast<std::size_t>(construct));
  return !c.guard || eval(*c.guard, owner, c.scope) != 0;
}

bool Interp::eval_cond(int construct, CellId owner) {
  const Construct& c = prog_.constructs.at(static_cast<std::size_t>(construct));
  return eval(*c.cond, owner, c.scope) != 0;
}

void Interp::run_body(int construct, CellId owner) {
  const Construct& c = prog_.constructs.at(static_cast<std::size_t>(construct));
  Env env{owner, c.scope, "construct" + std::to_string(construct),
          std::vector<CellId>(static_cast<std::size_t>(c.frame_size), kNullCell)};
  Value ret = 0;
  exec(*c.body, env, ret);
}

CellId Interp::lvalue(const Expr& e, Env& env) {
  switch (e.kind) {
    case ExprKind::Paren: return lvalue(*e.kids[0], env);
    case ExprKind::Id:
      switch (e.ref.kind) {
        case Ref::Kind::Global: {
          CellId c = globals_.at(static_cast<std::size_t>(e.ref.index));
          if (c == kNullCell) fault(e.pos, "'" + e.text + "' used before its declaration");
          return c;
        }
        case Ref::Kind::Local: return env.slots.at(static_cast<std::size_t>(e.ref.index));
        case Ref::Kind::Member:
          if (env.owner == kNullCell) fault(e.pos, "member '" + e.text + "' without an object");
          return mem_.member(env.owner, e.ref.index);
        case Ref::Kind::Method:
          if (env.owner == kNullCell) fault(e.pos, "method '" + e.text + "' without an object");
          return env.owner;
        default: fault(e.pos, "'" + e.text + "' does not denote storage");
      }
    case ExprKind::Deref: {
      Value p = value(*e.kids[0], env);
      if (p == kNullCell) fault(e.pos, "null pointer dereference", true);
      if (!mem_.valid(p)) fault(e.pos, "dangling pointer dereference", true);
      return p;
    }
    case ExprKind::Index: {
      const Expr& base = *e.kids[0];
      CellId first = base.type.is_array() ? lvalue(base, env) : value(base, env);
      Value k = value(*e.kids[1], env);
      if (first == kNullCell) fault(e.pos, "null pointer dereference", true);
      if (!mem_.valid(first)) fault(e.pos, "dangling pointer dereference", true);
      const CellInfo& info = mem_.cell(first);
      CellId target = first + k;
      if (target < info.block || target >= info.block + info.block_size) {
        fault(e.pos, "index " + std::to_string(k) + " out of bounds", true);
      }
      return target;
    }
    case ExprKind::Dot:
    case ExprKind::Arrow: {
      CellId h;
      if (e.kind == ExprKind::Dot) {
        h = lvalue(*e.kids[0], env);
      } else {
        h = value(*e.kids[0], env);
        if (h == kNullCell) fault(e.pos, "null pointer dereference", true);
        if (!mem_.valid(h)) fault(e.pos, "dangling pointer dereference", true);
      }
      if (e.ref.kind == Ref::Kind::Method) return h;
      return mem_.member(h, e.ref.index);
    }
    case ExprKind::ArrowStar:
    case ExprKind::DotStar: fault(e.pos, "unsupported construct: pointer to member");
    default: fault(e.pos, "expression does not denote storage");
  }
}

Value Interp::pointer_offset(Value p, Value k, const Expr& at) {
  if (p == kNullCell) fault(at.pos, "arithmetic on a null pointer", true);
  const CellInfo& info = mem_.cell(p);
  Value q = p + k;
  if (q < info.block || q >= info.block + info.block_size) {
    fault(at.pos, "pointer arithmetic out of bounds", true);
  }
  return q;
}

Value Interp::value(const Expr& e, Env& env) {
  switch (e.kind) {
    case ExprKind::IntLit: return std::stoll(e.text);
    case ExprKind::BoolLit: return e.text == "true" ? 1 : 0;
    case ExprKind::NullLit: return kNullCell;
    case ExprKind::Paren: return value(*e.kids[0], env);
    case ExprKind::AddrOf: return lvalue(*e.kids[0], env);
    case ExprKind::Neg: return -value(*e.kids[0], env);
    case ExprKind::Not: return value(*e.kids[0], env) ? 0 : 1;
    case ExprKind::Call: return call(e, env);
    case ExprKind::Id:
    case ExprKind::Deref:
    case ExprKind::Index:
    case ExprKind::Dot:
    case ExprKind::Arrow:
    case ExprKind::ArrowStar:
    case ExprKind::DotStar: {
      CellId c = lvalue(e, env);
      // Arrays decay to their first element; objects stand for their header.
      if (e.type.is_array() || e.type.is_object()) return c;
      return mem_.get(c);
    }
    case ExprKind::Binary: {
      const std::string& op = e.text;
      if (op == "&&") return value(*e.kids[0], env) && value(*e.kids[1], env) ? 1 : 0;
      if (op == "||") return value(*e.kids[0], env) || value(*e.kids[1], env) ? 1 : 0;
      Value a = value(*e.kids[0], env);
      Value b = value(*e.kids[1], env);
      if (e.type.is_pointer()) {
        if (op == "-") return pointer_offset(a, -b, e);
        return e.kids[0]->type.is_int() ? pointer_offset(b, a, e) : pointer_offset(a, b, e);
      }
      if (op == "+") return a + b;
      if (op == "-") return a - b;
      if (op == "*") return a * b;
      if (op == "/" || op == "%") {
        if (b == 0) fault(e.pos, "division by zero");
        return op == "/" ? a / b : a % b;
      }
      if (op == "<") return a < b;
      if (op == "<=") return a <= b;
      if (op == ">") return a > b;
      if (op == ">=") return a >= b;
      if (op == "==") return a == b;
      if (op == "!=") return a != b;
      fault(e.pos, "unknown operator '" + op + "'");
    }
  }
  fault(e.pos, "cannot evaluate expression");
}

Value Interp::call(const Expr& e, Env& env) {
  const Expr& callee = strip(*e.kids[0]);
  const Function* f = nullptr;
  CellId obj = kNullCell;
  if (callee.ref.kind == Ref::Kind::Function) {
    f = &prog_.functions.at(static_cast<std::size_t>(callee.ref.index));
  } else if (callee.ref.kind == Ref::Kind::Method) {
    const ClassDecl* c = prog_.find_class(callee.ref.class_name);
    if (!c) fault(e.pos, "unknown class '" + callee.ref.class_name + "'");
    f = &c->methods.at(static_cast<std::size_t>(callee.ref.index));
    obj = lvalue(callee, env);
  } else {
    fault(e.pos, "call of a non-function");
  }
  std::vector<Value> args;
  for (std::size_t i = 1; i < e.kids.size(); ++i) args.push_back(value(*e.kids[i], env));
  return invoke(*f, obj, args);
}

Value Interp::invoke(const Function& f, CellId obj, const std::vector<Value>& args) {
  step(f.pos);
  if (++depth_ > limits_.call_depth) fault(f.pos, "call depth limit exceeded");
  Env env{obj, f.owner_class, f.name,
          std::vector<CellId>(static_cast<std::size_t>(f.frame_size), kNullCell)};
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    CellId c = mem_.alloc_decl(f.name + "." + f.params[i].name, f.params[i].type);
    mem_.mark_local(c);
    mem_.set(c, args.at(i));
    env.slots.at(i) = c;
  }
  if (obj != kNullCell) hooks_.method_enter(obj);
  Value ret = 0;
  exec(*f.body, env, ret);
  if (obj != kNullCell) hooks_.method_exit(obj);
  --depth_;
  return ret;
}

Interp::Flow Interp::exec(const Stmt& s, Env& env, Value& ret) {
  step(s.pos);
  switch (s.kind) {
    case StmtKind::Block:
      for (const auto& st : s.body) {
        if (exec(*st, env, ret) == Flow::Return) return Flow::Return;
      }
      return Flow::Normal;
    case StmtKind::Decl: {
      CellId c = mem_.alloc_decl(env.label + "." + s.decl.name, s.decl.type);
      mem_.mark_local(c);
      env.slots.at(static_cast<std::size_t>(s.slot)) = c;
      if (s.decl.init) mem_.set(c, value(*s.decl.init, env));
      return Flow::Normal;
    }
    case StmtKind::Assign: {
      CellId c = lvalue(*s.lhs, env);
      Value v = value(*s.expr, env);
      hooks_.store(c, v);
      return Flow::Normal;
    }
    case StmtKind::If:
      if (value(*s.expr, env)) return exec(*s.body[0], env, ret);
      if (s.body.size() > 1) return exec(*s.body[1], env, ret);
      return Flow::Normal;
    case StmtKind::While:
      while (value(*s.expr, env)) {
        step(s.pos);
        if (exec(*s.body[0], env, ret) == Flow::Return) return Flow::Return;
      }
      return Flow::Normal;
    case StmtKind::Return:
      if (s.expr) ret = value(*s.expr, env);
      return Flow::Return;
    case StmtKind::ExprStmt: value(*s.expr, env); return Flow::Normal;
  }
  return Flow::Normal;
}

}  // namespace declc
