#include "declc/codegen.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "declc/printer.hpp"

namespace declc::codegen {

namespace {

using lvgraph::NodeId;
using lvgraph::RedefGraph;

std::string op_word(const std::string& op) {
  static const std::map<std::string, std::string> words = {
      {"+", "plus"}, {"-", "minus"}, {"*", "times"}, {"/", "div"},   {"%", "mod"},
      {"<", "lt"},   {"<=", "le"},   {">", "gt"},    {">=", "ge"},   {"==", "eq"},
      {"!=", "ne"},  {"&&", "and"},  {"||", "or"},
  };
  auto it = words.find(op);
  return it == words.end() ? "op" : it->second;
}

std::string mangle_inner(const Expr& e, const std::string& scope) {
  auto k = [&](std::size_t i) { return mangle_inner(*e.kids[i], scope); };
  switch (e.kind) {
    case ExprKind::IntLit: return e.text;
    case ExprKind::BoolLit:
    case ExprKind::NullLit: return e.text;
    case ExprKind::Id:
      if (!scope.empty() && (e.ref.kind == Ref::Kind::Member || e.ref.kind == Ref::Kind::Method) &&
          e.ref.class_name == scope) {
        return "own_" + scope + "_mem_" + e.text;
      }
      return e.text;
    case ExprKind::Deref: return "ptr_" + k(0);
    case ExprKind::AddrOf: return "addr_" + k(0);
    case ExprKind::Neg: return "neg_" + k(0);
    case ExprKind::Not: return "not_" + k(0);
    case ExprKind::Arrow: return k(0) + "_arrow_" + e.text;
    case ExprKind::Dot: return k(0) + "_mem_" + e.text;
    case ExprKind::ArrowStar: return k(0) + "_arrowstar_" + k(1);
    case ExprKind::DotStar: return k(0) + "_dotstar_" + k(1);
    case ExprKind::Index: return k(0) + "_arr_" + k(1);
    case ExprKind::Call: {
      std::string s = k(0) + "_call";
      for (std::size_t i = 1; i < e.kids.size(); ++i) s += "_" + k(i);
      return s;
    }
    case ExprKind::Binary: return k(0) + "_" + op_word(e.text) + "_" + k(1);
    case ExprKind::Paren: return k(0);
  }
  return "x";
}

const Expr& strip_parens(const Expr& e) {
  return e.kind == ExprKind::Paren ? strip_parens(*e.kids[0]) : e;
}

class Generator {
 public:
  Generator(const Program& prog, const RedefGraph& g) : prog_(prog), g_(g) {
    unit_.program = &prog;
  }

  GenUnit run() {
    unit_.constructs.resize(prog_.constructs.size());
    for (const Construct& c : prog_.constructs) emit_construct(c);

    GenFunction top;
    top.name = unique("init_unit");
    top.kind = FnKind::UnitInit;
    for (const Construct& c : prog_.constructs) {
      if (c.scope.empty()) top.body.push_back(call(unit_.constructs[c.ordinal].init));
    }
    unit_.unit_init = add(std::move(top));

    for (const ClassDecl& cls : prog_.classes) emit_class(cls);
    return std::move(unit_);
  }

 private:
  int add(GenFunction f) {
    unit_.functions.push_back(std::move(f));
    return static_cast<int>(unit_.functions.size()) - 1;
  }

  std::string unique(const std::string& base) {
    if (used_.insert(base).second) return base;
    for (int k = 1;; ++k) {
      std::string s = base + "_" + std::to_string(k);
      if (used_.insert(s).second) return s;
    }
  }

  static GenInstr call(int fn) {
    GenInstr i;
    i.kind = InstrKind::CallGen;
    i.fn = fn;
    return i;
  }

  GenInstr reg(InstrKind kind, NodeId n, int fn) const {
    GenInstr i;
    i.kind = kind;
    i.lv = g_.node(n).expr;
    i.lv_str = g_.node(n).str;
    i.fn = fn;
    return i;
  }

  void emit_construct(const Construct& c) {
    const lvgraph::ConstructLvs& lvs = g_.construct(c.ordinal);
    GenConstruct& gc = unit_.constructs[c.ordinal];
    std::string k = std::to_string(c.ordinal);

    GenFunction action;
    action.construct = c.ordinal;
    action.scope = c.scope;
    action.frame_size = c.frame_size;
    GenInstr body;
    switch (c.kind) {
      case ConstructKind::Constraint:
        action.name = unique("assign_" + k);
        action.kind = FnKind::Assign;
        body.kind = InstrKind::EmbedAssign;
        body.lv = c.lhs.get();
        body.lv_str = g_.node(lvs.lhs).str;
        body.expr = c.rhs.get();
        break;
      case ConstructKind::Monitor:
        action.name = unique("monitor_" + k);
        action.kind = FnKind::MonitorBody;
        body.kind = InstrKind::EmbedStmt;
        body.stmt = c.body.get();
        break;
      case ConstructKind::Precond:
        action.name = unique("tester_" + k);
        action.kind = FnKind::PrecondTester;
        body.kind = InstrKind::EmbedStmt;
        body.stmt = c.body.get();
        body.expr = c.cond.get();
        break;
    }
    action.body.push_back(body);
    gc.action = add(std::move(action));
    gc.functions.push_back(gc.action);

    if (c.guard) {
      GenFunction guard;
      guard.name = unique("guard_" + k);
      guard.kind = FnKind::GuardTester;
      guard.construct = c.ordinal;
      guard.scope = c.scope;
      GenInstr e;
      e.kind = InstrKind::EmbedExpr;
      e.expr = c.guard.get();
      guard.body.push_back(e);
      gc.guard = add(std::move(guard));
      gc.functions.push_back(gc.guard);
      unit_.functions[gc.action].guard = gc.guard;
    }

    // Restrict the shared per-scope graph to this construct's l-values.
    std::set<NodeId> mine(lvs.nodes.begin(), lvs.nodes.end());
    auto kdeps = [&](NodeId n) {
      std::vector<NodeId> out;
      for (NodeId d : g_.node(n).dependents) {
        if (mine.count(d)) out.push_back(d);
      }
      return out;
    };
    std::map<NodeId, bool> upstream_capable;
    std::function<bool(NodeId)> any_capable = [&](NodeId n) {
      auto it = upstream_capable.find(n);
      if (it != upstream_capable.end()) return it->second;
      bool v = capable(*g_.node(n).expr);
      for (NodeId r : g_.node(n).redef) v = any_capable(r) || v;
      upstream_capable[n] = v;
      return v;
    };
    auto needs_redef = [&](NodeId n) { return !kdeps(n).empty() && any_capable(n); };
    auto role = [&](NodeId n) {
      return n == lvs.lhs || std::count(lvs.rhs_lvs.begin(), lvs.rhs_lvs.end(), n) ||
             std::count(lvs.cond_lvs.begin(), lvs.cond_lvs.end(), n);
    };
    auto needs_init = [&](NodeId n) {
      if (storage_of(*g_.node(n).expr) == Storage::Function) return false;
      if (role(n) || needs_redef(n)) return true;
      for (NodeId r : g_.node(n).redef) {
        if (mine.count(r) && needs_redef(r)) return true;
      }
      return false;
    };

    std::map<NodeId, int> init_fn;
    std::map<NodeId, int> redef_fn;
    for (NodeId n : lvs.nodes) {
      std::string m = mangle(*g_.node(n).expr, c.scope);
      if (needs_init(n)) {
        GenFunction f;
        f.name = unique("init_" + m);
        f.kind = FnKind::Init;
        f.construct = c.ordinal;
        f.scope = c.scope;
        init_fn[n] = add(std::move(f));
        gc.functions.push_back(init_fn[n]);
      }
    }
    for (NodeId n : lvs.nodes) {
      if (needs_redef(n)) {
        GenFunction f;
        f.name = unique("redef_" + std::string(mangle(*g_.node(n).expr, c.scope)));
        f.kind = FnKind::Redef;
        f.construct = c.ordinal;
        f.scope = c.scope;
        redef_fn[n] = add(std::move(f));
        gc.functions.push_back(redef_fn[n]);
      }
    }

    for (auto [n, fi] : init_fn) {
      std::vector<GenInstr> body;
      if (redef_fn.count(n) && capable(*g_.node(n).expr)) {
        body.push_back(reg(InstrKind::RegRedefinition, n, redef_fn[n]));
      }
      bool apply = false;
      if (n == lvs.lhs) {
        if (c.kind == ConstructKind::Constraint) {
          body.push_back(reg(InstrKind::RegConstraint, n, gc.action));
          apply = true;
        } else {
          body.push_back(reg(InstrKind::RegMonitor, n, gc.action));
        }
      }
      if (std::count(lvs.rhs_lvs.begin(), lvs.rhs_lvs.end(), n)) {
        GenInstr d = reg(InstrKind::RegDependency, n, gc.action);
        d.target_str = g_.node(lvs.lhs).str;
        body.push_back(d);
        apply = true;
      }
      if (std::count(lvs.cond_lvs.begin(), lvs.cond_lvs.end(), n)) {
        body.push_back(reg(InstrKind::RegPrecondition, n, gc.action));
      }
      if (apply) {
        GenInstr a;
        a.kind = InstrKind::ApplyOnInstall;
        a.fn = gc.action;
        body.push_back(a);
      }
      unit_.functions[fi].body = std::move(body);
    }

    for (auto [n, fi] : redef_fn) {
      std::vector<GenInstr> body;
      for (NodeId d : kdeps(n)) {
        if (init_fn.count(d)) body.push_back(call(init_fn.at(d)));
        if (redef_fn.count(d)) body.push_back(call(redef_fn.at(d)));
      }
      unit_.functions[fi].body = std::move(body);
    }

    GenFunction init;
    init.name = unique("init_" + k);
    init.kind = FnKind::UnitInit;
    init.construct = c.ordinal;
    init.scope = c.scope;
    for (NodeId n : lvs.nodes) {
      if (init_fn.count(n)) init.body.push_back(call(init_fn[n]));
    }
    gc.init = add(std::move(init));
    gc.functions.push_back(gc.init);
  }

  void emit_class(const ClassDecl& cls) {
    GenClass gc;
    gc.name = cls.name;

    GenFunction update;
    update.name = unique("update_" + cls.name);
    update.kind = FnKind::ObjectUpdate;
    update.scope = cls.name;
    GenInstr s;
    s.kind = InstrKind::SetUpdated;
    update.body.push_back(s);
    gc.update = add(std::move(update));

    GenFunction init;
    init.name = unique("init_" + cls.name);
    init.kind = FnKind::UnitInit;
    init.scope = cls.name;
    for (int k : cls.constructs) init.body.push_back(call(unit_.constructs[k].init));
    gc.init = add(std::move(init));

    for (const auto& f : cls.fields) gc.monitored.push_back(f.name);
    for (const auto& m : cls.methods) gc.wrapped.push_back(m.name);
    unit_.classes.push_back(std::move(gc));
  }

  const Program& prog_;
  const RedefGraph& g_;
  GenUnit unit_;
  std::set<std::string> used_;
};

std::string prototype(const GenFunction& f) {
  switch (f.kind) {
    case FnKind::Init:
    case FnKind::Redef:
    case FnKind::UnitInit: return "void " + f.name + "(void* owner, bool b)";
    case FnKind::GuardTester: return "bool " + f.name + "(void* owner)";
    case FnKind::ObjectUpdate: return "static void " + f.name + "(void* owner)";
    default: return "void " + f.name + "(void* owner)";
  }
}

std::string subject(const std::string& lv) {
  bool plain = std::all_of(lv.begin(), lv.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  });
  return plain ? lv : "(" + lv + ")";
}

std::string indent_block(const std::string& text, const std::string& pad) {
  std::istringstream in(text);
  std::string line;
  std::string out;
  while (std::getline(in, line)) out += pad + line + "\n";
  return out;
}

}  // namespace

int GenUnit::find(const std::string& name) const {
  for (std::size_t i = 0; i < functions.size(); ++i) {
    if (functions[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::string mangle(const Expr& lv, const std::string& scope) {
  const Expr& e = strip_parens(lv);
  if (e.kind == ExprKind::Id) {
    if (!scope.empty() && (e.ref.kind == Ref::Kind::Member || e.ref.kind == Ref::Kind::Method) &&
        e.ref.class_name == scope) {
      return "own_" + scope + "_mem_" + e.text;
    }
    return "sim_" + e.text;
  }
  return mangle_inner(e, scope);
}

Storage storage_of(const Expr& lv) {
  const Expr& e = strip_parens(lv);
  if (e.kind == ExprKind::ArrowStar || e.kind == ExprKind::DotStar) return Storage::Unsupported;
  const Type& t = e.type;
  if (t.base == Type::Base::Function) return Storage::Function;
  if (t.base == Type::Base::Method) return Storage::Method;
  if (t.is_array()) return Storage::Array;
  if (t.is_object()) return Storage::Object;
  if (t.is_pointer()) return Storage::Pointer;
  return Storage::Scalar;
}

bool capable(const Expr& lv) {
  switch (storage_of(lv)) {
    case Storage::Scalar:
    case Storage::Pointer:
    case Storage::Method: return true;
    default: return false;
  }
}

GenUnit generate(const Program& prog, const lvgraph::RedefGraph& graph) {
  return Generator(prog, graph).run();
}

std::string render_function(const GenUnit& unit, const GenFunction& f) {
  bool class_scope = !f.scope.empty();
  std::string out = prototype(f) + " {\n";
  for (const GenInstr& i : f.body) {
    std::string fn = i.fn >= 0 ? unit.fn(i.fn).name : "";
    switch (i.kind) {
      case InstrKind::RegRedefinition:
        out += "  " + subject(i.lv_str) + ".HandleRedefinition(" + fn + ", b);\n";
        break;
      case InstrKind::RegConstraint:
        out += "  " + subject(i.lv_str) + ".HandleConstraint(" + fn + ", b);\n";
        break;
      case InstrKind::RegDependency:
        out += "  " + subject(i.target_str) + ".HandleDependency(&" + i.lv_str + ", b);\n";
        break;
      case InstrKind::RegMonitor:
        out += "  " + subject(i.lv_str) + ".HandleMonitor(" + fn + ", b);\n";
        break;
      case InstrKind::RegPrecondition:
        out += "  " + subject(i.lv_str) + ".HandlePrecondition(" + fn + ", b);\n";
        break;
      case InstrKind::CallGen: out += "  " + fn + "(owner, b);\n"; break;
      case InstrKind::ApplyOnInstall:
        out += "  if (b) " + fn + (class_scope ? "(owner);\n" : "();\n");
        break;
      case InstrKind::EmbedAssign:
        out += "  " + i.lv_str + " = " + lvgraph::canonical_str(*i.expr, f.scope) + ";\n";
        break;
      case InstrKind::EmbedExpr: out += "  return " + pretty(*i.expr) + ";\n"; break;
      case InstrKind::EmbedStmt:
        if (i.expr) {
          out += "  if (" + pretty(*i.expr) + ")\n";
          out += indent_block(pretty(*i.stmt, 0), "    ");
        } else {
          out += indent_block(pretty(*i.stmt, 0), "  ");
        }
        break;
      case InstrKind::SetUpdated: out += "  ((" + f.scope + "*)owner)->SetUpdated();\n"; break;
    }
  }
  return out + "}\n";
}

std::string render(const GenUnit& unit) {
  std::string out = "// declc lowered unit\n";
  for (const GenConstruct& c : unit.constructs) {
    out += "\n";
    for (int f : c.functions) out += render_function(unit, unit.fn(f));
  }
  out += "\n" + render_function(unit, unit.fn(unit.unit_init));
  for (const GenClass& c : unit.classes) {
    const std::string& a = c.name;
    out += "\n" + render_function(unit, unit.fn(c.update));
    out += render_function(unit, unit.fn(c.init));
    out += a + "::" + a + "() {\n";
    for (const auto& m : c.monitored) {
      out += "  " + m + ".HandleMonitor(" + unit.fn(c.update).name + ", this, true);\n";
    }
    out += "  " + unit.fn(c.init).name + "(this, true);\n}\n";
    out += a + "::~" + a + "() { " + unit.fn(c.init).name + "(this, false); }\n";
    for (const auto& m : c.wrapped) {
      out += a + "::" + m + "(...) { Suspend(); E tmp(this); ... }\n";
    }
  }
  return out;
}

}  // namespace declc::codegen
