#include "declc/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "declc/fault.hpp"
#include "declc/lexer.hpp"

namespace declc::oracle {

namespace {

const Expr& strip(const Expr& e) { return e.kind == ExprKind::Paren ? strip(*e.kids[0]) : e; }

std::string text(const Expr& e, const std::string& scope) {
  auto k = [&](std::size_t i) { return text(*e.kids[i], scope); };
  switch (e.kind) {
    case ExprKind::Id:
      if (!scope.empty() && e.ref.class_name == scope &&
          (e.ref.kind == Ref::Kind::Member || e.ref.kind == Ref::Kind::Method)) {
        return "((" + scope + "*)owner)->" + e.text;
      }
      return e.text;
    case ExprKind::Deref: return "*" + k(0);
    case ExprKind::AddrOf: return "&" + k(0);
    case ExprKind::Neg: return "-" + k(0);
    case ExprKind::Not: return "!" + k(0);
    case ExprKind::Arrow: return k(0) + "->" + e.text;
    case ExprKind::Dot: return k(0) + "." + e.text;
    case ExprKind::ArrowStar: return k(0) + "->*" + k(1);
    case ExprKind::DotStar: return k(0) + ".*" + k(1);
    case ExprKind::Index: return k(0) + "[" + k(1) + "]";
    case ExprKind::Binary: return k(0) + e.text + k(1);
    case ExprKind::Paren: return "(" + k(0) + ")";
    case ExprKind::Call: {
      std::string s = k(0) + "(";
      for (std::size_t i = 1; i < e.kids.size(); ++i) s += (i > 1 ? "," : "") + k(i);
      return s + ")";
    }
    default: return e.text;
  }
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(s)) out.push_back(t.text);
  return out;
}

bool within(const std::string& a, const std::string& b) {
  if (a == b) return true;
  auto ta = tokens_of(a);
  auto tb = tokens_of(b);
  return std::search(tb.begin(), tb.end(), ta.begin(), ta.end()) != tb.end();
}

void outermost(const Expr& e, std::vector<const Expr*>& out) {
  if (e.is_lvalue_form()) {
    out.push_back(&e);
    return;
  }
  for (const auto& k : e.kids) outermost(*k, out);
}

std::vector<const Expr*> reduce(const std::vector<const Expr*>& all, const std::string& scope) {
  std::vector<std::string> texts;
  for (const Expr* e : all) texts.push_back(text(*e, scope));
  std::vector<const Expr*> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < all.size() && !drop; ++j) {
      if (i != j) drop = texts[i] == texts[j] ? j < i : within(texts[i], texts[j]);
    }
    if (!drop) out.push_back(all[i]);
  }
  return out;
}

bool capable(const Expr& lv) {
  const Expr& e = strip(lv);
  if (e.kind == ExprKind::ArrowStar || e.kind == ExprKind::DotStar) return false;
  if (e.type.base == Type::Base::Method) return true;
  if (e.type.base == Type::Base::Function) return false;
  return !e.type.is_array() && !e.type.is_object();
}

struct Info {
  const Construct* c = nullptr;
  std::vector<const Expr*> lvs;      // constraint right side / precondition
  std::vector<const Expr*> rebinders;  // capable nested l-values of a constraint
};

struct Instance {
  int construct = -1;
  CellId owner = kNullCell;
  bool live = true;
};

class Oracle : public InterpHooks {
 public:
  Oracle(const Program& prog, Trace& trace, const Options& opts)
      : prog_(prog), trace_(trace), opts_(opts), mem_(prog), interp_(prog, mem_, *this, opts.limits) {
    for (const Construct& c : prog.constructs) {
      Info info;
      info.c = &c;
      if (c.kind == ConstructKind::Constraint) {
        info.lvs = involved_lvalues(*c.rhs, c.scope);
        std::vector<const Expr*> sides = {c.lhs.get()};
        sides.insert(sides.end(), info.lvs.begin(), info.lvs.end());
        for (const Expr* s : sides) {
          for (const Expr* n : nested_lvalues(*s, c.scope)) {
            if (capable(*n)) info.rebinders.push_back(n);
          }
        }
      } else if (c.kind == ConstructKind::Precond) {
        info.lvs = involved_lvalues(*c.cond, c.scope);
      }
      info_.push_back(std::move(info));
    }
  }

  RunResult run() {
    RunResult r;
    try {
      interp_.load();
      r.exit_value = interp_.run_main();
      r.memory = mem_.snapshot();
      interp_.teardown();
    } catch (const RuntimeFault& f) {
      r.status = Status::Fault;
      r.fault = f.located();
      r.memory = mem_.snapshot();
    } catch (const std::exception& ex) {
      r.status = Status::Fault;
      r.fault = ex.what();
      r.memory = mem_.snapshot();
    }
    return r;
  }

  void store(CellId cell, Value v) override {
    if (++depth_ > opts_.store_depth) {
      --depth_;
      throw RuntimeFault("store nesting limit exceeded at '" + mem_.cell(cell).name + "'");
    }
    CellId parent = mem_.cell(cell).object;
    if (parent != kNullCell && headers_[parent].n == 0) {
      suspended(parent, [&] { raw_store(cell, v); });
    } else {
      raw_store(cell, v);
    }
    --depth_;
  }

  void method_enter(CellId obj) override {
    auto chain = mem_.object_chain(obj);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) suspend(*it);
  }

  void method_exit(CellId obj) override {
    for (CellId o : mem_.object_chain(obj)) resume(o);
  }

  void instantiate_construct(int construct, CellId owner) override {
    instances_.push_back({construct, owner, true});
    if (prog_.constructs[static_cast<std::size_t>(construct)].kind == ConstructKind::Constraint) {
      apply_checked(instances_.size() - 1);
    }
  }

  void teardown_construct(int construct, CellId owner) override {
    for (auto& i : instances_) {
      if (i.construct == construct && i.owner == owner) i.live = false;
    }
  }

 private:
  struct Header {
    int n = 0;
    bool updated = false;
    std::vector<std::size_t> pending;
  };

  const Info& info(std::size_t inst) const {
    return info_[static_cast<std::size_t>(instances_[inst].construct)];
  }

  std::vector<CellId> binds(const Expr& lv, std::size_t inst) {
    try {
      return interp_.bind(lv, instances_[inst].owner, info(inst).c->scope);
    } catch (const RuntimeFault& f) {
      if (!f.unresolvable()) throw;
      return {};
    }
  }

  bool binds_cell(const Expr& lv, std::size_t inst, CellId cell) {
    auto cells = binds(lv, inst);
    return std::find(cells.begin(), cells.end(), cell) != cells.end();
  }

  bool any_binds(const std::vector<const Expr*>& lvs, std::size_t inst, CellId cell) {
    for (const Expr* e : lvs) {
      if (binds_cell(*e, inst, cell)) return true;
    }
    return false;
  }

  std::string describe(std::size_t inst) {
    const Instance& i = instances_[inst];
    return "construct=" + std::to_string(i.construct) +
           " owner=" + (i.owner == kNullCell ? std::string("-") : mem_.cell(i.owner).name);
  }

  template <class F>
  void suspended(CellId owner, F&& body) {
    if (owner == kNullCell) {
      body();
      return;
    }
    auto chain = mem_.object_chain(owner);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) suspend(*it);
    body();
    for (CellId o : chain) resume(o);
  }

  void suspend(CellId obj) {
    Header& h = headers_[obj];
    ++h.n;
    trace_.emit(EventKind::Suspend, mem_.cell(obj).name, obj, "n=" + std::to_string(h.n));
  }

  void resume(CellId obj) {
    Header& h = headers_[obj];
    if (h.n == 0) throw RuntimeFault("resume of '" + mem_.cell(obj).name + "' without suspend");
    --h.n;
    trace_.emit(EventKind::Resume, mem_.cell(obj).name, obj, "n=" + std::to_string(h.n));
    if (h.n == 0 && h.updated) {
      h.updated = false;
      std::vector<std::size_t> pending = std::move(h.pending);
      trace_.emit(EventKind::AfterChange, mem_.cell(obj).name, obj, "");
      after(obj, pending);
    }
  }

  void set_updated(CellId obj) {
    Header& h = headers_[obj];
    if (h.updated) return;
    h.updated = true;
    trace_.emit(EventKind::BeforeChange, mem_.cell(obj).name, obj, "");
    headers_[obj].pending = rebound_by(obj);
    CellId parent = mem_.cell(obj).object;
    if (parent != kNullCell) set_updated(parent);
  }

  /// Constraint instances one of whose l-values is rebound by a write to
  /// `cell`, judged on the current (pre-write) state.
  std::vector<std::size_t> rebound_by(CellId cell) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      if (instances_[i].live && any_binds(info(i).rebinders, i, cell)) out.push_back(i);
    }
    return out;
  }

  void raw_store(CellId cell, Value v) {
    trace_.emit(EventKind::BeforeChange, mem_.cell(cell).name, cell, "old=" + mem_.format(cell));
    std::vector<std::size_t> rebound = rebound_by(cell);
    CellId parent = mem_.cell(cell).object;
    if (parent != kNullCell) set_updated(parent);
    mem_.set(cell, v);
    trace_.emit(EventKind::AfterChange, mem_.cell(cell).name, cell, "new=" + mem_.format(cell));
    after(cell, rebound);
  }

  void after(CellId cell, const std::vector<std::size_t>& rebound) {
    for (std::size_t i : rebound) apply_checked(i);

    std::size_t top = instances_.size();
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      const Construct& c = *info(i).c;
      if (instances_[i].live && c.kind == ConstructKind::Monitor && binds_cell(*c.lhs, i, cell)) {
        top = i;
      }
    }
    if (top < instances_.size() && !disabled_.count(cell)) {
      disabled_.insert(cell);
      trace_.emit(EventKind::MonitorFired, mem_.cell(cell).name, cell, describe(top));
      suspended(instances_[top].owner,
                [&] { interp_.run_body(instances_[top].construct, instances_[top].owner); });
      disabled_.erase(cell);
    }

    std::vector<std::size_t> triggered;
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      if (instances_[i].live && info(i).c->kind == ConstructKind::Constraint &&
          any_binds(info(i).lvs, i, cell)) {
        triggered.push_back(i);
      }
    }
    for (std::size_t i : triggered) {
      if (any_binds(info(i).lvs, i, cell)) apply_checked(i);
    }

    std::vector<std::size_t> testers;
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      if (instances_[i].live && info(i).c->kind == ConstructKind::Precond &&
          any_binds(info(i).lvs, i, cell)) {
        testers.push_back(i);
      }
    }
    for (std::size_t i : testers) {
      if (!any_binds(info(i).lvs, i, cell)) continue;
      const Instance inst = instances_[i];
      suspended(inst.owner, [&] {
        bool r = interp_.eval_cond(inst.construct, inst.owner);
        trace_.emit(EventKind::PrecondEval, mem_.cell(cell).name, cell,
                    describe(i) + (r ? " result=true" : " result=false"));
        if (r) interp_.run_body(inst.construct, inst.owner);
      });
    }
  }

  void apply_checked(std::size_t inst) {
    if (in_flight_.count(inst)) {
      trace_.emit(EventKind::Warning, "", -1, "constraint already resolving; skipped");
      return;
    }
    const Construct& c = *info(inst).c;
    auto homes = binds(*c.lhs, inst);
    if (homes.empty()) return;
    CellId home = homes.front();
    std::size_t top = instances_.size();
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      if (instances_[i].live && info(i).c->kind == ConstructKind::Constraint &&
          binds_cell(*info(i).c->lhs, i, home)) {
        top = i;
      }
    }
    if (top != inst) return;
    const Instance i = instances_[inst];
    if (c.guard) {
      bool r = interp_.eval_guard(i.construct, i.owner);
      trace_.emit(EventKind::GuardEval, mem_.cell(home).name, home,
                  describe(inst) + (r ? " result=true" : " result=false"));
      if (!r) return;
    }
    in_flight_.insert(inst);
    trace_.emit(EventKind::ConstraintApplied, mem_.cell(home).name, home, describe(inst));
    try {
      suspended(i.owner, [&] { interp_.run_assign(i.construct, i.owner); });
    } catch (...) {
      in_flight_.erase(inst);
      throw;
    }
    in_flight_.erase(inst);
  }

  const Program& prog_;
  Trace& trace_;
  Options opts_;
  Memory mem_;
  Interp interp_;
  std::vector<Info> info_;
  std::vector<Instance> instances_;
  std::map<CellId, Header> headers_;
  std::set<CellId> disabled_;
  std::set<std::size_t> in_flight_;
  int depth_ = 0;
};

void nested_into(const Expr& lv, const std::string& scope, std::vector<const Expr*>& out) {
  const Expr& e = strip(lv);
  std::vector<const Expr*> direct;
  switch (e.kind) {
    case ExprKind::Deref:
    case ExprKind::Arrow:
    case ExprKind::Dot: outermost(*e.kids[0], direct); break;
    case ExprKind::Index:
    case ExprKind::ArrowStar:
    case ExprKind::DotStar:
      outermost(*e.kids[0], direct);
      outermost(*e.kids[1], direct);
      break;
    default: break;
  }
  for (const Expr* d : reduce(direct, scope)) {
    out.push_back(d);
    nested_into(*d, scope, out);
  }
}

}  // namespace

std::vector<const Expr*> involved_lvalues(const Expr& e, const std::string& scope) {
  std::vector<const Expr*> all;
  outermost(e, all);
  return reduce(all, scope);
}

std::vector<const Expr*> nested_lvalues(const Expr& lv, const std::string& scope) {
  std::vector<const Expr*> out;
  nested_into(lv, scope, out);
  return out;
}

RunResult oracle_run(const Program& prog, Trace& trace, const Options& opts) {
  return Oracle(prog, trace, opts).run();
}

}  // namespace declc::oracle
