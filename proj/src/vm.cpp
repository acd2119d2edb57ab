#include "declc/vm.hpp"

#include "declc/fault.hpp"
#include "declc/lvgraph.hpp"

namespace declc::vm {

using codegen::FnKind;
using codegen::InstrKind;
using runtime::Entry;
using runtime::ListKind;

Machine::Machine(const Program& prog, const codegen::GenUnit& unit, Trace& trace, Options opts)
    : prog_(prog),
      unit_(unit),
      trace_(trace),
      opts_(opts),
      mem_(prog),
      interp_(prog, mem_, *this, opts.limits),
      rt_(*this, trace) {}

void Machine::load() { interp_.load(); }

Value Machine::run() { return interp_.run_main(); }

void Machine::teardown() { interp_.teardown(); }

CellId Machine::global(const std::string& name) const {
  int idx = prog_.global_index(name);
  if (idx < 0) throw RuntimeFault("no global named '" + name + "'");
  return interp_.global_cell(idx);
}

std::string Machine::cell_name(CellId cell) { return mem_.valid(cell) ? mem_.cell(cell).name : "?"; }

CellId Machine::parent_object(CellId cell) { return mem_.cell(cell).object; }

Entry Machine::entry(int fn, CellId owner) const {
  int k = unit_.fn(fn).construct;
  auto it = stamps_.find({k, owner});
  return Entry{fn, owner, it == stamps_.end() ? 0 : it->second};
}

std::string Machine::describe(int construct, CellId owner) {
  return "construct=" + std::to_string(construct) +
         " owner=" + (owner == kNullCell ? std::string("-") : cell_name(owner));
}

template <class F>
void Machine::suspended(CellId owner, F&& body) {
  if (owner == kNullCell) {
    body();
    return;
  }
  std::vector<CellId> chain = mem_.object_chain(owner);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) rt_.suspend(*it);
  body();
  for (CellId o : chain) rt_.resume(o);
}

void Machine::store(CellId cell, Value v) {
  if (++store_depth_ > opts_.store_depth) {
    --store_depth_;
    throw RuntimeFault("store nesting limit exceeded at '" + cell_name(cell) + "'");
  }
  CellId parent = mem_.cell(cell).object;
  if (parent != kNullCell && rt_.suspend_count(parent) == 0) {
    suspended(parent, [&] { raw_store(cell, v); });
  } else {
    raw_store(cell, v);
  }
  --store_depth_;
}

void Machine::raw_store(CellId cell, Value v) {
  trace_.emit(EventKind::BeforeChange, cell_name(cell), cell, "old=" + mem_.format(cell));
  rt_.before_change(cell);
  mem_.set(cell, v);
  trace_.emit(EventKind::AfterChange, cell_name(cell), cell, "new=" + mem_.format(cell));
  rt_.after_change(cell);
}

void Machine::method_enter(CellId obj) {
  std::vector<CellId> chain = mem_.object_chain(obj);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) rt_.suspend(*it);
}

void Machine::method_exit(CellId obj) {
  for (CellId o : mem_.object_chain(obj)) rt_.resume(o);
}

void Machine::install(int construct, CellId owner, bool b) {
  rt_.begin_wave();
  int init = unit_.constructs.at(static_cast<std::size_t>(construct)).init;
  if (rt_.enter_call(init, owner, b)) exec_gen(init, owner, b);
  rt_.end_wave();
}

void Machine::instantiate_construct(int construct, CellId owner) {
  stamps_[{construct, owner}] = ++next_stamp_;
  install(construct, owner, true);
}

void Machine::teardown_construct(int construct, CellId owner) { install(construct, owner, false); }

void Machine::exec_gen(int fn, CellId owner, bool b) {
  const codegen::GenFunction& f = unit_.fn(fn);
  for (const codegen::GenInstr& i : f.body) {
    switch (i.kind) {
      case InstrKind::CallGen:
        if (rt_.enter_call(i.fn, owner, b)) exec_gen(i.fn, owner, b);
        break;
      case InstrKind::ApplyOnInstall:
        if (b) rt_.queue_apply(entry(i.fn, owner));
        break;
      case InstrKind::RegRedefinition:
      case InstrKind::RegConstraint:
      case InstrKind::RegDependency:
      case InstrKind::RegMonitor:
      case InstrKind::RegPrecondition: {
        std::vector<CellId> cells;
        try {
          cells = interp_.bind(*i.lv, owner, f.scope);
        } catch (const RuntimeFault& fault) {
          if (!fault.unresolvable()) throw;
          // An unbindable l-value stays dormant until a redefinition retries it.
          if (b) {
            trace_.emit(EventKind::Dormant, i.lv_str, -1, fault.what());
            trace_.emit(EventKind::Warning, i.lv_str, -1, "dormant involvement in " + f.name);
          }
          break;
        }
        Entry e = entry(i.fn, owner);
        const char* what = "dependency";
        for (CellId c : cells) {
          switch (i.kind) {
            case InstrKind::RegRedefinition:
              rt_.handle(ListKind::Redefinition, c, e, b);
              what = "redefinition";
              break;
            case InstrKind::RegConstraint:
              rt_.handle(ListKind::Constraint, c, e, b);
              what = "constraint";
              break;
            case InstrKind::RegMonitor:
              rt_.handle(ListKind::Monitor, c, e, b);
              what = "monitor";
              break;
            case InstrKind::RegPrecondition:
              rt_.handle(ListKind::Precondition, c, e, b);
              what = "precondition";
              break;
            default: rt_.handle_dependency(c, e, b); break;
          }
          trace_.emit(b ? EventKind::Install : EventKind::Cancel, cell_name(c), c,
                      std::string(what) + " " + unit_.fn(i.fn).name + " lv=" + i.lv_str + " " +
                          describe(f.construct, owner));
        }
        break;
      }
      default: throw RuntimeFault("generated function " + f.name + " is not installable");
    }
  }
}

void Machine::redefine(const Entry& e, bool b) { exec_gen(e.fn, e.owner, b); }

bool Machine::guard(const Entry& e, CellId home) {
  const codegen::GenFunction& a = unit_.fn(e.fn);
  if (a.guard < 0) return true;
  bool r = interp_.eval_guard(a.construct, e.owner);
  trace_.emit(EventKind::GuardEval, cell_name(home), home,
              describe(a.construct, e.owner) + (r ? " result=true" : " result=false"));
  return r;
}

void Machine::apply(const Entry& e, CellId home) {
  int k = unit_.fn(e.fn).construct;
  trace_.emit(EventKind::ConstraintApplied, cell_name(home), home, describe(k, e.owner));
  suspended(e.owner, [&] { interp_.run_assign(k, e.owner); });
}

void Machine::monitor(const Entry& e, CellId cell) {
  int k = unit_.fn(e.fn).construct;
  trace_.emit(EventKind::MonitorFired, cell_name(cell), cell, describe(k, e.owner));
  suspended(e.owner, [&] { interp_.run_body(k, e.owner); });
}

void Machine::precondition(const Entry& e, CellId cell) {
  int k = unit_.fn(e.fn).construct;
  suspended(e.owner, [&] {
    bool r = interp_.eval_cond(k, e.owner);
    trace_.emit(EventKind::PrecondEval, cell_name(cell), cell,
                describe(k, e.owner) + (r ? " result=true" : " result=false"));
    if (r) interp_.run_body(k, e.owner);
  });
}

RunResult run_program(const Program& prog, Trace& trace, const RunOptions& opts) {
  lvgraph::RedefGraph graph = lvgraph::build_graph(prog);
  codegen::GenUnit unit = codegen::generate(prog, graph);
  Machine m(prog, unit, trace, opts.machine);
  RunResult result;
  try {
    m.load();
    result.exit_value = m.run();
    result.memory = m.memory().snapshot();
    if (opts.teardown) {
      m.teardown();
      result.registrations_after_teardown = m.runtime().registration_count();
    }
  } catch (const RuntimeFault& f) {
    result.status = Status::Fault;
    result.fault = f.located();
    result.memory = m.memory().snapshot();
  } catch (const std::exception& ex) {
    result.status = Status::Fault;
    result.fault = ex.what();
    result.memory = m.memory().snapshot();
  }
  return result;
}

}  // namespace declc::vm
