#include "declc/runtime.hpp"

#include <algorithm>

#include "declc/fault.hpp"

namespace declc::runtime {

namespace {

const char* list_name(ListKind list) {
  switch (list) {
    case ListKind::Redefinition: return "redefinition";
    case ListKind::Constraint: return "constraint";
    case ListKind::Monitor: return "monitor";
    case ListKind::Precondition: return "precondition";
  }
  return "?";
}

bool before(const Entry& a, const Entry& b) {
  return std::tie(a.stamp, a.fn, a.owner) < std::tie(b.stamp, b.fn, b.owner);
}

void insert_sorted(std::vector<Entry>& v, const Entry& e) {
  v.insert(std::upper_bound(v.begin(), v.end(), e, before), e);
}

bool contains(const std::vector<Entry>& v, const Entry& e) {
  return std::find(v.begin(), v.end(), e) != v.end();
}

std::vector<Entry> distinct(const std::vector<Entry>& v) {
  std::vector<Entry> out;
  for (const auto& e : v) {
    if (!contains(out, e)) out.push_back(e);
  }
  return out;
}

}  // namespace

Runtime::Runtime(Host& host, Trace& trace) : host_(host), trace_(trace) {}

std::vector<Entry>& Runtime::list_of(CellState& s, ListKind list) {
  switch (list) {
    case ListKind::Redefinition: return s.redefinitions;
    case ListKind::Constraint: return s.constraints;
    case ListKind::Monitor: return s.monitors;
    case ListKind::Precondition: return s.preconditions;
  }
  return s.redefinitions;
}

void Runtime::handle(ListKind list, CellId cell, const Entry& e, bool add) {
  std::vector<Entry>& v = list_of(cells_[cell], list);
  if (add) {
    insert_sorted(v, e);
    if (list == ListKind::Constraint) homes_[{e.fn, e.owner}].push_back(cell);
    return;
  }
  auto it = std::find(v.begin(), v.end(), e);
  if (it == v.end()) {
    throw RuntimeFault(std::string("cancel of an unregistered ") + list_name(list) + " at '" +
                       host_.cell_name(cell) + "'");
  }
  v.erase(it);
  if (list == ListKind::Constraint) {
    auto& h = homes_[{e.fn, e.owner}];
    h.erase(std::find(h.begin(), h.end(), cell));
    if (h.empty()) homes_.erase({e.fn, e.owner});
  }
}

void Runtime::handle_dependency(CellId from, const Entry& constraint, bool add) {
  std::vector<Entry>& v = cells_[from].dependencies;
  if (add) {
    insert_sorted(v, constraint);
    return;
  }
  auto it = std::find(v.begin(), v.end(), constraint);
  if (it == v.end()) {
    throw RuntimeFault("cancel of an unregistered dependency at '" + host_.cell_name(from) + "'");
  }
  v.erase(it);
}

void Runtime::before_change(CellId cell) {
  CellId parent = host_.parent_object(cell);
  if (parent != kNoCell) set_updated(parent);
  auto it = cells_.find(cell);
  if (it == cells_.end()) return;
  std::vector<Entry> redefs = it->second.redefinitions;
  begin_wave();
  for (const Entry& e : redefs) {
    if (contains(it->second.redefinitions, e) && enter_call(e.fn, e.owner, false)) {
      host_.redefine(e, false);
    }
  }
  end_wave();
}

void Runtime::after_change(CellId cell) {
  auto it = cells_.find(cell);
  if (it == cells_.end()) return;
  CellState& s = it->second;

  std::vector<Entry> redefs = s.redefinitions;
  begin_wave();
  for (const Entry& e : redefs) {
    if (contains(s.redefinitions, e) && enter_call(e.fn, e.owner, true)) host_.redefine(e, true);
  }
  end_wave();

  if (s.monitors_enabled && !s.monitors.empty()) {
    Entry top = s.monitors.back();
    s.monitors_enabled = false;
    host_.monitor(top, cell);
    s.monitors_enabled = true;
  }

  for (const Entry& e : distinct(s.dependencies)) {
    if (contains(s.dependencies, e)) apply_checked(e);
  }

  for (const Entry& e : distinct(s.preconditions)) {
    if (contains(s.preconditions, e)) host_.precondition(e, cell);
  }
}

void Runtime::apply_checked(const Entry& e) {
  if (in_flight_.count({e.fn, e.owner})) {
    trace_.emit(EventKind::Warning, "", -1,
                "constraint " + std::to_string(e.fn) + " already resolving; skipped");
    return;
  }
  CellId home = home_of(e);
  if (home == kNoCell) return;
  const Entry* top = top_constraint(home);
  if (!top || !(*top == e)) return;
  if (!host_.guard(e, home)) return;
  in_flight_.insert({e.fn, e.owner});
  try {
    host_.apply(e, home);
  } catch (...) {
    in_flight_.erase({e.fn, e.owner});
    throw;
  }
  in_flight_.erase({e.fn, e.owner});
}

void Runtime::begin_wave() { waves_.emplace_back(); }

void Runtime::end_wave() {
  std::vector<Entry> applies = std::move(waves_.back().applies);
  waves_.pop_back();
  flush(std::move(applies));
}

void Runtime::flush(std::vector<Entry> applies) {
  std::stable_sort(applies.begin(), applies.end(),
                   [](const Entry& a, const Entry& b) { return a.stamp < b.stamp; });
  for (const Entry& e : distinct(applies)) apply_checked(e);
}

bool Runtime::enter_call(int fn, CellId owner, bool b) {
  if (waves_.empty()) return true;
  return waves_.back().ran.insert({fn, owner, b}).second;
}

void Runtime::queue_apply(const Entry& constraint) {
  if (waves_.empty()) {
    flush({constraint});
    return;
  }
  waves_.back().applies.push_back(constraint);
}

void Runtime::suspend(CellId obj) {
  Header& h = headers_[obj];
  ++h.n;
  trace_.emit(EventKind::Suspend, host_.cell_name(obj), obj, "n=" + std::to_string(h.n));
}

void Runtime::resume(CellId obj) {
  Header& h = headers_[obj];
  if (h.n == 0) throw RuntimeFault("resume of '" + host_.cell_name(obj) + "' without suspend");
  --h.n;
  trace_.emit(EventKind::Resume, host_.cell_name(obj), obj, "n=" + std::to_string(h.n));
  if (h.n == 0 && h.updated) {
    h.updated = false;
    trace_.emit(EventKind::AfterChange, host_.cell_name(obj), obj, "");
    after_change(obj);
  }
}

void Runtime::set_updated(CellId obj) {
  Header& h = headers_[obj];
  if (h.updated) return;
  h.updated = true;
  trace_.emit(EventKind::BeforeChange, host_.cell_name(obj), obj, "");
  before_change(obj);
}

int Runtime::suspend_count(CellId obj) const {
  auto it = headers_.find(obj);
  return it == headers_.end() ? 0 : it->second.n;
}

const CellState* Runtime::state(CellId cell) const {
  auto it = cells_.find(cell);
  return it == cells_.end() ? nullptr : &it->second;
}

std::size_t Runtime::registration_count() const {
  std::size_t n = 0;
  for (const auto& [c, s] : cells_) n += s.size();
  return n;
}

std::vector<Link> Runtime::links() const {
  std::vector<Link> out;
  for (const auto& [c, s] : cells_) {
    for (const Entry& e : s.dependencies) out.push_back({c, home_of(e), e});
  }
  return out;
}

CellId Runtime::home_of(const Entry& constraint) const {
  auto it = homes_.find({constraint.fn, constraint.owner});
  if (it == homes_.end() || it->second.empty()) return kNoCell;
  return it->second.back();
}

const Entry* Runtime::top_constraint(CellId cell) const {
  auto it = cells_.find(cell);
  if (it == cells_.end() || it->second.constraints.empty()) return nullptr;
  return &it->second.constraints.back();
}

}  // namespace declc::runtime
