#include "declc/differ.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace declc {

namespace {

std::string show(const TraceEvent& e) {
  std::string s = event_kind_name(e.kind);
  s += " " + e.lvalue;
  if (!e.detail.empty()) s += " " + e.detail;
  return s;
}

bool same(const TraceEvent& a, const TraceEvent& b) {
  return a.kind == b.kind && a.lvalue == b.lvalue && a.cell == b.cell && a.detail == b.detail;
}

void context(std::ostringstream& os, const char* who, const std::vector<TraceEvent>& v, long at) {
  os << who << ":\n";
  long lo = std::max(0L, at - 3);
  long hi = std::min(static_cast<long>(v.size()), at + 3);
  for (long i = lo; i < hi; ++i) {
    os << (i == at ? "  > " : "    ") << "#" << i << " " << show(v[static_cast<std::size_t>(i)]) << "\n";
  }
  if (at >= static_cast<long>(v.size())) os << "  > #" << at << " <end>\n";
}

}  // namespace

std::vector<TraceEvent> visible_events(const std::vector<TraceEvent>& events) {
  std::vector<TraceEvent> out;
  for (const auto& e : events) {
    if (oracle_visible(e.kind)) out.push_back(e);
  }
  return out;
}

DiffReport diff_runs(const std::vector<TraceEvent>& vm_events, const RunResult& vm,
                     const std::vector<TraceEvent>& oracle_events, const RunResult& oracle) {
  DiffReport r;
  auto a = visible_events(vm_events);
  auto b = visible_events(oracle_events);
  std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && same(a[i], b[i])) ++i;
  if (i < n || a.size() != b.size()) {
    std::ostringstream os;
    r.equal = false;
    r.where = "trace";
    r.index = static_cast<long>(i);
    if (i < n) {
      os << "first divergence at visible event #" << i << "\n";
    } else {
      os << "length mismatch: vm " << a.size() << " events, oracle " << b.size() << "\n";
    }
    context(os, "vm", a, r.index);
    context(os, "oracle", b, r.index);
    r.text = os.str();
    return r;
  }
  if (vm.status != oracle.status || vm.fault != oracle.fault) {
    r.equal = false;
    r.where = "status";
    r.text = "status differs: vm " + std::string(vm.status == Status::Ok ? "ok" : "fault: " + vm.fault) +
             ", oracle " + (oracle.status == Status::Ok ? "ok" : "fault: " + oracle.fault) + "\n";
    return r;
  }
  if (vm.memory != oracle.memory) {
    r.equal = false;
    r.where = "memory";
    std::size_t m = std::min(vm.memory.size(), oracle.memory.size());
    std::size_t j = 0;
    while (j < m && vm.memory[j] == oracle.memory[j]) ++j;
    r.index = static_cast<long>(j);
    std::ostringstream os;
    os << "final memory differs at row " << j << ": ";
    if (j < m) {
      os << "vm " << vm.memory[j].first << "=" << vm.memory[j].second << ", oracle "
         << oracle.memory[j].first << "=" << oracle.memory[j].second << "\n";
    } else {
      os << "vm has " << vm.memory.size() << " cells, oracle " << oracle.memory.size() << "\n";
    }
    r.text = os.str();
    return r;
  }
  if (vm.status == Status::Ok && vm.exit_value != oracle.exit_value) {
    r.equal = false;
    r.where = "status";
    r.text = "exit value differs: vm " + std::to_string(vm.exit_value) + ", oracle " +
             std::to_string(oracle.exit_value) + "\n";
  }
  return r;
}

std::string DiffReport::json() const {
  nlohmann::ordered_json j;
  j["equal"] = equal;
  j["where"] = where;
  j["index"] = index;
  j["text"] = text;
  return j.dump();
}

}  // namespace declc
