#pragma once

#include <string>
#include <vector>

#include "declc/result.hpp"
#include "declc/trace.hpp"

namespace declc {

struct DiffReport {
  bool equal = true;
  std::string where;   // "trace", "memory", "status" or ""
  long index = -1;     // first diverging oracle-visible event, or memory row
  std::string text;    // human-readable explanation with context
  std::string json() const;
};

std::vector<TraceEvent> visible_events(const std::vector<TraceEvent>& events);

DiffReport diff_runs(const std::vector<TraceEvent>& vm_events, const RunResult& vm,
                     const std::vector<TraceEvent>& oracle_events, const RunResult& oracle);

}  // namespace declc
