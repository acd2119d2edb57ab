#include "declc/trace.hpp"

#include <array>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace declc {

namespace {

constexpr std::array<const char*, 12> kNames = {
    "BeforeChange", "AfterChange", "Install", "Cancel",  "MonitorFired", "PrecondEval",
    "GuardEval",    "ConstraintApplied",   "Dormant", "Suspend", "Resume", "Warning",
};

}  // namespace

const char* event_kind_name(EventKind kind) { return kNames.at(static_cast<std::size_t>(kind)); }

std::optional<EventKind> parse_event_kind(const std::string& name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (name == kNames[i]) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

bool oracle_visible(EventKind kind) {
  switch (kind) {
    case EventKind::BeforeChange:
    case EventKind::AfterChange:
    case EventKind::MonitorFired:
    case EventKind::PrecondEval:
    case EventKind::GuardEval:
    case EventKind::ConstraintApplied: return true;
    default: return false;
  }
}

std::string to_json_line(const TraceEvent& e) {
  nlohmann::ordered_json j;
  j["seq"] = e.seq;
  j["kind"] = event_kind_name(e.kind);
  j["lvalue"] = e.lvalue;
  j["cell"] = e.cell;
  j["detail"] = e.detail;
  return j.dump();
}

TraceEvent from_json_line(const std::string& line) {
  auto j = nlohmann::json::parse(line);
  TraceEvent e;
  e.seq = j.at("seq").get<std::uint64_t>();
  auto kind = parse_event_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::runtime_error("unknown event kind in trace line: " + line);
  e.kind = *kind;
  e.lvalue = j.at("lvalue").get<std::string>();
  e.cell = j.at("cell").get<std::int64_t>();
  e.detail = j.at("detail").get<std::string>();
  return e;
}

std::vector<TraceEvent> read_jsonl(std::istream& in) {
  std::vector<TraceEvent> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(from_json_line(line));
  }
  return out;
}

Trace::Trace(std::ostream* out, std::size_t buffer) : out_(out), buffer_(buffer) {}

Trace::~Trace() { flush(); }

void Trace::emit(EventKind kind, std::string lvalue, std::int64_t cell, std::string detail) {
  events_.push_back({next_seq_++, kind, std::move(lvalue), cell, std::move(detail)});
  if (out_ && buffer_ > 0 && events_.size() >= buffer_) flush();
}

void Trace::flush() {
  if (!out_) return;
  for (const auto& e : events_) *out_ << to_json_line(e) << '\n';
  out_->flush();
  events_.clear();
}

std::size_t trace_buffer_from_env() {
  const char* v = std::getenv("DECLC_TRACE_BUFFER");
  if (!v) return 0;
  char* end = nullptr;
  unsigned long long n = std::strtoull(v, &end, 10);
  return end && *end == '\0' ? static_cast<std::size_t>(n) : 0;
}

}  // namespace declc
