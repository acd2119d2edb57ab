#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace declc {

enum class EventKind {
  BeforeChange,
  AfterChange,
  Install,
  Cancel,
  MonitorFired,
  PrecondEval,
  GuardEval,
  ConstraintApplied,
  Dormant,
  Suspend,
  Resume,
  Warning,
};

const char* event_kind_name(EventKind kind);
std::optional<EventKind> parse_event_kind(const std::string& name);

/// Kinds both the vm and the oracle emit; the rest are artifacts of the
/// incremental implementation.
bool oracle_visible(EventKind kind);

struct TraceEvent {
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Warning;
  std::string lvalue;
  std::int64_t cell = -1;
  std::string detail;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// One JSON object per line with fields in the order seq, kind, lvalue,
/// cell, detail.
std::string to_json_line(const TraceEvent& e);
TraceEvent from_json_line(const std::string& line);
std::vector<TraceEvent> read_jsonl(std::istream& in);

/// Append-only event log. With a stream attached, events are written out
/// whenever `buffer` of them are pending (0 keeps everything until flush).
class Trace {
 public:
  explicit Trace(std::ostream* out = nullptr, std::size_t buffer = 0);
  ~Trace();
  Trace(const Trace&) = delete;
  Trace& operator=(const Trace&) = delete;

  void emit(EventKind kind, std::string lvalue, std::int64_t cell, std::string detail = {});
  void flush();

  /// Events still held in memory; every event when no stream is attached.
  const std::vector<TraceEvent>& events() const { return events_; }
  std::uint64_t count() const { return next_seq_; }

 private:
  std::ostream* out_;
  std::size_t buffer_;
  std::vector<TraceEvent> events_;
  std::uint64_t next_seq_ = 0;
};

/// Buffer size from DECLC_TRACE_BUFFER, 0 when unset or invalid.
std::size_t trace_buffer_from_env();

}  // namespace declc
