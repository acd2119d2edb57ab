#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "declc/trace.hpp"

namespace declc::runtime {

using CellId = std::int64_t;
constexpr CellId kNoCell = -1;

/// A registered generated function with its owner object. `stamp` is the
/// instantiation stamp of the construct instance it belongs to and orders
/// every list; equality ignores it.
struct Entry {
  int fn = -1;
  CellId owner = kNoCell;
  std::uint64_t stamp = 0;

  friend bool operator==(const Entry& a, const Entry& b) {
    return a.fn == b.fn && a.owner == b.owner;
  }
};

enum class ListKind { Redefinition, Constraint, Monitor, Precondition };

/// Callbacks into the machine that owns the generated functions.
class Host {
 public:
  virtual ~Host() = default;
  /// Runs a registered redefinition function.
  virtual void redefine(const Entry& e, bool b) = 0;
  virtual bool guard(const Entry& constraint, CellId home) = 0;
  virtual void apply(const Entry& constraint, CellId home) = 0;
  virtual void monitor(const Entry& e, CellId cell) = 0;
  virtual void precondition(const Entry& e, CellId cell) = 0;
  virtual std::string cell_name(CellId cell) = 0;
  /// Header of the object `cell` is a member of, kNoCell otherwise.
  virtual CellId parent_object(CellId cell) = 0;
};

struct CellState {
  std::vector<Entry> redefinitions;
  std::vector<Entry> constraints;
  std::vector<Entry> monitors;
  std::vector<Entry> preconditions;
  std::vector<Entry> dependencies;  // constraints this cell constrains
  bool monitors_enabled = true;

  std::size_t size() const {
    return redefinitions.size() + constraints.size() + monitors.size() + preconditions.size() +
           dependencies.size();
  }
};

/// A live constraint link: writes to `from` resolve the constraint whose
/// home is `to`.
struct Link {
  CellId from = kNoCell;
  CellId to = kNoCell;
  Entry constraint;
};

class Runtime {
 public:
  Runtime(Host& host, Trace& trace);

  void handle(ListKind list, CellId cell, const Entry& e, bool add);
  void handle_dependency(CellId from, const Entry& constraint, bool add);

  /// Write protocol around a value change of `cell`.
  void before_change(CellId cell);
  void after_change(CellId cell);

  /// A wave groups the generated calls triggered by one change (or one
  /// install); each (fn, owner, b) runs at most once per wave, and queued
  /// constraint applications run when the wave ends.
  void begin_wave();
  void end_wave();
  bool enter_call(int fn, CellId owner, bool b);
  void queue_apply(const Entry& constraint);

  void suspend(CellId obj);
  void resume(CellId obj);
  void set_updated(CellId obj);
  int suspend_count(CellId obj) const;

  // Inspection.
  const CellState* state(CellId cell) const;
  std::size_t registration_count() const;
  std::vector<Link> links() const;
  /// Cell where the constraint is currently installed, kNoCell if none.
  CellId home_of(const Entry& constraint) const;
  /// The active (top) constraint of a cell.
  const Entry* top_constraint(CellId cell) const;

 private:
  struct Wave {
    std::set<std::tuple<int, CellId, bool>> ran;
    std::vector<Entry> applies;
  };
  struct Header {
    int n = 0;
    bool updated = false;
  };

  std::vector<Entry>& list_of(CellState& s, ListKind list);
  void apply_checked(const Entry& e);
  void flush(std::vector<Entry> applies);

  Host& host_;
  Trace& trace_;
  std::map<CellId, CellState> cells_;
  std::map<std::pair<int, CellId>, std::vector<CellId>> homes_;
  std::vector<Wave> waves_;
  std::set<std::pair<int, CellId>> in_flight_;
  std::map<CellId, Header> headers_;
};

}  // namespace declc::runtime
