#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "declc/codegen.hpp"
#include "declc/interp.hpp"
#include "declc/memory.hpp"
#include "declc/result.hpp"
#include "declc/runtime.hpp"
#include "declc/trace.hpp"

namespace declc::vm {

/// Executes a lowered unit: user code runs on the shared evaluator, every
/// store goes through the runtime write protocol, and construct
/// registrations come from running the generated init/redef functions.
class Machine : private InterpHooks, private runtime::Host {
 public:
  struct Options {
    InterpLimits limits;
    int store_depth = 200;
  };

  Machine(const Program& prog, const codegen::GenUnit& unit, Trace& trace, Options opts);
  Machine(const Program& prog, const codegen::GenUnit& unit, Trace& trace)
      : Machine(prog, unit, trace, Options{}) {}

  void load();
  Value run();
  void teardown();

  /// The write protocol; public so tests can drive stores directly.
  void store(CellId cell, Value v) override;

  Memory& memory() { return mem_; }
  Interp& interp() { return interp_; }
  runtime::Runtime& runtime() { return rt_; }
  const codegen::GenUnit& unit() const { return unit_; }

  CellId global(const std::string& name) const;
  std::string cell_name(CellId cell) override;

 private:
  // InterpHooks
  void method_enter(CellId obj) override;
  void method_exit(CellId obj) override;
  void instantiate_construct(int construct, CellId owner) override;
  void teardown_construct(int construct, CellId owner) override;

  // runtime::Host
  void redefine(const runtime::Entry& e, bool b) override;
  bool guard(const runtime::Entry& e, CellId home) override;
  void apply(const runtime::Entry& e, CellId home) override;
  void monitor(const runtime::Entry& e, CellId cell) override;
  void precondition(const runtime::Entry& e, CellId cell) override;
  CellId parent_object(CellId cell) override;

  void exec_gen(int fn, CellId owner, bool b);
  void install(int construct, CellId owner, bool b);
  runtime::Entry entry(int fn, CellId owner) const;
  std::string describe(int construct, CellId owner);
  template <class F>
  void suspended(CellId owner, F&& body);
  void raw_store(CellId cell, Value v);

  const Program& prog_;
  const codegen::GenUnit& unit_;
  Trace& trace_;
  Options opts_;
  Memory mem_;
  Interp interp_;
  runtime::Runtime rt_;
  std::map<std::pair<int, CellId>, std::uint64_t> stamps_;
  std::uint64_t next_stamp_ = 0;
  int store_depth_ = 0;
};

struct RunOptions {
  Machine::Options machine;
  bool teardown = true;
};

/// Builds the graph, lowers, loads and runs main, recording into `trace`.
RunResult run_program(const Program& prog, Trace& trace, const RunOptions& opts = {});

}  // namespace declc::vm
