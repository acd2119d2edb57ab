#pragma once

#include <string>
#include <utility>
#include <vector>

#include "declc/ast.hpp"
#include "declc/memory.hpp"

namespace declc {

/// What the evaluator delegates to its embedding: the vm routes these
/// through the generated functions and the runtime, the oracle through its
/// from-scratch recomputation.
class InterpHooks {
 public:
  virtual ~InterpHooks() = default;
  /// Every user-visible write, after its target and value are evaluated.
  virtual void store(CellId cell, Value v) = 0;
  virtual void method_enter(CellId obj) = 0;
  virtual void method_exit(CellId obj) = 0;
  /// A declarative construct comes into force for `owner` (kNullCell at
  /// file scope).
  virtual void instantiate_construct(int construct, CellId owner) = 0;
  virtual void teardown_construct(int construct, CellId owner) = 0;
};

struct InterpLimits {
  long long steps = 20'000'000;
  int call_depth = 2'000;
};

/// Tree-walking evaluator over Memory.
class Interp {
 public:
  Interp(const Program& prog, Memory& mem, InterpHooks& hooks, InterpLimits limits = {});

  /// Allocates globals and objects and instantiates constructs, in textual
  /// order. Objects are built members first.
  void load();
  /// Runs main; returns its int result (0 for void or no main).
  Value run_main();
  /// Tears down every construct instance in reverse instantiation order.
  void teardown();

  /// Cells the l-value denotes right now: every element for arrays, the
  /// header for objects and method references, none for functions.
  /// Throws an unresolvable RuntimeFault on null dereference or a bad index.
  std::vector<CellId> bind(const Expr& lv, CellId owner, const std::string& scope);
  /// The single cell a scalar or pointer l-value denotes.
  CellId locate(const Expr& lv, CellId owner, const std::string& scope);
  Value eval(const Expr& e, CellId owner, const std::string& scope);

  /// Construct actions, evaluated with `owner` as the object context.
  void run_assign(int construct, CellId owner);
  bool eval_guard(int construct, CellId owner);
  bool eval_cond(int construct, CellId owner);
  void run_body(int construct, CellId owner);

  const std::vector<std::pair<int, CellId>>& instances() const { return instances_; }
  CellId global_cell(int index) const { return globals_.at(static_cast<std::size_t>(index)); }
  const Program& program() const { return prog_; }
  Memory& memory() { return mem_; }

 private:
  struct Env;
  enum class Flow { Normal, Return };

  CellId lvalue(const Expr& e, Env& env);
  Value value(const Expr& e, Env& env);
  Value call(const Expr& e, Env& env);
  Value invoke(const Function& f, CellId obj, const std::vector<Value>& args);
  Flow exec(const Stmt& s, Env& env, Value& ret);
  Value pointer_offset(Value p, Value k, const Expr& at);
  void init_object(CellId header, const std::string& cls);
  void construct_object(CellId header, const std::string& cls);
  void step(const SourcePos& pos);

  const Program& prog_;
  Memory& mem_;
  InterpHooks& hooks_;
  InterpLimits limits_;
  std::vector<CellId> globals_;
  std::vector<std::pair<int, CellId>> instances_;
  long long steps_ = 0;
  int depth_ = 0;
};

}  // namespace declc
