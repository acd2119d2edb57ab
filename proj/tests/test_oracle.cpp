#include <fstream>
#include <sstream>

#include "declc/checker.hpp"
#include "declc/differ.hpp"
#include "declc/oracle.hpp"
#include "declc/printer.hpp"
#include "declc/progen.hpp"
#include "declc/vm.hpp"
#include "doctest.h"

using namespace declc;

namespace {

std::string corpus(const std::string& name) {
  std::ifstream in(std::string(DECLC_SOURCE_DIR) + "/corpus/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Pair {
  Trace vm_trace, oracle_trace;
  RunResult vm, oracle;
  DiffReport diff() const { return diff_runs(vm_trace.events(), vm, oracle_trace.events(), oracle); }
};

std::unique_ptr<Pair> both(const std::string& src) {
  auto p = std::make_unique<Pair>();
  Program prog = compile(src);
  p->vm = vm::run_program(prog, p->vm_trace);
  p->oracle = oracle::oracle_run(prog, p->oracle_trace);
  return p;
}

std::vector<std::string> texts(const std::vector<const Expr*>& v) {
  std::vector<std::string> out;
  for (const Expr* e : v) out.push_back(compact(*e));
  return out;
}

const Expr& lhs_of(const Program& p, int k) { return *p.constructs.at(static_cast<std::size_t>(k)).lhs; }

}  // namespace

TEST_CASE("involved l-values are outermost and substring-free") {
  Program p = compile("int q[8]; int p[8]; int x; int y; int w; int *s = &x; int f(int v) { return v; }\n"
                      "w := q[f(p[x + y])] + x;\nw := *s + s[0] + y;\n");
  const Construct& c0 = p.constructs[0];
  CHECK(texts(oracle::involved_lvalues(*c0.rhs, "")) == std::vector<std::string>{"q[f(p[x+y])]"});
  const Construct& c1 = p.constructs[1];
  CHECK(texts(oracle::involved_lvalues(*c1.rhs, "")) == std::vector<std::string>{"*s", "s[0]", "y"});
}

TEST_CASE("nested l-values reach every redefining variable") {
  Program p = compile("int q[8]; int p[8]; int x; int y; int f(int v) { return v; }\n"
                      "int **z; int a;\nq[f(p[x + y])] := a;\n**z := a;\n");
  CHECK(texts(oracle::nested_lvalues(lhs_of(p, 0), "")) ==
        std::vector<std::string>{"q", "f", "p[x+y]", "p", "x", "y"});
  CHECK(texts(oracle::nested_lvalues(lhs_of(p, 1), "")) == std::vector<std::string>{"*z", "z"});
}

TEST_CASE("a constraint follows its right side") {
  auto p = both("int x; int y;\nx := y;\nint main() { y = 4; return x; }\n");
  CHECK(p->oracle.exit_value == 4);
  CHECK(p->diff().equal);
}

TEST_CASE("oracle agrees with the vm on the corpus") {
  for (const char* f : {"fig3.hc", "fig5.hc", "fig8.hc", "classes.hc", "guarded.hc", "monitors.hc",
                        "syntactic.hc"}) {
    CAPTURE(f);
    auto p = both(corpus(f));
    auto d = p->diff();
    CHECK_MESSAGE(d.equal, d.text);
  }
}

TEST_CASE("fig5 final memory and firings match") {
  auto p = both(corpus("fig5.hc"));
  CHECK(p->vm.memory == p->oracle.memory);
  int applied = 0;
  for (const auto& e : p->oracle_trace.events()) applied += e.kind == EventKind::ConstraintApplied;
  CHECK(applied == 4);
}

TEST_CASE("identical runs give an empty report") {
  auto p = both(corpus("fig8.hc"));
  DiffReport d = diff_runs(p->vm_trace.events(), p->vm, p->vm_trace.events(), p->vm);
  CHECK(d.equal);
  CHECK(d.text.empty());
}

TEST_CASE("a truncated trace is a length mismatch") {
  auto p = both(corpus("fig8.hc"));
  std::vector<TraceEvent> cut = p->vm_trace.events();
  while (!cut.empty() && !oracle_visible(cut.back().kind)) cut.pop_back();
  cut.pop_back();
  DiffReport d = diff_runs(cut, p->vm, p->oracle_trace.events(), p->oracle);
  CHECK_FALSE(d.equal);
  CHECK(d.where == "trace");
  CHECK(d.text.find("length mismatch") != std::string::npos);
  CHECK(d.json().find("\"equal\":false") != std::string::npos);
}

TEST_CASE("a vm without dependency re-registration is caught") {
  // Naive lowering: p[i]'s init is empty and the dependency edge lives
  // in the constrained side's init, so rebinding i never re-links.
  std::string src = corpus("fig8.hc");
  Program prog = compile(src);
  lvgraph::RedefGraph graph = lvgraph::build_graph(prog);
  codegen::GenUnit unit = codegen::generate(prog, graph);
  auto& from = unit.functions.at(static_cast<std::size_t>(unit.find("init_p_arr_i"))).body;
  auto& to = unit.functions.at(static_cast<std::size_t>(unit.find("init_ptr_ptr_x"))).body;
  for (auto it = from.begin(); it != from.end();) {
    if (it->kind == codegen::InstrKind::RegDependency || it->kind == codegen::InstrKind::ApplyOnInstall) {
      if (it->kind == codegen::InstrKind::RegDependency) to.insert(to.begin() + 1, *it);
      it = from.erase(it);
    } else {
      ++it;
    }
  }

  Trace broken_trace;
  RunResult broken;
  {
    vm::Machine m(prog, unit, broken_trace);
    try {
      m.load();
      broken.exit_value = m.run();
    } catch (const std::exception& e) {
      broken.status = Status::Fault;
      broken.fault = e.what();
    }
    broken.memory = m.memory().snapshot();
  }
  Trace oracle_trace;
  RunResult reference = oracle::oracle_run(prog, oracle_trace);

  DiffReport d = diff_runs(broken_trace.events(), broken, oracle_trace.events(), reference);
  REQUIRE_FALSE(d.equal);
  CHECK(d.where == "trace");
  // The first divergence is the oracle's application right after i changes.
  auto visible = visible_events(oracle_trace.events());
  REQUIRE(d.index >= 1);
  const TraceEvent& at = visible.at(static_cast<std::size_t>(d.index));
  const TraceEvent& prev = visible.at(static_cast<std::size_t>(d.index - 1));
  CHECK(at.kind == EventKind::ConstraintApplied);
  CHECK(prev.lvalue == "i");
}

TEST_CASE("1000 random programs: vm and oracle agree") {
  int diverged = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    auto p = both(progen::generate(s));
    auto d = p->diff();
    if (!d.equal && ++diverged <= 3) FAIL_CHECK("seed " << s << "\n" << d.text);
  }
  CHECK(diverged == 0);
}

TEST_CASE("generated programs are reproducible and well formed") {
  CHECK(progen::generate(42) == progen::generate(42));
  CHECK(progen::generate(42) != progen::generate(43));
  for (std::uint64_t s = 0; s < 300; ++s) {
    CAPTURE(s);
    std::string src = progen::generate(s);
    Program p;
    CHECK_NOTHROW(p = compile(src));
    CHECK(p.constructs.size() <= 6);
  }
}
