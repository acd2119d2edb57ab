#include <fstream>
#include <sstream>

#include "declc/checker.hpp"
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

struct Ran {
  RunResult result;
  Trace trace;
  std::string get(const std::string& cell) const {
    for (const auto& [n, v] : result.memory) {
      if (n == cell) return v;
    }
    return "<missing>";
  }
  int count(EventKind k, const std::string& lvalue = "") const {
    int n = 0;
    for (const auto& e : trace.events()) n += e.kind == k && (lvalue.empty() || e.lvalue == lvalue);
    return n;
  }
};

std::unique_ptr<Ran> run(const std::string& src) {
  auto r = std::make_unique<Ran>();
  Program prog = compile(src);
  r->result = vm::run_program(prog, r->trace);
  return r;
}

// A loaded machine, driven by direct stores instead of main.
struct Live {
  Program prog;
  lvgraph::RedefGraph graph;
  codegen::GenUnit unit;
  Trace trace;
  std::unique_ptr<vm::Machine> m;

  explicit Live(const std::string& src) {
    prog = compile(src);
    graph = lvgraph::build_graph(prog);
    unit = codegen::generate(prog, graph);
    m = std::make_unique<vm::Machine>(prog, unit, trace);
    m->load();
  }
  CellId cell(const std::string& name) {
    for (CellId c = 0; c < static_cast<CellId>(m->memory().size()); ++c) {
      if (m->memory().cell(c).name == name) return c;
    }
    FAIL("no cell " << name);
    return kNullCell;
  }
  void set(const std::string& name, Value v) { m->store(cell(name), v); }
  void point(const std::string& ptr, const std::string& target) { m->store(cell(ptr), cell(target)); }
  std::vector<std::pair<std::string, std::string>> links() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& l : m->runtime().links()) out.emplace_back(m->cell_name(l.from), m->cell_name(l.to));
    return out;
  }
  Value value(const std::string& name) { return m->memory().get(cell(name)); }
};

using Links = std::vector<std::pair<std::string, std::string>>;

const char* kFig5 = "int p[3]; int i = 0; int u = 5; int v = 7; int *x = &u;\np[i] := *x;\n";

}  // namespace

TEST_CASE("constraint topologies of the four update scenarios") {
  SUBCASE("1: initial") {
    Live l(kFig5);
    CHECK(l.links() == Links{{"u", "p[0]"}});
    CHECK(l.value("p[0]") == 5);
  }
  SUBCASE("2: x first") {
    Live l(kFig5);
    l.point("x", "v");
    CHECK(l.links() == Links{{"v", "p[0]"}});
    CHECK(l.value("p[0]") == 7);
  }
  SUBCASE("3: i first") {
    Live l(kFig5);
    l.set("i", 1);
    CHECK(l.links() == Links{{"u", "p[1]"}});
    CHECK(l.value("p[1]") == 5);
  }
  SUBCASE("4: i and x") {
    Live l(kFig5);
    l.set("i", 1);
    l.point("x", "v");
    CHECK(l.links() == Links{{"v", "p[1]"}});
    l.set("u", 100);
    l.set("p[0]", 3);
    CHECK(l.value("p[1]") == 7);
    l.set("v", 9);
    CHECK(l.value("p[1]") == 9);
    CHECK(l.value("p[0]") == 3);
  }
}

TEST_CASE("fig5 program runs to the label 4 state") {
  auto r = run(corpus("fig5.hc"));
  REQUIRE(r->result.status == Status::Ok);
  CHECK(r->get("p[0]") == "3");
  CHECK(r->get("p[1]") == "9");
  CHECK(r->result.registrations_after_teardown == 0);
}

TEST_CASE("writing x cancels then reinstalls *x and **x") {
  Live l(corpus("fig8.hc"));
  std::size_t from = l.trace.events().size();
  l.point("x", "pb");
  std::vector<std::string> seen;
  for (std::size_t i = from; i < l.trace.events().size(); ++i) {
    const auto& e = l.trace.events()[i];
    if (e.kind == EventKind::Suspend || e.kind == EventKind::Resume) continue;
    seen.push_back(std::string(event_kind_name(e.kind)) + " " + e.lvalue);
  }
  std::vector<std::string> expected = {
      "BeforeChange x", "Cancel pa",  "Cancel a",          "AfterChange x",
      "Install pb",     "Install b", "ConstraintApplied b"};
  std::size_t j = 0;
  for (const auto& s : seen) {
    if (j < expected.size() && s == expected[j]) ++j;
  }
  CHECK_MESSAGE(j == expected.size(), "got subsequence up to " << j);
  CHECK(l.value("b") == l.value("p[0]"));
}

TEST_CASE("fig8 program final memory") {
  auto r = run(corpus("fig8.hc"));
  CHECK(r->get("a") == "20");
  CHECK(r->get("b") == "30");
  CHECK(r->result.registrations_after_teardown == 0);
}

TEST_CASE("stacked constraints: only the most recent one resolves") {
  auto r = run("int x; int a = 1; int b = 2;\nx := a;\nx := b;\n"
               "int main() { a = 10; int s = x; b = 20; return s; }\n");
  CHECK(r->result.exit_value == 2);
  CHECK(r->get("x") == "20");
}

TEST_CASE("triggering is syntactic") {
  auto r = run("int g = 1; int x;\nint f() { return g; }\nx := f();\n"
               "int main() { g = 5; return x; }\n");
  CHECK(r->result.exit_value == 1);
  CHECK(r->count(EventKind::ConstraintApplied) == 1);
}

TEST_CASE("a monitor body does not re-trigger its monitor") {
  auto r = run("int m; int n;\nm ::= { m = m + 1; n = n + 1; }\n"
               "int main() { m = 1; m = 5; return 0; }\n");
  CHECK(r->get("m") == "6");
  CHECK(r->get("n") == "2");
  CHECK(r->count(EventKind::MonitorFired) == 2);
}

TEST_CASE("preconditions run their block when the condition holds") {
  auto r = run("int a; int c;\na > 3 ?? { c = c + 1; }\n"
               "int main() { a = 5; a = 6; a = 1; return 0; }\n");
  CHECK(r->get("c") == "2");
  CHECK(r->count(EventKind::PrecondEval) == 3);
}

TEST_CASE("dormant involvement is retried after the pointer is set") {
  auto r = run("int *pn = null; int a; int c;\n*pn ::= { c = c + 1; }\n"
               "int main() { a = 1; pn = &a; a = 3; return 0; }\n");
  CHECK(r->count(EventKind::Dormant) == 1);
  CHECK(r->get("c") == "1");
  CHECK(r->result.registrations_after_teardown == 0);
}

TEST_CASE("a method call notifies object monitors once") {
  auto r = run(corpus("classes.hc"));
  REQUIRE(r->result.status == Status::Ok);
  CHECK(r->get("updates") == "2");
  CHECK(r->get("seen") == "10");
  CHECK(r->get("s.origin.sum") == "10");
}

TEST_CASE("guarded constraint holds its value while the guard is false") {
  auto r = run(corpus("guarded.hc"));
  REQUIRE(r->result.status == Status::Ok);
  CHECK(r->get("x") == "31");
}

TEST_CASE("faults carry their location") {
  auto r = run("int *p = null;\nint main() {\n  *p = 1;\n  return 0;\n}\n");
  CHECK(r->result.status == Status::Fault);
  CHECK(r->result.fault.find("3:") != std::string::npos);
}

TEST_CASE("runs are deterministic") {
  std::string src = corpus("classes.hc");
  auto a = run(src);
  auto b = run(src);
  CHECK(a->trace.events() == b->trace.events());
}

TEST_CASE("teardown leaves no registrations") {
  for (const char* f : {"fig3.hc", "fig5.hc", "fig8.hc", "classes.hc", "guarded.hc", "monitors.hc",
                        "syntactic.hc"}) {
    CAPTURE(f);
    auto r = run(corpus(f));
    CHECK(r->result.registrations_after_teardown == 0);
  }
  for (std::uint64_t s = 0; s < 200; ++s) {
    CAPTURE(s);
    auto r = run(progen::generate(s));
    CHECK(r->result.registrations_after_teardown == 0);
  }
}
