#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "declc/checker.hpp"
#include "declc/parser.hpp"
#include "declc/printer.hpp"
#include "doctest.h"

using namespace declc;

namespace {

std::vector<std::string> texts(const std::vector<Token>& toks) {
  std::vector<std::string> out;
  for (const auto& t : toks) out.push_back(t.text);
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(DECLC_SOURCE_DIR "/corpus")) {
    if (e.path().extension() == ".hc") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Diagnostic> check_src(const std::string& src, CheckOptions opts = {}) {
  Program p = parse_source(src);
  return check(p, opts);
}

bool has_message(const std::vector<Diagnostic>& d, const std::string& needle) {
  return std::any_of(d.begin(), d.end(),
                     [&](const Diagnostic& x) { return x.message.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("tokenize examples") {
  CHECK(tokenize("").empty());
  CHECK(texts(tokenize("x := y;")) == std::vector<std::string>{"x", ":=", "y", ";"});
  CHECK(texts(tokenize("**x:=p[i];")) ==
        std::vector<std::string>{"*", "*", "x", ":=", "p", "[", "i", "]", ";"});
  auto toks = tokenize("a ::= { } b ?? c given");
  CHECK(toks[1].is_op("::="));
  CHECK(toks[5].is_op("??"));
  CHECK(toks[7].is_keyword("given"));
}

TEST_CASE("tokenize reports position of bad character") {
  try {
    tokenize("int x;\n  x @ 3;");
    FAIL("expected a lexical error");
  } catch (const CompileError& e) {
    REQUIRE(e.diagnostics().size() == 1);
    CHECK(e.diagnostics()[0].pos == SourcePos{2, 5});
  }
}

TEST_CASE("tokens and trivia reproduce every corpus source") {
  for (const auto& path : corpus_files()) {
    std::string src = read_file(path);
    auto toks = tokenize(src);
    std::string rebuilt;
    std::size_t at = 0;
    for (const auto& t : toks) {
      std::string gap = src.substr(at, t.offset - at);
      // The gap is trivia: it must tokenize to nothing.
      CHECK(tokenize(gap).empty());
      rebuilt += gap + t.text;
      at = t.offset + t.text.size();
    }
    rebuilt += src.substr(at);
    CHECK(rebuilt == src);
  }
}

TEST_CASE("parse constructs") {
  SUBCASE("minimal constraint") {
    Program p = parse_source("int x; int y; x := y;");
    REQUIRE(p.constructs.size() == 1);
    const Construct& c = p.constructs[0];
    CHECK(c.kind == ConstructKind::Constraint);
    CHECK(pretty(*c.lhs) == "x");
    CHECK(pretty(*c.rhs) == "y");
    CHECK(!c.guard);
  }
  SUBCASE("guarded constraint") {
    Program p = parse_source("x := h(a.f(), b.g()) given a.pre_f() && b.pre_g();");
    REQUIRE(p.constructs.size() == 1);
    REQUIRE(p.constructs[0].guard);
    CHECK(pretty(*p.constructs[0].guard) == "a.pre_f() && b.pre_g()");
    CHECK(compact(*p.constructs[0].rhs) == "h(a.f(),b.g())");
  }
  SUBCASE("pre-conditional statement") {
    Program p = parse_source("x == y ?? { g(x, y); }");
    REQUIRE(p.constructs.size() == 1);
    const Construct& c = p.constructs[0];
    CHECK(c.kind == ConstructKind::Precond);
    CHECK(pretty(*c.cond) == "x == y");
    REQUIRE(c.body->body.size() == 1);
    CHECK(c.body->body[0]->expr->kind == ExprKind::Call);
  }
  SUBCASE("class-scope constructs keep their scope") {
    Program p = parse_source("class A { private: int m; int n; public: m := n; };");
    REQUIRE(p.constructs.size() == 1);
    CHECK(p.constructs[0].scope == "A");
    CHECK(p.classes[0].constructs == std::vector<int>{0});
  }
}

TEST_CASE("syntax errors name the token and the expectation") {
  try {
    parse_source("int x;\nx := ;");
    FAIL("expected a syntax error");
  } catch (const CompileError& e) {
    CHECK(e.diagnostics()[0].pos == SourcePos{2, 6});
    CHECK(e.diagnostics()[0].message == "expected expression but found ';'");
    CHECK(e.diagnostics()[0].format("a.hc") == "a.hc:2:6: error: expected expression but found ';'");
  }
  CHECK_THROWS_AS(parse_source("x y;"), CompileError);
  CHECK_THROWS_WITH(parse_source("x + 1;"), "expected ':=', '::=' or '?\?' but found ';'");
}

TEST_CASE("check diagnostics") {
  CHECK(has_message(check_src("int x; 5 := x;"), "left side must be an l-value"));
  CHECK(check_src("int *p; int x; *p := x;").empty());
  CHECK(has_message(check_src("int x; x := y;"), "unresolved identifier 'y'"));
  CHECK_THROWS_WITH(parse_source("class A { public: int m; };"),
                    "class data member 'm' must be private");
  CHECK(has_message(check_src("class A { private: int m; public: int get() { return m; } };"
                              "A a; int x; x := a.m;"),
                    "is private"));
  CHECK(check_src("class A { private: int m; public: int get() { return m; } };"
                  "A a; int x; x := a.get();")
            .empty());
  CHECK(has_message(check_src("int x; x ::= { y = 1; }"), "unresolved identifier 'y'"));
  CHECK(has_message(check_src("int x; x + 1 ?? { }"), "precondition must be bool"));
  CHECK(has_message(check_src("bool g; int x; int y; x := y given y;"), "guard must be bool"));
}

TEST_CASE("constraint type compatibility matches the conversion table") {
  // Independent table: identical assignable types, null into any pointer,
  // and int/bool crossing only when the option is on.
  const std::vector<std::string> lhs_types = {"int", "bool", "int*", "bool*", "int**"};
  const std::vector<std::string> rhs_types = {"int", "bool", "int*", "bool*", "int**", "null"};
  auto expected = [](const std::string& l, const std::string& r, bool int_bool) {
    if (l == r) return true;
    if (r == "null") return l.back() == '*';
    if (int_bool) return (l == "int" && r == "bool") || (l == "bool" && r == "int");
    return false;
  };
  auto decl = [](const std::string& t, const std::string& name) {
    std::string base = t.substr(0, t.find('*'));
    std::string stars = t.find('*') == std::string::npos ? "" : t.substr(t.find('*'));
    return base + " " + stars + name + ";";
  };
  for (bool int_bool : {false, true}) {
    for (const auto& l : lhs_types) {
      for (const auto& r : rhs_types) {
        std::string src = decl(l, "dst");
        std::string rhs = "null";
        if (r != "null") {
          src += decl(r, "src");
          rhs = "src";
        }
        src += "dst := " + rhs + ";";
        CheckOptions opts;
        opts.int_bool_conversion = int_bool;
        bool accepted = check_src(src, opts).empty();
        CAPTURE(src);
        CAPTURE(int_bool);
        CHECK(accepted == expected(l, r, int_bool));
      }
    }
  }
}

TEST_CASE("pretty-printed programs re-parse to the same structure") {
  const char* inline_src = R"(
int g = 1;
int a[4];
int *p = &g;
class B { private: int z = 2; public: void set(int v) { z = v; } };
class A { private: int m; B b; int *q; public:
  int get() { if (m > 0) { return m; } else return 0 - m; }
  void run(int k) { while (k > 0) { k = k - 1; b.set(k); } }
  m := g + 1;
  m ::= { g = g + 1; }
};
A obj;
*p := a[g] + (g * 2) given !(g == 3) || g < 0;
obj.get() > 1 ?? { int t = 0; t = obj.get(); }
int main() { obj.run(3); p = &a[2]; return 0; }
)";
  std::vector<std::string> sources{inline_src};
  for (const auto& path : corpus_files()) sources.push_back(read_file(path));
  for (const auto& src : sources) {
    Program first = parse_source(src);
    std::string printed = pretty(first);
    Program second = parse_source(printed);
    CAPTURE(printed);
    CHECK(same_structure(first, second));
    CHECK(pretty(second) == printed);
  }
}

TEST_CASE("construct order follows text order under permutation") {
  std::vector<std::string> constructs = {"x := y;", "y ::= { z = 1; }", "x == z ?? { y = 2; }",
                                         "z := x + y;", "*p := x;", "p ::= { x = 3; }"};
  std::mt19937 rng(7);
  for (int round = 0; round < 50; ++round) {
    std::shuffle(constructs.begin(), constructs.end(), rng);
    std::string src = "int x; int y; int z; int *p;\n";
    for (const auto& c : constructs) src += c + "\n";
    Program p = parse_source(src);
    REQUIRE(p.constructs.size() == constructs.size());
    for (std::size_t i = 0; i < constructs.size(); ++i) {
      Program one = parse_source("int x; int y; int z; int *p;\n" + constructs[i]);
      CHECK(p.constructs[i].ordinal == static_cast<int>(i));
      CHECK(same_structure(*(p.constructs[i].lhs ? p.constructs[i].lhs : p.constructs[i].cond),
                           *(one.constructs[0].lhs ? one.constructs[0].lhs : one.constructs[0].cond)));
    }
  }
}

TEST_CASE("every l-value form maps to exactly one production") {
  const std::vector<ExprKind> all = {
      ExprKind::IntLit, ExprKind::BoolLit, ExprKind::NullLit, ExprKind::Id,    ExprKind::Deref,
      ExprKind::AddrOf, ExprKind::Neg,     ExprKind::Not,     ExprKind::Arrow, ExprKind::Dot,
      ExprKind::ArrowStar, ExprKind::DotStar, ExprKind::Index, ExprKind::Call, ExprKind::Binary,
      ExprKind::Paren};
  std::vector<int> hits(7, 0);
  int forms = 0;
  for (ExprKind k : all) {
    if (auto prod = lv_production(k)) {
      ++forms;
      ++hits[static_cast<std::size_t>(*prod)];
    }
  }
  CHECK(forms == 7);
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  // The parser produces each form from its surface syntax.
  Program p = parse_source("x := a; *e := a; e->m := a; e.m := a; e->*f := a; e.*f := a; e[i] := a;");
  std::vector<LvProduction> got;
  for (const auto& c : p.constructs) got.push_back(*lv_production(c.lhs->kind));
  CHECK(got == std::vector<LvProduction>{LvProduction::Id, LvProduction::Deref, LvProduction::Arrow,
                                         LvProduction::Dot, LvProduction::ArrowStar,
                                         LvProduction::DotStar, LvProduction::Index});
}
