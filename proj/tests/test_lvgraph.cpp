#include <algorithm>
#include <random>
#include <set>

#include "declc/checker.hpp"
#include "declc/lvgraph.hpp"
#include "declc/parser.hpp"
#include "doctest.h"

using namespace declc;
using namespace declc::lvgraph;

namespace {

std::set<std::pair<std::string, std::string>> edge_strs(const RedefGraph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [from, to] : g.edges()) out.emplace(g.node(from).str, g.node(to).str);
  return out;
}

std::vector<std::string> strs(const RedefGraph& g, const std::vector<NodeId>& ids) {
  std::vector<std::string> out;
  for (NodeId n : ids) out.push_back(g.node(n).str);
  return out;
}

std::vector<std::string> redef_of(const RedefGraph& g, const std::string& s) {
  auto n = g.find(s);
  REQUIRE(n.has_value());
  return strs(g, g.node(*n).redef);
}

/// Random expression text over a small alphabet, used to grow l-values.
class ExprGen {
 public:
  explicit ExprGen(unsigned seed) : rng_(seed) {}

  std::string lvalue(int depth) {
    int pick = depth <= 0 ? 0 : pick_in(0, 5);
    switch (pick) {
      case 0: return id();
      case 1: return "*" + atom_lvalue(depth - 1);
      case 2: return atom_lvalue(depth - 1) + "[" + expr(depth - 1) + "]";
      case 3: return atom_lvalue(depth - 1) + "." + field();
      case 4: return atom_lvalue(depth - 1) + "->" + field();
      default: return "*(" + expr(depth - 1) + ")";
    }
  }

  std::string expr(int depth) {
    int pick = depth <= 0 ? pick_in(0, 1) : pick_in(0, 4);
    switch (pick) {
      case 0: return lvalue(0);
      case 1: return std::to_string(pick_in(0, 9));
      case 2: return expr(depth - 1) + "+" + expr(depth - 1);
      case 3: return id() + "(" + expr(depth - 1) + "," + expr(depth - 1) + ")";
      default: return lvalue(depth);
    }
  }

 private:
  // Postfix forms need a primary on the left; parenthesize anything else.
  std::string atom_lvalue(int depth) {
    std::string s = lvalue(depth);
    return s[0] == '*' ? "(" + s + ")" : s;
  }
  std::string id() {
    static const char* ids[] = {"a", "b", "i", "j", "p", "q", "x", "y"};
    return ids[pick_in(0, 7)];
  }
  std::string field() {
    static const char* f[] = {"m", "n"};
    return f[pick_in(0, 1)];
  }
  int pick_in(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::mt19937 rng_;
};

/// Every l-value subexpression strictly inside `e`, brute force.
void inner_lvalues(const Expr& e, bool is_root, std::vector<std::string>& out) {
  if (!is_root && e.is_lvalue_form()) out.push_back(canonical_str(e));
  for (const auto& k : e.kids) inner_lvalues(*k, false, out);
}

/// Expected redef set of `e`: the maximal inner l-values under token
/// containment, found by comparing every pair.
std::set<std::string> expected_redef(const Expr& e) {
  std::vector<std::string> inner;
  inner_lvalues(e, true, inner);
  std::set<std::string> out;
  for (const auto& c : inner) {
    bool covered = std::any_of(inner.begin(), inner.end(), [&](const std::string& w) {
      return pure_token_substring(c, w);
    });
    if (!covered) out.insert(c);
  }
  return out;
}

void all_lvalue_nodes(const Expr& e, std::vector<const Expr*>& out) {
  if (e.is_lvalue_form()) out.push_back(&e);
  for (const auto& k : e.kids) all_lvalue_nodes(*k, out);
}

}  // namespace

TEST_CASE("canonical strings") {
  Program p = compile(R"(
    int x; int i; int j; int **p;
    class A { private: int m; int n; public: m := n; };
    x := p[i][j];
  )");
  CHECK(canonical_str(*p.constructs[1].lhs) == "x");
  CHECK(canonical_str(*p.constructs[1].rhs) == "p[i][j]");
  CHECK(canonical_str(*p.constructs[0].lhs, "A") == "((A*)owner)->m");
  Program q = parse_source("x := h( a . f ( ) , b+ 1 );");
  CHECK(canonical_str(*q.constructs[0].rhs) == "h(a.f(),b+1)");
}

TEST_CASE("token substring works at token granularity") {
  CHECK(token_substring("i", "p[i]"));
  CHECK_FALSE(token_substring("i", "ii"));
  CHECK_FALSE(token_substring("i", "p[ii]"));
  CHECK(token_substring("x", "x"));
  CHECK_FALSE(pure_token_substring("x", "x"));
  CHECK(pure_token_substring("*x", "**x"));
  CHECK(pure_token_substring("p[x]", "*(g(p[x])+f(x))"));
}

TEST_CASE("merge examples") {
  CHECK(merge({"x"}, {"x"}) == std::vector<std::string>{"x"});
  CHECK(merge({"g", "p[x]"}, {"f", "x"}) == std::vector<std::string>{"g", "p[x]", "f"});
  CHECK(merge({}, {"q"}) == std::vector<std::string>{"q"});
  CHECK(merge({"i"}, {"ii"}) == std::vector<std::string>{"i", "ii"});
  CHECK(merge({"p[i]"}, {"q", "i"}) == std::vector<std::string>{"p[i]", "q"});
}

TEST_CASE("merge output never holds a substring pair") {
  std::mt19937 rng(11);
  ExprGen gen(5);
  for (int round = 0; round < 300; ++round) {
    std::vector<std::string> pool;
    for (int k = 0; k < 6; ++k) pool.push_back(gen.lvalue(2));
    // Inputs must themselves be substring-free lists.
    auto a = merge({}, std::vector<std::string>(pool.begin(), pool.begin() + 3));
    auto b = merge({}, std::vector<std::string>(pool.begin() + 3, pool.end()));
    auto m = merge(a, b);
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (i != j) CHECK_FALSE(token_substring(m[i], m[j]));
      }
    }
    // Nothing is lost unless something kept covers it.
    for (const auto& s : a) {
      bool kept = std::find(m.begin(), m.end(), s) != m.end();
      bool covered = std::any_of(m.begin(), m.end(), [&](auto& w) { return token_substring(s, w); });
      CHECK((kept || covered));
    }
    (void)rng;
  }
}

TEST_CASE("p[i][j] graph") {
  Program p = compile("int **p; int i; int j; int x; x := p[i][j];");
  RedefGraph g = build_graph(p);
  std::set<std::pair<std::string, std::string>> want = {
      {"p", "p[i]"}, {"i", "p[i]"}, {"p[i]", "p[i][j]"}, {"j", "p[i][j]"}};
  CHECK(edge_strs(g) == want);
  CHECK(g.edge_count() == 4);
  CHECK(redef_of(g, "p[i][j]") == std::vector<std::string>{"p[i]", "j"});
}

TEST_CASE("**x := p[i] graph") {
  Program p = compile("int **x; int *p; int i; **x := p[i];");
  RedefGraph g = build_graph(p);
  std::set<std::pair<std::string, std::string>> want = {
      {"x", "*x"}, {"*x", "**x"}, {"i", "p[i]"}, {"p", "p[i]"}};
  CHECK(edge_strs(g) == want);
  const ConstructLvs& c = g.construct(0);
  CHECK(g.node(c.lhs).str == "**x");
  CHECK(strs(g, c.rhs_lvs) == std::vector<std::string>{"p[i]"});
  CHECK(strs(g, c.nodes) == std::vector<std::string>{"x", "*x", "**x", "p", "i", "p[i]"});
}

TEST_CASE("nested l-values keep only longest substrings") {
  Program p = parse_source("w := q[f(p[x+y])]; z := *(g(p[x])+f(x));");
  RedefGraph g = build_graph(p);
  CHECK(redef_of(g, "q[f(p[x+y])]") == std::vector<std::string>{"q", "f", "p[x+y]"});
  CHECK(redef_of(g, "p[x+y]") == std::vector<std::string>{"p", "x", "y"});
  CHECK(redef_of(g, "*(g(p[x])+f(x))") == std::vector<std::string>{"g", "p[x]", "f"});
  CHECK(redef_of(g, "p[x]") == std::vector<std::string>{"p", "x"});
}

TEST_CASE("redef lists equal the brute-force maximal inner l-values") {
  ExprGen gen(2024);
  for (int round = 0; round < 400; ++round) {
    std::string src = gen.lvalue(3) + " := " + gen.expr(3) + ";";
    CAPTURE(src);
    Program p = parse_source(src);
    RedefGraph g = build_graph(p);
    std::vector<const Expr*> lvs;
    all_lvalue_nodes(*p.constructs[0].lhs, lvs);
    all_lvalue_nodes(*p.constructs[0].rhs, lvs);
    for (const Expr* e : lvs) {
      auto id = g.find(canonical_str(*e));
      REQUIRE(id.has_value());
      auto got = strs(g, g.node(*id).redef);
      CHECK(std::set<std::string>(got.begin(), got.end()) == expected_redef(*e));
      for (const auto& r : got) CHECK(pure_token_substring(r, g.node(*id).str));
    }
  }
}

TEST_CASE("reverse adjacency, determinism and acyclicity on random programs") {
  ExprGen gen(99);
  for (int round = 0; round < 1000; ++round) {
    std::string src;
    for (int k = 0; k < 4; ++k) src += gen.lvalue(3) + " := " + gen.expr(2) + ";\n";
    CAPTURE(src);
    Program p = parse_source(src);
    RedefGraph g = build_graph(p);
    CHECK_FALSE(check_acyclic(g).has_value());
    for (std::size_t n = 0; n < g.nodes().size(); ++n) {
      const LvNode& node = g.nodes()[n];
      for (NodeId r : node.redef) {
        const auto& deps = g.node(r).dependents;
        CHECK(std::count(deps.begin(), deps.end(), static_cast<NodeId>(n)) == 1);
      }
      for (NodeId d : node.dependents) {
        const auto& red = g.node(d).redef;
        CHECK(std::count(red.begin(), red.end(), static_cast<NodeId>(n)) == 1);
      }
    }
    RedefGraph again = build_graph(p);
    CHECK(to_dot(again) == to_dot(g));
    CHECK(again.edges() == g.edges());
  }
}

TEST_CASE("shared nodes per scope") {
  Program p = compile(R"(
    int x; int y; int *q;
    class A { private: int m; public: m := x; };
    x := *q; y := *q + x;
  )");
  RedefGraph g = build_graph(p);
  CHECK(g.find("", "*q").has_value());
  CHECK(g.find("A", "x").has_value());
  CHECK(g.find("A", "((A*)owner)->m").has_value());
  CHECK(*g.find("", "x") != *g.find("A", "x"));
  CHECK(g.construct(2).rhs_lvs == std::vector<NodeId>{*g.find("", "*q"), *g.find("", "x")});
  CHECK(g.construct(1).rhs_lvs == std::vector<NodeId>{*g.find("", "*q")});
}

TEST_CASE("dependents closure") {
  Program p = compile("int **x; int p[4]; int i; **x := p[i];");
  RedefGraph g = build_graph(p);
  CHECK(strs(g, dependents_closure(g, *g.find("x"))) == std::vector<std::string>{"*x", "**x"});
  CHECK(strs(g, dependents_closure(g, *g.find("i"))) == std::vector<std::string>{"p[i]"});
  CHECK(dependents_closure(g, *g.find("**x")).empty());
  Program q = compile("int **p; int i; int j; int x; x := p[i][j];");
  RedefGraph h = build_graph(q);
  CHECK(strs(h, dependents_closure(h, *h.find("j"))) == std::vector<std::string>{"p[i][j]"});
}

TEST_CASE("acyclicity check") {
  Program p = compile("int **x; int p[4]; int i; **x := p[i];");
  CHECK_FALSE(check_acyclic(build_graph(p)).has_value());
  CHECK_FALSE(check_acyclic(RedefGraph{}).has_value());
}

TEST_CASE("DOT export") {
  CHECK(to_dot(RedefGraph{}) == "digraph redef {\n}\n");
  Program p = compile("int *x; int y; *x := y;");
  std::string dot = to_dot(build_graph(p));
  CHECK(dot.find("\"x\" -> \"*x\";") != std::string::npos);
  Program q = compile("int **p; int i; int j; int x; x := p[i][j];");
  std::string d4 = to_dot(build_graph(q));
  CHECK(std::count(d4.begin(), d4.end(), '>') == 4);
}
