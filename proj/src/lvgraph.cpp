#include "declc/lvgraph.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "declc/lexer.hpp"

namespace declc::lvgraph {

namespace {

std::vector<std::string> token_texts(const std::string& s) {
  std::vector<std::string> out;
  for (auto& t : tokenize(s)) out.push_back(std::move(t.text));
  return out;
}

template <class T, class StrOf>
std::vector<T> merge_by(const std::vector<T>& a, const std::vector<T>& b, StrOf str_of) {
  std::vector<T> all(a);
  all.insert(all.end(), b.begin(), b.end());
  std::vector<T> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::string& si = str_of(all[i]);
    bool drop = false;
    for (std::size_t j = 0; j < all.size() && !drop; ++j) {
      if (i == j) continue;
      const std::string& sj = str_of(all[j]);
      // Equal texts keep their first occurrence.
      drop = si == sj ? j < i : token_substring(si, sj);
    }
    if (!drop) out.push_back(all[i]);
  }
  return out;
}

}  // namespace

bool token_substring(const std::string& needle, const std::string& hay) {
  if (needle == hay) return true;
  auto n = token_texts(needle);
  auto h = token_texts(hay);
  if (n.empty()) return true;
  return std::search(h.begin(), h.end(), n.begin(), n.end()) != h.end();
}

bool pure_token_substring(const std::string& needle, const std::string& hay) {
  return needle != hay && token_substring(needle, hay);
}

std::vector<std::string> merge(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
  return merge_by(a, b, [](const std::string& s) -> const std::string& { return s; });
}

std::string canonical_str(const Expr& e, const std::string& scope) {
  auto k = [&](std::size_t i) { return canonical_str(*e.kids[i], scope); };
  switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::BoolLit:
    case ExprKind::NullLit: return e.text;
    case ExprKind::Id:
      if (!scope.empty() && (e.ref.kind == Ref::Kind::Member || e.ref.kind == Ref::Kind::Method) &&
          e.ref.class_name == scope) {
        return "((" + scope + "*)owner)->" + e.text;
      }
      return e.text;
    case ExprKind::Deref: return "*" + k(0);
    case ExprKind::AddrOf: return "&" + k(0);
    case ExprKind::Neg: return "-" + k(0);
    case ExprKind::Not: return "!" + k(0);
    case ExprKind::Arrow: return k(0) + "->" + e.text;
    case ExprKind::Dot: return k(0) + "." + e.text;
    case ExprKind::ArrowStar: return k(0) + "->*" + k(1);
    case ExprKind::DotStar: return k(0) + ".*" + k(1);
    case ExprKind::Index: return k(0) + "[" + k(1) + "]";
    case ExprKind::Call: {
      std::string s = k(0) + "(";
      for (std::size_t i = 1; i < e.kids.size(); ++i) {
        if (i > 1) s += ",";
        s += k(i);
      }
      return s + ")";
    }
    case ExprKind::Binary: return k(0) + e.text + k(1);
    case ExprKind::Paren: return "(" + k(0) + ")";
  }
  return {};
}

std::optional<NodeId> RedefGraph::find(const std::string& scope, const std::string& str) const {
  auto it = index_.find({scope, str});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t RedefGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes_) n += node.redef.size();
  return n;
}

std::vector<std::pair<NodeId, NodeId>> RedefGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (NodeId r : nodes_[i].redef) out.emplace_back(r, static_cast<NodeId>(i));
  }
  return out;
}

/// Evaluates the synthesized attributes bottom-up over each construct.
class GraphBuilder {
 public:
  explicit GraphBuilder(RedefGraph& g) : g_(g) {}

  void add_construct(const Construct& c) {
    scope_ = c.scope;
    ConstructLvs out;
    switch (c.kind) {
      case ConstructKind::Constraint:
        out.lhs = lvs(*c.lhs).front();
        out.rhs_lvs = lvs(*c.rhs);
        break;
      case ConstructKind::Monitor:
        out.lhs = lvs(*c.lhs).front();
        break;
      case ConstructKind::Precond:
        out.cond_lvs = lvs(*c.cond);
        break;
    }
    std::set<NodeId> seen;
    auto visit = [&](auto&& self, NodeId n) -> void {
      if (!seen.insert(n).second) return;
      for (NodeId r : g_.node(n).redef) self(self, r);
      out.nodes.push_back(n);
    };
    if (out.lhs >= 0) visit(visit, out.lhs);
    for (NodeId n : out.rhs_lvs) visit(visit, n);
    for (NodeId n : out.cond_lvs) visit(visit, n);
    g_.constructs_.push_back(std::move(out));
  }

 private:
  LvList merge_ids(const LvList& a, const LvList& b) {
    return merge_by(a, b, [this](NodeId n) -> const std::string& { return g_.node(n).str; });
  }

  NodeId intern(const Expr& e, LvList redef) {
    std::string str = canonical_str(e, scope_);
    auto key = std::make_pair(scope_, str);
    auto it = g_.index_.find(key);
    if (it != g_.index_.end()) return it->second;
    NodeId id = static_cast<NodeId>(g_.nodes_.size());
    LvNode node;
    node.scope = scope_;
    node.str = std::move(str);
    node.expr = &e;
    node.redef = std::move(redef);
    g_.nodes_.push_back(std::move(node));
    g_.index_.emplace(std::move(key), id);
    for (NodeId r : g_.nodes_[static_cast<std::size_t>(id)].redef) {
      g_.nodes_[static_cast<std::size_t>(r)].dependents.push_back(id);
    }
    return id;
  }

  /// The `lvs` attribute: longest l-values contained in `e`.
  LvList lvs(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit:
      case ExprKind::BoolLit:
      case ExprKind::NullLit: return {};
      case ExprKind::Id: return {intern(e, {})};
      case ExprKind::Deref:
      case ExprKind::Arrow:
      case ExprKind::Dot: return {intern(e, lvs(*e.kids[0]))};
      case ExprKind::ArrowStar:
      case ExprKind::DotStar:
      case ExprKind::Index: {
        LvList a = lvs(*e.kids[0]);
        LvList b = lvs(*e.kids[1]);
        return {intern(e, merge_ids(a, b))};
      }
      case ExprKind::AddrOf:
      case ExprKind::Neg:
      case ExprKind::Not:
      case ExprKind::Paren: return lvs(*e.kids[0]);
      case ExprKind::Binary: {
        LvList a = lvs(*e.kids[0]);
        return merge_ids(a, lvs(*e.kids[1]));
      }
      case ExprKind::Call: {
        LvList callee = lvs(*e.kids[0]);
        LvList args;
        for (std::size_t i = 1; i < e.kids.size(); ++i) args = merge_ids(args, lvs(*e.kids[i]));
        return merge_ids(callee, args);
      }
    }
    return {};
  }

  RedefGraph& g_;
  std::string scope_;
};

RedefGraph build_graph(const Program& prog) {
  RedefGraph g;
  GraphBuilder b(g);
  for (const auto& c : prog.constructs) b.add_construct(c);
  return g;
}

std::vector<NodeId> dependents_closure(const RedefGraph& g, NodeId node) {
  std::vector<NodeId> out;
  std::set<NodeId> seen{node};
  auto walk = [&](auto&& self, NodeId n) -> void {
    for (NodeId d : g.node(n).dependents) {
      if (!seen.insert(d).second) continue;
      out.push_back(d);
      self(self, d);
    }
  };
  walk(walk, node);
  return out;
}

std::optional<std::vector<NodeId>> check_acyclic(const RedefGraph& g) {
  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(g.nodes().size(), Mark::White);
  std::vector<NodeId> stack;
  std::optional<std::vector<NodeId>> cycle;
  std::function<bool(NodeId)> dfs = [&](NodeId n) {
    mark[static_cast<std::size_t>(n)] = Mark::Grey;
    stack.push_back(n);
    for (NodeId d : g.node(n).dependents) {
      Mark m = mark[static_cast<std::size_t>(d)];
      if (m == Mark::Grey) {
        auto from = std::find(stack.begin(), stack.end(), d);
        cycle = std::vector<NodeId>(from, stack.end());
        return false;
      }
      if (m == Mark::White && !dfs(d)) return false;
    }
    stack.pop_back();
    mark[static_cast<std::size_t>(n)] = Mark::Black;
    return true;
  };
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    if (mark[i] == Mark::White && !dfs(static_cast<NodeId>(i))) return cycle;
  }
  return std::nullopt;
}

std::string to_dot(const RedefGraph& g) {
  auto id = [&](NodeId n) {
    const LvNode& node = g.node(n);
    std::string s = node.scope.empty() ? node.str : node.scope + "::" + node.str;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') quoted += '\\';
      quoted += c;
    }
    return quoted + "\"";
  };
  std::string out = "digraph redef {\n";
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    out += "  " + id(static_cast<NodeId>(i)) + ";\n";
  }
  for (auto [from, to] : g.edges()) out += "  " + id(from) + " -> " + id(to) + ";\n";
  return out + "}\n";
}

}  // namespace declc::lvgraph
