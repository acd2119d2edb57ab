#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "declc/ast.hpp"

namespace declc::lvgraph {

using NodeId = int;

/// One l-value of the redefinition graph. `redef` holds the l-values that
/// redefine this one (their value decides where it is stored);
/// `dependents` is the reverse adjacency.
struct LvNode {
  std::string scope;  // owning class for class-scope constructs, empty at file scope
  std::string str;    // canonical text
  const Expr* expr = nullptr;  // first occurrence, checker-annotated
  std::vector<NodeId> redef;
  std::vector<NodeId> dependents;
};

/// Ordered l-value list; no element is a substring of another.
using LvList = std::vector<NodeId>;

/// The l-values one construct involves.
struct ConstructLvs {
  NodeId lhs = -1;         // constraint / monitor left side
  LvList rhs_lvs;          // constraint right side
  LvList cond_lvs;         // precondition
  std::vector<NodeId> nodes;  // every involved l-value, children before parents
};

class RedefGraph {
 public:
  const std::vector<LvNode>& nodes() const { return nodes_; }
  const LvNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::optional<NodeId> find(const std::string& scope, const std::string& str) const;
  std::optional<NodeId> find(const std::string& str) const { return find("", str); }

  const std::vector<ConstructLvs>& constructs() const { return constructs_; }
  const ConstructLvs& construct(int ordinal) const {
    return constructs_.at(static_cast<std::size_t>(ordinal));
  }

  std::size_t edge_count() const;
  /// (redefining, redefined) pairs in node order.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

 private:
  friend class GraphBuilder;
  std::vector<LvNode> nodes_;
  std::map<std::pair<std::string, std::string>, NodeId> index_;
  std::vector<ConstructLvs> constructs_;
};

/// Canonical text of an expression by the concatenation rules of the
/// l-value grammar, with no spaces. Inside class `scope`, identifiers that
/// name members of that class get the owner prefix `((A*)owner)->`.
std::string canonical_str(const Expr& e, const std::string& scope = "");

/// Whether `needle` occurs in `hay` as a contiguous run of whole tokens.
/// `i` is a token-substring of `p[i]` but not of `ii`.
bool token_substring(const std::string& needle, const std::string& hay);
bool pure_token_substring(const std::string& needle, const std::string& hay);

/// Concatenates `a` then `b`, dropping every element whose text is a
/// substring of (or equal to) another kept element.
std::vector<std::string> merge(const std::vector<std::string>& a,
                               const std::vector<std::string>& b);

RedefGraph build_graph(const Program& prog);

/// Nodes reachable through `dependents`, depth-first pre-order, without
/// `node` itself and without repeats.
std::vector<NodeId> dependents_closure(const RedefGraph& g, NodeId node);

/// Empty when acyclic, otherwise a node sequence forming a cycle.
std::optional<std::vector<NodeId>> check_acyclic(const RedefGraph& g);

/// Graphviz digraph; edges point from the redefining to the redefined
/// l-value.
std::string to_dot(const RedefGraph& g);

}  // namespace declc::lvgraph
