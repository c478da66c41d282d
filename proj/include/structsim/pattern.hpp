#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "structsim/cpg.hpp"

namespace structsim {

struct PatternMatch {
  NodeId root = kNoNode; // node the pattern root matched
  std::map<std::string, NodeId> roles;
  std::map<std::string, std::vector<NodeId>> lists; // rest-role captures

  NodeId at(const std::string& role) const {
    auto it = roles.find(role);
    return it == roles.end() ? kNoNode : it->second;
  }
};

enum class ChildMode { One, Optional, Rest, Forbidden };

struct NodePattern {
  std::string role;              // unique within one pattern graph
  std::optional<NodeKind> kind;  // nullopt matches any kind
  // Wildcard subtree: children are unconstrained. Without this flag a
  // pattern's child list is exhaustive (no specs = childless node).
  bool subtree = false;
  // Attribute constraints; keys: name, type, op, literal, lit_type, static,
  // final, has_receiver. Values compared as canonical strings.
  std::map<std::string, std::string> attrs;

  struct Child {
    ChildMode mode = ChildMode::One;
    std::unique_ptr<NodePattern> pattern;
  };
  std::vector<Child> children;

  NodePattern() = default;
  NodePattern(std::string r, std::optional<NodeKind> k) : role(std::move(r)), kind(k) {}
  NodePattern(const NodePattern& o) { *this = o; }
  NodePattern& operator=(const NodePattern& o);
  NodePattern(NodePattern&&) = default;
  NodePattern& operator=(NodePattern&&) = default;

  NodePattern& attr(const std::string& key, const std::string& value) {
    attrs[key] = value;
    return *this;
  }
  NodePattern& child(NodePattern p, ChildMode mode = ChildMode::One);
};

struct Predicate {
  std::string name;
  // May extend the binding with auxiliary roles; returns false to reject.
  std::function<bool(const Cpg&, PatternMatch&)> fn;
};

struct GraphPattern {
  NodePattern root;
  std::optional<NodeKind> parent_kind; // constraint on the match root's parent
  std::vector<Predicate> predicates;
};

enum class OpCode {
  CREATE_NODE,   // kind, role
  DELETE_NODE,   // role: erase subtree
  SET_ATTR,      // role, key, literal value or "@role" reference
  ADD_CHILD,     // parent role, child role, index (-1 = append)
  REMOVE_CHILD,  // parent role, child role (child stays alive, detached)
  MOVE_CHILD,    // child role, new parent role, index (-1 = append)
  REPLACE_NODE,  // old role, new role: new takes old's slot, old is detached
  CLONE_SUBTREE, // source role, new role
};

struct TransformOp {
  OpCode code;
  std::string a; // primary role
  std::string b; // secondary role / attr key
  std::string value;
  int index = -1;
  NodeKind kind = NodeKind::Unit; // CREATE_NODE only
};

struct TransformationTemplate {
  std::string name;
  GraphPattern source;
  std::vector<TransformOp> ops;
};

// Every match of S in the cpg, sorted by root node id, then by binding.
std::vector<PatternMatch> find_matches(const Cpg& cpg, const GraphPattern& S);

// Parallel depth-first diff of S against T; the returned ops turn any
// instance of S into an instance of T. Roles common to both patterns denote
// the same node. Throws TransformError if T cannot be reached (e.g. a
// T-only role without a derivable creation).
TransformationTemplate derive_template(const std::string& name, const GraphPattern& S,
                                       const GraphPattern& T);

// Executes ops on one match binding; AST layer only.
void apply_ops(Ast& ast, PatternMatch& match, const std::vector<TransformOp>& ops);

struct ApplyResult {
  int applied = 0; // total matches transformed
  int passes = 0;  // match/transform rounds until fixed point
};

// Applies the template to fixed point: per pass, matches are processed in
// ascending root-id order, matches invalidated by earlier rewrites in the
// same pass are skipped, then matching re-runs. Throws NonTerminationError
// when pass_cap is exceeded. Derived layers are recomputed after each pass
// that changed the graph.
ApplyResult apply(Cpg& cpg, const TransformationTemplate& tmpl, int pass_cap = 100);

// Plain-text dump (pattern tree + ops), used by golden tests.
std::string dump_template(const TransformationTemplate& tmpl);

} // namespace structsim
