#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace structsim {

using NodeId = int32_t;
constexpr NodeId kNoNode = -1;

enum class NodeKind : uint8_t {
  Unit,         // one submission: class declarations, or bare members
  ClassDecl,
  FieldDecl,
  MethodDecl,
  ConstructorDecl,
  ParamDecl,
  Block,
  LocalVarDecl, // children: [init?]
  Assign,       // children: [lhs, rhs]
  IfStmt,       // children: [cond, thenBlock, elseBlock?]
  ForStmt,      // children: [initStmt, condExpr, updateStmt, bodyBlock]
  WhileStmt,    // children: [cond, bodyBlock]
  ReturnStmt,   // children: [expr?]
  ThrowStmt,    // children: [New]
  ExprStmt,     // children: [expr]
  Call,         // children: [recv?] + args, has_receiver flag
  FieldAccess,  // children: [recv?]; implicit receiver (this/static) has none
  NameRef,
  UnaryOp,      // op: ! neg ++pre ++post --pre --post
  BinaryOp,
  Literal,
  OptionalWrap,   // children: [value]; op: of | ofNullable
  OptionalUnwrap, // children: [value, default?]; op: orElse | get
  New,            // children: args
};

const char* kind_name(NodeKind k);

enum class LitType : uint8_t { None, Int, Double, Bool, String };

struct Span {
  int32_t line = 0;
  int32_t col = 0;
};

struct Node {
  NodeId id = kNoNode;
  NodeKind kind = NodeKind::Unit;
  std::string name;      // declared or referenced identifier; call target
  std::string type_name; // declared type (decls, methods: return type)
  std::string op;        // operator or builtin variant
  std::string literal;   // canonical literal lexeme
  LitType lit_type = LitType::None;
  bool is_static = false;
  bool is_final = false;
  bool has_receiver = false; // Call only: first child is the receiver expr
  NodeId resolved = kNoNode; // reference -> declaration node
  Span span;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  bool alive = true;
};

// Flat arena; ids are stable and never reused, deletions mark nodes dead.
class Ast {
public:
  NodeId make(NodeKind kind) {
    Node n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = kind;
    nodes_.push_back(std::move(n));
    return nodes_.back().id;
  }

  Node& at(NodeId id) { return nodes_[static_cast<size_t>(id)]; }
  const Node& at(NodeId id) const { return nodes_[static_cast<size_t>(id)]; }
  size_t size() const { return nodes_.size(); }

  NodeId root = kNoNode;

  void add_child(NodeId parent, NodeId child) {
    at(parent).children.push_back(child);
    at(child).parent = parent;
  }

  void insert_child(NodeId parent, NodeId child, size_t index) {
    auto& kids = at(parent).children;
    if (index > kids.size()) index = kids.size();
    kids.insert(kids.begin() + static_cast<long>(index), child);
    at(child).parent = parent;
  }

  // Detaches child from its parent; the node stays alive for re-attachment.
  void detach(NodeId child);

  // Index of child within its parent's child list, -1 if detached.
  int child_index(NodeId child) const;

  // Marks the subtree dead and detaches it from its parent.
  void erase_subtree(NodeId id);

  // Deep copy of a subtree into this arena; returns the new root id.
  // Resolved links pointing inside the copied subtree are remapped, links
  // pointing outside are kept as-is.
  NodeId clone_subtree(NodeId src);

  template <typename F>
  void walk(NodeId id, F&& f) const {
    f(id);
    for (NodeId c : at(id).children) walk(c, f);
  }

  std::vector<NodeId> subtree(NodeId id) const {
    std::vector<NodeId> out;
    walk(id, [&](NodeId n) { out.push_back(n); });
    return out;
  }

private:
  std::vector<Node> nodes_;
};

// Structural equality of two subtrees (attrs + shape; ids, spans and
// resolution links are ignored).
bool structurally_equal(const Ast& a, NodeId ra, const Ast& b, NodeId rb);

// Name-free structural hash used for canonical tie-breaking: covers kind,
// operator, literal value, declared type, flags and arity, but not
// identifier names (ordering must be stable under renaming).
uint64_t structural_hash(const Ast& a, NodeId root);

} // namespace structsim
