#include "structsim/ast.hpp"

#include <algorithm>
#include <unordered_map>

namespace structsim {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Unit: return "Unit";
    case NodeKind::ClassDecl: return "ClassDecl";
    case NodeKind::FieldDecl: return "FieldDecl";
    case NodeKind::MethodDecl: return "MethodDecl";
    case NodeKind::ConstructorDecl: return "ConstructorDecl";
    case NodeKind::ParamDecl: return "ParamDecl";
    case NodeKind::Block: return "Block";
    case NodeKind::LocalVarDecl: return "LocalVarDecl";
    case NodeKind::Assign: return "Assign";
    case NodeKind::IfStmt: return "IfStmt";
    case NodeKind::ForStmt: return "ForStmt";
    case NodeKind::WhileStmt: return "WhileStmt";
    case NodeKind::ReturnStmt: return "ReturnStmt";
    case NodeKind::ThrowStmt: return "ThrowStmt";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::Call: return "Call";
    case NodeKind::FieldAccess: return "FieldAccess";
    case NodeKind::NameRef: return "NameRef";
    case NodeKind::UnaryOp: return "UnaryOp";
    case NodeKind::BinaryOp: return "BinaryOp";
    case NodeKind::Literal: return "Literal";
    case NodeKind::OptionalWrap: return "OptionalWrap";
    case NodeKind::OptionalUnwrap: return "OptionalUnwrap";
    case NodeKind::New: return "New";
  }
  return "?";
}

void Ast::detach(NodeId child) {
  NodeId p = at(child).parent;
  if (p == kNoNode) return;
  auto& kids = at(p).children;
  kids.erase(std::remove(kids.begin(), kids.end(), child), kids.end());
  at(child).parent = kNoNode;
}

int Ast::child_index(NodeId child) const {
  NodeId p = at(child).parent;
  if (p == kNoNode) return -1;
  const auto& kids = at(p).children;
  for (size_t i = 0; i < kids.size(); ++i)
    if (kids[i] == child) return static_cast<int>(i);
  return -1;
}

void Ast::erase_subtree(NodeId id) {
  detach(id);
  walk(id, [&](NodeId n) { at(n).alive = false; });
}

NodeId Ast::clone_subtree(NodeId src) {
  std::unordered_map<NodeId, NodeId> remap;
  // Pass 1: copy nodes.
  std::vector<NodeId> order = subtree(src);
  for (NodeId n : order) {
    NodeId c = make(at(n).kind);
    Node& cn = at(c);
    const Node& sn = at(n);
    cn.name = sn.name;
    cn.type_name = sn.type_name;
    cn.op = sn.op;
    cn.literal = sn.literal;
    cn.lit_type = sn.lit_type;
    cn.is_static = sn.is_static;
    cn.is_final = sn.is_final;
    cn.has_receiver = sn.has_receiver;
    cn.resolved = sn.resolved;
    cn.span = sn.span;
    remap[n] = c;
  }
  // Pass 2: wire children and remap internal resolution links.
  for (NodeId n : order) {
    NodeId c = remap[n];
    for (NodeId k : at(n).children) add_child(c, remap[k]);
    auto it = remap.find(at(c).resolved);
    if (it != remap.end()) at(c).resolved = it->second;
  }
  return remap[src];
}

bool structurally_equal(const Ast& a, NodeId ra, const Ast& b, NodeId rb) {
  const Node& na = a.at(ra);
  const Node& nb = b.at(rb);
  if (na.kind != nb.kind || na.name != nb.name || na.type_name != nb.type_name ||
      na.op != nb.op || na.literal != nb.literal || na.lit_type != nb.lit_type ||
      na.is_static != nb.is_static || na.is_final != nb.is_final ||
      na.has_receiver != nb.has_receiver ||
      na.children.size() != nb.children.size())
    return false;
  for (size_t i = 0; i < na.children.size(); ++i)
    if (!structurally_equal(a, na.children[i], b, nb.children[i])) return false;
  return true;
}

static void hash_combine(uint64_t& h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 12) + (h >> 4);
}

static uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t structural_hash(const Ast& a, NodeId root) {
  const Node& n = a.at(root);
  uint64_t h = 14695981039346656037ULL;
  hash_combine(h, static_cast<uint64_t>(n.kind));
  hash_combine(h, fnv1a(n.op));
  hash_combine(h, fnv1a(n.literal));
  hash_combine(h, fnv1a(n.type_name));
  hash_combine(h, static_cast<uint64_t>(n.lit_type));
  hash_combine(h, (n.is_static ? 2u : 0u) | (n.is_final ? 1u : 0u));
  hash_combine(h, n.children.size());
  for (NodeId c : n.children) hash_combine(h, structural_hash(a, c));
  return h;
}

} // namespace structsim
