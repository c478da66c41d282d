#include "structsim/linearize.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "structsim/frontend.hpp"

namespace structsim {

const char* token_name(TokenKind k) {
  switch (k) {
    case TokenKind::METHOD_BEGIN: return "METHOD_BEGIN";
    case TokenKind::VARIABLE: return "VARIABLE";
    case TokenKind::LOOP_BEGIN: return "LOOP_BEGIN";
    case TokenKind::ASSIGN: return "ASSIGN";
    case TokenKind::APPLY: return "APPLY";
    case TokenKind::LOOP_END: return "LOOP_END";
    case TokenKind::METHOD_END: return "METHOD_END";
    case TokenKind::CLASS_BEGIN: return "CLASS_BEGIN";
    case TokenKind::CLASS_END: return "CLASS_END";
    case TokenKind::CONSTRUCTOR_BEGIN: return "CONSTRUCTOR_BEGIN";
    case TokenKind::CONSTRUCTOR_END: return "CONSTRUCTOR_END";
    case TokenKind::FIELD: return "FIELD";
    case TokenKind::IF_BEGIN: return "IF_BEGIN";
    case TokenKind::ELSE: return "ELSE";
    case TokenKind::IF_END: return "IF_END";
    case TokenKind::RETURN: return "RETURN";
    case TokenKind::THROW: return "THROW";
    case TokenKind::NEW: return "NEW";
    case TokenKind::BLOCK_BEGIN: return "BLOCK_BEGIN";
    case TokenKind::BLOCK_END: return "BLOCK_END";
    case TokenKind::FOR_BEGIN: return "FOR_BEGIN";
    case TokenKind::FOR_END: return "FOR_END";
  }
  return "?";
}

const char* token_display_name(TokenKind k) {
  switch (k) {
    case TokenKind::METHOD_BEGIN: return "method start";
    case TokenKind::VARIABLE: return "variable";
    case TokenKind::LOOP_BEGIN: return "loop start";
    case TokenKind::ASSIGN: return "assign";
    case TokenKind::APPLY: return "apply";
    case TokenKind::LOOP_END: return "loop end";
    case TokenKind::METHOD_END: return "method end";
    case TokenKind::CLASS_BEGIN: return "class start";
    case TokenKind::CLASS_END: return "class end";
    case TokenKind::CONSTRUCTOR_BEGIN: return "constructor start";
    case TokenKind::CONSTRUCTOR_END: return "constructor end";
    case TokenKind::FIELD: return "field";
    case TokenKind::IF_BEGIN: return "if start";
    case TokenKind::ELSE: return "else";
    case TokenKind::IF_END: return "if end";
    case TokenKind::RETURN: return "return";
    case TokenKind::THROW: return "throw";
    case TokenKind::NEW: return "new";
    case TokenKind::BLOCK_BEGIN: return "block start";
    case TokenKind::BLOCK_END: return "block end";
    case TokenKind::FOR_BEGIN: return "loop start";
    case TokenKind::FOR_END: return "loop end";
  }
  return "?";
}

namespace {

std::vector<NodeId> member_order(const Ast& ast, NodeId container, bool canonical);

struct Emitter {
  const Ast& ast;
  LinearizeMode mode;
  bool canonical_members; // eog mode reorders members, baseline keeps source
  TokenSequence out;

  bool post() const { return mode == LinearizeMode::Eog; }

  void tok(TokenKind k, NodeId n) {
    out.tokens.push_back(k);
    out.spans.push_back(ast.at(n).span);
    out.nodes.push_back(n);
  }

  void members_of(NodeId container) {
    for (NodeId m : member_order(ast, container, canonical_members)) visit(m);
  }

  void body(NodeId block) { // transparent block: children only
    for (NodeId c : ast.at(block).children)
      if (ast.at(c).alive) visit(c);
  }

  // Statement-own tokens follow their operands in postorder mode.
  void own_then_children(TokenKind k, NodeId n, const std::vector<NodeId>& exprs) {
    if (!post()) tok(k, n);
    for (NodeId e : exprs) visit(e);
    if (post()) tok(k, n);
  }

  void visit(NodeId id) {
    const Node& n = ast.at(id);
    if (!n.alive) return;
    switch (n.kind) {
      case NodeKind::Unit:
        members_of(id);
        return;
      case NodeKind::ClassDecl:
        tok(TokenKind::CLASS_BEGIN, id);
        members_of(id);
        tok(TokenKind::CLASS_END, id);
        return;
      case NodeKind::MethodDecl:
      case NodeKind::ConstructorDecl: {
        bool ctor = n.kind == NodeKind::ConstructorDecl;
        tok(ctor ? TokenKind::CONSTRUCTOR_BEGIN : TokenKind::METHOD_BEGIN, id);
        for (size_t i = 0; i + 1 < n.children.size(); ++i) visit(n.children[i]);
        body(n.children.back());
        tok(ctor ? TokenKind::CONSTRUCTOR_END : TokenKind::METHOD_END, id);
        return;
      }
      case NodeKind::ParamDecl:
        tok(TokenKind::VARIABLE, id);
        return;
      case NodeKind::FieldDecl:
        own_then_children(TokenKind::FIELD, id, n.children);
        return;
      case NodeKind::Block: // free-standing nested block
        tok(TokenKind::BLOCK_BEGIN, id);
        body(id);
        tok(TokenKind::BLOCK_END, id);
        return;
      case NodeKind::LocalVarDecl:
        own_then_children(TokenKind::VARIABLE, id, n.children);
        return;
      case NodeKind::Assign:
        own_then_children(TokenKind::ASSIGN, id, n.children);
        return;
      case NodeKind::IfStmt:
        tok(TokenKind::IF_BEGIN, id);
        visit(n.children[0]);
        body(n.children[1]);
        if (n.children.size() > 2) {
          tok(TokenKind::ELSE, id);
          body(n.children[2]);
        }
        tok(TokenKind::IF_END, id);
        return;
      case NodeKind::WhileStmt:
        tok(TokenKind::LOOP_BEGIN, id);
        visit(n.children[0]);
        body(n.children[1]);
        tok(TokenKind::LOOP_END, id);
        return;
      case NodeKind::ForStmt:
        tok(TokenKind::FOR_BEGIN, id);
        visit(n.children[0]);
        visit(n.children[1]);
        if (post()) { // update runs after the body
          body(n.children[3]);
          visit(n.children[2]);
        } else { // source order
          visit(n.children[2]);
          body(n.children[3]);
        }
        tok(TokenKind::FOR_END, id);
        return;
      case NodeKind::ReturnStmt:
        own_then_children(TokenKind::RETURN, id, n.children);
        return;
      case NodeKind::ThrowStmt:
        own_then_children(TokenKind::THROW, id, n.children);
        return;
      case NodeKind::ExprStmt:
        visit(n.children[0]);
        return;
      case NodeKind::Call:
      case NodeKind::OptionalWrap:
      case NodeKind::OptionalUnwrap:
        own_then_children(TokenKind::APPLY, id, n.children);
        return;
      case NodeKind::New:
        own_then_children(TokenKind::NEW, id, n.children);
        return;
      case NodeKind::UnaryOp:
        if (n.op == "++pre" || n.op == "++post" || n.op == "--pre" || n.op == "--post") {
          own_then_children(TokenKind::ASSIGN, id, n.children);
          return;
        }
        visit(n.children[0]);
        return;
      case NodeKind::BinaryOp:
      case NodeKind::FieldAccess:
        for (NodeId c : n.children) visit(c);
        return;
      case NodeKind::NameRef:
      case NodeKind::Literal:
        return;
    }
  }
};

// The class (or bare member) a resolved declaration belongs to, looking up
// until we reach a direct child of `container`.
NodeId owning_sibling(const Ast& ast, NodeId decl, NodeId container) {
  NodeId cur = decl;
  while (cur != kNoNode && ast.at(cur).parent != container) cur = ast.at(cur).parent;
  return cur;
}

std::vector<NodeId> member_order(const Ast& ast, NodeId container, bool canonical) {
  std::vector<NodeId> members;
  for (NodeId c : ast.at(container).children)
    if (ast.at(c).alive) members.push_back(c);
  if (!canonical) return members;

  // Class-name lookup for type-reference dependencies among classes.
  std::map<std::string, NodeId> classByName;
  for (NodeId m : members)
    if (ast.at(m).kind == NodeKind::ClassDecl) classByName[ast.at(m).name] = m;

  std::map<NodeId, std::set<NodeId>> deps; // member -> members it references
  for (NodeId m : members) {
    auto& d = deps[m];
    ast.walk(m, [&](NodeId x) {
      const Node& n = ast.at(x);
      if (!n.alive) return;
      if (n.resolved != kNoNode) {
        NodeId sib = owning_sibling(ast, n.resolved, container);
        if (sib != kNoNode && sib != m) d.insert(sib);
      }
      if (!n.type_name.empty()) {
        auto it = classByName.find(n.type_name);
        if (it != classByName.end() && it->second != m) d.insert(it->second);
      }
    });
  }

  std::map<NodeId, CanonicalKey> keys;
  for (NodeId m : members) keys[m] = canonical_key(ast, m);
  auto less = [&](NodeId a, NodeId b) {
    if (keys[a] == keys[b]) return a < b;
    return keys[a] < keys[b];
  };

  // Kahn: emit any member whose dependencies are all emitted, smallest key
  // first; cycles are broken at the smallest-key remaining member.
  std::vector<NodeId> order;
  std::set<NodeId> done;
  std::vector<NodeId> remaining = members;
  while (!remaining.empty()) {
    std::vector<NodeId> ready;
    for (NodeId m : remaining) {
      bool ok = true;
      for (NodeId d : deps[m])
        if (!done.count(d)) { ok = false; break; }
      if (ok) ready.push_back(m);
    }
    if (ready.empty()) ready = remaining; // cycle
    NodeId pick = *std::min_element(ready.begin(), ready.end(), less);
    order.push_back(pick);
    done.insert(pick);
    remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
  }
  return order;
}

} // namespace

TokenSequence tokenize(const Cpg& cpg, LinearizeMode mode) {
  Emitter e{cpg.ast, mode, mode == LinearizeMode::Eog, {}};
  e.visit(cpg.ast.root);
  return std::move(e.out);
}

std::vector<NodeId> order_members(const Cpg& cpg) {
  return member_order(cpg.ast, cpg.ast.root, true);
}

bool CanonicalKey::operator<(const CanonicalKey& o) const {
  if (token_kinds != o.token_kinds) return token_kinds < o.token_kinds;
  if (subtree_size != o.subtree_size) return subtree_size < o.subtree_size;
  return hash < o.hash;
}

bool CanonicalKey::operator==(const CanonicalKey& o) const {
  return token_kinds == o.token_kinds && subtree_size == o.subtree_size && hash == o.hash;
}

CanonicalKey canonical_key(const Ast& ast, NodeId node) {
  Emitter e{ast, LinearizeMode::Eog, true, {}};
  e.visit(node);
  CanonicalKey k;
  k.token_kinds.reserve(e.out.tokens.size());
  for (TokenKind t : e.out.tokens) k.token_kinds.push_back(static_cast<int32_t>(t));
  ast.walk(node, [&](NodeId n) { k.subtree_size += ast.at(n).alive ? 1 : 0; });
  k.hash = structural_hash(ast, node);
  return k;
}

std::string dump_tokens(const TokenSequence& seq) {
  std::string s;
  for (TokenKind t : seq.tokens) {
    s += token_display_name(t);
    s += '\n';
  }
  return s;
}

std::string canonical_serialization(const Cpg& cpg) {
  Ast ast = cpg.ast; // private copy: reorder + rename freely

  // Reorder members of the unit and of each class canonically.
  auto reorder = [&](NodeId container) {
    std::vector<NodeId> order = member_order(ast, container, true);
    std::vector<NodeId> rest;
    for (NodeId c : ast.at(container).children)
      if (!ast.at(c).alive) rest.push_back(c);
    auto& kids = ast.at(container).children;
    kids = order;
    kids.insert(kids.end(), rest.begin(), rest.end());
  };
  reorder(ast.root);
  for (NodeId c : ast.at(ast.root).children)
    if (ast.at(c).alive && ast.at(c).kind == NodeKind::ClassDecl) reorder(c);

  // Canonical names per declaration, assigned in emission order.
  std::map<NodeId, std::string> newName;
  std::map<std::string, std::string> classRename;
  int nc = 0, nm = 0, nf = 0, nv = 0;
  ast.walk(ast.root, [&](NodeId id) {
    Node& n = ast.at(id);
    if (!n.alive) return;
    switch (n.kind) {
      case NodeKind::ClassDecl:
        newName[id] = "C" + std::to_string(nc++);
        classRename[n.name] = newName[id];
        break;
      case NodeKind::MethodDecl: newName[id] = "m" + std::to_string(nm++); break;
      case NodeKind::FieldDecl: newName[id] = "f" + std::to_string(nf++); break;
      case NodeKind::ParamDecl:
      case NodeKind::LocalVarDecl: newName[id] = "v" + std::to_string(nv++); break;
      default: break;
    }
  });
  ast.walk(ast.root, [&](NodeId id) {
    Node& n = ast.at(id);
    auto it = newName.find(id);
    if (it != newName.end()) n.name = it->second;
    if (n.kind == NodeKind::ConstructorDecl) {
      NodeId cls = n.parent;
      if (cls != kNoNode && newName.count(cls)) n.name = newName[cls];
    }
    if (n.resolved != kNoNode) {
      auto rt = newName.find(n.resolved);
      if (rt != newName.end()) n.name = rt->second;
      if (ast.at(n.resolved).kind == NodeKind::ConstructorDecl ||
          ast.at(n.resolved).kind == NodeKind::ClassDecl) {
        NodeId cls = ast.at(n.resolved).kind == NodeKind::ClassDecl
                         ? n.resolved
                         : ast.at(n.resolved).parent;
        if (newName.count(cls)) n.name = newName[cls];
      }
    }
    auto ct = classRename.find(n.type_name);
    if (ct != classRename.end()) n.type_name = ct->second;
  });

  return pretty_print_unit(ast);
}

} // namespace structsim
