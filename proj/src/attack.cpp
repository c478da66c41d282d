#include "structsim/attack.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <set>
#include <utility>

#include <json.hpp>

#include "structsim/cpg.hpp"
#include "structsim/errors.hpp"
#include "structsim/frontend.hpp"
#include "structsim/interp.hpp"

namespace structsim {

namespace {

size_t pick(std::mt19937_64& rng, size_t n) {
  std::uniform_int_distribution<size_t> d(0, n - 1);
  return d(rng);
}

bool kind_is_expr(NodeKind k) {
  switch (k) {
    case NodeKind::Call:
    case NodeKind::FieldAccess:
    case NodeKind::NameRef:
    case NodeKind::UnaryOp:
    case NodeKind::BinaryOp:
    case NodeKind::Literal:
    case NodeKind::OptionalWrap:
    case NodeKind::OptionalUnwrap:
    case NodeKind::New:
      return true;
    default:
      return false;
  }
}

std::vector<NodeId> alive_nodes(const Ast& ast) {
  std::vector<NodeId> out;
  ast.walk(ast.root, [&](NodeId n) { out.push_back(n); });
  return out;
}

bool name_taken(const Ast& ast, const std::string& name) {
  bool taken = false;
  ast.walk(ast.root, [&](NodeId n) {
    if (ast.at(n).name == name) taken = true;
  });
  return taken;
}

std::string fresh_name(const Ast& ast, const std::string& prefix) {
  for (int i = 0;; ++i) {
    std::string c = prefix + std::to_string(i);
    if (!name_taken(ast, c)) return c;
  }
}

std::string where_of(const Ast& ast, NodeId n) {
  NodeId c = enclosing_callable(ast, n);
  if (c != kNoNode) return ast.at(c).name;
  NodeId k = enclosing_class(ast, n);
  if (k != kNoNode && ast.at(k).kind == NodeKind::ClassDecl) return ast.at(k).name;
  return "<unit>";
}

bool inside_field_decl(const Ast& ast, NodeId n) {
  for (NodeId a = ast.at(n).parent; a != kNoNode; a = ast.at(a).parent)
    if (ast.at(a).kind == NodeKind::FieldDecl) return true;
  return false;
}

// Division and remainder can fault; hoisting or re-running them is unsafe.
bool subtree_has_div(const Ast& ast, NodeId r) {
  bool found = false;
  ast.walk(r, [&](NodeId n) {
    const Node& k = ast.at(n);
    if (k.kind == NodeKind::BinaryOp && (k.op == "/" || k.op == "%")) found = true;
  });
  return found;
}

// ---------------------------------------------------------------------------
// optional-wrap: e  ->  Optional.of(e).get()   (or .orElse(0))

bool wrap_position_ok(const Ast& ast, NodeId e) {
  const Node& n = ast.at(e);
  if (!kind_is_expr(n.kind)) return false;
  NodeId p = n.parent;
  if (p == kNoNode) return false;
  const Node& pn = ast.at(p);
  int idx = ast.child_index(e);
  switch (pn.kind) {
    case NodeKind::LocalVarDecl:
    case NodeKind::ReturnStmt:
    case NodeKind::ExprStmt:
    case NodeKind::BinaryOp:
    case NodeKind::OptionalWrap:
    case NodeKind::OptionalUnwrap:
    case NodeKind::New:
      break;
    case NodeKind::Assign:
      if (idx == 0) return false; // assignment target must stay an lvalue
      break;
    case NodeKind::IfStmt:
    case NodeKind::WhileStmt:
      if (idx != 0) return false;
      break;
    case NodeKind::ForStmt:
      if (idx != 1) return false; // only the condition is an expression slot
      break;
    case NodeKind::Call:
      if (pn.has_receiver && idx == 0) return false; // keep receivers typed
      break;
    default:
      return false; // UnaryOp operands, throw operands, field receivers
  }
  return !inside_field_decl(ast, e);
}

bool op_optional_wrap(Ast& ast, std::mt19937_64& rng, AttackEdit* edit) {
  std::vector<NodeId> cands;
  for (NodeId n : alive_nodes(ast))
    if (wrap_position_ok(ast, n)) cands.push_back(n);
  if (cands.empty()) return false;
  NodeId e = cands[pick(rng, cands.size())];
  bool use_orelse = pick(rng, 2) == 1;
  if (edit) edit->where = where_of(ast, e);

  NodeId p = ast.at(e).parent;
  int idx = ast.child_index(e);
  ast.detach(e);
  NodeId w = ast.make(NodeKind::OptionalWrap);
  ast.at(w).op = "of";
  ast.add_child(w, e);
  NodeId u = ast.make(NodeKind::OptionalUnwrap);
  ast.at(u).op = use_orelse ? "orElse" : "get";
  ast.add_child(u, w);
  if (use_orelse) {
    NodeId d = ast.make(NodeKind::Literal);
    ast.at(d).lit_type = LitType::Int;
    ast.at(d).literal = "0";
    ast.add_child(u, d);
  }
  ast.insert_child(p, u, static_cast<size_t>(idx));
  return true;
}

// ---------------------------------------------------------------------------
// extract-expression: pure subexpression -> fresh local declared just before
// the owning statement.

std::string infer_type(const Ast& ast, NodeId e); // fwd

std::string decl_type(const Ast& ast, NodeId d) {
  const Node& n = ast.at(d);
  if (n.type_name == "var")
    return n.children.empty() ? std::string() : infer_type(ast, n.children[0]);
  return n.type_name;
}

std::string infer_type(const Ast& ast, NodeId e) {
  const Node& n = ast.at(e);
  switch (n.kind) {
    case NodeKind::Literal:
      switch (n.lit_type) {
        case LitType::Int: return "int";
        case LitType::Double: return "double";
        case LitType::Bool: return "boolean";
        case LitType::String: return "String";
        default: return "";
      }
    case NodeKind::NameRef:
      return n.resolved == kNoNode ? "" : decl_type(ast, n.resolved);
    case NodeKind::FieldAccess:
      return n.resolved == kNoNode ? "" : ast.at(n.resolved).type_name;
    case NodeKind::Call: {
      if (n.resolved != kNoNode) {
        const std::string& t = ast.at(n.resolved).type_name;
        return t == "void" ? "" : t;
      }
      if (n.name == "sqrt") return "double";
      if (n.name == "abs" || n.name == "min" || n.name == "max") {
        std::string t;
        for (size_t i = n.has_receiver ? 1 : 0; i < n.children.size(); ++i) {
          std::string a = infer_type(ast, n.children[i]);
          if (a == "double") return "double";
          if (a != "int") return "";
          t = a;
        }
        return t;
      }
      return ""; // readLine: type depends on input, println: void
    }
    case NodeKind::UnaryOp:
      if (n.op == "!") return "boolean";
      if (n.op == "neg") return infer_type(ast, n.children[0]);
      return "";
    case NodeKind::BinaryOp: {
      if (n.op == "<" || n.op == "<=" || n.op == ">" || n.op == ">=" ||
          n.op == "==" || n.op == "!=" || n.op == "&&" || n.op == "||")
        return "boolean";
      std::string a = infer_type(ast, n.children[0]);
      std::string b = infer_type(ast, n.children[1]);
      if (a.empty() || b.empty()) return "";
      if (n.op == "+" && (a == "String" || b == "String")) return "String";
      if (a == "String" || b == "String" || a == "boolean" || b == "boolean") return "";
      if (a == "double" || b == "double") return "double";
      return "int";
    }
    case NodeKind::OptionalUnwrap:
      return infer_type(ast, n.children[0]);
    case NodeKind::New:
      return n.resolved == kNoNode ? "" : n.name;
    default:
      return ""; // OptionalWrap: Optional is not a declarable local type here
  }
}

bool extract_position_ok(const Ast& ast, NodeId e) {
  const Node& n = ast.at(e);
  if (!kind_is_expr(n.kind)) return false;
  NodeId p = n.parent;
  if (p == kNoNode) return false;
  const Node& pn = ast.at(p);
  int idx = ast.child_index(e);
  if (pn.kind == NodeKind::Assign && idx == 0) return false;
  if (pn.kind == NodeKind::UnaryOp && pn.op != "!" && pn.op != "neg") return false;
  if (pn.kind == NodeKind::ThrowStmt) return false;
  if (pn.kind == NodeKind::ExprStmt) return false; // result would be a bare name
  if (pn.kind == NodeKind::FieldAccess) return false;
  return !inside_field_decl(ast, e);
}

bool op_extract_expression(Ast& ast, std::mt19937_64& rng, AttackEdit* edit) {
  struct Site {
    NodeId stmt;
    NodeId expr;
    std::string type;
  };
  std::vector<Site> sites;
  for (NodeId s : alive_nodes(ast)) {
    const Node& sn = ast.at(s);
    if (!is_statement(sn.kind) || sn.kind == NodeKind::Block) continue;
    if (sn.parent == kNoNode || ast.at(sn.parent).kind != NodeKind::Block) continue;
    std::vector<NodeId> in_s = ast.subtree(s);
    std::set<NodeId> in_s_set(in_s.begin(), in_s.end());
    // Locations written anywhere in the statement: extraction would read
    // them too early.
    std::set<Loc> writes;
    for (NodeId n : in_s)
      for (const Loc& l : defs_at(ast, n)) writes.insert(l);
    for (NodeId e : in_s) {
      if (e == s || !extract_position_ok(ast, e)) continue;
      if (!subtree_is_pure_expr(ast, e) || subtree_has_div(ast, e)) continue;
      std::string ty = infer_type(ast, e);
      if (ty.empty()) continue;
      bool ok = true;
      for (NodeId m : ast.subtree(e)) {
        const Node& mn = ast.at(m);
        for (const Loc& l : uses_at(ast, m))
          if (writes.count(l)) ok = false;
        // Names declared inside the statement would be out of scope at the
        // hoisted declaration.
        if ((mn.kind == NodeKind::NameRef) && mn.resolved != kNoNode &&
            in_s_set.count(mn.resolved))
          ok = false;
      }
      if (ok) sites.push_back({s, e, ty});
    }
  }
  if (sites.empty()) return false;
  const Site& site = sites[pick(rng, sites.size())];
  if (edit) edit->where = where_of(ast, site.stmt);

  std::string nm = fresh_name(ast, "tmp");
  NodeId p = ast.at(site.expr).parent;
  int cidx = ast.child_index(site.expr);
  ast.detach(site.expr);
  NodeId ref = ast.make(NodeKind::NameRef);
  ast.at(ref).name = nm;
  ast.insert_child(p, ref, static_cast<size_t>(cidx));
  NodeId d = ast.make(NodeKind::LocalVarDecl);
  ast.at(d).name = nm;
  ast.at(d).type_name = site.type;
  ast.add_child(d, site.expr);
  NodeId blk = ast.at(site.stmt).parent;
  ast.insert_child(blk, d, static_cast<size_t>(ast.child_index(site.stmt)));
  return true;
}

// ---------------------------------------------------------------------------
// constant-container: literal -> static final field in a fresh class.

bool op_constant_container(Ast& ast, std::mt19937_64& rng, AttackEdit* edit) {
  // A classless unit cannot gain a sibling class.
  for (NodeId c : ast.at(ast.root).children)
    if (ast.at(c).kind != NodeKind::ClassDecl) return false;
  std::vector<NodeId> cands;
  for (NodeId n : alive_nodes(ast)) {
    const Node& k = ast.at(n);
    if (k.kind != NodeKind::Literal || k.lit_type == LitType::None) continue;
    if (enclosing_callable(ast, n) == kNoNode) continue;
    NodeId p = k.parent;
    if (p != kNoNode && ast.at(p).kind == NodeKind::UnaryOp) continue; // lvalue slots
    cands.push_back(n);
  }
  if (cands.empty()) return false;
  NodeId lit = cands[pick(rng, cands.size())];
  if (edit) edit->where = where_of(ast, lit);

  std::string ty;
  switch (ast.at(lit).lit_type) {
    case LitType::Int: ty = "int"; break;
    case LitType::Double: ty = "double"; break;
    case LitType::Bool: ty = "boolean"; break;
    default: ty = "String"; break;
  }
  NodeId cls = ast.make(NodeKind::ClassDecl);
  ast.at(cls).name = fresh_name(ast, "Constants");
  NodeId f = ast.make(NodeKind::FieldDecl);
  ast.at(f).name = "C0";
  ast.at(f).type_name = ty;
  ast.at(f).is_static = true;
  ast.at(f).is_final = true;
  NodeId init = ast.make(NodeKind::Literal);
  ast.at(init).literal = ast.at(lit).literal;
  ast.at(init).lit_type = ast.at(lit).lit_type;
  ast.add_child(f, init);
  ast.add_child(cls, f);
  ast.add_child(ast.root, cls);

  NodeId p = ast.at(lit).parent;
  int idx = ast.child_index(lit);
  ast.erase_subtree(lit);
  NodeId fa = ast.make(NodeKind::FieldAccess);
  ast.at(fa).name = "C0";
  ast.at(fa).is_static = true;
  ast.at(fa).resolved = f;
  ast.insert_child(p, fa, static_cast<size_t>(idx));
  return true;
}

// ---------------------------------------------------------------------------
// swap-if-else: negate the condition and swap the branches.

bool op_swap_if_else(Ast& ast, std::mt19937_64& rng, AttackEdit* edit) {
  std::vector<NodeId> cands;
  for (NodeId n : alive_nodes(ast)) {
    const Node& k = ast.at(n);
    if (k.kind == NodeKind::IfStmt && k.children.size() == 3) cands.push_back(n);
  }
  if (cands.empty()) return false;
  NodeId s = cands[pick(rng, cands.size())];
  if (edit) edit->where = where_of(ast, s);

  NodeId cond = ast.at(s).children[0];
  Node& cn = ast.at(cond);
  if (cn.kind == NodeKind::BinaryOp && (cn.op == "==" || cn.op == "!=")) {
    cn.op = cn.op == "==" ? "!=" : "==";
  } else {
    ast.detach(cond);
    NodeId nt = ast.make(NodeKind::UnaryOp);
    ast.at(nt).op = "!";
    ast.add_child(nt, cond);
    ast.insert_child(s, nt, 0);
  }
  auto& kids = ast.at(s).children;
  std::swap(kids[1], kids[2]);
  return true;
}

// ---------------------------------------------------------------------------
// insert-method / insert-constructor: trivial or throwing members.

void add_throw_body(Ast& ast, NodeId block) {
  NodeId t = ast.make(NodeKind::ThrowStmt);
  NodeId nw = ast.make(NodeKind::New);
  ast.at(nw).name = "UnsupportedOperation";
  ast.add_child(t, nw);
  ast.add_child(block, t);
}

bool op_insert_method(Ast& ast, std::mt19937_64& rng, AttackEdit* edit) {
  std::vector<NodeId> hosts;
  for (NodeId c : ast.at(ast.root).children)
    if (ast.at(c).kind == NodeKind::ClassDecl) hosts.push_back(c);
  if (hosts.empty()) hosts.push_back(ast.root); // classless unit hosts bare members
  NodeId host = hosts[pick(rng, hosts.size())];
  bool thrower = pick(rng, 2) == 1;
  size_t nparams = pick(rng, 3);
  if (edit)
    edit->where = ast.at(host).kind == NodeKind::ClassDecl ? ast.at(host).name : "<unit>";

  NodeId m = ast.make(NodeKind::MethodDecl);
  ast.at(m).name = fresh_name(ast, "unused");
  ast.at(m).type_name = thrower && pick(rng, 2) == 1 ? "int" : "void";
  for (size_t i = 0; i < nparams; ++i) {
    NodeId pd = ast.make(NodeKind::ParamDecl);
    ast.at(pd).name = "p" + std::to_string(i);
    ast.at(pd).type_name = i % 2 == 0 ? "int" : "double";
    ast.add_child(m, pd);
  }
  NodeId b = ast.make(NodeKind::Block);
  if (thrower) add_throw_body(ast, b);
  ast.add_child(m, b);
  ast.add_child(host, m);
  return true;
}

bool op_insert_constructor(Ast& ast, std::mt19937_64& rng, AttackEdit* edit) {
  std::vector<NodeId> cands;
  for (NodeId c : ast.at(ast.root).children) {
    if (ast.at(c).kind != NodeKind::ClassDecl) continue;
    bool has_ctor = false;
    for (NodeId m : ast.at(c).children)
      if (ast.at(m).kind == NodeKind::ConstructorDecl) has_ctor = true;
    if (!has_ctor) cands.push_back(c);
  }
  if (cands.empty()) return false;
  NodeId cls = cands[pick(rng, cands.size())];
  if (edit) edit->where = ast.at(cls).name;

  bool instantiated = false;
  for (NodeId n : alive_nodes(ast))
    if (ast.at(n).kind == NodeKind::New && ast.at(n).resolved == cls) instantiated = true;
  bool thrower = !instantiated && pick(rng, 2) == 1;

  NodeId ct = ast.make(NodeKind::ConstructorDecl);
  ast.at(ct).name = ast.at(cls).name;
  if (thrower) {
    NodeId pd = ast.make(NodeKind::ParamDecl);
    ast.at(pd).name = "p0";
    ast.at(pd).type_name = "int";
    ast.add_child(ct, pd);
  }
  NodeId b = ast.make(NodeKind::Block);
  if (thrower) add_throw_body(ast, b);
  ast.add_child(ct, b);
  ast.add_child(cls, ct);
  return true;
}

// ---------------------------------------------------------------------------
// introduce-getter: instance field reads -> accessor calls.

bool op_introduce_getter(Ast& ast, std::mt19937_64& rng, AttackEdit* edit) {
  struct Cand {
    NodeId field;
    std::vector<NodeId> reads;
  };
  std::vector<Cand> cands;
  std::vector<NodeId> nodes = alive_nodes(ast);
  for (NodeId f : nodes) {
    const Node& fn = ast.at(f);
    if (fn.kind != NodeKind::FieldDecl || fn.is_static) continue;
    if (fn.parent == kNoNode || ast.at(fn.parent).kind != NodeKind::ClassDecl) continue;
    Cand c{f, {}};
    for (NodeId g : nodes) {
      const Node& gn = ast.at(g);
      if (gn.kind != NodeKind::FieldAccess || gn.resolved != f) continue;
      NodeId p = gn.parent;
      if (p != kNoNode && ast.at(p).kind == NodeKind::Assign && ast.child_index(g) == 0)
        continue;
      if (p != kNoNode && ast.at(p).kind == NodeKind::UnaryOp && ast.at(p).op != "!" &&
          ast.at(p).op != "neg")
        continue;
      c.reads.push_back(g);
    }
    if (!c.reads.empty()) cands.push_back(c);
  }
  if (cands.empty()) return false;
  const Cand& c = cands[pick(rng, cands.size())];
  NodeId cls = ast.at(c.field).parent;
  if (edit) edit->where = ast.at(cls).name;

  std::string base = ast.at(c.field).name;
  if (!base.empty()) base[0] = static_cast<char>(std::toupper(base[0]));
  std::string gname = "get" + base;
  while (name_taken(ast, gname)) gname += "X";

  NodeId m = ast.make(NodeKind::MethodDecl);
  ast.at(m).name = gname;
  ast.at(m).type_name = ast.at(c.field).type_name;
  NodeId b = ast.make(NodeKind::Block);
  NodeId r = ast.make(NodeKind::ReturnStmt);
  NodeId fa = ast.make(NodeKind::FieldAccess);
  ast.at(fa).name = ast.at(c.field).name;
  ast.at(fa).resolved = c.field;
  ast.add_child(r, fa);
  ast.add_child(b, r);
  ast.add_child(m, b);
  ast.add_child(cls, m);

  for (NodeId g : c.reads) {
    NodeId p = ast.at(g).parent;
    int idx = ast.child_index(g);
    NodeId call = ast.make(NodeKind::Call);
    ast.at(call).name = gname;
    ast.at(call).resolved = m;
    if (!ast.at(g).children.empty()) {
      NodeId recv = ast.at(g).children[0];
      ast.detach(recv);
      ast.at(call).has_receiver = true;
      ast.add_child(call, recv);
    }
    ast.erase_subtree(g);
    ast.insert_child(p, call, static_cast<size_t>(idx));
  }
  return true;
}

// ---------------------------------------------------------------------------
// for-to-while: for (init; cond; upd) B  ->  { init; while (cond) { B; upd } }

bool op_for_to_while(Ast& ast, std::mt19937_64& rng, AttackEdit* edit) {
  std::vector<NodeId> cands;
  for (NodeId n : alive_nodes(ast))
    if (ast.at(n).kind == NodeKind::ForStmt) cands.push_back(n);
  if (cands.empty()) return false;
  NodeId s = cands[pick(rng, cands.size())];
  if (edit) edit->where = where_of(ast, s);

  NodeId parent = ast.at(s).parent;
  int idx = ast.child_index(s);
  NodeId init = ast.at(s).children[0];
  NodeId cond = ast.at(s).children[1];
  NodeId upd = ast.at(s).children[2];
  NodeId body = ast.at(s).children[3];
  ast.detach(init);
  ast.detach(cond);
  ast.detach(upd);
  ast.detach(body);
  ast.erase_subtree(s);

  NodeId w = ast.make(NodeKind::WhileStmt);
  ast.add_child(w, cond);
  ast.add_child(body, upd);
  ast.add_child(w, body);
  NodeId blk = ast.make(NodeKind::Block);
  ast.add_child(blk, init);
  ast.add_child(blk, w);
  ast.insert_child(parent, blk, static_cast<size_t>(idx));
  return true;
}

// ---------------------------------------------------------------------------
// Dead-statement insertion.

const std::vector<std::string>& default_pool() {
  static const std::vector<std::string> pool = {
      "int $V = 7;",
      "double $V = sqrt(9.0);",
      "int $V = min(3, 4) + max(1, 2);",
      "boolean $V = 1 < 2;",
      "String $V = \"unused\";",
      "if (1 < 2) { int $V = 4; }",
  };
  return pool;
}

// Deep copy across arenas; resolution links are dropped (the attacked
// program is reparsed and re-resolved before use).
NodeId import_subtree(Ast& dst, const Ast& src, NodeId n) {
  const Node& sn = src.at(n);
  NodeId d = dst.make(sn.kind);
  {
    Node& dn = dst.at(d);
    dn.name = sn.name;
    dn.type_name = sn.type_name;
    dn.op = sn.op;
    dn.literal = sn.literal;
    dn.lit_type = sn.lit_type;
    dn.is_static = sn.is_static;
    dn.is_final = sn.is_final;
    dn.has_receiver = sn.has_receiver;
  }
  for (NodeId c : sn.children) {
    NodeId cc = import_subtree(dst, src, c);
    dst.add_child(d, cc);
  }
  return d;
}

NodeId import_statement(Ast& dst, const std::string& stmt_text) {
  Ast unit = parse_source("void __t() { " + stmt_text + " }", "<pool>");
  NodeId method = unit.at(unit.root).children.at(0);
  NodeId body = unit.at(method).children.back();
  NodeId stmt = unit.at(body).children.at(0);
  return import_subtree(dst, unit, stmt);
}

std::string substitute(std::string text, const std::string& from, const std::string& to) {
  size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

bool insert_one_dead(Ast& ast, const std::vector<std::string>& pool,
                     std::mt19937_64& rng, AttackEdit* edit) {
  std::vector<std::pair<NodeId, size_t>> sites;
  for (NodeId n : alive_nodes(ast)) {
    if (ast.at(n).kind != NodeKind::Block) continue;
    if (enclosing_callable(ast, n) == kNoNode) continue;
    for (size_t i = 0; i <= ast.at(n).children.size(); ++i) sites.emplace_back(n, i);
  }
  if (sites.empty()) return false;

  // Pure single-use-free local declarations from the program itself can be
  // cloned under a fresh name; the normalizer provably removes both kinds.
  std::vector<NodeId> clonable;
  for (NodeId n : alive_nodes(ast)) {
    const Node& k = ast.at(n);
    if (k.kind != NodeKind::LocalVarDecl || k.children.size() != 1) continue;
    if (k.parent == kNoNode || ast.at(k.parent).kind != NodeKind::Block) continue;
    if (k.type_name == "var") continue; // cloned init may not re-infer cleanly
    if (!subtree_is_pure_expr(ast, k.children[0])) continue;
    if (subtree_has_div(ast, k.children[0])) continue;
    clonable.push_back(n);
  }

  size_t choice = pick(rng, pool.size() + clonable.size());
  auto [blk, idx] = sites[pick(rng, sites.size())];
  if (edit) edit->where = where_of(ast, blk);
  NodeId stmt;
  if (choice < pool.size()) {
    std::string text = substitute(pool[choice], "$V", fresh_name(ast, "pad"));
    stmt = import_statement(ast, text);
  } else {
    stmt = ast.clone_subtree(clonable[choice - pool.size()]);
    ast.at(stmt).name = fresh_name(ast, "pad");
  }
  ast.insert_child(blk, stmt, idx);
  return true;
}

// ---------------------------------------------------------------------------
// Drivers: mutate, pretty-print, reparse, check semantics, commit or revert.

std::vector<SourceFile> unit_files(const Ast& ast, const std::string& stem) {
  return print_submission(ast, stem).files;
}

Ast reparse(const std::string& id, std::vector<SourceFile> files) {
  Submission tmp;
  tmp.id = id;
  tmp.files = std::move(files);
  return parse_submission(tmp);
}

int default_intensity(const Ast& ast) {
  int stmts = 0;
  ast.walk(ast.root, [&](NodeId n) {
    NodeKind k = ast.at(n).kind;
    if (is_statement(k) && k != NodeKind::Block) ++stmts;
  });
  return std::max(1, stmts / 10);
}

struct OpEntry {
  const char* name;
  bool (*fn)(Ast&, std::mt19937_64&, AttackEdit*);
};

const OpEntry kOps[] = {
    {"optional-wrap", op_optional_wrap},
    {"extract-expression", op_extract_expression},
    {"constant-container", op_constant_container},
    {"swap-if-else", op_swap_if_else},
    {"insert-method", op_insert_method},
    {"insert-constructor", op_insert_constructor},
    {"introduce-getter", op_introduce_getter},
    {"for-to-while", op_for_to_while},
};

AttackResult attack_loop(const Submission& s, const AttackSpec& spec,
                         const std::vector<std::vector<std::string>>& inputs,
                         bool insertion) {
  Ast cur = parse_submission(s);
  std::vector<std::vector<std::string>> in = inputs.empty()
      ? std::vector<std::vector<std::string>>{{}}
      : inputs;
  InterpOptions iopt;
  iopt.step_budget = spec.step_budget;
  ProgramIO ref = interpret_many(cur, in, iopt);
  std::mt19937_64 rng(spec.seed);
  int want = spec.intensity > 0 ? spec.intensity : default_intensity(cur);
  const std::vector<std::string>& pool = spec.pool.empty() ? default_pool() : spec.pool;

  std::vector<AttackEdit> edits;
  std::set<std::string> exhausted; // no applicable site since the last commit
  int attempts = 0;
  const int cap = want * 50 + 50;
  while (static_cast<int>(edits.size()) < want) {
    if (++attempts > cap)
      throw AttackError("attack on " + s.id + " stalled at " +
                        std::to_string(edits.size()) + "/" + std::to_string(want) +
                        " edits");
    AttackEdit ed;
    bool did;
    std::vector<SourceFile> before = unit_files(cur, s.id);
    if (insertion) {
      ed.op = "insert-dead";
      did = insert_one_dead(cur, pool, rng, &ed);
      if (!did) throw AttackError("no insertion site in " + s.id);
    } else {
      const OpEntry& op = kOps[pick(rng, std::size(kOps))];
      ed.op = op.name;
      if (exhausted.count(ed.op)) continue;
      did = op.fn(cur, rng, &ed);
      if (!did) {
        exhausted.insert(ed.op);
        if (exhausted.size() == std::size(kOps))
          throw AttackError("no refactoring operation applicable to " + s.id);
        continue;
      }
    }
    bool ok = false;
    try {
      Ast re = reparse(s.id, unit_files(cur, s.id));
      ok = io_equal(interpret_many(re, in, iopt), ref);
      if (ok) cur = std::move(re);
    } catch (const Error&) {
      ok = false;
    }
    if (ok) {
      edits.push_back(ed);
      exhausted.clear();
    } else {
      cur = reparse(s.id, before);
    }
  }

  AttackResult r;
  r.attacked.id = s.id;
  r.attacked.files = unit_files(cur, s.id);
  r.edits = std::move(edits);
  return r;
}

} // namespace

const std::vector<std::string>& refactor_ops() {
  static const std::vector<std::string> ops = [] {
    std::vector<std::string> v;
    for (const OpEntry& e : kOps) v.push_back(e.name);
    return v;
  }();
  return ops;
}

bool apply_refactor_op(Ast& ast, const std::string& op, std::mt19937_64& rng,
                       AttackEdit* edit) {
  for (const OpEntry& e : kOps)
    if (op == e.name) {
      if (edit) edit->op = op;
      return e.fn(ast, rng, edit);
    }
  throw UsageError("unknown refactoring operation: " + op);
}

AttackResult insert_dead_code(const Submission& s, const AttackSpec& spec,
                              const std::vector<std::vector<std::string>>& inputs) {
  return attack_loop(s, spec, inputs, true);
}

AttackResult refactor_attack(const Submission& s, const AttackSpec& spec,
                             const std::vector<std::vector<std::string>>& inputs) {
  return attack_loop(s, spec, inputs, false);
}

AttackResult run_attack(const Submission& s, const AttackSpec& spec,
                        const std::vector<std::vector<std::string>>& inputs) {
  return spec.kind == AttackKind::Insertion ? insert_dead_code(s, spec, inputs)
                                            : refactor_attack(s, spec, inputs);
}

std::string edit_log_json(const std::vector<AttackEdit>& edits) {
  nlohmann::json arr = nlohmann::json::array();
  for (const AttackEdit& e : edits) arr.push_back({{"op", e.op}, {"where", e.where}});
  return arr.dump(2) + "\n";
}

} // namespace structsim
