#include "structsim/catalog.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "structsim/errors.hpp"
#include "structsim/frontend.hpp"
#include "structsim/linearize.hpp"

namespace structsim {

namespace {

NodePattern pat(const char* role, NodeKind k) { return NodePattern(role, k); }
NodePattern any(const char* role) {
  NodePattern p(role, std::nullopt);
  p.subtree = true;
  return p;
}
// Kind-constrained wildcard: matches the kind but leaves children free.
NodePattern sub(const char* role, NodeKind k) {
  NodePattern p(role, k);
  p.subtree = true;
  return p;
}

bool is_local(const Ast& ast, NodeId decl) {
  return decl != kNoNode && (ast.at(decl).kind == NodeKind::LocalVarDecl ||
                             ast.at(decl).kind == NodeKind::ParamDecl);
}

std::vector<NodeId> refs_to(const Ast& ast, NodeId decl) {
  std::vector<NodeId> out;
  ast.walk(ast.root, [&](NodeId n) {
    if (ast.at(n).alive && ast.at(n).resolved == decl && n != decl) out.push_back(n);
  });
  return out;
}

bool is_read_ref(const Ast& ast, NodeId ref) { return !uses_at(ast, ref).empty(); }

// ------------------------------------------------------------ predicates ---

Predicate no_call_sites(const std::string& role) {
  return {"no call sites of " + role, [role](const Cpg& cpg, PatternMatch& m) {
            NodeId decl = m.at(role);
            for (NodeId r : refs_to(cpg.ast, decl))
              if (cpg.ast.at(r).kind == NodeKind::Call) return false;
            return true;
          }};
}

Predicate class_unreferenced(const std::string& role) {
  return {"class " + role + " unreferenced", [role](const Cpg& cpg, PatternMatch& m) {
            const Ast& ast = cpg.ast;
            NodeId k = m.at(role);
            const std::string& cname = ast.at(k).name;
            bool used = false;
            ast.walk(ast.root, [&](NodeId n) {
              if (!ast.at(n).alive || n == k) return;
              if (ast.at(n).type_name == cname) used = true;
              if (ast.at(n).kind == NodeKind::New && ast.at(n).name == cname) used = true;
              if (ast.at(n).resolved != kNoNode) {
                NodeId c = ast.at(n).resolved;
                while (c != kNoNode && c != k) c = ast.at(c).parent;
                if (c == k) used = true;
              }
            });
            return !used;
          }};
}

Predicate pure_subtree(const std::string& role) {
  return {role + " is pure", [role](const Cpg& cpg, PatternMatch& m) {
            return subtree_is_pure_expr(cpg.ast, m.at(role));
          }};
}

// Getter shapes: non-void, no parameters, body is a single return of either
// an instance field of the enclosing class, or a constant (literal or
// static-final field reference).
struct GetterInfo {
  NodeId ret = kNoNode;
  NodeId value = kNoNode;
  bool constant = false;
};

bool getter_info(const Ast& ast, NodeId m, GetterInfo& out) {
  if (m == kNoNode || !ast.at(m).alive) return false;
  const Node& n = ast.at(m);
  if (n.kind != NodeKind::MethodDecl || n.type_name == "void") return false;
  if (n.children.size() != 1) return false; // no parameters
  NodeId body = n.children[0];
  if (ast.at(body).children.size() != 1) return false;
  NodeId ret = ast.at(body).children[0];
  if (ast.at(ret).kind != NodeKind::ReturnStmt || ast.at(ret).children.empty()) return false;
  NodeId v = ast.at(ret).children[0];
  const Node& vn = ast.at(v);
  out.ret = ret;
  out.value = v;
  if (vn.kind == NodeKind::Literal) {
    out.constant = true;
    return true;
  }
  if (vn.kind == NodeKind::FieldAccess && vn.children.empty() && vn.resolved != kNoNode) {
    out.constant = ast.at(vn.resolved).is_static && ast.at(vn.resolved).is_final;
    if (!out.constant) {
      // Instance field: must belong to the getter's own class.
      NodeId cls = enclosing_class(ast, m);
      NodeId fcls = enclosing_class(ast, vn.resolved);
      if (cls != fcls) return false;
    }
    return true;
  }
  return false;
}

Predicate call_resolves_getter(bool wantConstant) {
  std::string name = wantConstant ? "resolves to constant getter" : "resolves to field getter";
  return {name, [wantConstant](const Cpg& cpg, PatternMatch& m) {
            const Ast& ast = cpg.ast;
            NodeId call = m.at("call");
            GetterInfo gi;
            if (!getter_info(ast, ast.at(call).resolved, gi)) return false;
            if (gi.constant != wantConstant) return false;
            m.roles["getter"] = ast.at(call).resolved;
            m.roles["value"] = gi.value;
            if (!gi.constant) m.roles["field"] = ast.at(gi.value).resolved;
            return true;
          }};
}

Predicate is_getter(const std::string& role) {
  return {role + " is a getter", [role](const Cpg& cpg, PatternMatch& m) {
            GetterInfo gi;
            return getter_info(cpg.ast, m.at(role), gi);
          }};
}

// T8: exactly one reference, a read, and the initializer is pure and stable
// along every evaluation path from the declaration to the read.
Predicate single_use_stable() {
  return {"single stable read", [](const Cpg& cpg, PatternMatch& m) {
            const Ast& ast = cpg.ast;
            NodeId d = m.at("d");
            NodeId e = m.at("e");
            std::vector<NodeId> refs = refs_to(ast, d);
            if (refs.size() != 1) return false;
            NodeId use = refs[0];
            if (!is_read_ref(ast, use)) return false;
            if (!subtree_is_pure_expr(ast, e)) return false;
            std::set<Loc> reads;
            ast.walk(e, [&](NodeId n) {
              for (auto& l : uses_at(ast, n)) reads.insert(l);
            });
            for (NodeId b : eog_nodes_between(cpg, d, use))
              for (auto& l : defs_at(ast, b))
                if (reads.count(l)) return false;
            m.roles["use"] = use;
            return true;
          }};
}

// T9: exactly one reference to the constant, and it is a read.
Predicate single_const_use() {
  return {"single constant read", [](const Cpg& cpg, PatternMatch& m) {
            const Ast& ast = cpg.ast;
            std::vector<NodeId> refs = refs_to(ast, m.at("f"));
            if (refs.size() != 1) return false;
            if (!is_read_ref(ast, refs[0])) return false;
            m.roles["use"] = refs[0];
            return true;
          }};
}

// X16/X17 shared checks: the neighbour statement accesses the incremented
// local exactly once, as a read, with no short-circuit operator that could
// skip the access, and contains no nested statements.
bool absorbable(const Cpg& cpg, NodeId stmt, NodeId var, NodeId* useOut) {
  const Ast& ast = cpg.ast;
  switch (ast.at(stmt).kind) {
    case NodeKind::LocalVarDecl:
    case NodeKind::Assign:
    case NodeKind::ExprStmt: break;
    default: return false;
  }
  bool shortCircuit = false;
  ast.walk(stmt, [&](NodeId n) {
    if (ast.at(n).kind == NodeKind::BinaryOp &&
        (ast.at(n).op == "&&" || ast.at(n).op == "||"))
      shortCircuit = true;
  });
  if (shortCircuit) return false;
  Loc loc = location_of(ast, var);
  std::vector<Access> acc = eval_order_accesses(ast, stmt);
  const Access* hit = nullptr;
  for (const auto& a : acc) {
    if (a.loc != loc) continue;
    if (hit) return false; // more than one access
    hit = &a;
  }
  if (!hit || !hit->is_read || hit->is_write) return false;
  if (ast.at(hit->node).kind != NodeKind::NameRef) return false;
  *useOut = hit->node;
  return true;
}

Predicate absorb_pred() {
  return {"single unconditional read of the counter", [](const Cpg& cpg, PatternMatch& m) {
            const Ast& ast = cpg.ast;
            NodeId x = m.at("x");
            if (!is_local(ast, ast.at(x).resolved)) return false;
            NodeId use = kNoNode;
            if (!absorbable(cpg, m.at("s"), ast.at(x).resolved, &use)) return false;
            m.roles["use"] = use;
            return true;
          }};
}

// X18: the increment's written value is never read (no outgoing def-use
// edge), the operand is a local, and the increment is not a standalone
// statement (those fall to dead-code removal instead).
Predicate dead_increment() {
  return {"write never read", [](const Cpg& cpg, PatternMatch& m) {
            const Ast& ast = cpg.ast;
            NodeId inc = m.at("inc");
            NodeId parent = ast.at(inc).parent;
            if (parent == kNoNode || ast.at(parent).kind == NodeKind::ExprStmt) return false;
            if (!is_local(ast, ast.at(m.at("x")).resolved)) return false;
            auto it = cpg.ddg_uses_of_def.find(inc);
            return it == cpg.ddg_uses_of_def.end() || it->second.empty();
          }};
}

// -------------------------------------------------------------- templates --

TransformationTemplate delete_template(const std::string& name, GraphPattern S,
                                       const std::string& role) {
  TransformationTemplate t;
  t.name = name;
  t.source = std::move(S);
  t.ops.push_back({OpCode::DELETE_NODE, role, "", "", -1, NodeKind::Unit});
  return t;
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> cat;

  // T1 Remove Empty Methods
  {
    GraphPattern S;
    S.root = pat("m", NodeKind::MethodDecl).attr("type", "void");
    S.root.child(pat("p", NodeKind::ParamDecl), ChildMode::Rest);
    S.root.child(pat("body", NodeKind::Block));
    S.predicates.push_back(no_call_sites("m"));
    cat.push_back({"T1", "Remove Empty Methods", delete_template("T1", S, "m")});
  }
  // T2 Remove Empty Constructors
  {
    GraphPattern S;
    S.root = pat("c", NodeKind::ConstructorDecl);
    S.root.child(pat("body", NodeKind::Block));
    cat.push_back({"T2", "Remove Empty Constructors", delete_template("T2", S, "c")});
  }
  // T3 Remove Empty Classes
  {
    GraphPattern S;
    S.root = pat("k", NodeKind::ClassDecl);
    S.predicates.push_back(class_unreferenced("k"));
    cat.push_back({"T3", "Remove Empty Classes", delete_template("T3", S, "k")});
  }
  // T4 Getter Methods: call-site rewrites, then declaration removal.
  {
    // Field getter, explicit receiver: obj.getF() -> obj.f
    GraphPattern S;
    S.root = pat("call", NodeKind::Call).attr("has_receiver", "1");
    S.root.child(any("recv"));
    S.predicates.push_back(call_resolves_getter(false));
    TransformationTemplate t;
    t.name = "T4 call site (field, receiver)";
    t.source = S;
    t.ops = {
        {OpCode::CREATE_NODE, "fa", "", "", -1, NodeKind::FieldAccess},
        {OpCode::SET_ATTR, "fa", "name", "@field", -1, NodeKind::Unit},
        {OpCode::SET_ATTR, "fa", "resolved", "@field", -1, NodeKind::Unit},
        {OpCode::REPLACE_NODE, "call", "fa", "", -1, NodeKind::Unit},
        {OpCode::MOVE_CHILD, "recv", "fa", "", 0, NodeKind::Unit},
        {OpCode::DELETE_NODE, "call", "", "", -1, NodeKind::Unit},
    };
    cat.push_back({"T4", "Getter Methods", std::move(t)});
  }
  {
    // Field getter, implicit receiver: getF() -> this.f
    GraphPattern S;
    S.root = pat("call", NodeKind::Call).attr("has_receiver", "0");
    S.predicates.push_back(call_resolves_getter(false));
    TransformationTemplate t;
    t.name = "T4 call site (field, implicit)";
    t.source = S;
    t.ops = {
        {OpCode::CREATE_NODE, "fa", "", "", -1, NodeKind::FieldAccess},
        {OpCode::SET_ATTR, "fa", "name", "@field", -1, NodeKind::Unit},
        {OpCode::SET_ATTR, "fa", "resolved", "@field", -1, NodeKind::Unit},
        {OpCode::REPLACE_NODE, "call", "fa", "", -1, NodeKind::Unit},
        {OpCode::DELETE_NODE, "call", "", "", -1, NodeKind::Unit},
    };
    cat.push_back({"T4", "Getter Methods", std::move(t)});
  }
  {
    // Constant getter, explicit pure receiver: obj.getC() -> <constant>
    GraphPattern S;
    S.root = pat("call", NodeKind::Call).attr("has_receiver", "1");
    S.root.child(any("recv"));
    S.predicates.push_back(call_resolves_getter(true));
    S.predicates.push_back(pure_subtree("recv"));
    TransformationTemplate t;
    t.name = "T4 call site (constant, receiver)";
    t.source = S;
    t.ops = {
        {OpCode::CLONE_SUBTREE, "value", "v2", "", -1, NodeKind::Unit},
        {OpCode::REPLACE_NODE, "call", "v2", "", -1, NodeKind::Unit},
        {OpCode::DELETE_NODE, "call", "", "", -1, NodeKind::Unit},
    };
    cat.push_back({"T4", "Getter Methods", std::move(t)});
  }
  {
    // Constant getter, implicit receiver: getC() -> <constant>
    GraphPattern S;
    S.root = pat("call", NodeKind::Call).attr("has_receiver", "0");
    S.predicates.push_back(call_resolves_getter(true));
    TransformationTemplate t;
    t.name = "T4 call site (constant, implicit)";
    t.source = S;
    t.ops = {
        {OpCode::CLONE_SUBTREE, "value", "v2", "", -1, NodeKind::Unit},
        {OpCode::REPLACE_NODE, "call", "v2", "", -1, NodeKind::Unit},
        {OpCode::DELETE_NODE, "call", "", "", -1, NodeKind::Unit},
    };
    cat.push_back({"T4", "Getter Methods", std::move(t)});
  }
  {
    // Getter declaration removal once no call sites remain.
    GraphPattern S;
    S.root = pat("m", NodeKind::MethodDecl);
    S.root.child(pat("body", NodeKind::Block)
                     .child(pat("r", NodeKind::ReturnStmt).child(any("v"))));
    S.predicates.push_back(is_getter("m"));
    S.predicates.push_back(no_call_sites("m"));
    cat.push_back({"T4", "Getter Methods", delete_template("T4 declaration", S, "m")});
  }
  // T5 Unsupported Methods
  {
    GraphPattern S;
    S.root = pat("m", NodeKind::MethodDecl);
    S.root.child(pat("p", NodeKind::ParamDecl), ChildMode::Rest);
    S.root.child(pat("body", NodeKind::Block).child(pat("t", NodeKind::ThrowStmt).child(any("ex"))));
    cat.push_back({"T5", "Unsupported Methods", delete_template("T5", S, "m")});
  }
  // T6 Unsupported Constructors
  {
    GraphPattern S;
    S.root = pat("c", NodeKind::ConstructorDecl);
    S.root.child(pat("p", NodeKind::ParamDecl), ChildMode::Rest);
    S.root.child(pat("body", NodeKind::Block).child(pat("t", NodeKind::ThrowStmt).child(any("ex"))));
    cat.push_back({"T6", "Unsupported Constructors", delete_template("T6", S, "c")});
  }
  // T8 Inline Single-use Variables
  {
    GraphPattern S;
    S.root = pat("d", NodeKind::LocalVarDecl);
    S.root.child(any("e"));
    S.parent_kind = NodeKind::Block;
    S.predicates.push_back(single_use_stable());
    TransformationTemplate t;
    t.name = "T8";
    t.source = S;
    t.ops = {
        {OpCode::REPLACE_NODE, "use", "e", "", -1, NodeKind::Unit},
        {OpCode::DELETE_NODE, "use", "", "", -1, NodeKind::Unit},
        {OpCode::DELETE_NODE, "d", "", "", -1, NodeKind::Unit},
    };
    cat.push_back({"T8", "Inline Single-use Variables", std::move(t)});
  }
  // T9 Inline Single-use Constants
  {
    GraphPattern S;
    S.root = pat("f", NodeKind::FieldDecl).attr("static", "1").attr("final", "1");
    S.root.child(pat("l", NodeKind::Literal));
    S.predicates.push_back(single_const_use());
    TransformationTemplate t;
    t.name = "T9";
    t.source = S;
    t.ops = {
        {OpCode::REPLACE_NODE, "use", "l", "", -1, NodeKind::Unit},
        {OpCode::DELETE_NODE, "use", "", "", -1, NodeKind::Unit},
        {OpCode::DELETE_NODE, "f", "", "", -1, NodeKind::Unit},
    };
    cat.push_back({"T9", "Inline Single-use Constants", std::move(t)});
  }
  // T10 Inline Optional Creation: Optional.of(v) -> v
  {
    GraphPattern S;
    S.root = pat("w", NodeKind::OptionalWrap);
    S.root.child(any("v"));
    GraphPattern T;
    T.root = any("v");
    cat.push_back({"T10", "Inline Optional Creation", derive_template("T10", S, T)});
  }
  // T11 Inline Optional Unwrap: v.get() -> v; v.orElse(pure d) -> v
  {
    GraphPattern S;
    S.root = pat("u", NodeKind::OptionalUnwrap).attr("op", "get");
    S.root.child(any("v"));
    GraphPattern T;
    T.root = any("v");
    cat.push_back({"T11", "Inline Optional Unwrap", derive_template("T11 get", S, T)});
  }
  {
    GraphPattern S;
    S.root = pat("u", NodeKind::OptionalUnwrap).attr("op", "orElse");
    S.root.child(any("v"));
    S.root.child(any("dflt"));
    S.predicates.push_back(pure_subtree("dflt"));
    GraphPattern T;
    T.root = any("v");
    cat.push_back({"T11", "Inline Optional Unwrap", derive_template("T11 orElse", S, T)});
  }
  // T12 Revert Negated If-Else
  {
    GraphPattern S;
    S.root = pat("i", NodeKind::IfStmt);
    S.root.child(pat("n", NodeKind::UnaryOp).attr("op", "!").child(any("c")));
    S.root.child(sub("a", NodeKind::Block));
    S.root.child(sub("b", NodeKind::Block));
    GraphPattern T;
    T.root = pat("i", NodeKind::IfStmt);
    T.root.child(any("c"));
    T.root.child(pat("b", NodeKind::Block));
    T.root.child(pat("a", NodeKind::Block));
    cat.push_back({"T12", "Revert Negated If-Else", derive_template("T12", S, T)});
  }
  // T13 Revert If-Unequal-Else
  {
    GraphPattern S;
    S.root = pat("i", NodeKind::IfStmt);
    S.root.child(sub("q", NodeKind::BinaryOp).attr("op", "!="));
    S.root.child(sub("a", NodeKind::Block));
    S.root.child(sub("b", NodeKind::Block));
    GraphPattern T;
    T.root = pat("i", NodeKind::IfStmt);
    T.root.child(pat("q", NodeKind::BinaryOp).attr("op", "=="));
    T.root.child(pat("b", NodeKind::Block));
    T.root.child(pat("a", NodeKind::Block));
    cat.push_back({"T13", "Revert If-Unequal-Else", derive_template("T13", S, T)});
  }
  // T14 For Loop To While Loop
  {
    GraphPattern S;
    S.root = pat("f", NodeKind::ForStmt);
    S.root.child(any("i"));
    S.root.child(any("c"));
    S.root.child(any("u"));
    S.root.child(pat("b", NodeKind::Block).child(any("rest"), ChildMode::Rest));
    GraphPattern T;
    T.root = pat("blk", NodeKind::Block);
    T.root.child(any("i"));
    NodePattern w = pat("w", NodeKind::WhileStmt);
    w.child(any("c"));
    NodePattern b = pat("b", NodeKind::Block);
    b.child(any("rest"), ChildMode::Rest);
    b.child(any("u"));
    w.child(std::move(b));
    T.root.child(std::move(w));
    cat.push_back({"T14", "For Loop To While Loop", derive_template("T14", S, T)});
  }
  // X16 trailing increment absorbed as post-increment: S[x]; x++;  ->  S[x++];
  for (const char* op : {"++post", "--post"}) {
    GraphPattern S;
    S.root = pat("blk", NodeKind::Block);
    S.root.child(any("pre"), ChildMode::Rest);
    S.root.child(any("s"));
    S.root.child(pat("incStmt", NodeKind::ExprStmt)
                     .child(pat("inc", NodeKind::UnaryOp)
                                .attr("op", op)
                                .child(pat("x", NodeKind::NameRef))));
    S.root.child(any("post"), ChildMode::Rest);
    S.predicates.push_back(absorb_pred());
    TransformationTemplate t;
    t.name = std::string("X16 ") + op;
    t.source = S;
    t.ops = {
        {OpCode::REPLACE_NODE, "use", "inc", "", -1, NodeKind::Unit},
        {OpCode::DELETE_NODE, "incStmt", "", "", -1, NodeKind::Unit},
        {OpCode::DELETE_NODE, "use", "", "", -1, NodeKind::Unit},
    };
    cat.push_back({"X16", "Absorb Trailing Increment", std::move(t)});
  }
  // X17 leading increment absorbed as pre-increment: x++; S[x];  ->  S[++x];
  for (const char* op : {"++post", "--post"}) {
    GraphPattern S;
    S.root = pat("blk", NodeKind::Block);
    S.root.child(any("pre"), ChildMode::Rest);
    S.root.child(pat("incStmt", NodeKind::ExprStmt)
                     .child(pat("inc", NodeKind::UnaryOp)
                                .attr("op", op)
                                .child(pat("x", NodeKind::NameRef))));
    S.root.child(any("s"));
    S.root.child(any("post"), ChildMode::Rest);
    S.predicates.push_back(absorb_pred());
    TransformationTemplate t;
    t.name = std::string("X17 ") + op;
    t.source = S;
    t.ops = {
        {OpCode::SET_ATTR, "inc", "op", op[0] == '+' ? "++pre" : "--pre", -1, NodeKind::Unit},
        {OpCode::REPLACE_NODE, "use", "inc", "", -1, NodeKind::Unit},
        {OpCode::DELETE_NODE, "incStmt", "", "", -1, NodeKind::Unit},
        {OpCode::DELETE_NODE, "use", "", "", -1, NodeKind::Unit},
    };
    cat.push_back({"X17", "Absorb Leading Increment", std::move(t)});
  }
  // X18 increment whose written value is never read: ++x -> x + 1, x++ -> x
  for (const char* op : {"++pre", "--pre"}) {
    GraphPattern S;
    S.root = pat("inc", NodeKind::UnaryOp).attr("op", op);
    S.root.child(pat("x", NodeKind::NameRef));
    S.predicates.push_back(dead_increment());
    GraphPattern T;
    T.root = pat("plus", NodeKind::BinaryOp).attr("op", op[0] == '+' ? "+" : "-");
    T.root.child(pat("x", NodeKind::NameRef));
    T.root.child(pat("one", NodeKind::Literal).attr("literal", "1").attr("lit_type", "int"));
    cat.push_back({"X18", "Unwrap Dead Increment",
                   derive_template(std::string("X18 ") + op, S, T)});
  }
  for (const char* op : {"++post", "--post"}) {
    GraphPattern S;
    S.root = pat("inc", NodeKind::UnaryOp).attr("op", op);
    S.root.child(pat("x", NodeKind::NameRef));
    S.predicates.push_back(dead_increment());
    GraphPattern T;
    T.root = pat("x", NodeKind::NameRef);
    cat.push_back({"X18", "Unwrap Dead Increment",
                   derive_template(std::string("X18 ") + op, S, T)});
  }
  // X19 standalone pre-increment statements canonicalize to post form.
  for (const char* op : {"++pre", "--pre"}) {
    GraphPattern S;
    S.root = pat("es", NodeKind::ExprStmt);
    S.root.child(pat("inc", NodeKind::UnaryOp).attr("op", op).child(any("x")));
    GraphPattern T;
    T.root = pat("es", NodeKind::ExprStmt);
    T.root.child(pat("inc", NodeKind::UnaryOp)
                     .attr("op", op[0] == '+' ? "++post" : "--post")
                     .child(any("x")));
    cat.push_back({"X19", "Canonical Increment Statement",
                   derive_template(std::string("X19 ") + op, S, T)});
  }
  return cat;
}

} // namespace

const std::vector<CatalogEntry>& catalog_templates() {
  static const std::vector<CatalogEntry> cat = build_catalog();
  return cat;
}

namespace {

int run_group(Cpg& cpg, const NormalizationConfig& cfg, const char* const* ids, size_t n) {
  int total = 0;
  for (const auto& entry : catalog_templates()) {
    bool inGroup = false;
    for (size_t i = 0; i < n; ++i)
      if (entry.id == ids[i]) inGroup = true;
    if (!inGroup || !cfg.enabled(entry.id)) continue;
    total += apply(cpg, entry.tmpl, cfg.pass_cap).applied;
  }
  return total;
}

} // namespace

int remove_trivial_members(Cpg& cpg, const NormalizationConfig& cfg) {
  static const char* const ids[] = {"T1", "T2", "T3", "T4", "T5", "T6"};
  int total = 0;
  // Removing one member can expose another (e.g. T5 empties a class, T3
  // removes it); sweep until stable.
  while (true) {
    int n = run_group(cpg, cfg, ids, 6);
    total += n;
    if (n == 0) break;
  }
  return total;
}

int move_constants(Cpg& cpg, const NormalizationConfig& cfg) {
  if (!cfg.enabled("T7")) return 0;
  Ast& ast = cpg.ast;
  int moved = 0;
  std::vector<NodeId> constants;
  ast.walk(ast.root, [&](NodeId n) {
    if (ast.at(n).alive && is_constant_field(ast, n)) constants.push_back(n);
  });
  for (NodeId f : constants) {
    NodeId declClass = enclosing_class(ast, f);
    if (declClass == kNoNode || ast.at(declClass).kind != NodeKind::ClassDecl) continue;
    std::set<NodeId> userClasses;
    for (NodeId r : refs_to(ast, f)) userClasses.insert(enclosing_class(ast, r));
    if (userClasses.size() != 1) continue;
    NodeId target = *userClasses.begin();
    if (target == declClass || target == kNoNode ||
        ast.at(target).kind != NodeKind::ClassDecl)
      continue;
    // No name clash with an existing member of the target class.
    bool clash = false;
    for (NodeId c : ast.at(target).children)
      if (ast.at(c).alive && ast.at(c).name == ast.at(f).name) clash = true;
    if (clash) continue;
    ast.detach(f);
    ast.add_child(target, f);
    ++moved;
  }
  if (moved) recompute_layers(cpg);
  return moved;
}

int inline_elements(Cpg& cpg, const NormalizationConfig& cfg) {
  static const char* const ids[] = {"T8", "T9", "T10", "T11", "X16", "X17", "X18", "X19"};
  int total = 0;
  while (true) {
    int n = run_group(cpg, cfg, ids, 8);
    total += n;
    if (n == 0) break;
  }
  return total;
}

int replace_equivalents(Cpg& cpg, const NormalizationConfig& cfg) {
  static const char* const ids[] = {"T12", "T13", "T14"};
  int total = 0;
  while (true) {
    int n = run_group(cpg, cfg, ids, 3);
    total += n;
    if (n == 0) break;
  }
  return total;
}

// --------------------------------------------------------- reorder/prune ---

namespace {

// Nearest enclosing statement (including the node itself).
NodeId owning_stmt(const Ast& ast, NodeId n) {
  NodeId cur = n;
  while (cur != kNoNode) {
    if (is_statement(ast.at(cur).kind) && ast.at(cur).parent != kNoNode &&
        ast.at(ast.at(cur).parent).kind == NodeKind::Block)
      return cur;
    cur = ast.at(cur).parent;
  }
  return kNoNode;
}

std::vector<NodeId> blocks_in(const Ast& ast, NodeId root) {
  std::vector<NodeId> out;
  ast.walk(root, [&](NodeId n) {
    if (ast.at(n).alive && ast.at(n).kind == NodeKind::Block) out.push_back(n);
  });
  return out;
}

// Statements directly following a return/throw in the same block can never
// execute.
bool remove_unreachable(Ast& ast) {
  bool changed = false;
  for (NodeId b : blocks_in(ast, ast.root)) {
    const auto& kids = ast.at(b).children;
    size_t cut = kids.size();
    for (size_t i = 0; i < kids.size(); ++i) {
      NodeKind k = ast.at(kids[i]).kind;
      if (k == NodeKind::ReturnStmt || k == NodeKind::ThrowStmt) {
        cut = i + 1;
        break;
      }
    }
    while (ast.at(b).children.size() > cut) {
      ast.erase_subtree(ast.at(b).children.back());
      changed = true;
    }
  }
  return changed;
}

std::set<std::string> decl_names(const Ast& ast, NodeId root) {
  std::set<std::string> out;
  ast.walk(root, [&](NodeId n) {
    if (!ast.at(n).alive) return;
    NodeKind k = ast.at(n).kind;
    if (k == NodeKind::LocalVarDecl || k == NodeKind::ParamDecl) out.insert(ast.at(n).name);
  });
  return out;
}

// A block nested directly in another block is spliced into its parent when
// none of its declarations collide with a declaration elsewhere in the
// enclosing callable (merging the scopes must not change name resolution).
bool flatten_blocks(Ast& ast) {
  bool changed = false;
  for (NodeId b : blocks_in(ast, ast.root)) {
    NodeId parent = ast.at(b).parent;
    if (parent == kNoNode || ast.at(parent).kind != NodeKind::Block) continue;
    NodeId callable = enclosing_callable(ast, b);
    if (callable == kNoNode) continue;
    std::set<std::string> inner = decl_names(ast, b);
    bool clash = false;
    ast.walk(callable, [&](NodeId n) {
      if (!ast.at(n).alive || clash) return;
      NodeId c = n;
      bool insideB = false;
      while (c != kNoNode) {
        if (c == b) insideB = true;
        c = ast.at(c).parent;
      }
      if (insideB) return;
      NodeKind k = ast.at(n).kind;
      if ((k == NodeKind::LocalVarDecl || k == NodeKind::ParamDecl) &&
          inner.count(ast.at(n).name))
        clash = true;
    });
    if (clash) continue;
    int idx = ast.child_index(b);
    std::vector<NodeId> kids = ast.at(b).children;
    ast.detach(b);
    for (size_t i = 0; i < kids.size(); ++i) {
      ast.detach(kids[i]);
      ast.insert_child(parent, kids[i], static_cast<size_t>(idx) + i);
    }
    ast.at(b).alive = false;
    changed = true;
    break; // child lists shifted: restart scan
  }
  return changed;
}

// Dead-code removal: a statement lives when it transitively feeds a sink
// (return/throw, I/O or user call, field write, loop, live predicate).
bool prune_dead(Cpg& cpg) {
  Ast& ast = cpg.ast;
  std::set<NodeId> stmts;
  std::set<NodeId> live;
  ast.walk(ast.root, [&](NodeId n) {
    if (!ast.at(n).alive) return;
    if (is_statement(ast.at(n).kind) && ast.at(n).parent != kNoNode &&
        ast.at(ast.at(n).parent).kind == NodeKind::Block)
      stmts.insert(n);
  });

  // Own region of a statement: its subtree minus nested statements' regions.
  auto own_region = [&](NodeId s) {
    std::vector<NodeId> out;
    std::vector<NodeId> work = {s};
    while (!work.empty()) {
      NodeId n = work.back();
      work.pop_back();
      if (!ast.at(n).alive) continue;
      if (n != s && stmts.count(n)) continue;
      if (n != s && ast.at(n).kind == NodeKind::Block) continue; // loop/if bodies
      out.push_back(n);
      for (NodeId c : ast.at(n).children) work.push_back(c);
    }
    return out;
  };

  std::vector<NodeId> work;
  auto mark = [&](NodeId s) {
    if (s == kNoNode || live.count(s)) return;
    live.insert(s);
    work.push_back(s);
  };

  for (NodeId s : stmts) {
    const Node& n = ast.at(s);
    if (n.kind == NodeKind::ReturnStmt || n.kind == NodeKind::ThrowStmt ||
        n.kind == NodeKind::WhileStmt || n.kind == NodeKind::ForStmt) {
      mark(s);
      continue;
    }
    bool sink = false;
    for (NodeId x : own_region(s)) {
      if (is_impure_node(ast, x)) sink = true;
      for (const auto& l : defs_at(ast, x))
        if (!l.empty() && l[0] == 'f') sink = true; // field write
    }
    if (sink) mark(s);
  }

  while (!work.empty()) {
    NodeId s = work.back();
    work.pop_back();
    // Keeping a statement keeps its enclosing statements.
    mark(owning_stmt(ast, ast.at(s).parent));
    // Its reads keep the statements that define them.
    for (NodeId x : own_region(s)) {
      if (uses_at(ast, x).empty()) continue;
      auto it = cpg.ddg_defs_of_use.find(x);
      if (it == cpg.ddg_defs_of_use.end()) continue;
      for (NodeId d : it->second) mark(owning_stmt(ast, d));
    }
  }

  bool changed = false;
  for (NodeId s : stmts) {
    if (live.count(s) || !ast.at(s).alive) continue;
    NodeKind k = ast.at(s).kind;
    if (k != NodeKind::LocalVarDecl && k != NodeKind::Assign && k != NodeKind::ExprStmt &&
        k != NodeKind::IfStmt && k != NodeKind::Block)
      continue;
    // Skip statements nested inside another statement being removed.
    NodeId up = owning_stmt(ast, ast.at(s).parent);
    bool nestedDead = false;
    while (up != kNoNode) {
      if (stmts.count(up) && !live.count(up)) { nestedDead = true; break; }
      up = owning_stmt(ast, ast.at(up).parent);
    }
    if (nestedDead) continue;
    ast.erase_subtree(s);
    changed = true;
  }
  return changed;
}

// Deterministic statement order: Kahn over intra-block dependency edges,
// ties broken by the canonical statement key, then original position.
bool sort_statements(Ast& ast) {
  bool changed = false;
  for (NodeId b : blocks_in(ast, ast.root)) {
    auto kids = ast.at(b).children;
    size_t n = kids.size();
    if (n < 2) continue;

    std::vector<StatementEffects> fx(n);
    std::vector<std::set<std::string>> names(n);
    for (size_t i = 0; i < n; ++i) {
      fx[i] = statement_effects(ast, kids[i]);
      names[i] = decl_names(ast, kids[i]);
    }
    auto intersects = [](const std::set<Loc>& a, const std::set<Loc>& b) {
      for (const auto& x : a)
        if (b.count(x)) return true;
      return false;
    };
    std::vector<std::vector<size_t>> succ(n);
    std::vector<int> indeg(n, 0);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        bool dep = intersects(fx[i].writes, fx[j].reads) ||
                   intersects(fx[i].reads, fx[j].writes) ||
                   intersects(fx[i].writes, fx[j].writes) ||
                   (fx[i].impure && fx[j].impure) || fx[j].terminates ||
                   fx[i].terminates || intersects(names[i], names[j]);
        if (dep) {
          succ[i].push_back(j);
          ++indeg[j];
        }
      }
    }

    std::vector<CanonicalKey> keys(n);
    for (size_t i = 0; i < n; ++i) keys[i] = canonical_key(ast, kids[i]);

    std::vector<size_t> order;
    std::vector<bool> done(n, false);
    for (size_t step = 0; step < n; ++step) {
      size_t best = n;
      for (size_t i = 0; i < n; ++i) {
        if (done[i] || indeg[i] > 0) continue;
        if (best == n || keys[i] < keys[best]) best = i;
      }
      order.push_back(best);
      done[best] = true;
      for (size_t j : succ[best]) --indeg[j];
    }

    std::vector<NodeId> newKids;
    for (size_t i : order) newKids.push_back(kids[i]);
    if (newKids != kids) {
      ast.at(b).children = newKids;
      changed = true;
    }
  }
  return changed;
}

} // namespace

void reorder_and_prune(Cpg& cpg, const NormalizationConfig& cfg) {
  Ast& ast = cpg.ast;
  bool any = true;
  while (any) {
    any = false;
    if (cfg.dead_code && remove_unreachable(ast)) any = true;
    if (cfg.reorder)
      while (flatten_blocks(ast)) any = true;
  }
  recompute_layers(cpg);
  if (cfg.dead_code) {
    while (prune_dead(cpg)) recompute_layers(cpg);
  }
  if (cfg.reorder) {
    if (sort_statements(ast)) recompute_layers(cpg);
  }
}

// ---------------------------------------------------------------- driver ---

namespace {

int run_phase(Cpg& cpg, const NormalizationConfig& cfg) {
  int total = 0;
  for (int sweep = 0; sweep < cfg.pass_cap; ++sweep) {
    int n = 0;
    n += remove_trivial_members(cpg, cfg);
    n += move_constants(cpg, cfg);
    n += inline_elements(cpg, cfg);
    n += replace_equivalents(cpg, cfg);
    total += n;
    if (n == 0) return total;
  }
  throw NonTerminationError("transformation phase did not stabilize");
}

} // namespace

Cpg normalize(Cpg cpg, const NormalizationConfig& cfg) {
  for (int round = 0; round < cfg.round_cap; ++round) {
    std::string before = canonical_serialization(cpg);
    run_phase(cpg, cfg);
    reorder_and_prune(cpg, cfg);
    run_phase(cpg, cfg);
    if (canonical_serialization(cpg) == before) return cpg;
  }
  throw NonTerminationError("normalization pipeline did not reach a fixed point");
}

std::vector<StageSnapshot> normalize_stages(Cpg cpg, const NormalizationConfig& cfg) {
  std::vector<StageSnapshot> out;
  out.push_back({"input", cpg});
  for (int round = 0; round < cfg.round_cap; ++round) {
    std::string tag = "round" + std::to_string(round + 1) + ".";
    std::string before = canonical_serialization(cpg);
    run_phase(cpg, cfg);
    out.push_back({tag + "phase1", cpg});
    reorder_and_prune(cpg, cfg);
    out.push_back({tag + "reorder", cpg});
    run_phase(cpg, cfg);
    out.push_back({tag + "phase2", cpg});
    if (canonical_serialization(cpg) == before) return out;
  }
  throw NonTerminationError("normalization pipeline did not reach a fixed point");
}

} // namespace structsim
