#include <doctest.h>

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "structsim/catalog.hpp"
#include "structsim/corpus.hpp"
#include "structsim/cpg.hpp"
#include "structsim/frontend.hpp"

using namespace structsim;

namespace {

Cpg cpg_of(const std::string& src) {
  Ast ast = parse_source(src);
  resolve(ast);
  return build_cpg(std::move(ast));
}

std::vector<NodeId> find_kind(const Ast& ast, NodeKind k) {
  std::vector<NodeId> out;
  ast.walk(ast.root, [&](NodeId n) {
    if (ast.at(n).alive && ast.at(n).kind == k) out.push_back(n);
  });
  return out;
}

NodeId the(const Ast& ast, NodeKind k, size_t i = 0) {
  auto v = find_kind(ast, k);
  REQUIRE(v.size() > i);
  return v[i];
}

std::vector<NodeId> refs_named(const Ast& ast, const std::string& name) {
  std::vector<NodeId> out;
  ast.walk(ast.root, [&](NodeId n) {
    if (ast.at(n).alive && ast.at(n).kind == NodeKind::NameRef && ast.at(n).name == name)
      out.push_back(n);
  });
  return out;
}

std::string eog_label(const Cpg& cpg, NodeId a, NodeId b) {
  for (const auto& e : cpg.eog)
    if (e.src == a && e.dst == b) return e.label.empty() ? "<unlabeled>" : e.label;
  return "<none>";
}

// Follows the unique EOG successor from `start` until a node without one.
std::vector<NodeKind> chain_kinds(const Cpg& cpg, NodeId start) {
  std::vector<NodeKind> out{cpg.ast.at(start).kind};
  NodeId cur = start;
  while (true) {
    auto it = cpg.eog_succ.find(cur);
    if (it == cpg.eog_succ.end()) break;
    REQUIRE(it->second.size() == 1);
    cur = it->second[0];
    out.push_back(cpg.ast.at(cur).kind);
  }
  return out;
}

std::vector<NodeId> sorted_defs_of_use(const Cpg& cpg, NodeId use) {
  auto it = cpg.ddg_defs_of_use.find(use);
  if (it == cpg.ddg_defs_of_use.end()) return {};
  std::vector<NodeId> v = it->second;
  std::sort(v.begin(), v.end());
  return v;
}

using EdgeTuple = std::tuple<NodeId, NodeId, std::string>;

std::vector<EdgeTuple> tuples(const std::vector<Edge>& edges) {
  std::vector<EdgeTuple> out;
  for (const auto& e : edges) out.push_back({e.src, e.dst, e.label});
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// DDG oracle: a definition d of location L reaches a use u iff the EOG has a
// path from d to u whose strictly-intermediate nodes never redefine L
// (revisiting d itself regenerates the same definition, so d is exempt).
// Reaching definitions are a distributive framework, so this meet-over-paths
// reading must coincide with the solver's fixed point.
// ---------------------------------------------------------------------------

bool redefines(const Ast& ast, NodeId n, const Loc& loc) {
  auto ds = defs_at(ast, n);
  return std::find(ds.begin(), ds.end(), loc) != ds.end();
}

bool def_reaches_use(const Cpg& cpg, NodeId d, NodeId u, const Loc& loc,
                     const std::set<NodeId>& scope) {
  std::set<NodeId> seen;
  std::deque<NodeId> work;
  auto push_succs = [&](NodeId n) {
    auto it = cpg.eog_succ.find(n);
    if (it == cpg.eog_succ.end()) return;
    for (NodeId s : it->second)
      if (scope.count(s)) work.push_back(s);
  };
  push_succs(d);
  while (!work.empty()) {
    NodeId n = work.front();
    work.pop_front();
    if (n == u) return true;
    if (!seen.insert(n).second) continue;
    if (n != d && redefines(cpg.ast, n, loc)) continue;
    push_succs(n);
  }
  return false;
}

std::vector<EdgeTuple> oracle_ddg(const Cpg& cpg) {
  const Ast& ast = cpg.ast;
  std::vector<EdgeTuple> out;
  for (NodeId m : cpg.callables) {
    std::vector<NodeId> nodes = ast.subtree(m);
    std::set<NodeId> scope(nodes.begin(), nodes.end());
    for (NodeId u : nodes) {
      if (!ast.at(u).alive) continue;
      for (const Loc& loc : uses_at(ast, u)) {
        for (NodeId d : nodes) {
          if (!ast.at(d).alive || !redefines(ast, d, loc)) continue;
          if (def_reaches_use(cpg, d, u, loc, scope)) out.push_back({d, u, loc});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// CDG oracle. The statement CFG is rebuilt here from the AST; post-dominance
// is then decided by its path definition instead of a dataflow fixed point:
// s post-dominates x iff the exit is unreachable from x once s is removed.
// s is control-dependent on predicate p via edge (p -> x, label) iff s
// post-dominates x but not p.
// ---------------------------------------------------------------------------

struct OracleCfg {
  const Ast& ast;
  std::vector<NodeId> stmt{kNoNode, kNoNode}; // 0 = entry, 1 = exit
  std::vector<std::vector<std::pair<int, std::string>>> succ{{}, {}};

  struct Flow {
    int entry;
    std::vector<std::pair<int, std::string>> exits;
  };

  int add(NodeId s) {
    stmt.push_back(s);
    succ.emplace_back();
    return static_cast<int>(stmt.size()) - 1;
  }

  void edge(int a, int b, const std::string& l = "") { succ[a].push_back({b, l}); }

  Flow walk_stmt(NodeId s) {
    const Node& n = ast.at(s);
    switch (n.kind) {
      case NodeKind::Block: {
        Flow f{-1, {}};
        for (NodeId c : n.children) {
          Flow cf = walk_stmt(c);
          if (f.entry == -1) f.entry = cf.entry;
          else
            for (auto& [x, l] : f.exits) edge(x, cf.entry, l);
          f.exits = cf.exits;
        }
        if (f.entry == -1) { // empty block is a skippable no-op node
          int id = add(s);
          return {id, {{id, ""}}};
        }
        return f;
      }
      case NodeKind::IfStmt: {
        int p = add(s);
        Flow thenF = walk_stmt(n.children[1]);
        edge(p, thenF.entry, "true");
        Flow f{p, thenF.exits};
        if (n.children.size() > 2) {
          Flow elseF = walk_stmt(n.children[2]);
          edge(p, elseF.entry, "false");
          f.exits.insert(f.exits.end(), elseF.exits.begin(), elseF.exits.end());
        } else {
          f.exits.push_back({p, "false"});
        }
        return f;
      }
      case NodeKind::WhileStmt: {
        int p = add(s);
        Flow body = walk_stmt(n.children[1]);
        edge(p, body.entry, "true");
        for (auto& [x, l] : body.exits) edge(x, p, l);
        return {p, {{p, "false"}}};
      }
      case NodeKind::ForStmt: {
        Flow init = walk_stmt(n.children[0]);
        int p = add(s);
        for (auto& [x, l] : init.exits) edge(x, p, l);
        Flow body = walk_stmt(n.children[3]);
        edge(p, body.entry, "true");
        Flow upd = walk_stmt(n.children[2]);
        for (auto& [x, l] : body.exits) edge(x, upd.entry, l);
        for (auto& [x, l] : upd.exits) edge(x, p, l);
        return {init.entry, {{p, "false"}}};
      }
      case NodeKind::ReturnStmt:
      case NodeKind::ThrowStmt: {
        int id = add(s);
        edge(id, 1);
        return {id, {}};
      }
      default: {
        int id = add(s);
        return {id, {{id, ""}}};
      }
    }
  }
};

bool exit_reachable_avoiding(const OracleCfg& g, int from, int avoid) {
  std::set<int> seen;
  std::deque<int> work{from};
  while (!work.empty()) {
    int n = work.front();
    work.pop_front();
    if (n == avoid) continue;
    if (n == 1) return true;
    if (!seen.insert(n).second) continue;
    for (const auto& [t, l] : g.succ[n]) work.push_back(t);
  }
  return false;
}

bool oracle_postdom(const OracleCfg& g, int s, int x) {
  return s == x || !exit_reachable_avoiding(g, x, s);
}

std::vector<EdgeTuple> oracle_cdg(const Cpg& cpg) {
  std::vector<EdgeTuple> out;
  for (NodeId m : cpg.callables) {
    OracleCfg g{cpg.ast};
    auto f = g.walk_stmt(cpg.ast.at(m).children.back());
    g.edge(0, f.entry);
    for (auto& [x, l] : f.exits) g.edge(x, 1, l);
    int n = static_cast<int>(g.stmt.size());
    for (int p = 0; p < n; ++p) {
      if (g.succ[p].size() < 2) continue;
      for (const auto& [x, label] : g.succ[p])
        for (int s = 2; s < n; ++s) {
          if (s == p || g.stmt[s] == kNoNode) continue;
          if (oracle_postdom(g, s, x) && !oracle_postdom(g, s, p))
            out.push_back({g.stmt[p], g.stmt[s], label});
        }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Submission> whole_corpus() {
  auto subs = load_corpus(std::string(STRUCTSIM_DATA_DIR) + "/corpus");
  subs.push_back(
      load_submission(std::string(STRUCTSIM_DATA_DIR) + "/fixtures/table1/original.minij"));
  subs.push_back(
      load_submission(std::string(STRUCTSIM_DATA_DIR) + "/fixtures/table1/variant.minij"));
  return subs;
}

const char* kStraight =
    "int f(int x) {\n"
    "  int y = x + 1;\n"
    "  return y;\n"
    "}\n";

} // namespace

TEST_CASE("eog: straight-line method is a single evaluation-order chain") {
  Cpg cpg = cpg_of(kStraight);
  NodeId m = the(cpg.ast, NodeKind::MethodDecl);

  std::vector<NodeKind> want{NodeKind::MethodDecl, NodeKind::ParamDecl,  NodeKind::Block,
                             NodeKind::NameRef,    NodeKind::Literal,    NodeKind::BinaryOp,
                             NodeKind::LocalVarDecl, NodeKind::NameRef,  NodeKind::ReturnStmt};
  CHECK(chain_kinds(cpg, m) == want);
  CHECK(cpg.eog.size() == 8);
  for (const auto& e : cpg.eog) CHECK(e.label.empty());
  CHECK(cpg.callables == std::vector<NodeId>{m});
}

TEST_CASE("eog: if-else branches carry true/false labels off the condition") {
  Cpg cpg = cpg_of(
      "int f(int x) {\n"
      "  int r = 0;\n"
      "  if (x < 0) {\n"
      "    r = 1;\n"
      "  } else {\n"
      "    r = 2;\n"
      "  }\n"
      "  return r;\n"
      "}\n");
  NodeId cond = the(cpg.ast, NodeKind::BinaryOp);
  auto blocks = find_kind(cpg.ast, NodeKind::Block); // body, then, else in preorder
  REQUIRE(blocks.size() == 3);
  CHECK(eog_label(cpg, cond, blocks[1]) == "true");
  CHECK(eog_label(cpg, cond, blocks[2]) == "false");
  NodeId ifs = the(cpg.ast, NodeKind::IfStmt);
  // The statement node precedes its condition in evaluation order.
  CHECK(eog_label(cpg, ifs, refs_named(cpg.ast, "x")[0]) == "<unlabeled>");
}

TEST_CASE("eog: while loops have one back edge and a false exit") {
  Cpg cpg = cpg_of(
      "int f(int n) {\n"
      "  int i = 0;\n"
      "  while (i < n) {\n"
      "    i = i + 1;\n"
      "  }\n"
      "  return i;\n"
      "}\n");
  const Ast& ast = cpg.ast;
  auto irefs = refs_named(ast, "i"); // cond, assign lhs, rhs, return
  REQUIRE(irefs.size() == 4);
  NodeId assign = the(ast, NodeKind::Assign);
  NodeId cond = kNoNode;
  for (NodeId b : find_kind(ast, NodeKind::BinaryOp))
    if (ast.at(b).op == "<") cond = b;
  REQUIRE(cond != kNoNode);

  int backs = 0;
  for (const auto& e : cpg.eog) backs += e.label == "back";
  CHECK(backs == 1);
  CHECK(eog_label(cpg, assign, irefs[0]) == "back");
  CHECK(eog_label(cpg, cond, irefs[3]) == "false");
  CHECK(eog_label(cpg, cond, the(ast, NodeKind::Block, 1)) == "true");
  // The assignment's left-hand name is written, not evaluated.
  CHECK(cpg.eog_succ.find(irefs[1]) == cpg.eog_succ.end());
  CHECK(cpg.eog_pred.find(irefs[1]) == cpg.eog_pred.end());
}

TEST_CASE("eog: for loops chain init, condition, body, update with a back edge") {
  Cpg cpg = cpg_of(
      "int f(int n) {\n"
      "  int s = 0;\n"
      "  for (int i = 0; i < n; i = i + 1) {\n"
      "    s = s + i;\n"
      "  }\n"
      "  return s;\n"
      "}\n");
  const Ast& ast = cpg.ast;
  NodeId fors = the(ast, NodeKind::ForStmt);
  NodeId decl_i = the(ast, NodeKind::LocalVarDecl, 1);
  auto irefs = refs_named(ast, "i"); // cond, update lhs, update rhs, body rhs
  REQUIRE(irefs.size() == 4);
  // ForStmt children order puts the update statement before the body block.
  auto assigns = find_kind(ast, NodeKind::Assign); // update assign, body assign
  REQUIRE(assigns.size() == 2);

  // for-statement -> literal 0 (init entry) -> ... -> decl i -> condition.
  CHECK(eog_label(cpg, fors, the(ast, NodeKind::Literal, 1)) == "<unlabeled>");
  CHECK(eog_label(cpg, decl_i, irefs[0]) == "<unlabeled>");
  CHECK(eog_label(cpg, assigns[0], irefs[0]) == "back");
  NodeId cond = kNoNode;
  for (NodeId b : find_kind(ast, NodeKind::BinaryOp))
    if (ast.at(b).op == "<") cond = b;
  CHECK(eog_label(cpg, cond, refs_named(ast, "s")[2]) == "false");
}

TEST_CASE("eog: short-circuit operators branch at the left operand") {
  Cpg cpg = cpg_of(
      "int f(int a, int b) {\n"
      "  if (a > 0 && b > 0) {\n"
      "    return 1;\n"
      "  }\n"
      "  return 0;\n"
      "}\n");
  const Ast& ast = cpg.ast;
  NodeId andn = kNoNode, gt1 = kNoNode;
  for (NodeId n : find_kind(ast, NodeKind::BinaryOp)) {
    if (ast.at(n).op == "&&") andn = n;
    else if (gt1 == kNoNode) gt1 = n;
  }
  REQUIRE(andn != kNoNode);
  CHECK(eog_label(cpg, gt1, refs_named(ast, "b")[0]) == "true");
  CHECK(eog_label(cpg, gt1, andn) == "false");

  Cpg cpg2 = cpg_of(
      "int f(int a, int b) {\n"
      "  if (a > 0 || b > 0) {\n"
      "    return 1;\n"
      "  }\n"
      "  return 0;\n"
      "}\n");
  NodeId orn = kNoNode, ga = kNoNode;
  for (NodeId n : find_kind(cpg2.ast, NodeKind::BinaryOp)) {
    if (cpg2.ast.at(n).op == "||") orn = n;
    else if (ga == kNoNode) ga = n;
  }
  CHECK(eog_label(cpg2, ga, refs_named(cpg2.ast, "b")[0]) == "false");
  CHECK(eog_label(cpg2, ga, orn) == "true");
}

TEST_CASE("eog_nodes_between excludes both endpoints and respects direction") {
  Cpg cpg = cpg_of(kStraight);
  const Ast& ast = cpg.ast;
  NodeId decl = the(ast, NodeKind::LocalVarDecl);
  NodeId ret = the(ast, NodeKind::ReturnStmt);
  NodeId yref = refs_named(ast, "y")[0];

  CHECK(eog_nodes_between(cpg, decl, ret) == std::set<NodeId>{yref});
  CHECK(eog_nodes_between(cpg, ret, decl).empty());

  NodeId param = the(ast, NodeKind::ParamDecl);
  NodeId binop = the(ast, NodeKind::BinaryOp);
  std::set<NodeId> want{the(ast, NodeKind::Block), refs_named(ast, "x")[0],
                        the(ast, NodeKind::Literal)};
  CHECK(eog_nodes_between(cpg, param, binop) == want);
}

TEST_CASE("ddg: joins, kills and loop-carried definitions (hand-checked)") {
  SUBCASE("both branch definitions reach the join, the killed one does not") {
    Cpg cpg = cpg_of(
        "int f(int x) {\n"
        "  int r = 0;\n"
        "  if (x < 0) {\n"
        "    r = 1;\n"
        "  } else {\n"
        "    r = 2;\n"
        "  }\n"
        "  return r;\n"
        "}\n");
    const Ast& ast = cpg.ast;
    auto assigns = find_kind(ast, NodeKind::Assign);
    REQUIRE(assigns.size() == 2);
    NodeId use = refs_named(ast, "r").back();
    std::vector<NodeId> want = assigns;
    std::sort(want.begin(), want.end());
    CHECK(sorted_defs_of_use(cpg, use) == want);
    NodeId decl = the(ast, NodeKind::LocalVarDecl);
    for (const auto& e : cpg.ddg) {
      CHECK(e.src != decl); // the initializer is rewritten on every path
      if (e.dst == use) CHECK(e.label == "v" + std::to_string(decl));
    }
  }

  SUBCASE("straight-line redefinition kills the declaration") {
    Cpg cpg = cpg_of(
        "int f(int x) {\n"
        "  int a = 1;\n"
        "  a = 2;\n"
        "  return a;\n"
        "}\n");
    NodeId use = refs_named(cpg.ast, "a").back();
    CHECK(sorted_defs_of_use(cpg, use) ==
          std::vector<NodeId>{the(cpg.ast, NodeKind::Assign)});
  }

  SUBCASE("loop-carried definition joins the initial one at the condition") {
    Cpg cpg = cpg_of(
        "int f(int n) {\n"
        "  int i = 0;\n"
        "  while (i < n) {\n"
        "    i = i + 1;\n"
        "  }\n"
        "  return i;\n"
        "}\n");
    const Ast& ast = cpg.ast;
    NodeId decl = the(ast, NodeKind::LocalVarDecl);
    NodeId assign = the(ast, NodeKind::Assign);
    std::vector<NodeId> both{decl, assign};
    std::sort(both.begin(), both.end());
    auto irefs = refs_named(ast, "i");
    CHECK(sorted_defs_of_use(cpg, irefs[0]) == both); // condition
    CHECK(sorted_defs_of_use(cpg, irefs[2]) == both); // increment rhs
    CHECK(sorted_defs_of_use(cpg, irefs[3]) == both); // return
  }

  SUBCASE("increment both reads the old and defines the new value") {
    Cpg cpg = cpg_of(
        "int f(int x) {\n"
        "  x++;\n"
        "  return x;\n"
        "}\n");
    const Ast& ast = cpg.ast;
    NodeId param = the(ast, NodeKind::ParamDecl);
    NodeId unary = the(ast, NodeKind::UnaryOp);
    CHECK(sorted_defs_of_use(cpg, unary) == std::vector<NodeId>{param});
    CHECK(sorted_defs_of_use(cpg, refs_named(ast, "x").back()) ==
          std::vector<NodeId>{unary});
  }
}

TEST_CASE("ddg: user calls conservatively redefine every field") {
  Cpg cpg = cpg_of(
      "class Box {\n"
      "  int v;\n"
      "\n"
      "  int bump() {\n"
      "    v = v + 1;\n"
      "    return v;\n"
      "  }\n"
      "\n"
      "  int twice() {\n"
      "    bump();\n"
      "    return v;\n"
      "  }\n"
      "}\n");
  const Ast& ast = cpg.ast;
  NodeId field = the(ast, NodeKind::FieldDecl);
  NodeId call = the(ast, NodeKind::Call);
  auto vuses = find_kind(ast, NodeKind::FieldAccess);
  REQUIRE(vuses.size() == 4); // assign lhs, rhs, bump return, twice return
  NodeId use_in_twice = vuses.back();

  CHECK(sorted_defs_of_use(cpg, use_in_twice) == std::vector<NodeId>{call});
  for (const auto& e : cpg.ddg)
    if (e.dst == use_in_twice) CHECK(e.label == "f" + std::to_string(field));
  // Inside bump the rhs read has no reaching definition at all.
  CHECK(sorted_defs_of_use(cpg, vuses[1]).empty());
  CHECK(sorted_defs_of_use(cpg, vuses[2]) ==
        std::vector<NodeId>{the(ast, NodeKind::Assign)});
}

TEST_CASE("cdg: branches, loops and early returns (hand-checked)") {
  SUBCASE("if-else: each arm depends on its label, the join does not") {
    Cpg cpg = cpg_of(
        "int f(int x) {\n"
        "  int r = 0;\n"
        "  if (x < 0) {\n"
        "    r = 1;\n"
        "  } else {\n"
        "    r = 2;\n"
        "  }\n"
        "  return r;\n"
        "}\n");
    const Ast& ast = cpg.ast;
    NodeId ifs = the(ast, NodeKind::IfStmt);
    auto assigns = find_kind(ast, NodeKind::Assign);
    std::vector<EdgeTuple> want{{ifs, assigns[0], "true"}, {ifs, assigns[1], "false"}};
    std::sort(want.begin(), want.end());
    CHECK(tuples(cpg.cdg) == want);
  }

  SUBCASE("early return makes the tail depend on the predicate's false edge") {
    Cpg cpg = cpg_of(
        "int f(int x) {\n"
        "  if (x < 0) {\n"
        "    return 0;\n"
        "  }\n"
        "  println(x);\n"
        "  return x;\n"
        "}\n");
    const Ast& ast = cpg.ast;
    NodeId ifs = the(ast, NodeKind::IfStmt);
    auto rets = find_kind(ast, NodeKind::ReturnStmt);
    std::vector<EdgeTuple> want{{ifs, rets[0], "true"},
                                {ifs, the(ast, NodeKind::ExprStmt), "false"},
                                {ifs, rets[1], "false"}};
    std::sort(want.begin(), want.end());
    CHECK(tuples(cpg.cdg) == want);
  }

  SUBCASE("loop bodies depend on the loop predicate, nesting is not transitive") {
    Cpg cpg = cpg_of(
        "int f(int a, int b) {\n"
        "  while (a < b) {\n"
        "    if (a < 0) {\n"
        "      a = 1;\n"
        "    }\n"
        "    a = a + 2;\n"
        "  }\n"
        "  return a;\n"
        "}\n");
    const Ast& ast = cpg.ast;
    NodeId wh = the(ast, NodeKind::WhileStmt);
    NodeId ifs = the(ast, NodeKind::IfStmt);
    auto assigns = find_kind(ast, NodeKind::Assign);
    std::vector<EdgeTuple> want{{wh, ifs, "true"},
                                {ifs, assigns[0], "true"},
                                {wh, assigns[1], "true"}};
    std::sort(want.begin(), want.end());
    CHECK(tuples(cpg.cdg) == want);
  }
}

TEST_CASE("ddg and cdg match their path-based oracles on the bundled programs") {
  for (const auto& s : whole_corpus()) {
    CAPTURE(s.id);
    Cpg cpg = build_cpg(parse_submission(s));
    CHECK(tuples(cpg.ddg) == oracle_ddg(cpg));
    CHECK(tuples(cpg.cdg) == oracle_cdg(cpg));
  }
}

TEST_CASE("ddg and cdg still match the oracles after normalization rewrites") {
  auto subs = whole_corpus();
  for (size_t i = 0; i < subs.size(); i += 4) {
    CAPTURE(subs[i].id);
    Cpg cpg = normalize(build_cpg(parse_submission(subs[i])));
    CHECK(tuples(cpg.ddg) == oracle_ddg(cpg));
    CHECK(tuples(cpg.cdg) == oracle_cdg(cpg));
  }
}

TEST_CASE("effects and purity classification") {
  Cpg cpg = cpg_of(
      "class Box {\n"
      "  int v;\n"
      "\n"
      "  int bump(int x) {\n"
      "    v = v + 1;\n"
      "    x = x + sqrt(4);\n"
      "    println(x);\n"
      "    bump(x);\n"
      "    return v;\n"
      "  }\n"
      "}\n");
  const Ast& ast = cpg.ast;
  NodeId field = the(ast, NodeKind::FieldDecl);
  Loc floc = "f" + std::to_string(field);
  auto body = ast.at(the(ast, NodeKind::Block)).children;
  REQUIRE(body.size() == 5);

  StatementEffects fx0 = statement_effects(ast, body[0]); // v = v + 1
  CHECK(fx0.writes == std::set<Loc>{floc});
  CHECK(fx0.reads == std::set<Loc>{floc});
  CHECK(!fx0.impure);
  CHECK(!fx0.terminates);

  StatementEffects fx1 = statement_effects(ast, body[1]); // pure builtin call
  CHECK(!fx1.impure);
  StatementEffects fx2 = statement_effects(ast, body[2]); // println
  CHECK(fx2.impure);
  CHECK(fx2.writes.empty());

  StatementEffects fx3 = statement_effects(ast, body[3]); // user call
  CHECK(fx3.impure);
  CHECK(fx3.writes == std::set<Loc>{floc});
  CHECK(fx3.reads.count(floc) == 1);

  StatementEffects fx4 = statement_effects(ast, body[4]); // return v
  CHECK(fx4.terminates);

  NodeId sqrtCall = kNoNode, userCall = kNoNode, printCall = kNoNode;
  for (NodeId c : find_kind(ast, NodeKind::Call)) {
    if (ast.at(c).name == "sqrt") sqrtCall = c;
    if (ast.at(c).name == "bump") userCall = c;
    if (ast.at(c).name == "println") printCall = c;
  }
  CHECK(!is_impure_node(ast, sqrtCall));
  CHECK(is_impure_node(ast, userCall));
  CHECK(is_impure_node(ast, printCall));
  CHECK(subtree_has_impure(ast, body[2]));
  CHECK(!subtree_has_impure(ast, body[1]));
  CHECK(subtree_is_pure_expr(ast, ast.at(body[1]).children[1])); // x + sqrt(4)
  CHECK(!subtree_is_pure_expr(ast, body[3]));
}

TEST_CASE("eval-order accesses report reads and writes in evaluation order") {
  Cpg cpg = cpg_of(
      "int f(int a, int b) {\n"
      "  a = b + a;\n"
      "  int c = a++ + b;\n"
      "  return c;\n"
      "}\n");
  const Ast& ast = cpg.ast;
  NodeId pa = the(ast, NodeKind::ParamDecl, 0);
  NodeId pb = the(ast, NodeKind::ParamDecl, 1);
  Loc la = "v" + std::to_string(pa), lb = "v" + std::to_string(pb);

  auto acc = eval_order_accesses(ast, the(ast, NodeKind::Assign));
  REQUIRE(acc.size() == 3);
  CHECK((acc[0].loc == lb && acc[0].is_read && !acc[0].is_write));
  CHECK((acc[1].loc == la && acc[1].is_read));
  CHECK((acc[2].loc == la && acc[2].is_write && !acc[2].is_read));

  NodeId decl = the(ast, NodeKind::LocalVarDecl);
  auto acc2 = eval_order_accesses(ast, decl);
  REQUIRE(acc2.size() == 3);
  CHECK((acc2[0].loc == la && acc2[0].is_read && acc2[0].is_write)); // a++
  CHECK((acc2[1].loc == lb && acc2[1].is_read));
  CHECK((acc2[2].loc == "v" + std::to_string(decl) && acc2[2].is_write));
}

TEST_CASE("location keys distinguish locals, params and fields") {
  Cpg cpg = cpg_of(
      "class Box {\n"
      "  int v;\n"
      "\n"
      "  int get_v(int p) {\n"
      "    int w = p;\n"
      "    v = w;\n"
      "    return v;\n"
      "  }\n"
      "}\n");
  const Ast& ast = cpg.ast;
  NodeId field = the(ast, NodeKind::FieldDecl);
  NodeId param = the(ast, NodeKind::ParamDecl);
  NodeId decl = the(ast, NodeKind::LocalVarDecl);
  CHECK(location_of(ast, param) == "v" + std::to_string(param));
  CHECK(location_of(ast, decl) == "v" + std::to_string(decl));
  CHECK(location_of(ast, refs_named(ast, "p")[0]) == "v" + std::to_string(param));
  CHECK(location_of(ast, find_kind(ast, NodeKind::FieldAccess)[0]) ==
        "f" + std::to_string(field));
}

TEST_CASE("recompute_layers is idempotent and rebuilds from scratch") {
  for (const auto& s : whole_corpus()) {
    CAPTURE(s.id);
    Cpg cpg = build_cpg(parse_submission(s));
    std::string once = export_text(cpg);
    recompute_layers(cpg);
    CHECK(export_text(cpg) == once);
    recompute_layers(cpg);
    CHECK(export_text(cpg) == once);
  }
}

TEST_CASE("export_text lists nodes then edges per layer") {
  Cpg cpg = cpg_of(kStraight);
  std::string text = export_text(cpg);
  CHECK(text.find("MethodDecl name=f type=int") != std::string::npos);
  CHECK(text.find("ParamDecl name=x type=int") != std::string::npos);
  size_t eogLines = 0, ddgLines = 0, cdgLines = 0, astLines = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    eogLines += line.find(" eog") != std::string::npos;
    ddgLines += line.find(" ddg") != std::string::npos;
    cdgLines += line.find(" cdg") != std::string::npos;
    astLines += line.find(" ast ") != std::string::npos;
  }
  CHECK(eogLines == cpg.eog.size());
  CHECK(ddgLines == cpg.ddg.size());
  CHECK(cdgLines == cpg.cdg.size());
  CHECK(astLines > 0);
  // Every ddg edge here is the local y or the param x.
  for (const auto& e : cpg.ddg) CHECK(e.label[0] == 'v');
}
