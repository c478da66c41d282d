#include "structsim/cpg.hpp"

#include <algorithm>
#include <deque>

#include "structsim/frontend.hpp"

namespace structsim {

namespace {

bool is_inc_dec(const Node& n) {
  return n.kind == NodeKind::UnaryOp &&
         (n.op == "++pre" || n.op == "++post" || n.op == "--pre" || n.op == "--post");
}

bool is_user_call(const Ast& ast, NodeId n) {
  const Node& node = ast.at(n);
  if (node.kind == NodeKind::New) return true;
  return node.kind == NodeKind::Call && !(!node.has_receiver && is_builtin(node.name));
}

// Fields (and unresolved field names) of the whole unit; the conservative
// write set for user calls.
std::vector<Loc> all_field_locs(const Ast& ast) {
  std::vector<Loc> out;
  ast.walk(ast.root, [&](NodeId n) {
    if (!ast.at(n).alive) return;
    if (ast.at(n).kind == NodeKind::FieldDecl) out.push_back("f" + std::to_string(n));
    if (ast.at(n).kind == NodeKind::FieldAccess && ast.at(n).resolved == kNoNode)
      out.push_back("f?" + ast.at(n).name);
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ----------------------------------------------------------- EOG builder ---

struct StmtFlow {
  NodeId entry = kNoNode;
  std::vector<std::pair<NodeId, std::string>> exits;
};

struct EogBuilder {
  const Ast& ast;
  std::vector<Edge>& edges;

  void edge(NodeId a, NodeId b, const std::string& label = "") { edges.push_back({a, b, label}); }

  void connect(const std::vector<std::pair<NodeId, std::string>>& exits, NodeId entry) {
    for (const auto& [n, l] : exits) edge(n, entry, l);
  }

  // Expressions have a single entry and exit at the expression node itself.
  NodeId expr_entry(NodeId e) {
    const Node& n = ast.at(e);
    switch (n.kind) {
      case NodeKind::Literal:
      case NodeKind::NameRef:
        return e;
      case NodeKind::FieldAccess:
        if (!n.children.empty()) {
          NodeId en = expr_entry(n.children[0]);
          edge(n.children[0], e);
          return en;
        }
        return e;
      case NodeKind::UnaryOp: {
        NodeId en = expr_entry(n.children[0]);
        edge(n.children[0], e);
        return en;
      }
      case NodeKind::BinaryOp: {
        if (n.op == "&&" || n.op == "||") {
          NodeId le = expr_entry(n.children[0]);
          NodeId re = expr_entry(n.children[1]);
          const char* enter = n.op == "&&" ? "true" : "false";
          const char* skip = n.op == "&&" ? "false" : "true";
          edge(n.children[0], re, enter);
          edge(n.children[0], e, skip);
          edge(n.children[1], e);
          return le;
        }
        NodeId le = expr_entry(n.children[0]);
        edge(n.children[0], expr_entry(n.children[1]));
        edge(n.children[1], e);
        return le;
      }
      case NodeKind::Call:
      case NodeKind::New:
      case NodeKind::OptionalWrap:
      case NodeKind::OptionalUnwrap: {
        NodeId first = kNoNode;
        NodeId prev = kNoNode;
        for (NodeId c : n.children) {
          NodeId en = expr_entry(c);
          if (first == kNoNode) first = en;
          if (prev != kNoNode) edge(prev, en);
          prev = c;
        }
        if (prev == kNoNode) return e;
        edge(prev, e);
        return first;
      }
      default:
        return e;
    }
  }

  StmtFlow stmt(NodeId s) {
    const Node& n = ast.at(s);
    switch (n.kind) {
      case NodeKind::Block: {
        StmtFlow f{s, {{s, ""}}};
        for (NodeId c : n.children) {
          StmtFlow cf = stmt(c);
          connect(f.exits, cf.entry);
          f.exits = cf.exits;
        }
        return f;
      }
      case NodeKind::LocalVarDecl: {
        if (n.children.empty()) return {s, {{s, ""}}};
        NodeId en = expr_entry(n.children[0]);
        edge(n.children[0], s);
        return {en, {{s, ""}}};
      }
      case NodeKind::Assign: {
        NodeId lhs = n.children[0];
        NodeId rhsEntry = expr_entry(n.children[1]);
        NodeId entry = rhsEntry;
        if (ast.at(lhs).kind == NodeKind::FieldAccess && !ast.at(lhs).children.empty()) {
          // Receiver of a field store is evaluated before the value.
          NodeId recv = ast.at(lhs).children[0];
          entry = expr_entry(recv);
          edge(recv, rhsEntry);
        }
        edge(n.children[1], s);
        return {entry, {{s, ""}}};
      }
      case NodeKind::ExprStmt: {
        NodeId en = expr_entry(n.children[0]);
        edge(n.children[0], s);
        return {en, {{s, ""}}};
      }
      case NodeKind::IfStmt: {
        NodeId condEntry = expr_entry(n.children[0]);
        edge(s, condEntry);
        StmtFlow thenF = stmt(n.children[1]);
        edge(n.children[0], thenF.entry, "true");
        StmtFlow f{s, thenF.exits};
        if (n.children.size() > 2) {
          StmtFlow elseF = stmt(n.children[2]);
          edge(n.children[0], elseF.entry, "false");
          f.exits.insert(f.exits.end(), elseF.exits.begin(), elseF.exits.end());
        } else {
          f.exits.push_back({n.children[0], "false"});
        }
        return f;
      }
      case NodeKind::WhileStmt: {
        NodeId condEntry = expr_entry(n.children[0]);
        edge(s, condEntry);
        StmtFlow body = stmt(n.children[1]);
        edge(n.children[0], body.entry, "true");
        for (const auto& [x, l] : body.exits) edge(x, condEntry, l.empty() ? "back" : l);
        return {s, {{n.children[0], "false"}}};
      }
      case NodeKind::ForStmt: {
        StmtFlow init = stmt(n.children[0]);
        edge(s, init.entry);
        NodeId condEntry = expr_entry(n.children[1]);
        connect(init.exits, condEntry);
        StmtFlow body = stmt(n.children[3]);
        edge(n.children[1], body.entry, "true");
        StmtFlow upd = stmt(n.children[2]);
        connect(body.exits, upd.entry);
        for (const auto& [x, l] : upd.exits) edge(x, condEntry, l.empty() ? "back" : l);
        return {s, {{n.children[1], "false"}}};
      }
      case NodeKind::ReturnStmt:
      case NodeKind::ThrowStmt: {
        if (n.children.empty()) return {s, {}};
        NodeId en = expr_entry(n.children[0]);
        edge(n.children[0], s);
        return {en, {}};
      }
      default:
        return {s, {{s, ""}}};
    }
  }

  void callable(NodeId m) {
    const Node& n = ast.at(m);
    NodeId prev = m;
    for (size_t i = 0; i + 1 < n.children.size(); ++i) {
      edge(prev, n.children[i]);
      prev = n.children[i];
    }
    StmtFlow body = stmt(n.children.back());
    edge(prev, body.entry);
    // Dangling exits fall off the end of the callable.
  }
};

// ----------------------------------------------------- reaching defs/DDG ---

struct BitVec {
  std::vector<uint64_t> w;
  explicit BitVec(size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(size_t i) { w[i / 64] |= 1ULL << (i % 64); }
  bool get(size_t i) const { return (w[i / 64] >> (i % 64)) & 1; }
  bool merge(const BitVec& o) { // this |= o, returns changed
    bool ch = false;
    for (size_t i = 0; i < w.size(); ++i) {
      uint64_t nv = w[i] | o.w[i];
      if (nv != w[i]) { w[i] = nv; ch = true; }
    }
    return ch;
  }
};

} // namespace

Loc location_of(const Ast& ast, NodeId lvalue) {
  const Node& n = ast.at(lvalue);
  if (n.kind == NodeKind::NameRef) {
    if (n.resolved != kNoNode) return "v" + std::to_string(n.resolved);
    return "v?" + n.name;
  }
  if (n.kind == NodeKind::FieldAccess) {
    if (n.resolved != kNoNode) return "f" + std::to_string(n.resolved);
    return "f?" + n.name;
  }
  if (n.kind == NodeKind::LocalVarDecl || n.kind == NodeKind::ParamDecl)
    return "v" + std::to_string(lvalue);
  return "";
}

std::vector<Loc> defs_at(const Ast& ast, NodeId id) {
  const Node& n = ast.at(id);
  switch (n.kind) {
    case NodeKind::ParamDecl:
      return {location_of(ast, id)};
    case NodeKind::LocalVarDecl:
      return {location_of(ast, id)};
    case NodeKind::Assign:
      return {location_of(ast, n.children[0])};
    case NodeKind::UnaryOp:
      if (is_inc_dec(n)) return {location_of(ast, n.children[0])};
      return {};
    case NodeKind::Call:
    case NodeKind::New:
      if (is_user_call(ast, id)) return all_field_locs(ast);
      return {};
    default:
      return {};
  }
}

std::vector<Loc> uses_at(const Ast& ast, NodeId id) {
  const Node& n = ast.at(id);
  NodeId p = n.parent;
  bool isAssignLhs = p != kNoNode && ast.at(p).kind == NodeKind::Assign &&
                     ast.at(p).children[0] == id;
  bool isIncDecOperand = p != kNoNode && is_inc_dec(ast.at(p)) && ast.at(p).children[0] == id;
  switch (n.kind) {
    case NodeKind::NameRef:
      if (isAssignLhs || isIncDecOperand) return {};
      if (n.resolved != kNoNode &&
          (ast.at(n.resolved).kind == NodeKind::LocalVarDecl ||
           ast.at(n.resolved).kind == NodeKind::ParamDecl))
        return {location_of(ast, id)};
      return {};
    case NodeKind::FieldAccess:
      if (isAssignLhs || isIncDecOperand) return {};
      return {location_of(ast, id)};
    case NodeKind::UnaryOp:
      if (is_inc_dec(n)) return {location_of(ast, n.children[0])};
      return {};
    default:
      return {};
  }
}

bool is_impure_node(const Ast& ast, NodeId id) {
  const Node& n = ast.at(id);
  if (n.kind == NodeKind::New) return true;
  if (n.kind == NodeKind::Call) {
    if (!n.has_receiver && is_pure_builtin(n.name)) return false;
    return true; // println, readLine, any user call
  }
  return false;
}

bool subtree_has_impure(const Ast& ast, NodeId root) {
  bool found = false;
  ast.walk(root, [&](NodeId n) { found = found || is_impure_node(ast, n); });
  return found;
}

bool subtree_is_pure_expr(const Ast& ast, NodeId root) {
  bool pure = true;
  ast.walk(root, [&](NodeId n) {
    if (is_impure_node(ast, n) || !defs_at(ast, n).empty()) pure = false;
  });
  return pure;
}

StatementEffects statement_effects(const Ast& ast, NodeId stmt) {
  StatementEffects fx;
  std::vector<Loc> fields; // lazily computed
  ast.walk(stmt, [&](NodeId n) {
    const Node& node = ast.at(n);
    if (node.kind == NodeKind::ReturnStmt || node.kind == NodeKind::ThrowStmt)
      fx.terminates = true;
    if (is_impure_node(ast, n)) fx.impure = true;
    for (auto& l : uses_at(ast, n)) fx.reads.insert(l);
    for (auto& l : defs_at(ast, n)) fx.writes.insert(l);
    if (is_user_call(ast, n)) {
      // A callee may read any field it can reach.
      if (fields.empty()) fields = all_field_locs(ast);
      for (auto& l : fields) fx.reads.insert(l);
    }
  });
  return fx;
}

namespace {

void eval_order_walk(const Ast& ast, NodeId e, std::vector<Access>& out) {
  const Node& n = ast.at(e);
  switch (n.kind) {
    case NodeKind::Literal:
      return;
    case NodeKind::NameRef: {
      auto us = uses_at(ast, e);
      if (!us.empty()) out.push_back({e, us[0], true, false});
      return;
    }
    case NodeKind::FieldAccess: {
      if (!n.children.empty()) eval_order_walk(ast, n.children[0], out);
      auto us = uses_at(ast, e);
      if (!us.empty()) out.push_back({e, us[0], true, false});
      return;
    }
    case NodeKind::UnaryOp:
      if (is_inc_dec(n)) {
        out.push_back({e, location_of(ast, n.children[0]), true, true});
        return;
      }
      eval_order_walk(ast, n.children[0], out);
      return;
    default:
      for (NodeId c : n.children) eval_order_walk(ast, c, out);
      return;
  }
}

} // namespace

std::vector<Access> eval_order_accesses(const Ast& ast, NodeId stmt) {
  std::vector<Access> out;
  const Node& n = ast.at(stmt);
  switch (n.kind) {
    case NodeKind::LocalVarDecl:
      if (!n.children.empty()) eval_order_walk(ast, n.children[0], out);
      out.push_back({stmt, location_of(ast, stmt), false, true});
      return out;
    case NodeKind::Assign: {
      NodeId lhs = n.children[0];
      if (ast.at(lhs).kind == NodeKind::FieldAccess && !ast.at(lhs).children.empty())
        eval_order_walk(ast, ast.at(lhs).children[0], out);
      eval_order_walk(ast, n.children[1], out);
      out.push_back({stmt, location_of(ast, lhs), false, true});
      return out;
    }
    default:
      eval_order_walk(ast, stmt, out);
      return out;
  }
}

// ------------------------------------------------------------ layer build --

namespace {

void build_ddg(Cpg& cpg) {
  const Ast& ast = cpg.ast;
  std::vector<Loc> fields = all_field_locs(ast);

  for (NodeId m : cpg.callables) {
    // Collect the callable's EOG nodes.
    std::set<NodeId> nodes;
    ast.walk(m, [&](NodeId n) { nodes.insert(n); });

    struct DefSite {
      NodeId node;
      Loc loc;
    };
    std::vector<DefSite> defs;
    for (NodeId n : nodes) {
      if (!ast.at(n).alive) continue;
      if (is_user_call(ast, n)) {
        for (const auto& l : fields) defs.push_back({n, l});
      } else {
        for (const auto& l : defs_at(ast, n)) defs.push_back({n, l});
      }
    }
    size_t nd = defs.size();
    std::map<NodeId, std::vector<size_t>> gen;
    std::map<Loc, std::vector<size_t>> byLoc;
    for (size_t i = 0; i < nd; ++i) {
      gen[defs[i].node].push_back(i);
      byLoc[defs[i].loc].push_back(i);
    }

    std::map<NodeId, BitVec> in, out;
    for (NodeId n : nodes) {
      in.emplace(n, BitVec(nd));
      out.emplace(n, BitVec(nd));
    }

    std::deque<NodeId> work(nodes.begin(), nodes.end());
    while (!work.empty()) {
      NodeId n = work.front();
      work.pop_front();
      BitVec nin(nd);
      auto pit = cpg.eog_pred.find(n);
      if (pit != cpg.eog_pred.end())
        for (NodeId p : pit->second)
          if (nodes.count(p)) nin.merge(out[p]);
      in[n] = nin;
      BitVec nout = nin;
      auto git = gen.find(n);
      if (git != gen.end()) {
        // Kill every other def of the same locations, then gen our own.
        for (size_t di : git->second)
          for (size_t other : byLoc[defs[di].loc])
            nout.w[other / 64] &= ~(1ULL << (other % 64));
        for (size_t di : git->second) nout.set(di);
      }
      bool changed = false;
      for (size_t i = 0; i < nout.w.size(); ++i)
        if (nout.w[i] != out[n].w[i]) { changed = true; break; }
      if (changed) {
        out[n] = nout;
        auto sit = cpg.eog_succ.find(n);
        if (sit != cpg.eog_succ.end())
          for (NodeId s : sit->second)
            if (nodes.count(s)) work.push_back(s);
      }
    }

    for (NodeId u : nodes) {
      if (!ast.at(u).alive) continue;
      for (const auto& loc : uses_at(ast, u)) {
        auto lit = byLoc.find(loc);
        if (lit == byLoc.end()) continue;
        for (size_t di : lit->second)
          if (in[u].get(di)) cpg.ddg.push_back({defs[di].node, u, loc});
      }
    }
  }
}

// Statement-level CFG for control dependence.
struct CfgBuilder {
  const Ast& ast;
  std::vector<NodeId> nodes;            // index -> stmt node (0=entry, 1=exit)
  std::vector<std::vector<std::pair<int, std::string>>> succ;

  int add(NodeId stmt) {
    nodes.push_back(stmt);
    succ.emplace_back();
    return static_cast<int>(nodes.size()) - 1;
  }

  void edge(int a, int b, const std::string& l = "") { succ[a].push_back({b, l}); }

  struct Flow {
    int entry;
    std::vector<std::pair<int, std::string>> exits;
  };

  Flow stmt(NodeId s) {
    const Node& n = ast.at(s);
    switch (n.kind) {
      case NodeKind::Block: {
        Flow f{-1, {}};
        for (NodeId c : n.children) {
          Flow cf = stmt(c);
          if (f.entry == -1) f.entry = cf.entry;
          else
            for (auto& [x, l] : f.exits) edge(x, cf.entry, l);
          f.exits = cf.exits;
        }
        if (f.entry == -1) { // empty block: a skippable no-op node
          int id = add(s);
          return {id, {{id, ""}}};
        }
        return f;
      }
      case NodeKind::IfStmt: {
        int p = add(s);
        Flow thenF = stmt(n.children[1]);
        edge(p, thenF.entry, "true");
        Flow f{p, thenF.exits};
        if (n.children.size() > 2) {
          Flow elseF = stmt(n.children[2]);
          edge(p, elseF.entry, "false");
          f.exits.insert(f.exits.end(), elseF.exits.begin(), elseF.exits.end());
        } else {
          f.exits.push_back({p, "false"});
        }
        return f;
      }
      case NodeKind::WhileStmt: {
        int p = add(s);
        Flow body = stmt(n.children[1]);
        edge(p, body.entry, "true");
        for (auto& [x, l] : body.exits) edge(x, p, l);
        return {p, {{p, "false"}}};
      }
      case NodeKind::ForStmt: {
        Flow init = stmt(n.children[0]);
        int p = add(s);
        for (auto& [x, l] : init.exits) edge(x, p, l);
        Flow body = stmt(n.children[3]);
        edge(p, body.entry, "true");
        Flow upd = stmt(n.children[2]);
        for (auto& [x, l] : body.exits) edge(x, upd.entry, l);
        for (auto& [x, l] : upd.exits) edge(x, p, l);
        return {init.entry, {{p, "false"}}};
      }
      case NodeKind::ReturnStmt:
      case NodeKind::ThrowStmt: {
        int id = add(s);
        edge(id, 1); // exit
        return {id, {}};
      }
      default: {
        int id = add(s);
        return {id, {{id, ""}}};
      }
    }
  }
};

void build_cdg(Cpg& cpg) {
  const Ast& ast = cpg.ast;
  for (NodeId m : cpg.callables) {
    CfgBuilder b{ast, {}, {}};
    b.add(kNoNode); // 0 entry
    b.add(kNoNode); // 1 exit
    auto f = b.stmt(ast.at(m).children.back());
    b.edge(0, f.entry);
    for (auto& [x, l] : f.exits) b.edge(x, 1, l);

    size_t N = b.nodes.size();
    // Post-dominators by iterative intersection over successors.
    std::vector<std::set<int>> pd(N);
    std::set<int> all;
    for (size_t i = 0; i < N; ++i) all.insert(static_cast<int>(i));
    for (size_t i = 0; i < N; ++i) pd[i] = (i == 1) ? std::set<int>{1} : all;
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t i = 0; i < N; ++i) {
        if (i == 1) continue;
        std::set<int> inter;
        bool first = true;
        for (auto& [s, l] : b.succ[i]) {
          if (first) { inter = pd[s]; first = false; }
          else {
            std::set<int> tmp;
            std::set_intersection(inter.begin(), inter.end(), pd[s].begin(), pd[s].end(),
                                  std::inserter(tmp, tmp.begin()));
            inter = tmp;
          }
        }
        if (first) inter.clear(); // no successors: unreachable tail
        inter.insert(static_cast<int>(i));
        if (inter != pd[i]) { pd[i] = inter; changed = true; }
      }
    }

    // s is control-dependent on predicate p via edge (p,x,label) iff s
    // post-dominates x but not p.
    for (size_t p = 0; p < N; ++p) {
      if (b.succ[p].size() < 2) continue;
      for (auto& [x, label] : b.succ[p]) {
        for (size_t s = 2; s < N; ++s) {
          if (s == p || b.nodes[s] == kNoNode) continue;
          if (pd[x].count(static_cast<int>(s)) && !pd[p].count(static_cast<int>(s)))
            cpg.cdg.push_back({b.nodes[p], b.nodes[s], label});
        }
      }
    }
  }
}

} // namespace

void recompute_layers(Cpg& cpg) {
  cpg.eog.clear();
  cpg.ddg.clear();
  cpg.cdg.clear();
  cpg.eog_succ.clear();
  cpg.eog_pred.clear();
  cpg.ddg_defs_of_use.clear();
  cpg.ddg_uses_of_def.clear();
  cpg.callables.clear();

  const Ast& ast = cpg.ast;
  ast.walk(ast.root, [&](NodeId n) {
    if (!ast.at(n).alive) return;
    NodeKind k = ast.at(n).kind;
    if (k == NodeKind::MethodDecl || k == NodeKind::ConstructorDecl)
      cpg.callables.push_back(n);
  });

  EogBuilder eb{cpg.ast, cpg.eog};
  for (NodeId m : cpg.callables) eb.callable(m);
  for (const auto& e : cpg.eog) {
    cpg.eog_succ[e.src].push_back(e.dst);
    cpg.eog_pred[e.dst].push_back(e.src);
  }

  build_ddg(cpg);
  for (const auto& e : cpg.ddg) {
    cpg.ddg_defs_of_use[e.dst].push_back(e.src);
    cpg.ddg_uses_of_def[e.src].push_back(e.dst);
  }

  build_cdg(cpg);
}

Cpg build_cpg(Ast ast) {
  Cpg cpg;
  cpg.ast = std::move(ast);
  recompute_layers(cpg);
  return cpg;
}

std::set<NodeId> eog_nodes_between(const Cpg& cpg, NodeId from, NodeId to) {
  auto reach = [&](NodeId start, const std::map<NodeId, std::vector<NodeId>>& adj,
                   NodeId avoid) {
    std::set<NodeId> seen;
    std::deque<NodeId> work;
    auto it = adj.find(start);
    if (it != adj.end())
      for (NodeId n : it->second)
        if (n != avoid) work.push_back(n);
    while (!work.empty()) {
      NodeId n = work.front();
      work.pop_front();
      if (!seen.insert(n).second) continue;
      auto jt = adj.find(n);
      if (jt != adj.end())
        for (NodeId s : jt->second)
          if (s != avoid) work.push_back(s);
    }
    return seen;
  };
  std::set<NodeId> fwd = reach(from, cpg.eog_succ, from);
  std::set<NodeId> bwd = reach(to, cpg.eog_pred, from);
  std::set<NodeId> out;
  std::set_intersection(fwd.begin(), fwd.end(), bwd.begin(), bwd.end(),
                        std::inserter(out, out.begin()));
  out.erase(to);
  return out;
}

std::string export_text(const Cpg& cpg) {
  const Ast& ast = cpg.ast;
  std::string s;
  ast.walk(ast.root, [&](NodeId id) {
    const Node& n = ast.at(id);
    if (!n.alive) return;
    s += std::to_string(id);
    s += ' ';
    s += kind_name(n.kind);
    if (!n.name.empty()) s += " name=" + n.name;
    if (!n.type_name.empty()) s += " type=" + n.type_name;
    if (!n.op.empty()) s += " op=" + n.op;
    if (n.lit_type != LitType::None) s += " lit=" + n.literal;
    if (n.is_static) s += " static=1";
    if (n.is_final) s += " final=1";
    s += '\n';
  });
  auto dump_edges = [&](const char* layer, const std::vector<Edge>& edges) {
    for (const auto& e : edges) {
      s += std::to_string(e.src) + " " + std::to_string(e.dst) + " " + layer;
      if (!e.label.empty()) s += " " + e.label;
      s += '\n';
    }
  };
  std::vector<Edge> astEdges;
  ast.walk(ast.root, [&](NodeId id) {
    if (!ast.at(id).alive) return;
    const auto& kids = ast.at(id).children;
    for (size_t i = 0; i < kids.size(); ++i)
      astEdges.push_back({id, kids[i], std::to_string(i)});
  });
  dump_edges("ast", astEdges);
  dump_edges("eog", cpg.eog);
  dump_edges("ddg", cpg.ddg);
  dump_edges("cdg", cpg.cdg);
  return s;
}

} // namespace structsim
