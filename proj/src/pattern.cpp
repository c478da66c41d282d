#include "structsim/pattern.hpp"

#include <algorithm>

#include "structsim/errors.hpp"

namespace structsim {

NodePattern& NodePattern::operator=(const NodePattern& o) {
  if (this == &o) return *this;
  role = o.role;
  kind = o.kind;
  subtree = o.subtree;
  attrs = o.attrs;
  children.clear();
  for (const auto& c : o.children) {
    Child nc;
    nc.mode = c.mode;
    nc.pattern = std::make_unique<NodePattern>(*c.pattern);
    children.push_back(std::move(nc));
  }
  return *this;
}

NodePattern& NodePattern::child(NodePattern p, ChildMode mode) {
  Child c;
  c.mode = mode;
  c.pattern = std::make_unique<NodePattern>(std::move(p));
  children.push_back(std::move(c));
  return *this;
}

namespace {

std::string lit_type_name(LitType t) {
  switch (t) {
    case LitType::None: return "none";
    case LitType::Int: return "int";
    case LitType::Double: return "double";
    case LitType::Bool: return "bool";
    case LitType::String: return "string";
  }
  return "none";
}

std::string node_attr(const Ast& ast, NodeId id, const std::string& key) {
  const Node& n = ast.at(id);
  if (key == "name") return n.name;
  if (key == "type") return n.type_name;
  if (key == "op") return n.op;
  if (key == "literal") return n.literal;
  if (key == "lit_type") return lit_type_name(n.lit_type);
  if (key == "static") return n.is_static ? "1" : "0";
  if (key == "final") return n.is_final ? "1" : "0";
  if (key == "has_receiver") return n.has_receiver ? "1" : "0";
  return "";
}

// Injective role binding: a node may carry at most one role.
bool bind_role(PatternMatch& m, const std::string& role, NodeId n) {
  for (const auto& [r, id] : m.roles)
    if (id == n && r != role) return false;
  auto it = m.roles.find(role);
  if (it != m.roles.end()) return it->second == n;
  m.roles[role] = n;
  return true;
}

struct Matcher {
  const Ast& ast;

  std::vector<PatternMatch> match_node(const NodePattern& p, NodeId id,
                                       const PatternMatch& base) {
    const Node& n = ast.at(id);
    if (!n.alive) return {};
    if (p.kind && n.kind != *p.kind) return {};
    for (const auto& [k, v] : p.attrs)
      if (node_attr(ast, id, k) != v) return {};

    PatternMatch start = base;
    if (!p.role.empty() && !bind_role(start, p.role, id)) return {};
    if (p.subtree) return {std::move(start)};

    std::vector<NodeId> kids;
    for (NodeId c : n.children)
      if (ast.at(c).alive) kids.push_back(c);

    // Forbidden specs veto the whole node if any child matches them.
    std::vector<const NodePattern::Child*> pos;
    for (const auto& c : p.children) {
      if (c.mode == ChildMode::Forbidden) {
        for (NodeId k : kids)
          if (!match_node(*c.pattern, k, PatternMatch{}).empty()) return {};
      } else {
        pos.push_back(&c);
      }
    }

    std::vector<PatternMatch> out;
    match_seq(pos, kids, 0, 0, start, out);
    return out;
  }

  void match_seq(const std::vector<const NodePattern::Child*>& specs,
                 const std::vector<NodeId>& kids, size_t si, size_t ki, PatternMatch cur,
                 std::vector<PatternMatch>& out) {
    if (si == specs.size()) {
      if (ki == kids.size()) out.push_back(std::move(cur));
      return;
    }
    const auto& spec = *specs[si];
    switch (spec.mode) {
      case ChildMode::One:
        if (ki < kids.size())
          for (auto& m : match_node(*spec.pattern, kids[ki], cur))
            match_seq(specs, kids, si + 1, ki + 1, std::move(m), out);
        return;
      case ChildMode::Optional:
        if (ki < kids.size())
          for (auto& m : match_node(*spec.pattern, kids[ki], cur))
            match_seq(specs, kids, si + 1, ki + 1, std::move(m), out);
        match_seq(specs, kids, si + 1, ki, cur, out);
        return;
      case ChildMode::Rest: {
        // Rest captures a run of children, each matching the element
        // constraints; elements are bound as a list, not individually.
        for (size_t take = 0; ki + take <= kids.size(); ++take) {
          bool ok = true;
          for (size_t i = 0; i < take; ++i) {
            PatternMatch probe;
            NodePattern elem = *spec.pattern; // constraints without the role
            elem.role.clear();
            if (match_node(elem, kids[ki + i], probe).empty()) { ok = false; break; }
          }
          if (!ok) break;
          PatternMatch m = cur;
          auto& lst = m.lists[spec.pattern->role];
          lst.assign(kids.begin() + static_cast<long>(ki),
                     kids.begin() + static_cast<long>(ki + take));
          match_seq(specs, kids, si + 1, ki + take, std::move(m), out);
        }
        return;
      }
      case ChildMode::Forbidden:
        return; // handled in match_node
    }
  }
};

bool binding_less(const PatternMatch& a, const PatternMatch& b) {
  if (a.roles != b.roles) return a.roles < b.roles;
  return a.lists < b.lists;
}

} // namespace

std::vector<PatternMatch> find_matches(const Cpg& cpg, const GraphPattern& S) {
  const Ast& ast = cpg.ast;
  Matcher m{ast};
  std::vector<PatternMatch> out;
  for (NodeId id = 0; id < static_cast<NodeId>(ast.size()); ++id) {
    if (!ast.at(id).alive) continue;
    if (S.parent_kind) {
      NodeId p = ast.at(id).parent;
      if (p == kNoNode || ast.at(p).kind != *S.parent_kind) continue;
    }
    for (auto& cand : m.match_node(S.root, id, PatternMatch{})) {
      cand.root = id;
      bool ok = true;
      for (const auto& pred : S.predicates)
        if (!pred.fn(cpg, cand)) { ok = false; break; }
      if (ok) out.push_back(std::move(cand));
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const PatternMatch& a, const PatternMatch& b) {
    if (a.root != b.root) return a.root < b.root;
    return binding_less(a, b);
  });
  return out;
}

// --------------------------------------------------------------- derive ----

namespace {

struct PatIndex {
  struct Info {
    const NodePattern* pat = nullptr;
    std::string parent;   // parent role, empty for root
    int slot = -1;        // positional slot in parent (Forbidden excluded)
    bool rest = false;
    bool after_rest = false; // a Rest slot precedes this slot
  };
  std::map<std::string, Info> info;
  std::vector<std::string> preorder;

  void collect(const NodePattern& p, const std::string& parent, int slot, bool rest,
               bool afterRest) {
    if (p.role.empty()) throw TransformError("pattern node without role cannot be derived");
    if (info.count(p.role)) throw TransformError("duplicate role " + p.role);
    info[p.role] = {&p, parent, slot, rest, afterRest};
    preorder.push_back(p.role);
    int s = 0;
    bool seenRest = false;
    for (const auto& c : p.children) {
      if (c.mode == ChildMode::Forbidden) continue;
      collect(*c.pattern, p.role, s, c.mode == ChildMode::Rest, seenRest);
      if (c.mode == ChildMode::Rest) seenRest = true;
      ++s;
    }
  }
};

} // namespace

TransformationTemplate derive_template(const std::string& name, const GraphPattern& S,
                                       const GraphPattern& T) {
  PatIndex si, ti;
  si.collect(S.root, "", -1, false, false);
  ti.collect(T.root, "", -1, false, false);

  TransformationTemplate tmpl;
  tmpl.name = name;
  tmpl.source = S;
  auto& ops = tmpl.ops;

  // 1. Create T-only roles, with their constant attributes.
  for (const auto& role : ti.preorder) {
    if (si.info.count(role)) continue;
    const NodePattern* p = ti.info[role].pat;
    if (ti.info[role].rest)
      throw TransformError("cannot create rest role " + role);
    if (!p->kind)
      throw TransformError("cannot create wildcard-kind role " + role);
    ops.push_back({OpCode::CREATE_NODE, role, "", "", -1, *p->kind});
    for (const auto& [k, v] : p->attrs)
      ops.push_back({OpCode::SET_ATTR, role, k, v, -1, NodeKind::Unit});
  }

  // 2. Attribute changes on common roles.
  for (const auto& role : ti.preorder) {
    auto sit = si.info.find(role);
    if (sit == si.info.end()) continue;
    const NodePattern* tp = ti.info[role].pat;
    const NodePattern* sp = sit->second.pat;
    for (const auto& [k, v] : tp->attrs) {
      auto sv = sp->attrs.find(k);
      if (sv != sp->attrs.end() && sv->second == v) continue;
      ops.push_back({OpCode::SET_ATTR, role, k, v, -1, NodeKind::Unit});
    }
  }

  // 3. Root replacement.
  if (T.root.role != S.root.role)
    ops.push_back({OpCode::REPLACE_NODE, S.root.role, T.root.role, "", -1, NodeKind::Unit});

  // 4. Detach S children that leave their (common) parent.
  for (const auto& role : si.preorder) {
    const auto& inf = si.info[role];
    if (inf.parent.empty()) continue;
    if (!ti.info.count(inf.parent)) continue; // parent vanishes wholesale
    auto tit = ti.info.find(role);
    bool leaves = tit == ti.info.end() || tit->second.parent != inf.parent;
    if (leaves && !inf.rest)
      ops.push_back({OpCode::REMOVE_CHILD, inf.parent, role, "", -1, NodeKind::Unit});
    if (leaves && inf.rest)
      throw TransformError("rest role " + role + " cannot change parent");
  }

  // 5. Rewire children per T, preorder, ascending slots. Slots after a Rest
  // slot use append semantics and must come last among the parent's specs.
  for (const auto& prole : ti.preorder) {
    const NodePattern* tp = ti.info[prole].pat;
    int slot = 0;
    for (const auto& c : tp->children) {
      if (c.mode == ChildMode::Forbidden) continue;
      const std::string& crole = c.pattern->role;
      const auto& tinf = ti.info[crole];
      int tslot = slot++;
      int idx = tinf.after_rest ? -1 : tslot;
      auto sit = si.info.find(crole);
      if (c.mode == ChildMode::Rest) {
        if (sit == si.info.end() || sit->second.parent != prole)
          throw TransformError("rest role " + crole + " must stay in place");
        continue;
      }
      if (sit == si.info.end()) {
        ops.push_back({OpCode::ADD_CHILD, prole, crole, "", idx, NodeKind::Unit});
      } else if (sit->second.parent != prole || sit->second.slot != tslot) {
        ops.push_back({OpCode::MOVE_CHILD, crole, prole, "", idx, NodeKind::Unit});
      }
    }
  }

  // 6. Delete topmost S-only roles.
  for (const auto& role : si.preorder) {
    if (ti.info.count(role)) continue;
    const auto& inf = si.info[role];
    if (!inf.parent.empty() && !ti.info.count(inf.parent)) continue; // parent deleted too
    if (inf.rest) throw TransformError("rest role " + role + " cannot be deleted");
    ops.push_back({OpCode::DELETE_NODE, role, "", "", -1, NodeKind::Unit});
  }

  return tmpl;
}

// -------------------------------------------------------------- executor ---

namespace {

void set_attr(Ast& ast, NodeId id, const std::string& key, const std::string& value,
              const PatternMatch& m) {
  Node& n = ast.at(id);
  std::string v = value;
  NodeId ref = kNoNode;
  if (!value.empty() && value[0] == '@') {
    ref = m.at(value.substr(1));
    if (ref == kNoNode) throw TransformError("unbound role in value " + value);
    v = ast.at(ref).name;
  }
  if (key == "name") n.name = v;
  else if (key == "type") n.type_name = v;
  else if (key == "op") n.op = v;
  else if (key == "literal") n.literal = v;
  else if (key == "lit_type") {
    if (v == "int") n.lit_type = LitType::Int;
    else if (v == "double") n.lit_type = LitType::Double;
    else if (v == "bool") n.lit_type = LitType::Bool;
    else if (v == "string") n.lit_type = LitType::String;
    else n.lit_type = LitType::None;
  } else if (key == "static") n.is_static = v == "1";
  else if (key == "final") n.is_final = v == "1";
  else if (key == "has_receiver") n.has_receiver = v == "1";
  else if (key == "resolved") n.resolved = ref;
  else throw TransformError("unknown attribute " + key);
}

} // namespace

void apply_ops(Ast& ast, PatternMatch& match, const std::vector<TransformOp>& ops) {
  auto bound = [&](const std::string& role) { return match.at(role) != kNoNode; };
  for (const auto& op : ops) {
    switch (op.code) {
      case OpCode::CREATE_NODE: {
        NodeId id = ast.make(op.kind);
        match.roles[op.a] = id;
        break;
      }
      case OpCode::DELETE_NODE:
        if (!bound(op.a)) break; // optional role absent in this match
        ast.erase_subtree(match.at(op.a));
        break;
      case OpCode::SET_ATTR:
        if (!bound(op.a)) break;
        set_attr(ast, match.at(op.a), op.b, op.value, match);
        break;
      case OpCode::ADD_CHILD: {
        if (!bound(op.a) || !bound(op.b)) break;
        NodeId c = match.at(op.b);
        if (ast.at(c).parent != kNoNode) ast.detach(c);
        if (op.index < 0) ast.add_child(match.at(op.a), c);
        else ast.insert_child(match.at(op.a), c, static_cast<size_t>(op.index));
        break;
      }
      case OpCode::REMOVE_CHILD:
        if (!bound(op.b)) break;
        ast.detach(match.at(op.b));
        break;
      case OpCode::MOVE_CHILD: {
        if (!bound(op.a) || !bound(op.b)) break;
        NodeId c = match.at(op.a);
        if (ast.at(c).parent != kNoNode) ast.detach(c);
        if (op.index < 0) ast.add_child(match.at(op.b), c);
        else ast.insert_child(match.at(op.b), c, static_cast<size_t>(op.index));
        break;
      }
      case OpCode::REPLACE_NODE: {
        if (!bound(op.a) || !bound(op.b)) break;
        NodeId oldN = match.at(op.a);
        NodeId newN = match.at(op.b);
        NodeId parent = ast.at(oldN).parent;
        if (parent == kNoNode) throw TransformError("REPLACE_NODE on detached node");
        int idx = ast.child_index(oldN);
        if (ast.at(newN).parent != kNoNode) ast.detach(newN);
        ast.detach(oldN);
        ast.insert_child(parent, newN, static_cast<size_t>(idx));
        break;
      }
      case OpCode::CLONE_SUBTREE: {
        if (!bound(op.a)) break;
        match.roles[op.b] = ast.clone_subtree(match.at(op.a));
        break;
      }
    }
  }
}

// ----------------------------------------------------------------- apply ---

namespace {

// Structural snapshot of the nodes a match binds; a match is skipped when an
// earlier rewrite in the same pass changed any of them.
struct Snapshot {
  std::vector<std::pair<NodeId, std::string>> entries;

  static std::string state_of(const Ast& ast, NodeId id) {
    const Node& n = ast.at(id);
    std::string s = n.alive ? "a" : "d";
    s += kind_name(n.kind);
    s += '|' + n.name + '|' + n.type_name + '|' + n.op + '|' + n.literal;
    s += '|' + std::to_string(n.parent);
    for (NodeId c : n.children) s += ',' + std::to_string(c);
    return s;
  }

  static Snapshot take(const Ast& ast, const PatternMatch& m) {
    Snapshot snap;
    auto add = [&](NodeId id) { snap.entries.push_back({id, state_of(ast, id)}); };
    for (const auto& [r, id] : m.roles) add(id);
    for (const auto& [r, ids] : m.lists)
      for (NodeId id : ids) add(id);
    return snap;
  }

  bool still_valid(const Ast& ast) const {
    for (const auto& [id, st] : entries)
      if (state_of(ast, id) != st) return false;
    return true;
  }
};

} // namespace

ApplyResult apply(Cpg& cpg, const TransformationTemplate& tmpl, int pass_cap) {
  ApplyResult res;
  if (tmpl.ops.empty()) return res; // identity template: nothing to do
  while (true) {
    std::vector<PatternMatch> matches = find_matches(cpg, tmpl.source);
    if (matches.empty()) break;
    if (res.passes >= pass_cap)
      throw NonTerminationError("template " + tmpl.name + " exceeded " +
                                std::to_string(pass_cap) + " passes");
    ++res.passes;
    std::vector<Snapshot> snaps;
    snaps.reserve(matches.size());
    for (const auto& m : matches) snaps.push_back(Snapshot::take(cpg.ast, m));
    int done = 0;
    for (size_t i = 0; i < matches.size(); ++i) {
      if (!snaps[i].still_valid(cpg.ast)) continue;
      apply_ops(cpg.ast, matches[i], tmpl.ops);
      ++done;
    }
    res.applied += done;
    if (done == 0) break; // every match invalidated: nothing will change
    recompute_layers(cpg);
  }
  return res;
}

// ------------------------------------------------------------------ dump ---

namespace {

void dump_pattern(const NodePattern& p, const std::string& mark, int depth, std::string& out) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
  if (!mark.empty()) out += mark + " ";
  out += p.role.empty() ? "_" : p.role;
  out += ": ";
  out += p.kind ? kind_name(*p.kind) : "*";
  for (const auto& [k, v] : p.attrs) out += " " + k + "=" + v;
  out += '\n';
  for (const auto& c : p.children) {
    const char* m = "";
    switch (c.mode) {
      case ChildMode::One: m = "-"; break;
      case ChildMode::Optional: m = "?"; break;
      case ChildMode::Rest: m = "*"; break;
      case ChildMode::Forbidden: m = "!"; break;
    }
    dump_pattern(*c.pattern, m, depth + 1, out);
  }
}

const char* opcode_name(OpCode c) {
  switch (c) {
    case OpCode::CREATE_NODE: return "CREATE_NODE";
    case OpCode::DELETE_NODE: return "DELETE_NODE";
    case OpCode::SET_ATTR: return "SET_ATTR";
    case OpCode::ADD_CHILD: return "ADD_CHILD";
    case OpCode::REMOVE_CHILD: return "REMOVE_CHILD";
    case OpCode::MOVE_CHILD: return "MOVE_CHILD";
    case OpCode::REPLACE_NODE: return "REPLACE_NODE";
    case OpCode::CLONE_SUBTREE: return "CLONE_SUBTREE";
  }
  return "?";
}

} // namespace

std::string dump_template(const TransformationTemplate& tmpl) {
  std::string out = "template " + tmpl.name + "\n";
  out += "source:\n";
  dump_pattern(tmpl.source.root, "", 1, out);
  for (const auto& pred : tmpl.source.predicates) out += "  where " + pred.name + "\n";
  out += "ops:\n";
  for (const auto& op : tmpl.ops) {
    out += "  ";
    out += opcode_name(op.code);
    switch (op.code) {
      case OpCode::CREATE_NODE:
        out += " " + std::string(kind_name(op.kind)) + " as " + op.a;
        break;
      case OpCode::DELETE_NODE: out += " " + op.a; break;
      case OpCode::SET_ATTR: out += " " + op.a + "." + op.b + " = " + op.value; break;
      case OpCode::ADD_CHILD:
      case OpCode::MOVE_CHILD: {
        const std::string& child = op.code == OpCode::ADD_CHILD ? op.b : op.a;
        const std::string& parent = op.code == OpCode::ADD_CHILD ? op.a : op.b;
        out += " " + child + " -> " + parent + " @" +
               (op.index < 0 ? std::string("end") : std::to_string(op.index));
        break;
      }
      case OpCode::REMOVE_CHILD: out += " " + op.b + " from " + op.a; break;
      case OpCode::REPLACE_NODE: out += " " + op.a + " by " + op.b; break;
      case OpCode::CLONE_SUBTREE: out += " " + op.a + " as " + op.b; break;
    }
    out += '\n';
  }
  return out;
}

} // namespace structsim
