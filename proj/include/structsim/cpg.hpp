#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "structsim/ast.hpp"

namespace structsim {

enum class Layer : uint8_t { Ast, Eog, Ddg, Cdg };

struct Edge {
  NodeId src;
  NodeId dst;
  std::string label;
};

// Code property graph: the AST plus derived layers.
//  - eog: evaluation order (per callable), branch edges labeled true/false,
//    loop back edges labeled "back".
//  - ddg: data dependences from reaching definitions (def -> use, label is
//    the location name).
//  - cdg: control dependences from post-dominance (predicate -> statement).
struct Cpg {
  Ast ast;

  std::vector<Edge> eog, ddg, cdg;

  std::map<NodeId, std::vector<NodeId>> eog_succ, eog_pred;
  std::map<NodeId, std::vector<NodeId>> ddg_defs_of_use; // use -> defs
  std::map<NodeId, std::vector<NodeId>> ddg_uses_of_def; // def -> uses

  std::vector<NodeId> callables; // methods + constructors, id order
};

// Location key for data-flow: "v<declId>" for locals/params, "f<declId>" for
// resolved fields, "f?<name>" for field accesses with unknown receiver class.
using Loc = std::string;

Cpg build_cpg(Ast ast);
void recompute_layers(Cpg& cpg);

// Debug dump: one node per line "id kind attrs", one edge per line
// "src dst layer label".
std::string export_text(const Cpg& cpg);

// Locations written / read by a single node (not aggregated).
// User calls and New conservatively write every field location of the unit.
std::vector<Loc> defs_at(const Ast& ast, NodeId n);
std::vector<Loc> uses_at(const Ast& ast, NodeId n);
Loc location_of(const Ast& ast, NodeId lvalue);

bool is_impure_node(const Ast& ast, NodeId n); // user call, New, println/readLine
bool subtree_has_impure(const Ast& ast, NodeId root);
bool subtree_is_pure_expr(const Ast& ast, NodeId root); // no calls with effects, no writes

struct StatementEffects {
  std::set<Loc> reads;
  std::set<Loc> writes;
  bool impure = false;   // I/O, user call, New
  bool terminates = false; // contains return/throw at any depth
};
StatementEffects statement_effects(const Ast& ast, NodeId stmt);

struct Access {
  NodeId node;
  Loc loc;
  bool is_read;
  bool is_write;
};
// All local/field accesses in a statement subtree, in evaluation order.
// Assumes a straight-line statement (callers must reject short-circuit ops
// and branching statements before relying on the order).
std::vector<Access> eval_order_accesses(const Ast& ast, NodeId stmt);

// Nodes lying on some EOG path from `from` to `to` that does not revisit
// `from` (both endpoints excluded).
std::set<NodeId> eog_nodes_between(const Cpg& cpg, NodeId from, NodeId to);

} // namespace structsim
