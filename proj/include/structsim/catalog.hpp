#pragma once

#include <set>
#include <string>
#include <vector>

#include "structsim/pattern.hpp"

namespace structsim {

struct NormalizationConfig {
  std::set<std::string> disabled; // transformation ids, e.g. {"T7","T14"}
  bool reorder = true;
  bool dead_code = true;
  int pass_cap = 100;   // per-template pass cap
  int round_cap = 50;   // whole-pipeline rounds until fixed point

  bool enabled(const std::string& id) const { return !disabled.count(id); }
};

// One catalog entry: a stable id (T1..T14 from the documented list, X16..X19
// for internal canonicalization steps), a human-readable name, and the
// executable template. T7 and the reorder/prune phase are procedural and
// have no template entry.
struct CatalogEntry {
  std::string id;
  std::string name;
  TransformationTemplate tmpl;
};

const std::vector<CatalogEntry>& catalog_templates();

// T1–T6: empty methods/constructors/classes, getters (with call-site
// rewrite), unconditional throwers.
int remove_trivial_members(Cpg& cpg, const NormalizationConfig& cfg);

// T7: constants used in exactly one class other than their declaring class
// move into that class.
int move_constants(Cpg& cpg, const NormalizationConfig& cfg);

// T8–T11: single-use variables/constants, Optional wrap/unwrap.
int inline_elements(Cpg& cpg, const NormalizationConfig& cfg);

// T12–T14: negated/inequality if-else reversal, for-to-while.
int replace_equivalents(Cpg& cpg, const NormalizationConfig& cfg);

// Between-phase normalization: unreachable-statement removal, block
// flattening, dead-code removal, deterministic statement reordering.
void reorder_and_prune(Cpg& cpg, const NormalizationConfig& cfg);

// Full pipeline: [phase; reorder_and_prune; phase] repeated until the
// canonical serialization is stable. Throws NonTerminationError when
// round_cap is exhausted.
Cpg normalize(Cpg cpg, const NormalizationConfig& cfg = {});

struct StageSnapshot {
  std::string name; // e.g. "round1.phase1"
  Cpg cpg;
};

// Same pipeline, recording a snapshot after every stage (used by the
// semantics-preservation suite).
std::vector<StageSnapshot> normalize_stages(Cpg cpg, const NormalizationConfig& cfg = {});

} // namespace structsim
