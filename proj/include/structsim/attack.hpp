#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "structsim/corpus.hpp"

namespace structsim {

enum class AttackKind { Insertion, Refactoring };

struct AttackSpec {
  AttackKind kind = AttackKind::Insertion;
  int intensity = 0; // edits; 0 = one edit per 10 statements (minimum 1)
  uint64_t seed = 1;
  long long step_budget = 1000000; // interpreter budget for validation runs
  // Insertion only: extra dead-statement templates (MiniJ statement text with
  // the placeholder $V for a fresh variable name). Defaults provided.
  std::vector<std::string> pool;
};

struct AttackEdit {
  std::string op;    // e.g. "insert-dead", "swap-if-else", "for-to-while"
  std::string where; // human-readable location (file:line or member name)
};

struct AttackResult {
  Submission attacked;            // pretty-printed attacked sources
  std::vector<AttackEdit> edits;  // applied edits, in order
};

// Behavior-preserving attack generators. Both validate every program
// against the reference interpreter on the given input vectors (parse +
// resolve + line-identical outputs) and throw AttackError when the requested
// number of edits cannot be applied. Deterministic under (submission, spec).
AttackResult insert_dead_code(const Submission& s, const AttackSpec& spec,
                              const std::vector<std::vector<std::string>>& inputs);
AttackResult refactor_attack(const Submission& s, const AttackSpec& spec,
                             const std::vector<std::vector<std::string>>& inputs);
AttackResult run_attack(const Submission& s, const AttackSpec& spec,
                        const std::vector<std::vector<std::string>>& inputs);

// The refactoring-attack operation set; "for-to-while" is an addition to the
// documented seven (the running example uses it).
const std::vector<std::string>& refactor_ops();

// Applies one named refactoring operation at a random applicable site.
// Returns false when the operation has no applicable site. Exposed for the
// per-transformation reversal tests.
bool apply_refactor_op(Ast& ast, const std::string& op, std::mt19937_64& rng,
                       AttackEdit* edit = nullptr);

// JSON edit log (array of {op, where}).
std::string edit_log_json(const std::vector<AttackEdit>& edits);

} // namespace structsim
