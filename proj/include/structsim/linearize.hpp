#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "structsim/cpg.hpp"

namespace structsim {

// Stable token ids; the first seven match the running-example numbering.
// FOR_BEGIN/FOR_END are distinct kinds from LOOP_BEGIN/LOOP_END but share
// their display names ("loop start"/"loop end"); normalization rewrites all
// for-loops into while-loops, so normalized sequences contain only LOOP_*.
enum class TokenKind : int32_t {
  METHOD_BEGIN = 1,
  VARIABLE = 2,
  LOOP_BEGIN = 3,
  ASSIGN = 4,
  APPLY = 5,
  LOOP_END = 6,
  METHOD_END = 7,
  CLASS_BEGIN = 8,
  CLASS_END = 9,
  CONSTRUCTOR_BEGIN = 10,
  CONSTRUCTOR_END = 11,
  FIELD = 12,
  IF_BEGIN = 13,
  ELSE = 14,
  IF_END = 15,
  RETURN = 16,
  THROW = 17,
  NEW = 18,
  BLOCK_BEGIN = 19,
  BLOCK_END = 20,
  FOR_BEGIN = 21,
  FOR_END = 22,
};

const char* token_name(TokenKind k);         // enum identifier, e.g. "LOOP_BEGIN"
const char* token_display_name(TokenKind k); // table name, e.g. "loop start"

enum class LinearizeMode { Baseline, Eog };

struct TokenSequence {
  std::vector<TokenKind> tokens;
  std::vector<Span> spans;   // origin of each token
  std::vector<NodeId> nodes; // emitting node of each token

  size_t size() const { return tokens.size(); }
  bool operator==(const TokenSequence& o) const { return tokens == o.tokens; }
};

// Baseline: preorder within expressions, source member order.
// Eog: postorder within expressions, canonical member order.
TokenSequence tokenize(const Cpg& cpg, LinearizeMode mode);

// Deterministic member emission order: referenced members before referencing
// ones (Kahn), ties and cycles broken by canonical member key.
std::vector<NodeId> order_members(const Cpg& cpg);

// Canonical sort key used for members and statements: postorder token-kind
// sequence, then subtree size, then name-free structural hash.
struct CanonicalKey {
  std::vector<int32_t> token_kinds;
  size_t subtree_size = 0;
  uint64_t hash = 0;

  bool operator<(const CanonicalKey& o) const;
  bool operator==(const CanonicalKey& o) const;
};
CanonicalKey canonical_key(const Ast& ast, NodeId node);

// One display name per line, trailing newline.
std::string dump_tokens(const TokenSequence& seq);

// Canonical text of a normalized unit: members in canonical order, printed
// with canonical names stripped of user naming (used for idempotence checks
// and structural equality of normalized programs).
std::string canonical_serialization(const Cpg& cpg);

} // namespace structsim
