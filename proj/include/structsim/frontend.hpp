#pragma once

#include <string>
#include <vector>

#include "structsim/ast.hpp"
#include "structsim/errors.hpp"

namespace structsim {

struct SourceFile {
  std::string path;
  std::string text;
};

// MiniJ frontend. The language is a closed Java subset, documented in
// docs/minij-grammar.md: one top-level class per file, or a classless file of
// bare members. Loop and branch bodies must be blocks. Static-final
// initializers must be literals. There is no null, no generics, no arrays,
// no inheritance.

// Parses the given files into a single Unit (one submission). Throws
// SyntaxError. The result is unresolved: all `resolved` links are empty and
// bare field reads are still NameRefs.
Ast parse_unit(const std::vector<SourceFile>& files);

// Convenience for single-snippet parsing (tests, fixtures).
Ast parse_source(const std::string& text, const std::string& path = "<mem>");

// Name resolution + arity checks. Annotates `resolved` links, promotes bare
// reads of fields to FieldAccess with an implicit receiver, and rejects
// duplicate declarations and local shadowing of locals/params. Throws
// ResolutionError.
void resolve(Ast& ast);

bool is_builtin(const std::string& name);
bool is_pure_builtin(const std::string& name);

// Pretty printer. Prints the canonical surface form; a parse of the output
// is structurally identical to the printed tree (round-trip property).
std::string pretty_print(const Ast& ast, NodeId root);
std::string pretty_print_unit(const Ast& ast);

// Helpers shared by later stages.
NodeId enclosing_class(const Ast& ast, NodeId n);  // ClassDecl or Unit (for bare members)
NodeId enclosing_callable(const Ast& ast, NodeId n); // MethodDecl/ConstructorDecl or kNoNode
NodeId body_of(const Ast& ast, NodeId callable);
bool is_constant_field(const Ast& ast, NodeId n); // static final field
bool is_statement(NodeKind k);

} // namespace structsim
