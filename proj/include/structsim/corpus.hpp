#pragma once

#include <map>
#include <string>
#include <vector>

#include "structsim/frontend.hpp"

namespace structsim {

// One submission: a single .minij file or a directory of .minij files.
struct Submission {
  std::string id;
  std::vector<SourceFile> files; // sorted by path
};

Submission load_submission(const std::string& path);

// A corpus directory: every *.minij file and every subdirectory is one
// submission. Returned sorted by id. Throws UsageError when empty.
std::vector<Submission> load_corpus(const std::string& dir);

// Writes files under dir/<submission id>/ (directories created as needed).
void write_submission(const std::string& dir, const Submission& s);

// Test-input vectors per submission id, stored as io.json:
//   { "<id>": [ ["line", "line"], ["line"] ], ... }
using IoVectors = std::map<std::string, std::vector<std::vector<std::string>>>;
IoVectors load_io_vectors(const std::string& path);

// Convenience: parse + resolve all files of a submission into one unit.
Ast parse_submission(const Submission& s);

// Pretty-prints a unit back into source files honoring the
// one-top-level-class-per-file rule: with two or more classes each class
// gets its own file ("<ClassName>.minij"), bare members keep the id stem
// ("<id>_globals.minij" when classes are also present). Single-class and
// classless units print as one "<id>.minij".
Submission print_submission(const Ast& ast, const std::string& id);

} // namespace structsim
