#pragma once

#include <string>
#include <vector>

#include "structsim/ast.hpp"

namespace structsim {

struct InterpOptions {
  long long step_budget = 1000000; // evaluation steps before a budget fault
  std::string entry = "main";      // zero-parameter entry method
};

// Big-step reference interpreter used as the semantics oracle. Runs the
// entry method against one vector of input lines (consumed by readLine) and
// returns the captured println lines. A runtime fault (division by zero,
// missing input, budget exceeded, thrown exception, missing entry point)
// terminates the run and is itself reported as a final output line
// "fault: <description>", making faulty programs comparable.
std::vector<std::string> interpret_program(const Ast& ast,
                                           const std::vector<std::string>& inputs,
                                           const InterpOptions& opt = {});

struct ProgramIO {
  std::vector<std::vector<std::string>> inputs;
  std::vector<std::vector<std::string>> outputs; // parallel to inputs
};

ProgramIO interpret_many(const Ast& ast,
                         const std::vector<std::vector<std::string>>& inputs,
                         const InterpOptions& opt = {});

bool io_equal(const ProgramIO& a, const ProgramIO& b);

// The interpreter's number-to-text rule (shortest round-trip form for
// doubles, plain decimal for ints), exposed because println line-equality
// depends on it.
std::string format_double(double v);

} // namespace structsim
