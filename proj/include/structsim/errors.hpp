#pragma once

#include <stdexcept>
#include <string>

namespace structsim {

// All pipeline failures derive from Error so corpus-level drivers can catch
// one type, exclude the submission and keep going.
class Error : public std::runtime_error {
public:
  Error(std::string kind, std::string message, std::string path = "", int line = 0, int col = 0)
      : std::runtime_error(format(kind, message, path, line, col)),
        kind_(std::move(kind)), path_(std::move(path)), line_(line), col_(col) {}

  const std::string& kind() const { return kind_; }
  const std::string& path() const { return path_; }
  int line() const { return line_; }
  int col() const { return col_; }

private:
  static std::string format(const std::string& kind, const std::string& message,
                            const std::string& path, int line, int col) {
    std::string s = kind + ": ";
    if (!path.empty()) {
      s += path;
      if (line > 0) s += ":" + std::to_string(line) + ":" + std::to_string(col);
      s += ": ";
    }
    return s + message;
  }

  std::string kind_, path_;
  int line_, col_;
};

struct SyntaxError : Error {
  SyntaxError(std::string m, std::string p = "", int l = 0, int c = 0)
      : Error("SyntaxError", std::move(m), std::move(p), l, c) {}
};

struct ResolutionError : Error {
  ResolutionError(std::string m, std::string p = "", int l = 0, int c = 0)
      : Error("ResolutionError", std::move(m), std::move(p), l, c) {}
};

struct TransformError : Error {
  explicit TransformError(std::string m) : Error("TransformError", std::move(m)) {}
};

struct NonTerminationError : Error {
  explicit NonTerminationError(std::string m) : Error("NonTerminationError", std::move(m)) {}
};

struct AttackError : Error {
  explicit AttackError(std::string m) : Error("AttackError", std::move(m)) {}
};

struct StatsError : Error {
  explicit StatsError(std::string m) : Error("StatsError", std::move(m)) {}
};

struct PipelineError : Error {
  explicit PipelineError(std::string m) : Error("PipelineError", std::move(m)) {}
};

struct UsageError : Error {
  explicit UsageError(std::string m) : Error("UsageError", std::move(m)) {}
};

} // namespace structsim
