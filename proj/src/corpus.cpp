#include "structsim/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "structsim/errors.hpp"

namespace fs = std::filesystem;

namespace structsim {

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_minij(const fs::path& p) { return p.extension() == ".minij"; }

} // namespace

Submission load_submission(const std::string& path) {
  fs::path p(path);
  Submission s;
  if (fs::is_regular_file(p)) {
    s.id = p.stem().string();
    s.files.push_back({p.string(), read_file(p)});
    return s;
  }
  if (!fs::is_directory(p)) throw UsageError("no such file or directory: " + path);
  s.id = p.filename().string();
  if (s.id.empty()) s.id = p.parent_path().filename().string();
  for (const auto& e : fs::directory_iterator(p))
    if (e.is_regular_file() && is_minij(e.path()))
      s.files.push_back({e.path().string(), read_file(e.path())});
  std::sort(s.files.begin(), s.files.end(),
            [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; });
  if (s.files.empty()) throw UsageError("no .minij files in " + path);
  return s;
}

std::vector<Submission> load_corpus(const std::string& dir) {
  fs::path p(dir);
  if (!fs::is_directory(p)) throw UsageError("no such directory: " + dir);
  std::vector<Submission> out;
  for (const auto& e : fs::directory_iterator(p)) {
    if (e.is_directory()) {
      bool has = false;
      for (const auto& f : fs::directory_iterator(e.path()))
        if (f.is_regular_file() && is_minij(f.path())) has = true;
      if (has) out.push_back(load_submission(e.path().string()));
    } else if (e.is_regular_file() && is_minij(e.path())) {
      out.push_back(load_submission(e.path().string()));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Submission& a, const Submission& b) { return a.id < b.id; });
  if (out.empty()) throw UsageError("no submissions in " + dir);
  return out;
}

void write_submission(const std::string& dir, const Submission& s) {
  fs::path base = fs::path(dir) / s.id;
  fs::create_directories(base);
  for (const auto& f : s.files) {
    fs::path name = fs::path(f.path).filename();
    if (name.empty()) name = s.id + ".minij";
    std::ofstream out(base / name, std::ios::binary);
    if (!out) throw UsageError("cannot write " + (base / name).string());
    out << f.text;
  }
}

IoVectors load_io_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  IoVectors out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::vector<std::vector<std::string>> vectors;
    for (const auto& vec : it.value()) {
      std::vector<std::string> lines;
      for (const auto& line : vec) lines.push_back(line.get<std::string>());
      vectors.push_back(std::move(lines));
    }
    out[it.key()] = std::move(vectors);
  }
  return out;
}

Ast parse_submission(const Submission& s) {
  Ast ast = parse_unit(s.files);
  resolve(ast);
  return ast;
}

Submission print_submission(const Ast& ast, const std::string& id) {
  std::vector<NodeId> classes;
  std::vector<NodeId> bare;
  for (NodeId c : ast.at(ast.root).children) {
    if (!ast.at(c).alive) continue;
    (ast.at(c).kind == NodeKind::ClassDecl ? classes : bare).push_back(c);
  }
  Submission out;
  out.id = id;
  if (classes.size() <= 1) {
    out.files = {{id + ".minij", pretty_print_unit(ast)}};
    return out;
  }
  if (!bare.empty()) {
    std::string text;
    for (NodeId b : bare) text += pretty_print(ast, b);
    out.files.push_back({id + "_globals.minij", text});
  }
  for (NodeId c : classes)
    out.files.push_back({ast.at(c).name + ".minij", pretty_print(ast, c)});
  return out;
}

} // namespace structsim
