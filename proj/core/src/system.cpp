#include "ctrlsimp/system.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "ctrlsimp/control.hpp"
#include "ctrlsimp/corpus.hpp"
#include "ctrlsimp/error.hpp"

namespace ctrlsimp {

namespace fs = std::filesystem;

namespace {

/// Removes its directory on scope exit.
class TempDir {
 public:
  TempDir() {
    std::string pattern = (fs::temp_directory_path() / "ctrlsimp-XXXXXX").string();
    if (!::mkdtemp(pattern.data())) throw SystemError("cannot create temporary directory");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const noexcept { return path_; }

 private:
  fs::path path_;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  return out + "'";
}

}  // namespace

std::vector<std::string> IdentitySystem::run(std::span<const std::string> prepended) const {
  std::vector<std::string> out;
  out.reserve(prepended.size());
  for (const auto& line : prepended) out.push_back(join_tokens(tokenize(split_control_prefix(line).body)));
  return out;
}

std::vector<std::string> CommandSystem::run(std::span<const std::string> prepended) const {
  TempDir dir;
  const auto in_path = dir.path() / "input.txt";
  const auto out_path = dir.path() / "output.txt";
  write_lines(in_path.string(), prepended);

  const std::string cmd = "(" + command_ + ") < " + shell_quote(in_path.string()) + " > " +
                          shell_quote(out_path.string());
  const int status = std::system(cmd.c_str());
  if (status == -1) throw SystemError("cannot launch system command: " + command_);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw SystemError("system command failed (status " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) +
                      "): " + command_);
  }
  auto lines = read_lines(out_path.string());
  if (lines.size() != prepended.size()) {
    throw SystemError("system command produced " + std::to_string(lines.size()) + " lines for " +
                      std::to_string(prepended.size()) + " inputs: " + command_);
  }
  return lines;
}

}  // namespace ctrlsimp
