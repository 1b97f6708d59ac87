#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ctrlsimp {

/// Anything that turns prepended source lines into one prediction per line:
/// an external model, the rule-based oracle, or the identity baseline.
class SimplificationSystem {
 public:
  virtual ~SimplificationSystem() = default;

  /// Returns exactly one prediction per input line. Throws SystemError.
  virtual std::vector<std::string> run(std::span<const std::string> prepended) const = 0;
  virtual std::string name() const = 0;
};

/// Strips leading control tokens and returns the space-joined source tokens.
class IdentitySystem final : public SimplificationSystem {
 public:
  std::vector<std::string> run(std::span<const std::string> prepended) const override;
  std::string name() const override { return "builtin:identity"; }
};

/// Runs a shell command with the input on stdin and reads predictions from
/// stdout. A nonzero exit status or a line-count mismatch is a SystemError.
class CommandSystem final : public SimplificationSystem {
 public:
  explicit CommandSystem(std::string command) : command_(std::move(command)) {}

  std::vector<std::string> run(std::span<const std::string> prepended) const override;
  std::string name() const override { return command_; }

 private:
  std::string command_;
};

}  // namespace ctrlsimp
