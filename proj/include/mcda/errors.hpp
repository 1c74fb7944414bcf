#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mcda {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(const std::string& node)
      : Error("unknown hierarchy node: " + node), node_(node) {}
  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

/// Raised when mu(E(g_r)) = 0, so node-level values are undefined.
class ZeroImportance : public Error {
 public:
  explicit ZeroImportance(const std::string& node)
      : Error("elementary criteria below node " + node + " have null importance"),
        node_(node) {}
  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

class InfeasibleSystem : public Error {
 public:
  using Error::Error;
};

class EmptyInterior : public Error {
 public:
  using Error::Error;
};

/// A long computation stopped because its progress callback asked it to.
class Cancelled : public Error {
 public:
  Cancelled() : Error("cancelled") {}
};

/// A batch of problems found while validating input; each entry carries its location.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out;
    for (const auto& p : problems) {
      if (!out.empty()) out += "; ";
      out += p;
    }
    return out;
  }
  std::vector<std::string> problems_;
};

}  // namespace mcda
