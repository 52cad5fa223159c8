#pragma once

#include <string>
#include <vector>

namespace gacomb {

/// Failure list built by the certificate checkers. Each failure is prefixed by
/// the slug of the statement whose inequality or construction was violated.
class CheckLog {
 public:
  void require(bool ok, const std::string& statement, const std::string& what) {
    if (!ok) failures_.push_back("[" + statement + "] " + what);
  }
  void fail(const std::string& statement, const std::string& what) { require(false, statement, what); }
  void merge(const std::vector<std::string>& other) { failures_.insert(failures_.end(), other.begin(), other.end()); }

  bool ok() const noexcept { return failures_.empty(); }
  const std::vector<std::string>& failures() const noexcept { return failures_; }
  std::vector<std::string> take() { return std::move(failures_); }

 private:
  std::vector<std::string> failures_;
};

}  // namespace gacomb
