#pragma once

#include <stdexcept>
#include <string>

namespace multroot {

/// A triangular factor has an exact zero on its diagonal.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The root Jacobian is numerically rank deficient: two roots collided.
class IllPosedStructureError : public std::runtime_error {
 public:
  IllPosedStructureError(const std::string& what, std::size_t first, std::size_t second)
      : std::runtime_error(what), first_(first), second_(second) {}
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

/// Nearest-neighbour chains disagree with the multiplicity structure.
class GroupingInconsistentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace multroot
