#pragma once

#include <stdexcept>
#include <string>

namespace mukaikit {

/// Malformed or inconsistent input: wrong dimensions, mismatched lattices,
/// non-symmetric Gram matrices and the like.
class invalid_input : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// The input is well-formed but violates a mathematical hypothesis an
/// operation depends on (non-generic polarization, v² < 0, ...).
class hypothesis_violation : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A well-posed computation whose enumeration would exceed the configured size limit.
class resource_limit : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool condition, const std::string &message) {
  if (!condition) throw invalid_input(message);
}
} // namespace detail

} // namespace mukaikit
