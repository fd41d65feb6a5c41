#pragma once

#include <stdexcept>
#include <string>

namespace fluxion {

/// Steady problem with no unique solution: either no solution exists (net
/// boundary inflow with no temperature anchor) or infinitely many do.
class IllPosedError : public std::runtime_error {
 public:
  explicit IllPosedError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested explicit time step exceeds the maximum-principle bound.
class StabilityError : public std::runtime_error {
 public:
  explicit StabilityError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::domain_error(msg);
}

}  // namespace detail

}  // namespace fluxion
