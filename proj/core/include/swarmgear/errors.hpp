#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace swarmgear {

/// Malformed or inconsistent scenario configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physically infeasible request (unreachable step, joint-limit violation,
/// degenerate reference). CLI exit code 3.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical blow-up during simulation; carries the tick at which the state
/// stopped being finite. CLI exit code 4.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::int64_t tick)
      : std::runtime_error(what + " (tick " + std::to_string(tick) + ")"),
        tick_(tick) {}

  std::int64_t tick() const { return tick_; }

 private:
  std::int64_t tick_;
};

}  // namespace swarmgear
