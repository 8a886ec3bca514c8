#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "scrollcount/errors.hpp"

namespace scrollcount {

// Wall-clock allowance for long-running computations. A default-constructed
// budget never expires; a limited one makes check() throw UndeterminedError
// once the deadline passes, so callers surface partial progress honestly
// instead of spinning forever.
class Budget {
 public:
  Budget() = default;

  static Budget seconds(double s) {
    Budget b;
    b.deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(s));
    return b;
  }

  bool limited() const { return deadline_.has_value(); }

  bool expired() const {
    return deadline_ && std::chrono::steady_clock::now() > *deadline_;
  }

  void check(const std::string& activity) const {
    if (expired()) throw UndeterminedError("budget exhausted while " + activity);
  }

 private:
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

} // namespace scrollcount
