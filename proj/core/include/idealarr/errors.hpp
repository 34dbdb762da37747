#pragma once

#include <stdexcept>
#include <string>

namespace idealarr {

// Thrown when a configured resource cap (flats, Weyl elements, search nodes)
// would be exceeded.  Callers that can degrade gracefully catch this and
// report an "unknown" verdict; the CLI maps it to exit code 3.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string kind, long long limit, long long reached)
      : std::runtime_error("budget exceeded: " + kind + " limit " +
                           std::to_string(limit) + " reached " +
                           std::to_string(reached)),
        kind_(std::move(kind)),
        limit_(limit),
        reached_(reached) {}

  const std::string& kind() const { return kind_; }
  long long limit() const { return limit_; }
  long long reached() const { return reached_; }

 private:
  std::string kind_;
  long long limit_;
  long long reached_;
};

// Resource limits for lattice construction, Weyl traversal and
// certificate search.
struct Budget {
  long long max_flats = 1'000'000;
  long long max_weyl = 1'000'000;
  long long max_nodes = 10'000'000;
  int threads = 1;
};

}  // namespace idealarr
