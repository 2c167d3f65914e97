#pragma once

#include <stdexcept>
#include <string>

namespace relaystab {

struct NonDecreasingThresholds : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoInteriorRoot : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Unstable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownIndex : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct DepthTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct AlphaInfeasible : std::domain_error {
  using std::domain_error::domain_error;
};

struct EpsilonTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotSymmetric : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Inconclusive : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ComplexityGuard : std::length_error {
  ComplexityGuard(double requested, double budget)
      : std::length_error("complexity guard: " + std::to_string(requested) +
                          " evaluations requested, budget " +
                          std::to_string(budget)),
        requested(requested),
        budget(budget) {}
  double requested;
  double budget;
};

}  // namespace relaystab
