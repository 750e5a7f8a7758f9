#pragma once

#include <stdexcept>
#include <string>

namespace qmcis {

/// The critical grid is larger than the caller's evaluation budget.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every point has zero density, so self-normalized weights and the
/// importance-sampling estimate are undefined.
class ZeroDensityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A box-measure oracle returned a value outside [0, 1 + eps] or broke
/// monotonicity.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qmcis
