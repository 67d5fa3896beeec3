#ifndef DIKERNEL_ERRORS_H_
#define DIKERNEL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dikernel {

// Two representations that cannot be combined (cell counts, grid sizes,
// partitions).
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An object violates a documented invariant at the point of use, e.g. a
// kernel that is not row-stochastic, or an infeasible strategy.
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The exact cut-norm enumeration was asked to handle too many cells.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation whose precondition on the model class does not hold
// (e.g. uni-type reduction of a kernel that is not gamma-mixing).
class NotApplicableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dikernel

#endif  // DIKERNEL_ERRORS_H_
