#ifndef DIKERNEL_PARTITION_H_
#define DIKERNEL_PARTITION_H_

#include <span>
#include <vector>

namespace dikernel {

// An interval partition 0 = a_0 < a_1 < ... < a_J = 1 of [0,1].
//
// Cells are half-open [a_j, a_{j+1}) except the last one, which is closed.
// Immutable after construction.
class IntervalPartition {
 public:
  // Throws std::invalid_argument unless the breakpoints are strictly
  // increasing, start at exactly 0 and end at exactly 1.
  explicit IntervalPartition(std::vector<double> breakpoints);

  // Breakpoints k/n, k = 0..n. Throws std::invalid_argument for n < 1.
  static IntervalPartition Uniform(int n);

  // Partition whose cell lengths are the given (positive) weights. The last
  // breakpoint is pinned to 1; weights must sum to 1 within 1e-12.
  static IntervalPartition FromWeights(std::span<const double> weights);

  int size() const { return static_cast<int>(breakpoints_.size()) - 1; }
  std::span<const double> breakpoints() const { return breakpoints_; }
  double left(int cell) const { return breakpoints_[cell]; }
  double right(int cell) const { return breakpoints_[cell + 1]; }
  double weight(int cell) const {
    return breakpoints_[cell + 1] - breakpoints_[cell];
  }

  // Cell lengths p_j = a_{j+1} - a_j.
  std::vector<double> Weights() const;

  // Index j with a_j <= x < a_{j+1}; x = 1 maps to the last cell. Throws
  // std::domain_error outside [0,1].
  int Locate(double x) const;

  bool operator==(const IntervalPartition& other) const = default;

 private:
  std::vector<double> breakpoints_;
};

// Sorted union of both breakpoint sets. Breakpoints closer than kMergeTol are
// merged so floating-point noise never produces sliver cells.
IntervalPartition CommonRefinement(const IntervalPartition& a,
                                   const IntervalPartition& b);

// True when every breakpoint of `coarse` is (within kMergeTol) a breakpoint of
// `fine`.
bool IsRefinementOf(const IntervalPartition& fine,
                    const IntervalPartition& coarse);

// For a refinement `fine` of `coarse`, the coarse cell containing each fine
// cell. Throws ShapeError if `fine` does not refine `coarse`.
std::vector<int> CoarseCellOf(const IntervalPartition& fine,
                              const IntervalPartition& coarse);

// Lengths of the intersections V^i ∩ P^k as a rows(V) x rows(P) table,
// stored row-major.
std::vector<double> OverlapLengths(const IntervalPartition& v,
                                   const IntervalPartition& p);

inline constexpr double kMergeTol = 1e-12;

}  // namespace dikernel

#endif  // DIKERNEL_PARTITION_H_
