#ifndef DIKERNEL_KERNEL_H_
#define DIKERNEL_KERNEL_H_

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "dikernel/partition.h"

namespace dikernel {

// Cell lengths of `p` as an Eigen vector.
Eigen::VectorXd WeightVector(const IntervalPartition& p);

// True when both partitions have the same breakpoints up to kMergeTol.
bool SamePartition(const IntervalPartition& a, const IntervalPartition& b);

// A function [0,1] -> R that is constant on the cells of a partition. Grid
// (midpoint-sampled) functions are step functions on the uniform partition.
class StepFunction {
 public:
  StepFunction(IntervalPartition partition, Eigen::VectorXd values);
  static StepFunction Constant(IntervalPartition partition, double value);

  const IntervalPartition& partition() const { return partition_; }
  const Eigen::VectorXd& values() const { return values_; }
  int size() const { return partition_.size(); }

  double operator()(double x) const { return values_[partition_.Locate(x)]; }
  double Integral() const;
  double Min() const { return values_.minCoeff(); }
  double Max() const { return values_.maxCoeff(); }

  // Same function expressed on a refinement of its partition.
  StepFunction RefineTo(const IntervalPartition& fine) const;

 private:
  IntervalPartition partition_;
  Eigen::VectorXd values_;
};

// A step function with values in [-1, 1]: a function of opinions.
class OpinionFunction : public StepFunction {
 public:
  // Throws std::invalid_argument for values outside [-1, 1].
  OpinionFunction(IntervalPartition partition, Eigen::VectorXd values);
  explicit OpinionFunction(StepFunction f);
  static OpinionFunction Constant(IntervalPartition partition, double value);
};

// Block-constant DiKernel: values(i, j) is the density on V^i x V^j.
class BlockKernel {
 public:
  // `bound` is the M of W: [0,1]^2 -> [0, M]; 0 means max(1, max entry).
  // Throws std::invalid_argument for negative/non-finite entries, entries
  // above the bound or a shape mismatch.
  BlockKernel(IntervalPartition partition, Eigen::MatrixXd values,
              double bound = 0.0);
  static BlockKernel Constant(IntervalPartition partition, double value = 1.0);

  const IntervalPartition& partition() const { return partition_; }
  const Eigen::MatrixXd& values() const { return values_; }
  double bound() const { return bound_; }
  int size() const { return partition_.size(); }

 private:
  IntervalPartition partition_;
  Eigen::MatrixXd values_;
  double bound_;
};

// Midpoint-sampled DiKernel on the uniform n x n grid:
// samples(i, j) = W((i + 1/2)/n, (j + 1/2)/n).
class GridKernel {
 public:
  GridKernel(Eigen::MatrixXd samples, double bound = 0.0);

  int n() const { return static_cast<int>(samples_.rows()); }
  const Eigen::MatrixXd& samples() const { return samples_; }
  double bound() const { return bound_; }
  const IntervalPartition& partition() const { return partition_; }

 private:
  Eigen::MatrixXd samples_;
  double bound_;
  IntervalPartition partition_;
};

using Kernel = std::variant<BlockKernel, GridKernel>;

// Piecewise theta-Lipschitz metadata: W is theta-Lipschitz (in the l1 metric
// on [0,1]^2) on every product I_k x I_l of `pieces`, and bounded by `bound`.
struct LipschitzMeta {
  double theta = 0.0;
  IntervalPartition pieces = IntervalPartition::Uniform(1);
  double bound = 1.0;

  int num_pieces() const { return pieces.size(); }
};

// The partition the kernel lives on (uniform(n) for grids).
const IntervalPartition& CarrierPartition(const Kernel& w);
double KernelBound(const Kernel& w);

// Matrix of transition weights P(i, j) = w_ij p_j, so that (T(W)f)_i =
// sum_j P(i, j) f_j. Exact for blocks, midpoint rule for grids.
Eigen::MatrixXd TransitionMatrix(const Kernel& w);

// Row-defect tolerance used when a kernel enters the dynamics: 1e-9 for
// block kernels, 10 M / n for grids.
double DefaultRowTolerance(const Kernel& w);

struct RowStochasticCheck {
  bool ok = false;
  double max_defect = 0.0;  // max_i |sum_j w_ij p_j - 1|
};
RowStochasticCheck CheckRowStochastic(const Kernel& w, double tol);

// One DeGroot step (T(W) f)(x) = \int W(x, y) f(y) dy.
//
// `f` must live on the kernel's partition (ShapeError otherwise). Throws
// ContractError if W is not row-stochastic within DefaultRowTolerance, or if
// the result leaves [-1, 1] by more than 1e-6; smaller excursions are
// clamped.
OpinionFunction Apply(const Kernel& w, const OpinionFunction& f);

// T(W) on an arbitrary step function; no range checks.
StepFunction ApplyLinear(const Kernel& w, const StepFunction& f);

// Adjoint step (T(W)* g)(y) = \int W(x, y) g(x) dx.
StepFunction ApplyAdjoint(const Kernel& w, const StepFunction& g);

// Trajectory f_0, ..., f_t.
std::vector<OpinionFunction> Iterate(const Kernel& w,
                                     const OpinionFunction& f0, int t);

// The same block kernel written on a refinement of its partition.
BlockKernel Refine(const BlockKernel& w, const IntervalPartition& fine);

// (W * V)(x, y) = \int W(x, u) V(u, y) du. Kernels on different partitions
// are first refined to their common refinement.
BlockKernel KernelProduct(const BlockKernel& w, const BlockKernel& v);

// W^t under the kernel product; W^0 is not a kernel, so t >= 1.
BlockKernel KernelPower(const BlockKernel& w, int t);

// Largest gamma with W(x, y) >= gamma everywhere (the minimum entry).
double GammaMixing(const Kernel& w);

// lambda W + (1 - lambda) 1: a lazy blend with the constant kernel.
BlockKernel BlendWithUniform(const BlockKernel& w, double lambda);

// The uni-type kernel W(x, y) = h(y) on h's partition.
BlockKernel UnitypeKernel(const StepFunction& h);

// h if every row of W equals the same density h (within tol), else nullopt.
std::optional<StepFunction> UnitypeDensity(const Kernel& w, double tol = 1e-12);

}  // namespace dikernel

#endif  // DIKERNEL_KERNEL_H_
