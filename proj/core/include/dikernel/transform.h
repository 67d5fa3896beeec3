#ifndef DIKERNEL_TRANSFORM_H_
#define DIKERNEL_TRANSFORM_H_

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dikernel/catalog.h"
#include "dikernel/kernel.h"
#include "dikernel/partition.h"

namespace dikernel {

// A discrete DeGroot model with agent weights: `matrix` is row-stochastic
// (probabilities), `weights` are positive and sum to 1. Uniform weights give
// the classical model.
struct WeightedDeGrootModel {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd weights;
  std::optional<Eigen::VectorXd> opinions;

  int size() const { return static_cast<int>(matrix.rows()); }

  // Classical model with weights 1/n.
  static WeightedDeGrootModel Classical(Eigen::MatrixXd matrix);
};

// Throws std::invalid_argument unless rows sum to 1 (1e-12), entries are
// non-negative, weights are positive and sum to 1, and opinions (if any) lie
// in [-1, 1] with matching length.
void ValidateModel(const WeightedDeGrootModel& model);

struct LiftedModel {
  BlockKernel kernel;
  std::optional<OpinionFunction> opinions;
};

// Block-constant kernel W(x, y) = w_ij / p_j on V^i x V^j, plus the step
// function of opinions when the model carries them. `p` must have as many
// cells as the model and its cell lengths must equal the model weights
// (1e-12).
LiftedModel Lift(const WeightedDeGrootModel& model, const IntervalPartition& p);
// Same, on the partition whose cell lengths are the model weights (the
// uniform partition for classical models).
LiftedModel Lift(const WeightedDeGrootModel& model);

// Metadata from discretizing a grid kernel onto a partition whose breakpoints
// are not grid lines.
struct SnapInfo {
  bool snapped = false;
  double max_shift = 0.0;
};

// Block averages (1 / (|V^i| |V^j|)) \int_{V^i x V^j} W. Exact for block and
// catalog kernels; midpoint rule for grids, whose averaging cells are V's
// breakpoints snapped to the nearest grid line (the result then lives on the
// snapped partition). Throws ShapeError if snapping collapses a cell.
BlockKernel DiscretizeKernel(const BlockKernel& w, const IntervalPartition& v);
BlockKernel DiscretizeKernel(const GridKernel& w, const IntervalPartition& v,
                             SnapInfo* info = nullptr);
BlockKernel DiscretizeKernel(const AnalyticKernel& w,
                             const IntervalPartition& v);
BlockKernel DiscretizeKernel(const Kernel& w, const IntervalPartition& v,
                             SnapInfo* info = nullptr);

// Inverse of Lift: matrix(i, j) = values(i, j) * p_j, weights p.
WeightedDeGrootModel BlockToModel(const BlockKernel& w);

// Aggregates agents into contiguous groups: lift, average on the induced
// coarse partition, map back. Opinions, if present, become group means.
// Throws std::invalid_argument unless the groups list 0..n-1 in order as
// consecutive runs.
WeightedDeGrootModel ReduceDimension(const WeightedDeGrootModel& model,
                                     const std::vector<std::vector<int>>& groups);

// Step function equal to f[i] on cell i. Throws ShapeError on a length
// mismatch.
OpinionFunction LiftOpinions(const Eigen::VectorXd& f,
                             const IntervalPartition& p);

// Cell means of f over the cells of v (exact for step functions).
Eigen::VectorXd ProjectOpinions(const StepFunction& f,
                                const IntervalPartition& v);

}  // namespace dikernel

#endif  // DIKERNEL_TRANSFORM_H_
