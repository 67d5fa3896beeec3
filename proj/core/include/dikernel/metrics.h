#ifndef DIKERNEL_METRICS_H_
#define DIKERNEL_METRICS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dikernel/catalog.h"
#include "dikernel/kernel.h"
#include "dikernel/partition.h"

namespace dikernel {

// Block-constant signed kernel, typically a difference W - V.
struct SignedBlockKernel {
  IntervalPartition partition;
  Eigen::MatrixXd values;

  int size() const { return partition.size(); }
};

// W - V on the common refinement of both partitions.
SignedBlockKernel Difference(const BlockKernel& w, const BlockKernel& v);

// \int |f - g| on the common refinement (exact for step functions).
double L1Distance(const StepFunction& f, const StepFunction& g);

// \iint |U|.
double L1Norm(const SignedBlockKernel& u);

// Cut norm value plus a witnessing pair of cell sets (A = union of `rows`
// cells, B = union of `cols` cells).
struct CutNormResult {
  double value = 0.0;
  std::vector<int> rows;
  std::vector<int> cols;
};

inline constexpr int kMaxExactCutCells = 22;

// sup over measurable A x B of |\iint_{A x B} U|. The objective is bilinear
// in the per-cell inclusion fractions, so the supremum is attained at unions
// of whole cells; rows are enumerated (Gray code) and the best column set is
// read off the signs of the column sums. Throws BudgetError beyond
// kMaxExactCutCells cells.
CutNormResult CutNormExact(const SignedBlockKernel& u);

// Alternating maximization from `restarts` random column sets (both signs):
// a lower bound on CutNormExact, deterministic given the seed.
CutNormResult CutNormHeuristic(const SignedBlockKernel& u, int restarts,
                               uint64_t seed);

// CutNormExact when the budget allows it, otherwise the heuristic.
CutNormResult CutNorm(const SignedBlockKernel& u, int restarts = 64,
                      uint64_t seed = 0);

// Two-sided estimate of ||W - W_V|| for a catalog kernel. `lower` is the cut
// norm of W_N - W_V on a uniform grid of `fine_n` cells refining V (block
// averaging does not increase the cut norm); `upper` adds the partition bound
// for W - W_N and uses the L1 norm when the fine grid is too large for exact
// enumeration.
struct CutDistanceEstimate {
  double lower = 0.0;
  double upper = 0.0;
  bool exact_lower = false;
};
CutDistanceEstimate EstimateCutDistance(const AnalyticKernel& w,
                                        const IntervalPartition& v,
                                        int fine_n);

// A bound together with the inputs it came from.
struct BoundReport {
  double bound = 0.0;
  std::string kind;
  std::map<std::string, double> inputs;
};

// ||T(W) f - T(V) g||_1 <= ||f - g||_1 + 4 ||W - V||.
double BoundOneStep(double l1, double cut);

// min(2, 4 t ||W - W_V||): the t-step divergence, capped at the diameter of
// the opinion space.
double BoundDynamic(int t, double cut);

// 4 alpha delta / (1 - delta)^2 * cut, for 0 < delta < 1 and alpha >= 0.
double BoundDiscounted(double alpha, double delta, double cut);

// alpha delta / (1 - delta) * l1 + 4 alpha delta / (1 - delta)^2 * cut.
double BoundTwoKernelDiscounted(double alpha, double delta, double l1,
                                double cut);

// 2 theta / n + M K^2 / n^2 for partitions into cells shorter than 1/n.
double BoundPartition(const LipschitzMeta& meta, int n);

// Smallest integer n0 > (8 theta + sqrt(64 theta^2 + 16 K^2 M eta)) / (2 eta),
// so that 4 * BoundPartition(meta, n) < eta for all n >= n0. Throws
// std::invalid_argument for eta <= 0.
int MinPartitionSize(double eta, const LipschitzMeta& meta);

}  // namespace dikernel

#endif  // DIKERNEL_METRICS_H_
