#include "dikernel/transform.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dikernel/errors.h"

namespace dikernel {
namespace {

Eigen::MatrixXd OverlapMatrix(const IntervalPartition& v,
                              const IntervalPartition& p) {
  std::vector<double> flat = OverlapLengths(v, p);
  Eigen::MatrixXd o(v.size(), p.size());
  for (int i = 0; i < v.size(); ++i) {
    for (int k = 0; k < p.size(); ++k) o(i, k) = flat[i * p.size() + k];
  }
  return o;
}

// Divides cell (i, j) by |V^i| |V^j|.
void NormalizeByCellAreas(Eigen::MatrixXd& m, const IntervalPartition& v) {
  Eigen::VectorXd inv = WeightVector(v).cwiseInverse();
  m = inv.asDiagonal() * m * inv.asDiagonal();
}

}  // namespace

WeightedDeGrootModel WeightedDeGrootModel::Classical(Eigen::MatrixXd matrix) {
  WeightedDeGrootModel m;
  int n = static_cast<int>(matrix.rows());
  m.matrix = std::move(matrix);
  m.weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  return m;
}

void ValidateModel(const WeightedDeGrootModel& model) {
  const int n = model.size();
  if (n < 1 || model.matrix.cols() != n) {
    throw std::invalid_argument("model matrix must be square and non-empty");
  }
  if (model.weights.size() != n) {
    throw std::invalid_argument("model weights must have one entry per agent");
  }
  if ((model.matrix.array() < 0.0).any() || !model.matrix.allFinite()) {
    throw std::invalid_argument("model matrix entries must be >= 0");
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(model.matrix.row(i).sum() - 1.0) > 1e-12) {
      throw std::invalid_argument("model matrix row " + std::to_string(i) +
                                  " does not sum to 1");
    }
  }
  if ((model.weights.array() <= 0.0).any() ||
      std::abs(model.weights.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("model weights must be positive, sum to 1");
  }
  if (model.opinions) {
    if (model.opinions->size() != n) {
      throw std::invalid_argument("model opinions must have length n");
    }
    if ((model.opinions->array().abs() > 1.0).any()) {
      throw std::invalid_argument("model opinions must lie in [-1, 1]");
    }
  }
}

LiftedModel Lift(const WeightedDeGrootModel& model,
                 const IntervalPartition& p) {
  ValidateModel(model);
  if (p.size() != model.size()) {
    throw ShapeError("lift: partition has " + std::to_string(p.size()) +
                     " cells, model has " + std::to_string(model.size()));
  }
  Eigen::VectorXd pw = WeightVector(p);
  if ((pw - model.weights).cwiseAbs().maxCoeff() > 1e-12) {
    throw ShapeError("lift: partition cell lengths differ from model weights");
  }
  Eigen::MatrixXd dens = model.matrix * pw.cwiseInverse().asDiagonal();
  LiftedModel out{BlockKernel(p, std::move(dens)), std::nullopt};
  if (model.opinions) out.opinions = LiftOpinions(*model.opinions, p);
  return out;
}

LiftedModel Lift(const WeightedDeGrootModel& model) {
  ValidateModel(model);
  std::vector<double> w(model.weights.data(),
                        model.weights.data() + model.weights.size());
  return Lift(model, IntervalPartition::FromWeights(w));
}

BlockKernel DiscretizeKernel(const BlockKernel& w, const IntervalPartition& v) {
  Eigen::MatrixXd o = OverlapMatrix(v, w.partition());
  Eigen::MatrixXd m = o * w.values() * o.transpose();
  NormalizeByCellAreas(m, v);
  m = m.cwiseMax(0.0);
  return BlockKernel(v, std::move(m), w.bound());
}

BlockKernel DiscretizeKernel(const GridKernel& w, const IntervalPartition& v,
                             SnapInfo* info) {
  const int n = w.n();
  std::vector<int> lines(v.size() + 1);
  SnapInfo snap;
  for (int k = 0; k <= v.size(); ++k) {
    double a = v.breakpoints()[k];
    lines[k] = static_cast<int>(std::lround(a * n));
    double shift = std::abs(a - static_cast<double>(lines[k]) / n);
    if (shift > kMergeTol) {
      snap.snapped = true;
      snap.max_shift = std::max(snap.max_shift, shift);
    }
    if (k > 0 && lines[k] <= lines[k - 1]) {
      throw ShapeError("discretize: partition cell narrower than the grid");
    }
  }
  IntervalPartition target = v;
  if (snap.snapped) {
    std::vector<double> bp(lines.size());
    for (size_t k = 0; k < lines.size(); ++k) {
      bp[k] = static_cast<double>(lines[k]) / n;
    }
    bp.back() = 1.0;
    target = IntervalPartition(std::move(bp));
  }
  const int m = v.size();
  Eigen::MatrixXd avg(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      int rows = lines[i + 1] - lines[i], cols = lines[j + 1] - lines[j];
      avg(i, j) = w.samples().block(lines[i], lines[j], rows, cols).mean();
    }
  }
  if (info) *info = snap;
  return BlockKernel(std::move(target), std::move(avg), w.bound());
}

BlockKernel DiscretizeKernel(const AnalyticKernel& w,
                             const IntervalPartition& v) {
  const int m = v.size();
  Eigen::MatrixXd avg(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      avg(i, j) = w.Integrate(v.left(i), v.right(i), v.left(j), v.right(j));
    }
  }
  NormalizeByCellAreas(avg, v);
  avg = avg.cwiseMax(0.0).cwiseMin(w.bound());
  return BlockKernel(v, std::move(avg), w.bound());
}

BlockKernel DiscretizeKernel(const Kernel& w, const IntervalPartition& v,
                             SnapInfo* info) {
  if (const auto* b = std::get_if<BlockKernel>(&w)) {
    if (info) *info = SnapInfo{};
    return DiscretizeKernel(*b, v);
  }
  return DiscretizeKernel(std::get<GridKernel>(w), v, info);
}

WeightedDeGrootModel BlockToModel(const BlockKernel& w) {
  WeightedDeGrootModel m;
  m.weights = WeightVector(w.partition());
  m.matrix = w.values() * m.weights.asDiagonal();
  return m;
}

WeightedDeGrootModel ReduceDimension(
    const WeightedDeGrootModel& model,
    const std::vector<std::vector<int>>& groups) {
  ValidateModel(model);
  const int n = model.size();
  int next = 0;
  std::vector<int> group_end;  // exclusive agent index closing each group
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("reduce: empty group");
    for (int agent : g) {
      if (agent != next) {
        throw std::invalid_argument(
            "reduce: groups must be contiguous, ordered runs covering "
            "0..n-1 (permute agents first)");
      }
      ++next;
    }
    group_end.push_back(next);
  }
  if (next != n) throw std::invalid_argument("reduce: groups must cover 0..n-1");

  LiftedModel lifted = Lift(model);
  const IntervalPartition& fine = lifted.kernel.partition();
  std::vector<double> bp{0.0};
  for (int end : group_end) bp.push_back(fine.breakpoints()[end]);
  bp.back() = 1.0;
  IntervalPartition coarse(std::move(bp));

  WeightedDeGrootModel out = BlockToModel(DiscretizeKernel(lifted.kernel, coarse));
  if (lifted.opinions) out.opinions = ProjectOpinions(*lifted.opinions, coarse);
  return out;
}

OpinionFunction LiftOpinions(const Eigen::VectorXd& f,
                             const IntervalPartition& p) {
  if (f.size() != p.size()) {
    throw ShapeError("lift opinions: " + std::to_string(f.size()) +
                     " values for " + std::to_string(p.size()) + " cells");
  }
  return OpinionFunction(p, f);
}

Eigen::VectorXd ProjectOpinions(const StepFunction& f,
                                const IntervalPartition& v) {
  Eigen::MatrixXd o = OverlapMatrix(v, f.partition());
  return WeightVector(v).cwiseInverse().cwiseProduct(o * f.values());
}

}  // namespace dikernel
