#include "dikernel/kernel.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dikernel/errors.h"

namespace dikernel {
namespace {

constexpr double kRangeSlack = 1e-6;

double ResolveBound(const Eigen::MatrixXd& values, double bound) {
  double max_entry = values.size() > 0 ? values.maxCoeff() : 0.0;
  if (bound <= 0.0) return std::max(1.0, max_entry);
  return bound;
}

void ValidateEntries(const Eigen::MatrixXd& values, double bound) {
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      double v = values(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("kernel entries must be finite and >= 0");
      }
      if (v > bound * (1.0 + 1e-12)) {
        throw std::invalid_argument("kernel entry exceeds its bound M");
      }
    }
  }
}

void RequireCompatible(const Kernel& w, const IntervalPartition& p) {
  if (!SamePartition(CarrierPartition(w), p)) {
    throw ShapeError(
        "opinion function and kernel live on different partitions "
        "(discretize or refine first)");
  }
}

}  // namespace

Eigen::VectorXd WeightVector(const IntervalPartition& p) {
  Eigen::VectorXd w(p.size());
  for (int j = 0; j < p.size(); ++j) w[j] = p.weight(j);
  return w;
}

bool SamePartition(const IntervalPartition& a, const IntervalPartition& b) {
  if (a.size() != b.size()) return false;
  auto x = a.breakpoints(), y = b.breakpoints();
  for (size_t k = 0; k < x.size(); ++k) {
    if (std::abs(x[k] - y[k]) > kMergeTol) return false;
  }
  return true;
}

StepFunction::StepFunction(IntervalPartition partition, Eigen::VectorXd values)
    : partition_(std::move(partition)), values_(std::move(values)) {
  if (values_.size() != partition_.size()) {
    throw ShapeError("step function: " + std::to_string(values_.size()) +
                     " values for " + std::to_string(partition_.size()) +
                     " cells");
  }
}

StepFunction StepFunction::Constant(IntervalPartition partition, double value) {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(partition.size(), value);
  return StepFunction(std::move(partition), std::move(v));
}

double StepFunction::Integral() const {
  return WeightVector(partition_).dot(values_);
}

StepFunction StepFunction::RefineTo(const IntervalPartition& fine) const {
  std::vector<int> map = CoarseCellOf(fine, partition_);
  Eigen::VectorXd v(fine.size());
  for (int j = 0; j < fine.size(); ++j) v[j] = values_[map[j]];
  return StepFunction(fine, std::move(v));
}

OpinionFunction::OpinionFunction(IntervalPartition partition,
                                 Eigen::VectorXd values)
    : StepFunction(std::move(partition), std::move(values)) {
  for (Eigen::Index j = 0; j < this->values().size(); ++j) {
    double v = this->values()[j];
    if (!(v >= -1.0 && v <= 1.0)) {
      throw std::invalid_argument("opinion values must lie in [-1, 1]");
    }
  }
}

OpinionFunction::OpinionFunction(StepFunction f)
    : OpinionFunction(f.partition(), f.values()) {}

OpinionFunction OpinionFunction::Constant(IntervalPartition partition,
                                          double value) {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(partition.size(), value);
  return OpinionFunction(std::move(partition), std::move(v));
}

BlockKernel::BlockKernel(IntervalPartition partition, Eigen::MatrixXd values,
                         double bound)
    : partition_(std::move(partition)), values_(std::move(values)) {
  if (values_.rows() != partition_.size() ||
      values_.cols() != partition_.size()) {
    throw ShapeError("block kernel: values must be J x J for J cells");
  }
  bound_ = ResolveBound(values_, bound);
  ValidateEntries(values_, bound_);
}

BlockKernel BlockKernel::Constant(IntervalPartition partition, double value) {
  int j = partition.size();
  return BlockKernel(std::move(partition),
                     Eigen::MatrixXd::Constant(j, j, value));
}

GridKernel::GridKernel(Eigen::MatrixXd samples, double bound)
    : samples_(std::move(samples)),
      partition_(IntervalPartition::Uniform(
          std::max<int>(1, static_cast<int>(samples_.rows())))) {
  if (samples_.rows() < 1 || samples_.rows() != samples_.cols()) {
    throw ShapeError("grid kernel: samples must be a non-empty n x n matrix");
  }
  bound_ = ResolveBound(samples_, bound);
  ValidateEntries(samples_, bound_);
}

const IntervalPartition& CarrierPartition(const Kernel& w) {
  return std::visit(
      [](const auto& k) -> const IntervalPartition& { return k.partition(); },
      w);
}

double KernelBound(const Kernel& w) {
  return std::visit([](const auto& k) { return k.bound(); }, w);
}

Eigen::MatrixXd TransitionMatrix(const Kernel& w) {
  if (const auto* b = std::get_if<BlockKernel>(&w)) {
    return b->values() * WeightVector(b->partition()).asDiagonal();
  }
  const auto& g = std::get<GridKernel>(w);
  return g.samples() / static_cast<double>(g.n());
}

double DefaultRowTolerance(const Kernel& w) {
  if (std::holds_alternative<BlockKernel>(w)) return 1e-9;
  const auto& g = std::get<GridKernel>(w);
  return 10.0 * g.bound() / g.n();
}

RowStochasticCheck CheckRowStochastic(const Kernel& w, double tol) {
  Eigen::VectorXd sums = TransitionMatrix(w).rowwise().sum();
  RowStochasticCheck out;
  out.max_defect = (sums.array() - 1.0).abs().maxCoeff();
  out.ok = out.max_defect <= tol;
  return out;
}

StepFunction ApplyLinear(const Kernel& w, const StepFunction& f) {
  RequireCompatible(w, f.partition());
  return StepFunction(f.partition(), TransitionMatrix(w) * f.values());
}

StepFunction ApplyAdjoint(const Kernel& w, const StepFunction& g) {
  RequireCompatible(w, g.partition());
  // (T* g)_j = sum_i p_i w_ij g_i.
  const IntervalPartition& p = CarrierPartition(w);
  Eigen::VectorXd pg = WeightVector(p).cwiseProduct(g.values());
  Eigen::VectorXd out;
  if (const auto* b = std::get_if<BlockKernel>(&w)) {
    out = b->values().transpose() * pg;
  } else {
    out = std::get<GridKernel>(w).samples().transpose() * pg;
  }
  return StepFunction(p, std::move(out));
}

OpinionFunction Apply(const Kernel& w, const OpinionFunction& f) {
  RequireCompatible(w, f.partition());
  auto check = CheckRowStochastic(w, DefaultRowTolerance(w));
  if (!check.ok) {
    throw ContractError("kernel is not row-stochastic (max row defect " +
                        std::to_string(check.max_defect) + ")");
  }
  Eigen::VectorXd out = TransitionMatrix(w) * f.values();
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    double v = out[i];
    if (v > 1.0 + kRangeSlack || v < -1.0 - kRangeSlack) {
      throw ContractError("update left the opinion range [-1, 1]");
    }
    out[i] = std::clamp(v, -1.0, 1.0);
  }
  return OpinionFunction(f.partition(), std::move(out));
}

std::vector<OpinionFunction> Iterate(const Kernel& w,
                                     const OpinionFunction& f0, int t) {
  if (t < 0) throw std::invalid_argument("iterate: t must be >= 0");
  std::vector<OpinionFunction> traj;
  traj.reserve(t + 1);
  traj.push_back(f0);
  for (int s = 0; s < t; ++s) traj.push_back(Apply(w, traj.back()));
  return traj;
}

BlockKernel Refine(const BlockKernel& w, const IntervalPartition& fine) {
  std::vector<int> map = CoarseCellOf(fine, w.partition());
  int n = fine.size();
  Eigen::MatrixXd v(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) v(i, j) = w.values()(map[i], map[j]);
  }
  return BlockKernel(fine, std::move(v), w.bound());
}

BlockKernel KernelProduct(const BlockKernel& w, const BlockKernel& v) {
  if (!SamePartition(w.partition(), v.partition())) {
    IntervalPartition common = CommonRefinement(w.partition(), v.partition());
    return KernelProduct(Refine(w, common), Refine(v, common));
  }
  Eigen::VectorXd p = WeightVector(w.partition());
  Eigen::MatrixXd prod = w.values() * p.asDiagonal() * v.values();
  // Products of bounded densities can exceed both bounds.
  return BlockKernel(w.partition(), std::move(prod));
}

BlockKernel KernelPower(const BlockKernel& w, int t) {
  if (t < 1) throw std::invalid_argument("kernel power needs t >= 1");
  BlockKernel out = w;
  for (int s = 1; s < t; ++s) out = KernelProduct(out, w);
  return out;
}

double GammaMixing(const Kernel& w) {
  if (const auto* b = std::get_if<BlockKernel>(&w)) {
    return b->values().minCoeff();
  }
  return std::get<GridKernel>(w).samples().minCoeff();
}

BlockKernel BlendWithUniform(const BlockKernel& w, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("blend weight must lie in [0, 1]");
  }
  Eigen::MatrixXd v = lambda * w.values();
  v.array() += 1.0 - lambda;
  return BlockKernel(w.partition(), std::move(v));
}

BlockKernel UnitypeKernel(const StepFunction& h) {
  int n = h.size();
  Eigen::MatrixXd v(n, n);
  for (int i = 0; i < n; ++i) v.row(i) = h.values().transpose();
  return BlockKernel(h.partition(), std::move(v));
}

std::optional<StepFunction> UnitypeDensity(const Kernel& w, double tol) {
  const Eigen::MatrixXd& v =
      std::holds_alternative<BlockKernel>(w)
          ? std::get<BlockKernel>(w).values()
          : std::get<GridKernel>(w).samples();
  for (Eigen::Index i = 1; i < v.rows(); ++i) {
    if ((v.row(i) - v.row(0)).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  }
  return StepFunction(CarrierPartition(w), v.row(0).transpose());
}

}  // namespace dikernel
