#include "dikernel/partition.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dikernel/errors.h"

namespace dikernel {

IntervalPartition::IntervalPartition(std::vector<double> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.size() < 2) {
    throw std::invalid_argument("partition needs at least two breakpoints");
  }
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw std::invalid_argument("partition must start at 0 and end at 1");
  }
  for (size_t k = 1; k < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] > breakpoints_[k - 1])) {
      throw std::invalid_argument(
          "partition breakpoints must be strictly increasing (index " +
          std::to_string(k) + ")");
    }
  }
}

IntervalPartition IntervalPartition::Uniform(int n) {
  if (n < 1) throw std::invalid_argument("uniform partition needs n >= 1");
  std::vector<double> bp(n + 1);
  for (int k = 0; k <= n; ++k) bp[k] = static_cast<double>(k) / n;
  bp.back() = 1.0;
  return IntervalPartition(std::move(bp));
}

IntervalPartition IntervalPartition::FromWeights(
    std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("no weights");
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("weights must sum to 1");
  }
  std::vector<double> bp(weights.size() + 1, 0.0);
  for (size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0)) {
      throw std::invalid_argument("weights must be positive");
    }
    bp[j + 1] = bp[j] + weights[j];
  }
  bp.back() = 1.0;
  return IntervalPartition(std::move(bp));
}

std::vector<double> IntervalPartition::Weights() const {
  std::vector<double> w(size());
  for (int j = 0; j < size(); ++j) w[j] = weight(j);
  return w;
}

int IntervalPartition::Locate(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("locate: x outside [0,1]");
  }
  if (x == 1.0) return size() - 1;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return static_cast<int>(it - breakpoints_.begin()) - 1;
}

IntervalPartition CommonRefinement(const IntervalPartition& a,
                                   const IntervalPartition& b) {
  std::vector<double> merged;
  merged.reserve(a.breakpoints().size() + b.breakpoints().size());
  std::merge(a.breakpoints().begin(), a.breakpoints().end(),
             b.breakpoints().begin(), b.breakpoints().end(),
             std::back_inserter(merged));
  std::vector<double> out;
  out.reserve(merged.size());
  for (double x : merged) {
    if (out.empty() || x - out.back() > kMergeTol) {
      out.push_back(x);
    }
  }
  // Endpoints are exact in both inputs; a near-1 interior point may have
  // swallowed the final 1.
  if (out.back() != 1.0) {
    if (1.0 - out.back() <= kMergeTol) out.back() = 1.0;
    else out.push_back(1.0);
  }
  return IntervalPartition(std::move(out));
}

bool IsRefinementOf(const IntervalPartition& fine,
                    const IntervalPartition& coarse) {
  auto fb = fine.breakpoints();
  for (double x : coarse.breakpoints()) {
    auto it = std::lower_bound(fb.begin(), fb.end(), x - kMergeTol);
    if (it == fb.end() || std::abs(*it - x) > kMergeTol) return false;
  }
  return true;
}

std::vector<int> CoarseCellOf(const IntervalPartition& fine,
                              const IntervalPartition& coarse) {
  if (!IsRefinementOf(fine, coarse)) {
    throw ShapeError("partition is not a refinement of the target");
  }
  std::vector<int> map(fine.size());
  for (int j = 0; j < fine.size(); ++j) {
    map[j] = coarse.Locate(0.5 * (fine.left(j) + fine.right(j)));
  }
  return map;
}

std::vector<double> OverlapLengths(const IntervalPartition& v,
                                   const IntervalPartition& p) {
  std::vector<double> out(static_cast<size_t>(v.size()) * p.size(), 0.0);
  // Two-pointer sweep over both breakpoint lists.
  int i = 0, k = 0;
  while (i < v.size() && k < p.size()) {
    double lo = std::max(v.left(i), p.left(k));
    double hi = std::min(v.right(i), p.right(k));
    if (hi > lo) out[static_cast<size_t>(i) * p.size() + k] = hi - lo;
    if (v.right(i) < p.right(k)) ++i;
    else if (p.right(k) < v.right(i)) ++k;
    else { ++i; ++k; }
  }
  return out;
}

}  // namespace dikernel
