#include "dikernel/metrics.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "dikernel/errors.h"
#include "dikernel/transform.h"

namespace dikernel {
namespace {

// Max over column sets T of |sum_{j in T} c_j| and the maximizing T.
double BestColumns(const Eigen::VectorXd& c, std::vector<int>* cols) {
  double pos = 0.0, neg = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (c[j] > 0) pos += c[j];
    else neg -= c[j];
  }
  if (cols) {
    cols->clear();
    bool take_pos = pos >= neg;
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      if (take_pos ? c[j] > 0 : c[j] < 0) cols->push_back(static_cast<int>(j));
    }
  }
  return std::max(pos, neg);
}

// Entries weighted by cell areas: a(i, j) = p_i p_j U(i, j).
Eigen::MatrixXd MassMatrix(const SignedBlockKernel& u) {
  Eigen::VectorXd p = WeightVector(u.partition);
  return p.asDiagonal() * u.values * p.asDiagonal();
}

void RequireDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("discount factor must lie in (0, 1)");
  }
}

}  // namespace

SignedBlockKernel Difference(const BlockKernel& w, const BlockKernel& v) {
  IntervalPartition common = CommonRefinement(w.partition(), v.partition());
  return {common, Refine(w, common).values() - Refine(v, common).values()};
}

double L1Distance(const StepFunction& f, const StepFunction& g) {
  IntervalPartition common = CommonRefinement(f.partition(), g.partition());
  Eigen::VectorXd d = f.RefineTo(common).values() - g.RefineTo(common).values();
  return WeightVector(common).dot(d.cwiseAbs());
}

double L1Norm(const SignedBlockKernel& u) {
  return MassMatrix(u).cwiseAbs().sum();
}

CutNormResult CutNormExact(const SignedBlockKernel& u) {
  const int j = u.size();
  if (j > kMaxExactCutCells) {
    throw BudgetError("exact cut norm limited to " +
                      std::to_string(kMaxExactCutCells) + " cells (got " +
                      std::to_string(j) + "); use the heuristic");
  }
  Eigen::MatrixXd a = MassMatrix(u);
  Eigen::VectorXd colsum = Eigen::VectorXd::Zero(j);
  uint32_t best_mask = 0;
  double best = 0.0;
  uint32_t gray = 0;
  const uint32_t count = 1u << j;
  for (uint32_t k = 1; k < count; ++k) {
    // Gray code: exactly one row toggles per step.
    int bit = std::countr_zero(k);
    gray ^= 1u << bit;
    if (gray & (1u << bit)) colsum += a.row(bit).transpose();
    else colsum -= a.row(bit).transpose();
    double v = BestColumns(colsum, nullptr);
    if (v > best) {
      best = v;
      best_mask = gray;
    }
  }
  CutNormResult out;
  out.value = best;
  if (best > 0.0) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(j);
    for (int i = 0; i < j; ++i) {
      if (best_mask & (1u << i)) {
        out.rows.push_back(i);
        c += a.row(i).transpose();
      }
    }
    out.value = BestColumns(c, &out.cols);
  }
  return out;
}

CutNormResult CutNormHeuristic(const SignedBlockKernel& u, int restarts,
                               uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  const int j = u.size();
  Eigen::MatrixXd a = MassMatrix(u);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  CutNormResult best;
  for (int r = 0; r < restarts; ++r) {
    std::vector<char> cols(j);
    for (auto& c : cols) c = coin(rng);
    for (double sign : {1.0, -1.0}) {
      std::vector<char> t = cols, s(j, 0);
      double value = 0.0;
      for (int iter = 0; iter < 4 * j + 8; ++iter) {
        Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(j);
        for (int c = 0; c < j; ++c) {
          if (t[c]) rowsum += sign * a.col(c);
        }
        for (int i = 0; i < j; ++i) s[i] = rowsum[i] > 0;
        Eigen::VectorXd colsum = Eigen::VectorXd::Zero(j);
        for (int i = 0; i < j; ++i) {
          if (s[i]) colsum += sign * a.row(i).transpose();
        }
        std::vector<char> next(j);
        value = 0.0;
        for (int c = 0; c < j; ++c) {
          next[c] = colsum[c] > 0;
          if (next[c]) value += colsum[c];
        }
        if (next == t) break;
        t = std::move(next);
      }
      if (value > best.value) {
        best.value = value;
        best.rows.clear();
        best.cols.clear();
        for (int i = 0; i < j; ++i) {
          if (s[i]) best.rows.push_back(i);
          if (t[i]) best.cols.push_back(i);
        }
      }
    }
  }
  return best;
}

CutNormResult CutNorm(const SignedBlockKernel& u, int restarts, uint64_t seed) {
  if (u.size() <= kMaxExactCutCells) return CutNormExact(u);
  return CutNormHeuristic(u, restarts, seed);
}

CutDistanceEstimate EstimateCutDistance(const AnalyticKernel& w,
                                        const IntervalPartition& v,
                                        int fine_n) {
  IntervalPartition fine = IntervalPartition::Uniform(fine_n);
  if (!IsRefinementOf(fine, v)) {
    fine = CommonRefinement(fine, v);
  }
  BlockKernel wn = DiscretizeKernel(w, fine);
  BlockKernel wv = DiscretizeKernel(w, v);
  SignedBlockKernel diff = Difference(wn, wv);
  CutDistanceEstimate est;
  est.exact_lower = diff.size() <= kMaxExactCutCells;
  est.lower = CutNorm(diff).value;
  double fine_part = est.exact_lower ? est.lower : L1Norm(diff);
  // Cells of `fine` are no longer than 1/fine_n.
  est.upper = fine_part + BoundPartition(w.meta(), fine_n);
  return est;
}

double BoundOneStep(double l1, double cut) { return l1 + 4.0 * cut; }

double BoundDynamic(int t, double cut) {
  if (t < 0) throw std::invalid_argument("t must be >= 0");
  return std::min(2.0, 4.0 * t * cut);
}

double BoundDiscounted(double alpha, double delta, double cut) {
  RequireDelta(delta);
  if (alpha < 0) throw std::invalid_argument("alpha must be >= 0");
  return 4.0 * alpha * delta / ((1.0 - delta) * (1.0 - delta)) * cut;
}

double BoundTwoKernelDiscounted(double alpha, double delta, double l1,
                                double cut) {
  RequireDelta(delta);
  if (alpha < 0) throw std::invalid_argument("alpha must be >= 0");
  return alpha * delta / (1.0 - delta) * l1 +
         BoundDiscounted(alpha, delta, cut);
}

double BoundPartition(const LipschitzMeta& meta, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  double k = meta.num_pieces();
  return 2.0 * meta.theta / n + meta.bound * k * k / (double(n) * n);
}

int MinPartitionSize(double eta, const LipschitzMeta& meta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  double k = meta.num_pieces(), theta = meta.theta;
  double root = (8.0 * theta +
                 std::sqrt(64.0 * theta * theta + 16.0 * k * k * meta.bound * eta)) /
                (2.0 * eta);
  int n0 = static_cast<int>(std::floor(root)) + 1;
  // Guard the floor against rounding right at the root.
  while (4.0 * BoundPartition(meta, n0) >= eta) ++n0;
  return n0;
}

}  // namespace dikernel
