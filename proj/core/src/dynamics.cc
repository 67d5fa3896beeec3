#include "dikernel/dynamics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dikernel/errors.h"
#include "dikernel/partition.h"

namespace dikernel {
namespace {

void RequireDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("discount factor must lie in (0, 1)");
  }
}

StepFunction OnCarrier(const StepFunction& f, const IntervalPartition& carrier) {
  if (SamePartition(f.partition(), carrier)) return f;
  if (IsRefinementOf(carrier, f.partition())) return f.RefineTo(carrier);
  throw ShapeError("function is not representable on the kernel partition");
}

}  // namespace

StationaryDensity ComputeStationaryDensity(
    const Kernel& w, double tol, int max_iter,
    const std::optional<StepFunction>& start) {
  if (max_iter < 0) throw std::invalid_argument("max_iter must be >= 0");
  const IntervalPartition& part = CarrierPartition(w);
  Eigen::VectorXd p = WeightVector(part);
  Eigen::VectorXd h = start ? OnCarrier(*start, part).values()
                            : Eigen::VectorXd::Ones(part.size());
  if ((h.array() < 0).any() || p.dot(h) <= 0) {
    throw std::invalid_argument("starting density must be >= 0 with mass > 0");
  }
  h /= p.dot(h);
  // The adjoint update acts on masses m_i = p_i h_i as m' = P^T m.
  Eigen::MatrixXd pt = TransitionMatrix(w).transpose();
  StationaryDensity out{StepFunction(part, h)};
  double prev = 0.0;
  for (int k = 1; k <= max_iter; ++k) {
    Eigen::VectorXd m = pt * p.cwiseProduct(h);
    m = m.cwiseMax(0.0);
    m /= m.sum();
    Eigen::VectorXd next = m.cwiseQuotient(p);
    double change = p.dot((next - h).cwiseAbs());
    h = std::move(next);
    out.iterations = k;
    out.rate = prev > 0 ? change / prev : 0.0;
    out.residual = change;
    prev = change;
    if (change <= tol) {
      out.converged = true;
      break;
    }
  }
  if (max_iter == 0) out.converged = false;
  out.density = StepFunction(part, h);
  return out;
}

double ConsensusEnvelope(const ConsensusReport& report, int t) {
  return report.alpha * std::pow(report.rho, t);
}

ConsensusReport Consensus(const Kernel& w, const OpinionFunction& f0,
                          double tol, int max_iter) {
  ConsensusReport report{ComputeStationaryDensity(w, tol, max_iter)};
  const StationaryDensity& st = report.stationary;
  Eigen::VectorXd p = WeightVector(st.density.partition());
  report.value = p.dot(st.density.values().cwiseProduct(f0.values()));
  report.gamma = GammaMixing(w);
  report.certified = report.gamma > 0;
  report.rho = 1.0 - report.gamma;
  report.alpha = 2.0;

  OpinionFunction f = f0;
  auto sup_dist = [&](const StepFunction& g) {
    return (g.values().array() - report.value).abs().maxCoeff();
  };
  report.sup_distances.push_back(sup_dist(f));
  bool settled = false;
  for (int t = 1; t <= max_iter; ++t) {
    OpinionFunction next = Apply(w, f);
    double change = (next.values() - f.values()).cwiseAbs().maxCoeff();
    f = std::move(next);
    report.sup_distances.push_back(sup_dist(f));
    report.steps = t;
    if (change <= tol) {
      settled = true;
      break;
    }
  }
  report.converged = settled && st.converged;
  return report;
}

void ValidateStageWeight(const StepFunction& psi) {
  if (psi.Min() < 0) throw ContractError("stage weight must be >= 0");
  double mass = psi.Integral();
  if (std::abs(mass - 1.0) > 1e-9) {
    throw ContractError("stage weight must integrate to 1 (got " +
                        std::to_string(mass) + ")");
  }
}

double StageUtility(const StepFunction& f, const StepFunction& psi, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +-1");
  ValidateStageWeight(psi);
  IntervalPartition common = CommonRefinement(f.partition(), psi.partition());
  Eigen::VectorXd fv = f.RefineTo(common).values();
  Eigen::VectorXd pv = psi.RefineTo(common).values();
  return sign * WeightVector(common).dot(fv.cwiseProduct(pv));
}

int DiscountedHorizon(double delta, double tol) {
  RequireDelta(delta);
  if (!(tol > 0)) throw std::invalid_argument("tol must be > 0");
  if (tol >= 1) return 0;
  double steps = std::ceil(std::log(tol) / std::log(delta)) - 1.0;
  return std::max(0, static_cast<int>(steps));
}

double DiscountedUtility(const Kernel& w, const OpinionFunction& f,
                         const StepFunction& psi, int sign, double delta,
                         double tol) {
  int horizon = DiscountedHorizon(delta, tol);
  ValidateStageWeight(psi);
  double total = 0.0, weight = 1.0;
  OpinionFunction ft = f;
  for (int t = 1; t <= horizon; ++t) {
    ft = Apply(w, ft);
    weight *= delta;
    total += weight * StageUtility(ft, psi, sign);
  }
  return (1.0 - delta) * total;
}

StepFunction DiscountedInfluence(const Kernel& w, const StepFunction& psi,
                                 double delta, double tol) {
  int horizon = DiscountedHorizon(delta, tol);
  ValidateStageWeight(psi);
  const IntervalPartition& part = CarrierPartition(w);
  StepFunction g = OnCarrier(psi, part);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(part.size());
  double weight = 1.0;
  for (int t = 1; t <= horizon; ++t) {
    g = ApplyAdjoint(w, g);
    weight *= delta;
    total += weight * g.values();
  }
  return StepFunction(part, (1.0 - delta) * total);
}

}  // namespace dikernel
