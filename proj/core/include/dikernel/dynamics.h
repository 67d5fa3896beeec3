#ifndef DIKERNEL_DYNAMICS_H_
#define DIKERNEL_DYNAMICS_H_

#include <optional>
#include <vector>

#include "dikernel/kernel.h"

namespace dikernel {

// Fixed point of the adjoint update h'(y) = \int W(x, y) h(x) dx.
struct StationaryDensity {
  StepFunction density;
  double residual = 0.0;  // L1 change of the last step
  double rate = 0.0;      // ratio of the last two residuals
  int iterations = 0;
  bool converged = false;
};

// Power iteration from `start` (uniform if absent), renormalized to unit
// mass every step; stops when the L1 change is <= tol. A non-converged
// result carries the last iterate.
StationaryDensity ComputeStationaryDensity(
    const Kernel& w, double tol, int max_iter,
    const std::optional<StepFunction>& start = std::nullopt);

struct ConsensusReport {
  StationaryDensity stationary;
  double value = 0.0;  // f* = \int h f0
  bool certified = false;
  double gamma = 0.0;
  double rho = 1.0;    // 1 - gamma
  double alpha = 2.0;  // opinion-space diameter
  std::vector<double> sup_distances;  // sup |f_t - f*|, t = 0, 1, ...
  int steps = 0;
  bool converged = false;
};

// Envelope alpha * rho^t certified by a gamma-mixing kernel.
double ConsensusEnvelope(const ConsensusReport& report, int t);

// Runs the dynamics from f0 until the sup change is <= tol (or max_iter
// steps) and reports the consensus value and the certificate fields.
ConsensusReport Consensus(const Kernel& w, const OpinionFunction& f0,
                          double tol, int max_iter);

// Checks psi >= 0 and \int psi = 1 within 1e-9; throws ContractError.
void ValidateStageWeight(const StepFunction& psi);

// sign * \int f psi (exact on the common refinement).
double StageUtility(const StepFunction& f, const StepFunction& psi, int sign);

// Number of terms T* with delta^(T*+1) <= tol.
int DiscountedHorizon(double delta, double tol);

// (1 - delta) sum_{t=1}^{T*} delta^t u(T^t(W) f).
double DiscountedUtility(const Kernel& w, const OpinionFunction& f,
                         const StepFunction& psi, int sign, double delta,
                         double tol);

// g on the carrier partition of W with DiscountedUtility(w, f, psi, sign) =
// sign * \int g f for every f on that partition (same truncation).
StepFunction DiscountedInfluence(const Kernel& w, const StepFunction& psi,
                                 double delta, double tol);

}  // namespace dikernel

#endif  // DIKERNEL_DYNAMICS_H_
