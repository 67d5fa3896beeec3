#ifndef DIKERNEL_GAME_H_
#define DIKERNEL_GAME_H_

#include <cstdint>
#include <utility>

#include "dikernel/dynamics.h"
#include "dikernel/kernel.h"
#include "dikernel/partition.h"

namespace dikernel {

enum class ContestKind { kWeighted, kAdditiveClipped };

// One-shot lobby game. f0, s0, psi1 and psi2 live on the carrier partition
// of the kernel (ValidateGame refines them there when possible); strategies
// are step functions on the same partition.
struct GameSpec {
  Kernel kernel;
  ContestKind contest = ContestKind::kWeighted;
  OpinionFunction f0;
  StepFunction s0;
  StepFunction psi1;
  StepFunction psi2;
  double b1 = 1.0;
  double b2 = 1.0;
  double delta = 0.9;
  double tol = 1e-12;  // truncation tolerance of the discounted series
};

// Checks the invariants (s0 >= 1e-6, 0 < delta < 1, budgets >= 0, psi
// validity) and moves every function onto the kernel's carrier partition.
// Throws ContractError, ShapeError or std::invalid_argument.
GameSpec ValidateGame(GameSpec spec);

// Player index 1 or 2.
const StepFunction& StageWeight(const GameSpec& spec, int player);
double Budget(const GameSpec& spec, int player);

// s >= 0 and \int s <= budget + 1e-9.
bool IsFeasible(const StepFunction& s, double budget);

// (s1 - s2 + f0 s0) / (s1 + s2 + s0), pointwise.
OpinionFunction CompeteWeighted(const StepFunction& f0, const StepFunction& s1,
                                const StepFunction& s2, const StepFunction& s0);

// clip(f0 + (s1 - s2) / s0, -1, 1), pointwise.
OpinionFunction CompeteAdditive(const StepFunction& f0, const StepFunction& s1,
                                const StepFunction& s2, const StepFunction& s0);

OpinionFunction Compete(const GameSpec& spec, const StepFunction& s1,
                        const StepFunction& s2);

// Discounted utility of `player` from simulating the dynamics started at the
// competed opinions. Throws ContractError for infeasible strategies.
double LobbyUtility(const GameSpec& spec, const StepFunction& s1,
                    const StepFunction& s2, int player);

// Influence density g_i with LobbyUtility = sign_i * \int g_i C.
StepFunction LobbyInfluence(const GameSpec& spec, int player);

// Effective opinion and sensitivity seen by `player` facing `s_opponent`
// under the weighted contest: the competed opinion (as seen by the player,
// i.e. negated for player 2) is (s + s_eff f_eff) / (s + s_eff).
struct EffectiveInputs {
  StepFunction f_eff;
  StepFunction s_eff;
};
EffectiveInputs TwoPlayerTransform(const StepFunction& f0,
                                   const StepFunction& s0,
                                   const StepFunction& s_opponent, int player);

struct BestResponse {
  StepFunction strategy;
  double nu = 0.0;       // Lagrange level; 0 when the budget is not spent
  bool no_gain = false;  // weight == 0 everywhere
  double value = 0.0;    // \int h (s + s_eff f_eff) / (s + s_eff)
};

// Maximizes \int h (s + s_eff f_eff) / (s + s_eff) over s >= 0 with
// \int s = b: s = max(0, sqrt(weight / nu) - s_eff) with
// weight = h s_eff (1 - f_eff). The level is solved exactly by sweeping the
// support thresholds s_eff / sqrt(weight) in increasing order.
BestResponse UnitypeBestResponse(const StepFunction& h,
                                 const StepFunction& f_eff,
                                 const StepFunction& s_eff, double b);

// Separable objective sum_j p_j g_j phi_j(s_j) of one player with the
// opponent fixed; used by the projected-gradient path.
class PlayerObjective {
 public:
  PlayerObjective(const GameSpec& spec, const StepFunction& influence,
                  const StepFunction& s_opponent, int player);
  double Value(const Eigen::VectorXd& s) const;
  // Gradient in the L2(p) inner product (per unit mass).
  Eigen::VectorXd Gradient(const Eigen::VectorXd& s) const;
  const IntervalPartition& partition() const { return partition_; }

 private:
  ContestKind kind_;
  IntervalPartition partition_;
  Eigen::VectorXd p_, g_;
  Eigen::VectorXd a_, sigma_;  // weighted: F, s_eff; additive: offset, s0
};

// L2(p) projection onto {s >= 0, sum_j p_j s_j <= b}.
Eigen::VectorXd ProjectBudget(const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                              double b);

struct GradientAscentResult {
  StepFunction strategy;
  double value = 0.0;
  bool converged = false;
};

// Multi-start projected-gradient ascent with Armijo backtracking. Starts:
// the uniform allocation, `initial` when given, and `starts - 1` random
// feasible points from `seed`. Best value wins; ties go to the earlier start.
GradientAscentResult ProjectedGradientAscent(
    const PlayerObjective& objective, double b, int starts, uint64_t seed,
    int max_iter = 2000, const StepFunction* initial = nullptr);

struct ResidualReport {
  double epsilon = 0.0;
  bool exact = false;      // closed-form best response was available
  bool converged = true;   // optimizer flag on the gradient path
  double best_value = 0.0;
  double current_value = 0.0;
};

// eps_i = sup_s' U_i(s', s_-i) - U_i(s_i, s_-i), clipped at 0. Exact for the
// weighted contest; a lower bound from projected gradient otherwise.
ResidualReport EpsilonResidual(const GameSpec& spec, const StepFunction& s1,
                               const StepFunction& s2, int player,
                               uint64_t seed = 0, int starts = 4);

struct NashOptions {
  double damping = 0.5;
  double tol = 1e-10;
  int max_iter = 10000;
  uint64_t seed = 0;
  int starts = 4;  // projected-gradient starts (additive contest only)
};

struct EquilibriumReport {
  StepFunction s1;
  StepFunction s2;
  double u1 = 0.0;
  double u2 = 0.0;
  ResidualReport r1;
  ResidualReport r2;
  int iterations = 0;
  bool converged = false;
};

// Damped best-response iteration s_i <- (1 - lambda) s_i + lambda BR_i(s_-i)
// (both players updated from the previous profile) from s_i = b_i; stops when
// both strategies move less than tol in L1.
EquilibriumReport SolveNash(const GameSpec& spec, const NashOptions& options);

// Same game with the kernel replaced by its block average on `v`, expressed
// on the common refinement of `v` and the original carrier so that
// strategies and opinion data carry over unchanged.
GameSpec DiscretizeGame(const GameSpec& spec, const IntervalPartition& v);

struct UnitypeReduction {
  GameSpec spec;
  double gap = 0.0;  // per-player payoff gap bound (1-delta) 2 delta rho / (1 - delta rho)
  double gamma = 0.0;
};

// Replaces the kernel by the uni-type kernel of its stationary density.
// Identity with gap 0 for uni-type kernels; NotApplicableError when the
// kernel is not gamma-mixing.
UnitypeReduction ReduceToUnitype(const GameSpec& spec, double tol = 1e-13,
                                 int max_iter = 100000);

}  // namespace dikernel

#endif  // DIKERNEL_GAME_H_
