#include "dikernel/game.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dikernel/errors.h"
#include "dikernel/transform.h"

namespace dikernel {
namespace {

constexpr double kMinSensitivity = 1e-6;
constexpr double kBudgetSlack = 1e-9;

StepFunction OnPartition(const StepFunction& f, const IntervalPartition& part,
                         const char* what) {
  if (SamePartition(f.partition(), part)) return f;
  if (IsRefinementOf(part, f.partition())) return f.RefineTo(part);
  throw ShapeError(std::string(what) +
                   " is not representable on the kernel partition");
}

void RequireAligned(const StepFunction& a, const StepFunction& b) {
  if (!SamePartition(a.partition(), b.partition())) {
    throw ShapeError("functions live on different partitions");
  }
}

void RequirePlayer(int player) {
  if (player != 1 && player != 2) {
    throw std::invalid_argument("player must be 1 or 2");
  }
}

StepFunction ConstantOn(const IntervalPartition& part, double v) {
  return StepFunction::Constant(part, v);
}

double L1Change(const StepFunction& a, const StepFunction& b) {
  return WeightVector(a.partition()).dot((a.values() - b.values()).cwiseAbs());
}

// Best response of `player` with the opponent fixed, using the influence
// density of the player.
StepFunction BestResponseFor(const GameSpec& spec, const StepFunction& g,
                             const StepFunction& s_self,
                             const StepFunction& s_other, int player,
                             const NashOptions& options, uint64_t seed) {
  double b = Budget(spec, player);
  if (spec.contest == ContestKind::kWeighted) {
    EffectiveInputs eff = TwoPlayerTransform(spec.f0, spec.s0, s_other, player);
    return UnitypeBestResponse(g, eff.f_eff, eff.s_eff, b).strategy;
  }
  PlayerObjective objective(spec, g, s_other, player);
  return ProjectedGradientAscent(objective, b, options.starts, seed, 2000,
                                 &s_self)
      .strategy;
}

}  // namespace

GameSpec ValidateGame(GameSpec spec) {
  const IntervalPartition& part = CarrierPartition(spec.kernel);
  if (!(spec.delta > 0.0 && spec.delta < 1.0)) {
    throw std::invalid_argument("discount factor must lie in (0, 1)");
  }
  if (!(spec.b1 >= 0.0 && spec.b2 >= 0.0) || !std::isfinite(spec.b1) ||
      !std::isfinite(spec.b2)) {
    throw std::invalid_argument("budgets must be finite and >= 0");
  }
  if (!(spec.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  spec.f0 = OpinionFunction(OnPartition(spec.f0, part, "f0"));
  spec.s0 = OnPartition(spec.s0, part, "s0");
  spec.psi1 = OnPartition(spec.psi1, part, "psi1");
  spec.psi2 = OnPartition(spec.psi2, part, "psi2");
  if (!(spec.s0.Min() >= kMinSensitivity)) {
    throw ContractError("sensitivity s0 must be >= 1e-6");
  }
  ValidateStageWeight(spec.psi1);
  ValidateStageWeight(spec.psi2);
  return spec;
}

const StepFunction& StageWeight(const GameSpec& spec, int player) {
  RequirePlayer(player);
  return player == 1 ? spec.psi1 : spec.psi2;
}

double Budget(const GameSpec& spec, int player) {
  RequirePlayer(player);
  return player == 1 ? spec.b1 : spec.b2;
}

bool IsFeasible(const StepFunction& s, double budget) {
  return s.Min() >= 0.0 && s.Integral() <= budget + kBudgetSlack;
}

OpinionFunction CompeteWeighted(const StepFunction& f0, const StepFunction& s1,
                                const StepFunction& s2, const StepFunction& s0) {
  RequireAligned(f0, s1);
  RequireAligned(f0, s2);
  RequireAligned(f0, s0);
  Eigen::ArrayXd num = s1.values().array() - s2.values().array() +
                       f0.values().array() * s0.values().array();
  Eigen::ArrayXd den =
      s1.values().array() + s2.values().array() + s0.values().array();
  Eigen::VectorXd c = (num / den).cwiseMax(-1.0).cwiseMin(1.0).matrix();
  return OpinionFunction(f0.partition(), std::move(c));
}

OpinionFunction CompeteAdditive(const StepFunction& f0, const StepFunction& s1,
                                const StepFunction& s2, const StepFunction& s0) {
  RequireAligned(f0, s1);
  RequireAligned(f0, s2);
  RequireAligned(f0, s0);
  Eigen::ArrayXd v = f0.values().array() +
                     (s1.values().array() - s2.values().array()) /
                         s0.values().array();
  return OpinionFunction(f0.partition(),
                         v.cwiseMax(-1.0).cwiseMin(1.0).matrix());
}

OpinionFunction Compete(const GameSpec& spec, const StepFunction& s1,
                        const StepFunction& s2) {
  return spec.contest == ContestKind::kWeighted
             ? CompeteWeighted(spec.f0, s1, s2, spec.s0)
             : CompeteAdditive(spec.f0, s1, s2, spec.s0);
}

double LobbyUtility(const GameSpec& spec, const StepFunction& s1,
                    const StepFunction& s2, int player) {
  RequirePlayer(player);
  if (!IsFeasible(s1, spec.b1) || !IsFeasible(s2, spec.b2)) {
    throw ContractError("infeasible strategy profile");
  }
  int sign = player == 1 ? 1 : -1;
  return DiscountedUtility(spec.kernel, Compete(spec, s1, s2),
                           StageWeight(spec, player), sign, spec.delta,
                           spec.tol);
}

StepFunction LobbyInfluence(const GameSpec& spec, int player) {
  return DiscountedInfluence(spec.kernel, StageWeight(spec, player), spec.delta,
                             spec.tol);
}

EffectiveInputs TwoPlayerTransform(const StepFunction& f0,
                                   const StepFunction& s0,
                                   const StepFunction& s_opponent, int player) {
  RequirePlayer(player);
  RequireAligned(f0, s0);
  RequireAligned(f0, s_opponent);
  Eigen::ArrayXd so = s_opponent.values().array();
  Eigen::ArrayXd s_eff = so + s0.values().array();
  Eigen::ArrayXd own = s0.values().array() * f0.values().array();
  Eigen::ArrayXd f_eff(so.size());
  if (player == 1) f_eff = (own - so) / s_eff;
  else f_eff = -(own + so) / s_eff;
  f_eff = f_eff.cwiseMax(-1.0).cwiseMin(1.0);
  return {StepFunction(f0.partition(), f_eff.matrix()),
          StepFunction(f0.partition(), s_eff.matrix())};
}

BestResponse UnitypeBestResponse(const StepFunction& h,
                                 const StepFunction& f_eff,
                                 const StepFunction& s_eff, double b) {
  RequireAligned(h, f_eff);
  RequireAligned(h, s_eff);
  if (!(b >= 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("budget must be finite and >= 0");
  }
  if (h.Min() < 0) throw std::invalid_argument("density must be >= 0");
  if (!(s_eff.Min() > 0)) throw std::invalid_argument("s_eff must be > 0");
  const IntervalPartition& part = h.partition();
  const int n = part.size();
  Eigen::VectorXd p = WeightVector(part);
  const Eigen::VectorXd& sigma = s_eff.values();
  const Eigen::VectorXd& f = f_eff.values();
  Eigen::VectorXd weight =
      (h.values().array() * sigma.array() * (1.0 - f.array()))
          .cwiseMax(0.0)
          .matrix();

  BestResponse out{StepFunction::Constant(part, 0.0)};
  std::vector<int> support;
  for (int j = 0; j < n; ++j) {
    if (weight[j] > 0 && p[j] > 0) support.push_back(j);
  }
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  if (support.empty()) {
    out.no_gain = true;
  } else if (b > 0) {
    // Cell j enters the support once r = 1/sqrt(nu) exceeds
    // sigma_j / sqrt(weight_j); the budget is piecewise linear in r.
    std::vector<double> threshold(n, 0.0);
    for (int j : support) threshold[j] = sigma[j] / std::sqrt(weight[j]);
    std::stable_sort(support.begin(), support.end(), [&](int a, int c) {
      return threshold[a] < threshold[c];
    });
    double base = b, slope = 0.0, r = 0.0;
    for (size_t k = 0; k < support.size(); ++k) {
      int j = support[k];
      base += p[j] * sigma[j];
      slope += p[j] * std::sqrt(weight[j]);
      r = base / slope;
      if (k + 1 == support.size() || r <= threshold[support[k + 1]]) break;
    }
    for (int j : support) {
      s[j] = std::max(0.0, r * std::sqrt(weight[j]) - sigma[j]);
    }
    out.nu = 1.0 / (r * r);
  } else {
    double level = 0.0;
    for (int j : support) {
      level = std::max(level, weight[j] / (sigma[j] * sigma[j]));
    }
    out.nu = level;
  }
  out.strategy = StepFunction(part, s);
  Eigen::ArrayXd phi =
      (s.array() + sigma.array() * f.array()) / (s.array() + sigma.array());
  out.value = p.dot((h.values().array() * phi).matrix());
  return out;
}

PlayerObjective::PlayerObjective(const GameSpec& spec,
                                 const StepFunction& influence,
                                 const StepFunction& s_opponent, int player)
    : kind_(spec.contest), partition_(influence.partition()) {
  RequirePlayer(player);
  RequireAligned(influence, spec.f0);
  RequireAligned(influence, s_opponent);
  p_ = WeightVector(partition_);
  g_ = influence.values();
  if (kind_ == ContestKind::kWeighted) {
    EffectiveInputs eff =
        TwoPlayerTransform(spec.f0, spec.s0, s_opponent, player);
    a_ = eff.f_eff.values();
    sigma_ = eff.s_eff.values();
  } else {
    sigma_ = spec.s0.values();
    Eigen::ArrayXd shift = s_opponent.values().array() / sigma_.array();
    if (player == 1) a_ = (spec.f0.values().array() - shift).matrix();
    else a_ = (-spec.f0.values().array() - shift).matrix();
  }
}

double PlayerObjective::Value(const Eigen::VectorXd& s) const {
  Eigen::ArrayXd phi;
  if (kind_ == ContestKind::kWeighted) {
    phi = (s.array() + sigma_.array() * a_.array()) /
          (s.array() + sigma_.array());
  } else {
    phi = (a_.array() + s.array() / sigma_.array()).cwiseMax(-1.0).cwiseMin(1.0);
  }
  return p_.dot((g_.array() * phi).matrix());
}

Eigen::VectorXd PlayerObjective::Gradient(const Eigen::VectorXd& s) const {
  Eigen::ArrayXd d;
  if (kind_ == ContestKind::kWeighted) {
    Eigen::ArrayXd den = s.array() + sigma_.array();
    d = sigma_.array() * (1.0 - a_.array()) / (den * den);
  } else {
    // Right derivative of the clipped ramp.
    Eigen::ArrayXd arg = a_.array() + s.array() / sigma_.array();
    d = ((arg >= -1.0) && (arg < 1.0)).cast<double>() / sigma_.array();
  }
  return (g_.array() * d).matrix();
}

Eigen::VectorXd ProjectBudget(const Eigen::VectorXd& y, const Eigen::VectorXd& p,
                              double b) {
  Eigen::VectorXd pos = y.cwiseMax(0.0);
  if (p.dot(pos) <= b) return pos;
  // Find tau > 0 with sum_j p_j max(0, y_j - tau) = b.
  std::vector<int> order(y.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int c) { return y[a] > y[c]; });
  double mass = 0.0, weighted = 0.0, tau = 0.0;
  for (size_t k = 0; k < order.size(); ++k) {
    int j = order[k];
    mass += p[j];
    weighted += p[j] * y[j];
    tau = (weighted - b) / mass;
    double next = k + 1 < order.size() ? y[order[k + 1]] : -INFINITY;
    if (tau >= next) break;
  }
  return (y.array() - tau).cwiseMax(0.0).matrix();
}

GradientAscentResult ProjectedGradientAscent(const PlayerObjective& objective,
                                             double b, int starts,
                                             uint64_t seed, int max_iter,
                                             const StepFunction* initial) {
  if (starts < 1) throw std::invalid_argument("starts must be >= 1");
  const IntervalPartition& part = objective.partition();
  Eigen::VectorXd p = WeightVector(part);
  const int n = part.size();
  std::vector<Eigen::VectorXd> inits;
  inits.push_back(Eigen::VectorXd::Constant(n, b));
  if (initial) inits.push_back(initial->values());
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  for (int k = 1; k < starts; ++k) {
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j) x[j] = expo(rng);
    x *= b / p.dot(x);
    inits.push_back(x);
  }

  GradientAscentResult best{StepFunction::Constant(part, 0.0)};
  bool have = false;
  for (const Eigen::VectorXd& x0 : inits) {
    Eigen::VectorXd x = ProjectBudget(x0, p, b);
    double value = objective.Value(x);
    double step = 1.0;
    bool converged = false;
    for (int it = 0; it < max_iter && !converged; ++it) {
      Eigen::VectorXd grad = objective.Gradient(x);
      bool accepted = false;
      step *= 2.0;
      while (step > 1e-20) {
        Eigen::VectorXd y = ProjectBudget(x + step * grad, p, b);
        Eigen::VectorXd dx = y - x;
        double gain = p.dot(grad.cwiseProduct(dx));
        double move = p.dot(dx.cwiseAbs());
        if (move <= 1e-15 * std::max(1.0, b)) {
          converged = true;
          break;
        }
        double next = objective.Value(y);
        if (next >= value + 1e-4 * gain && next >= value) {
          converged = next - value <= 1e-16 * std::max(1.0, std::abs(value)) &&
                      move <= 1e-13 * std::max(1.0, b);
          x = std::move(y);
          value = next;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted && !converged) converged = true;
    }
    if (!have || value > best.value) {
      best.strategy = StepFunction(part, x);
      best.value = value;
      best.converged = converged;
      have = true;
    }
  }
  return best;
}

ResidualReport EpsilonResidual(const GameSpec& spec, const StepFunction& s1,
                               const StepFunction& s2, int player,
                               uint64_t seed, int starts) {
  RequirePlayer(player);
  const StepFunction& own = player == 1 ? s1 : s2;
  const StepFunction& other = player == 1 ? s2 : s1;
  StepFunction g = LobbyInfluence(spec, player);
  PlayerObjective objective(spec, g, other, player);
  ResidualReport report;
  report.current_value = objective.Value(own.values());
  if (spec.contest == ContestKind::kWeighted) {
    EffectiveInputs eff = TwoPlayerTransform(spec.f0, spec.s0, other, player);
    BestResponse br =
        UnitypeBestResponse(g, eff.f_eff, eff.s_eff, Budget(spec, player));
    report.best_value = br.value;
    report.exact = true;
  } else {
    GradientAscentResult ga = ProjectedGradientAscent(
        objective, Budget(spec, player), starts, seed, 2000, &own);
    report.best_value = ga.value;
    report.converged = ga.converged;
  }
  report.epsilon = std::max(0.0, report.best_value - report.current_value);
  return report;
}

EquilibriumReport SolveNash(const GameSpec& spec, const NashOptions& options) {
  if (!(options.damping > 0.0 && options.damping <= 1.0)) {
    throw std::invalid_argument("damping must lie in (0, 1]");
  }
  if (options.max_iter < 0) throw std::invalid_argument("max_iter must be >= 0");
  const IntervalPartition& part = CarrierPartition(spec.kernel);
  StepFunction g1 = LobbyInfluence(spec, 1);
  StepFunction g2 = LobbyInfluence(spec, 2);
  StepFunction s1 = ConstantOn(part, spec.b1);
  StepFunction s2 = ConstantOn(part, spec.b2);
  const double lambda = options.damping;
  EquilibriumReport report{s1, s2};
  for (int k = 1; k <= options.max_iter; ++k) {
    uint64_t seed = options.seed + 2 * static_cast<uint64_t>(k);
    StepFunction br1 = BestResponseFor(spec, g1, s1, s2, 1, options, seed);
    StepFunction br2 = BestResponseFor(spec, g2, s2, s1, 2, options, seed + 1);
    StepFunction n1(part, (1.0 - lambda) * s1.values() + lambda * br1.values());
    StepFunction n2(part, (1.0 - lambda) * s2.values() + lambda * br2.values());
    double move = std::max(L1Change(n1, s1), L1Change(n2, s2));
    s1 = std::move(n1);
    s2 = std::move(n2);
    report.iterations = k;
    if (move < options.tol) {
      report.converged = true;
      break;
    }
  }
  report.s1 = s1;
  report.s2 = s2;
  report.u1 = LobbyUtility(spec, s1, s2, 1);
  report.u2 = LobbyUtility(spec, s1, s2, 2);
  report.r1 = EpsilonResidual(spec, s1, s2, 1, options.seed, options.starts);
  report.r2 = EpsilonResidual(spec, s1, s2, 2, options.seed + 1,
                              options.starts);
  return report;
}

GameSpec DiscretizeGame(const GameSpec& spec, const IntervalPartition& v) {
  const IntervalPartition& carrier = CarrierPartition(spec.kernel);
  BlockKernel wv = DiscretizeKernel(spec.kernel, v);
  IntervalPartition common = CommonRefinement(wv.partition(), carrier);
  GameSpec out = spec;
  out.kernel = Refine(wv, common);
  if (!SamePartition(common, carrier)) {
    out.f0 = OpinionFunction(spec.f0.RefineTo(common));
    out.s0 = spec.s0.RefineTo(common);
    out.psi1 = spec.psi1.RefineTo(common);
    out.psi2 = spec.psi2.RefineTo(common);
  }
  return out;
}

UnitypeReduction ReduceToUnitype(const GameSpec& spec, double tol,
                                 int max_iter) {
  if (UnitypeDensity(spec.kernel)) return {spec, 0.0, GammaMixing(spec.kernel)};
  double gamma = GammaMixing(spec.kernel);
  if (!(gamma > 0)) {
    throw NotApplicableError(
        "kernel is not gamma-mixing; uni-type reduction has no certificate");
  }
  StationaryDensity st = ComputeStationaryDensity(spec.kernel, tol, max_iter);
  GameSpec reduced = spec;
  reduced.kernel = UnitypeKernel(st.density);
  double rho = 1.0 - gamma, d = spec.delta;
  double gap = (1.0 - d) * 2.0 * d * rho / (1.0 - d * rho);
  return {reduced, gap, gamma};
}

}  // namespace dikernel
