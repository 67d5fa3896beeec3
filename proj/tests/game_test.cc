#include "dikernel/game.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dikernel/catalog.h"
#include "dikernel/errors.h"
#include "dikernel/metrics.h"
#include "dikernel/transform.h"
#include "testing/frozen_values.h"
#include "testing/oracles.h"

namespace dikernel {
namespace {

GameSpec MakeGame(Kernel kernel, double f0, double s0, double b1, double b2,
                  double delta,
                  ContestKind kind = ContestKind::kWeighted) {
  const IntervalPartition& p = CarrierPartition(kernel);
  return ValidateGame(GameSpec{
      .kernel = kernel,
      .contest = kind,
      .f0 = OpinionFunction::Constant(p, f0),
      .s0 = StepFunction::Constant(p, s0),
      .psi1 = StepFunction::Constant(p, 1.0),
      .psi2 = StepFunction::Constant(p, 1.0),
      .b1 = b1,
      .b2 = b2,
      .delta = delta,
  });
}

GameSpec RandomGame(std::mt19937_64& rng, int cells, bool unitype,
                    ContestKind kind = ContestKind::kWeighted) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  IntervalPartition part = testing::RandomPartition(cells, rng);
  Kernel kernel = unitype
                      ? Kernel(UnitypeKernel(StepFunction(
                            part, testing::RandomSimplex(cells, rng).cwiseQuotient(
                                      WeightVector(part)))))
                      : Kernel(testing::RandomBlockKernel(part, rng));
  Eigen::VectorXd s0 = (0.2 + 2.0 * u(rng)) * Eigen::VectorXd::Ones(cells) +
                       testing::RandomSimplex(cells, rng);
  auto psi = [&] {
    return StepFunction(part, testing::RandomSimplex(cells, rng).cwiseQuotient(
                                  WeightVector(part)));
  };
  return ValidateGame(GameSpec{
      .kernel = kernel,
      .contest = kind,
      .f0 = OpinionFunction(part, 0.9 * testing::RandomOpinions(cells, rng)),
      .s0 = StepFunction(part, s0),
      .psi1 = psi(),
      .psi2 = psi(),
      .b1 = 0.2 + 2.0 * u(rng),
      .b2 = 0.2 + 2.0 * u(rng),
      .delta = 0.5 + 0.45 * u(rng),
  });
}

TEST(CompeteTest, WeightedExamples) {
  auto p = IntervalPartition::Uniform(1);
  auto c = [&](double v) { return StepFunction::Constant(p, v); };
  EXPECT_EQ(CompeteWeighted(c(0.3), c(0), c(0), c(2)).values()[0], 0.3);
  EXPECT_EQ(CompeteWeighted(c(0), c(1), c(0), c(1)).values()[0], 0.5);
  EXPECT_EQ(CompeteWeighted(c(1), c(5), c(0), c(2)).values()[0], 1.0);
}

TEST(CompeteTest, AdditiveExamples) {
  auto p = IntervalPartition::Uniform(1);
  auto c = [&](double v) { return StepFunction::Constant(p, v); };
  EXPECT_EQ(CompeteAdditive(c(0), c(2), c(0), c(1)).values()[0], 1.0);
  EXPECT_EQ(CompeteAdditive(c(0.4), c(0.7), c(0.7), c(3)).values()[0], 0.4);
  EXPECT_EQ(CompeteAdditive(c(-1), c(0.1), c(0.5), c(1)).values()[0], -1.0);
}

TEST(CompeteTest, RangeConcavityAndTransformIdentity) {
  std::mt19937_64 rng(40);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::uniform_real_distribution<double> f(-1.0, 1.0);
  auto p = IntervalPartition::Uniform(1);
  auto c = [&](double v) { return StepFunction::Constant(p, v); };
  for (int trial = 0; trial < 500; ++trial) {
    double f0 = f(rng), s0 = 1e-3 + u(rng), a = u(rng), b = u(rng), s2 = u(rng);
    double cw = CompeteWeighted(c(f0), c(a), c(s2), c(s0)).values()[0];
    double ca = CompeteAdditive(c(f0), c(a), c(s2), c(s0)).values()[0];
    EXPECT_LE(std::abs(cw), 1.0);
    EXPECT_LE(std::abs(ca), 1.0);
    // Midpoint concavity in s1 and convexity in s2.
    double mid = CompeteWeighted(c(f0), c(0.5 * (a + b)), c(s2), c(s0)).values()[0];
    double ends = 0.5 * (CompeteWeighted(c(f0), c(a), c(s2), c(s0)).values()[0] +
                         CompeteWeighted(c(f0), c(b), c(s2), c(s0)).values()[0]);
    EXPECT_GE(mid, ends - 1e-12);
    double mid2 = CompeteWeighted(c(f0), c(s2), c(0.5 * (a + b)), c(s0)).values()[0];
    double ends2 = 0.5 * (CompeteWeighted(c(f0), c(s2), c(a), c(s0)).values()[0] +
                          CompeteWeighted(c(f0), c(s2), c(b), c(s0)).values()[0]);
    EXPECT_LE(mid2, ends2 + 1e-12);
    // (s1 + s_eff f_eff) / (s1 + s_eff) reproduces the operator, both views.
    EffectiveInputs e1 = TwoPlayerTransform(c(f0), c(s0), c(s2), 1);
    double se = e1.s_eff.values()[0], fe = e1.f_eff.values()[0];
    EXPECT_NEAR(cw, (a + se * fe) / (a + se), 1e-12);
    EXPECT_LE(std::abs(fe), 1.0);
    EffectiveInputs e2 = TwoPlayerTransform(c(f0), c(s0), c(a), 2);
    se = e2.s_eff.values()[0];
    fe = e2.f_eff.values()[0];
    EXPECT_NEAR(-cw, (s2 + se * fe) / (s2 + se), 1e-12);
  }
}

TEST(TransformTest, Examples) {
  auto p = IntervalPartition::Uniform(1);
  auto c = [&](double v) { return StepFunction::Constant(p, v); };
  EffectiveInputs same = TwoPlayerTransform(c(0.3), c(2), c(0), 1);
  EXPECT_EQ(same.f_eff.values()[0], 0.3);
  EXPECT_EQ(same.s_eff.values()[0], 2.0);
  EffectiveInputs e = TwoPlayerTransform(c(0), c(1), c(1), 1);
  EXPECT_EQ(e.f_eff.values()[0], -0.5);
  EXPECT_EQ(e.s_eff.values()[0], 2.0);
}

TEST(UtilityTest, ConsensusClosedForm) {
  auto p = IntervalPartition::Uniform(3);
  GameSpec spec = MakeGame(BlockKernel::Constant(p), 0.0, 1.0, 1.0, 1.0, 0.7);
  spec.f0 = OpinionFunction(p, Eigen::Vector3d(0.5, 0.3, 0.8));
  auto zero = StepFunction::Constant(p, 0.0);
  EXPECT_NEAR(LobbyUtility(spec, zero, zero, 1), 0.7 * 8.0 / 15, 1e-11);
}

TEST(UtilityTest, ZeroSumAndInfluenceAgree) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    GameSpec spec = RandomGame(rng, 5, trial % 2 == 0);
    spec.psi2 = spec.psi1;
    const auto& part = CarrierPartition(spec.kernel);
    StepFunction s1(part, spec.b1 * testing::RandomSimplex(5, rng).cwiseQuotient(
                                        WeightVector(part)));
    StepFunction s2(part, spec.b2 * testing::RandomSimplex(5, rng).cwiseQuotient(
                                        WeightVector(part)));
    double u1 = LobbyUtility(spec, s1, s2, 1);
    double u2 = LobbyUtility(spec, s1, s2, 2);
    EXPECT_NEAR(u1, -u2, 1e-10);
    StepFunction g = LobbyInfluence(spec, 1);
    double dual = WeightVector(part).dot(
        g.values().cwiseProduct(Compete(spec, s1, s2).values()));
    EXPECT_NEAR(u1, dual, 1e-12);
  }
}

TEST(UtilityTest, RejectsInfeasible) {
  auto p = IntervalPartition::Uniform(2);
  GameSpec spec = MakeGame(BlockKernel::Constant(p), 0.0, 1.0, 1.0, 1.0, 0.5);
  auto ok = StepFunction::Constant(p, 1.0);
  EXPECT_THROW(LobbyUtility(spec, StepFunction::Constant(p, 1.5), ok, 1), ContractError);
  EXPECT_THROW(LobbyUtility(spec, StepFunction(p, Eigen::Vector2d(-1, 3)), ok, 1),
               ContractError);
}

TEST(UtilityTest, MonotoneInOwnEffort) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    GameSpec spec = RandomGame(rng, 4, false);
    spec.b1 = 10.0;
    const auto& part = CarrierPartition(spec.kernel);
    StepFunction s1 = StepFunction::Constant(part, 0.5);
    StepFunction s2 = StepFunction::Constant(part, spec.b2);
    double base = LobbyUtility(spec, s1, s2, 1);
    for (int cell = 0; cell < 4; ++cell) {
      Eigen::VectorXd bumped = s1.values();
      bumped[cell] += 0.3;
      EXPECT_GE(LobbyUtility(spec, StepFunction(part, bumped), s2, 1), base - 1e-14);
    }
  }
}

TEST(ValidateGameTest, RejectsBadSpecs) {
  auto p = IntervalPartition::Uniform(2);
  EXPECT_THROW(MakeGame(BlockKernel::Constant(p), 0.0, 0.0, 1, 1, 0.5), ContractError);
  EXPECT_THROW(MakeGame(BlockKernel::Constant(p), 0.0, 1.0, 1, 1, 1.0),
               std::invalid_argument);
  EXPECT_THROW(MakeGame(BlockKernel::Constant(p), 0.0, 1.0, -1, 1, 0.5),
               std::invalid_argument);
}

TEST(BestResponseTest, HomogeneousIsConstant) {
  auto p = IntervalPartition::Uniform(7);
  BestResponse br = UnitypeBestResponse(StepFunction::Constant(p, 1.0),
                                        StepFunction::Constant(p, 0.2),
                                        StepFunction::Constant(p, 1.5), 0.8);
  EXPECT_FALSE(br.no_gain);
  EXPECT_LT((br.strategy.values().array() - 0.8).abs().maxCoeff(), 1e-12);
}

TEST(BestResponseTest, TwoBlockMatchesOracles) {
  auto p2 = IntervalPartition::Uniform(2);
  BestResponse br = UnitypeBestResponse(StepFunction(p2, Eigen::Vector2d(1.6, 0.4)),
                                        StepFunction::Constant(p2, 0.0),
                                        StepFunction::Constant(p2, 1.0), 1.0);
  EXPECT_NEAR(br.strategy.values()[0], 5.0 / 3, 1e-12);
  EXPECT_NEAR(br.strategy.values()[1], 1.0 / 3, 1e-12);
  EXPECT_NEAR(br.value, testing::frozen::kTwoBlockValue, 1e-6);
  // Same problem on a 64-cell grid against the fixed-step oracle.
  auto p64 = IntervalPartition::Uniform(64);
  Eigen::VectorXd h(64);
  for (int i = 0; i < 64; ++i) h[i] = i < 32 ? 1.6 : 0.4;
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(64), one = Eigen::VectorXd::Ones(64);
  BestResponse br64 = UnitypeBestResponse(StepFunction(p64, h), StepFunction(p64, zero),
                                          StepFunction(p64, one), 1.0);
  Eigen::VectorXd pw = WeightVector(p64);
  Eigen::VectorXd ref = testing::ReferenceAllocation(pw, h, zero, one, 1.0);
  EXPECT_NEAR(br64.value, testing::AllocationValue(pw, h, zero, one, ref), 1e-6);
  EXPECT_NEAR(br64.strategy.values()[0], testing::frozen::kTwoBlockFirst, 1e-5);
  EXPECT_NEAR(br64.strategy.values()[63], testing::frozen::kTwoBlockLast, 1e-5);
}

TEST(BestResponseTest, KktOnRandomInstances) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 30;
    auto part = testing::RandomPartition(n, rng);
    Eigen::VectorXd p = WeightVector(part);
    Eigen::VectorXd h = testing::RandomSimplex(n, rng).cwiseQuotient(p);
    Eigen::VectorXd f = testing::RandomOpinions(n, rng);
    Eigen::VectorXd sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = 0.05 + 3 * u(rng);
    double b = 0.01 + 2 * u(rng);
    BestResponse br = UnitypeBestResponse(StepFunction(part, h), StepFunction(part, f),
                                          StepFunction(part, sigma), b);
    const Eigen::VectorXd& s = br.strategy.values();
    EXPECT_GE(s.minCoeff(), 0.0);
    EXPECT_NEAR(p.dot(s), b, 1e-12);
    testing::KktCheck kkt = testing::CheckKkt(h, f, sigma, s);
    EXPECT_LT(kkt.support_spread, 1e-8);
    EXPECT_LE(kkt.off_support_excess, 1e-8);
    EXPECT_NEAR(kkt.level, br.nu, 1e-8 * br.nu);
    Eigen::VectorXd ref = testing::ReferenceAllocation(p, h, f, sigma, b, 5000);
    EXPECT_GE(br.value, testing::AllocationValue(p, h, f, sigma, ref) - 1e-12);
  }
}

TEST(BestResponseTest, NoGainAndZeroBudget) {
  auto p = IntervalPartition::Uniform(3);
  BestResponse none = UnitypeBestResponse(StepFunction::Constant(p, 1.0),
                                          StepFunction::Constant(p, 1.0),
                                          StepFunction::Constant(p, 1.0), 2.0);
  EXPECT_TRUE(none.no_gain);
  EXPECT_EQ(none.strategy.values().cwiseAbs().maxCoeff(), 0.0);
  BestResponse broke = UnitypeBestResponse(StepFunction::Constant(p, 1.0),
                                           StepFunction::Constant(p, 0.0),
                                           StepFunction::Constant(p, 1.0), 0.0);
  EXPECT_FALSE(broke.no_gain);
  EXPECT_EQ(broke.strategy.values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(ProjectionTest, FeasibleAndOptimal) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 10;
    Eigen::VectorXd p = testing::RandomSimplex(n, rng);
    Eigen::VectorXd y = 3 * testing::RandomOpinions(n, rng);
    double b = 0.5;
    Eigen::VectorXd x = ProjectBudget(y, p, b);
    EXPECT_GE(x.minCoeff(), 0.0);
    EXPECT_LE(p.dot(x), b + 1e-12);
    // Variational inequality against random feasible points.
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd z = b * testing::RandomSimplex(n, rng).cwiseQuotient(p);
      EXPECT_LE(p.dot((y - x).cwiseProduct(z - x)), 1e-10);
    }
  }
}

TEST(GradientAscentTest, MatchesWaterFillingOnWeightedContest) {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    GameSpec spec = RandomGame(rng, 8, trial % 2 == 0);
    const auto& part = CarrierPartition(spec.kernel);
    StepFunction s2 = StepFunction::Constant(part, spec.b2);
    StepFunction g = LobbyInfluence(spec, 1);
    PlayerObjective objective(spec, g, s2, 1);
    GradientAscentResult ga = ProjectedGradientAscent(objective, spec.b1, 3, trial);
    EffectiveInputs eff = TwoPlayerTransform(spec.f0, spec.s0, s2, 1);
    BestResponse br = UnitypeBestResponse(g, eff.f_eff, eff.s_eff, spec.b1);
    EXPECT_LE(ga.value, br.value + 1e-12);
    EXPECT_NEAR(ga.value, br.value, 1e-8);
    EXPECT_NEAR(objective.Value(br.strategy.values()), br.value, 1e-12);
  }
}

TEST(NashTest, SymmetricGameIsConstantBudget) {
  auto p = IntervalPartition::Uniform(8);
  GameSpec spec = MakeGame(BlockKernel::Constant(p), 0.0, 0.7, 1.3, 1.3, 0.9);
  EquilibriumReport r = SolveNash(spec, {});
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.s1.values().array() - 1.3).abs().maxCoeff(), 1e-9);
  EXPECT_LT((r.s2.values().array() - 1.3).abs().maxCoeff(), 1e-9);
  EXPECT_LT(r.r1.epsilon, 1e-6);
  EXPECT_LT(r.r2.epsilon, 1e-6);
  EXPECT_TRUE(r.r1.exact);
}

TEST(NashTest, OnePlayerGame) {
  auto part = IntervalPartition::Uniform(4);
  StepFunction h(part, Eigen::Vector4d(0.4, 0.8, 1.2, 1.6));
  GameSpec spec = MakeGame(UnitypeKernel(h), 0.1, 1.0, 1.0, 0.0, 0.9);
  EquilibriumReport r = SolveNash(spec, {});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.s2.values().cwiseAbs().maxCoeff(), 0.0);
  BestResponse br = UnitypeBestResponse(h, spec.f0, spec.s0, 1.0);
  EXPECT_LT((r.s1.values() - br.strategy.values()).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT(r.r1.epsilon, 1e-10);
  EXPECT_LT(r.r2.epsilon, 1e-10);
}

TEST(NashTest, AsymmetricBudgetsZeroSum) {
  auto part = IntervalPartition::Uniform(6);
  Eigen::VectorXd h(6);
  h << 0.2, 0.5, 0.8, 1.1, 1.5, 1.9;
  GameSpec spec = MakeGame(UnitypeKernel(StepFunction(part, h)), 0.0, 0.5, 2.0, 1.0, 0.9);
  spec.s0 = StepFunction(part, Eigen::VectorXd::LinSpaced(6, 0.3, 1.2));
  EquilibriumReport r = SolveNash(spec, {});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.r1.epsilon, 1e-6);
  EXPECT_LT(r.r2.epsilon, 1e-6);
  EXPECT_NEAR(r.u1 + r.u2, 0.0, 1e-10);
  EXPECT_TRUE(IsFeasible(r.s1, spec.b1));
  EXPECT_TRUE(IsFeasible(r.s2, spec.b2));
}

TEST(NashTest, ScaleInvariance) {
  auto part = IntervalPartition::Uniform(5);
  Eigen::VectorXd h(5);
  h << 0.5, 0.7, 1.0, 1.3, 1.5;
  GameSpec spec = MakeGame(UnitypeKernel(StepFunction(part, h)), 0.2, 0.8, 1.5, 1.0, 0.8);
  EquilibriumReport r = SolveNash(spec, {});
  ASSERT_TRUE(r.converged);
  GameSpec scaled = spec;
  scaled.b1 *= 3;
  scaled.b2 *= 3;
  scaled.s0 = StepFunction(part, 3 * spec.s0.values());
  StepFunction t1(part, 3 * r.s1.values()), t2(part, 3 * r.s2.values());
  EXPECT_LT(EpsilonResidual(scaled, t1, t2, 1).epsilon, 1e-9);
  EXPECT_LT(EpsilonResidual(scaled, t1, t2, 2).epsilon, 1e-9);
}

TEST(ResidualTest, PerturbationContinuity) {
  auto part = IntervalPartition::Uniform(6);
  Eigen::VectorXd h(6);
  h << 0.2, 0.5, 0.8, 1.1, 1.5, 1.9;
  GameSpec spec = MakeGame(UnitypeKernel(StepFunction(part, h)), 0.0, 0.5, 1.0, 1.0, 0.9);
  EquilibriumReport r = SolveNash(spec, {});
  ASSERT_TRUE(r.converged);
  double prev = INFINITY;
  for (double scale : {0.1, 0.03, 0.01, 0.001}) {
    Eigen::VectorXd s = r.s1.values();
    s[0] += scale * spec.b1 / WeightVector(part)[0];
    s *= spec.b1 / WeightVector(part).dot(s);
    double eps = EpsilonResidual(spec, StepFunction(part, s), r.s2, 1).epsilon;
    EXPECT_GT(eps, 0.0);
    EXPECT_LT(eps, prev);
    prev = eps;
  }
}

TEST(ResidualTest, AdditiveContestIsLowerBound) {
  std::mt19937_64 rng(46);
  GameSpec spec = RandomGame(rng, 6, false, ContestKind::kAdditiveClipped);
  const auto& part = CarrierPartition(spec.kernel);
  StepFunction s1 = StepFunction::Constant(part, spec.b1);
  StepFunction s2 = StepFunction::Constant(part, spec.b2);
  ResidualReport r = EpsilonResidual(spec, s1, s2, 1, 7, 4);
  EXPECT_FALSE(r.exact);
  EXPECT_GE(r.epsilon, 0.0);
  EXPECT_NEAR(r.current_value, LobbyUtility(spec, s1, s2, 1), 1e-12);
  EXPECT_EQ(r.epsilon, EpsilonResidual(spec, s1, s2, 1, 7, 4).epsilon);
}

TEST(DiscretizeGameTest, OwnPartitionIsIdentity) {
  auto part = IntervalPartition::Uniform(4);
  std::mt19937_64 rng(47);
  GameSpec spec = MakeGame(testing::RandomBlockKernel(part, rng), 0.1, 1.0, 1, 1, 0.8);
  GameSpec d = DiscretizeGame(spec, part);
  EXPECT_LT((std::get<BlockKernel>(d.kernel).values() -
             std::get<BlockKernel>(spec.kernel).values())
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(DiscretizeGameTest, Figure3aToUniform2) {
  auto fine = IntervalPartition::Uniform(8);
  GameSpec spec = MakeGame(DiscretizeKernel(Figure3aKernel(), fine), 0.0, 1.0, 1, 1, 0.8);
  GameSpec d = DiscretizeGame(spec, IntervalPartition::Uniform(2));
  const BlockKernel& k = std::get<BlockKernel>(d.kernel);
  EXPECT_EQ(k.size(), 8);
  EXPECT_NEAR(k.values()(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(k.values()(0, 7), 1.5, 1e-12);
  EXPECT_NEAR(k.values()(7, 7), 0.5, 1e-12);
}

TEST(DiscretizeGameTest, UtilityGapWithinBound) {
  std::mt19937_64 rng(48);
  AnalyticKernel w = BilinearKernel(0.6);
  auto fine = IntervalPartition::Uniform(16);
  for (int trial = 0; trial < 10; ++trial) {
    GameSpec spec = MakeGame(DiscretizeKernel(w, fine), 0.0, 1.0, 1, 1, 0.85);
    spec.f0 = OpinionFunction(fine, 0.9 * testing::RandomOpinions(16, rng));
    StepFunction s1(fine, testing::RandomSimplex(16, rng) * 16);
    StepFunction s2(fine, testing::RandomSimplex(16, rng) * 16);
    for (int n : {2, 4, 8}) {
      GameSpec d = DiscretizeGame(spec, IntervalPartition::Uniform(n));
      double cut = CutNormExact(Difference(std::get<BlockKernel>(spec.kernel),
                                           std::get<BlockKernel>(d.kernel)))
                       .value;
      double gap = std::abs(LobbyUtility(spec, s1, s2, 1) - LobbyUtility(d, s1, s2, 1));
      EXPECT_LE(gap, (1 - spec.delta) * BoundDiscounted(1.0, spec.delta, cut) + 1e-10);
    }
  }
}

TEST(ReduceToUnitypeTest, IdentityAndNotApplicable) {
  auto part = IntervalPartition::Uniform(3);
  StepFunction h(part, Eigen::Vector3d(0.5, 1.0, 1.5));
  GameSpec uni = MakeGame(UnitypeKernel(h), 0.0, 1.0, 1, 1, 0.9);
  UnitypeReduction r = ReduceToUnitype(uni);
  EXPECT_EQ(r.gap, 0.0);
  Eigen::Matrix3d m;
  m << 0, 1.5, 1.5, 3, 0, 0, 0, 3, 0;
  GameSpec zero = MakeGame(BlockKernel(part, m), 0.0, 1.0, 1, 1, 0.9);
  EXPECT_THROW(ReduceToUnitype(zero), NotApplicableError);
}

TEST(ReduceToUnitypeTest, ReducedEquilibriumIsNearlyOptimal) {
  Eigen::Matrix3d m;
  m << 0, 1.5, 1.5, 3, 0, 0, 0, 3, 0;
  auto part = IntervalPartition::Uniform(3);
  double prev_gap = INFINITY;
  for (double lambda : {0.6, 0.3, 0.1}) {
    GameSpec spec = MakeGame(BlendWithUniform(BlockKernel(part, m), lambda), 0.1, 0.8,
                             1.0, 0.6, 0.9);
    UnitypeReduction red = ReduceToUnitype(spec);
    EXPECT_NEAR(red.gamma, 1 - lambda, 1e-12);
    EXPECT_LT(red.gap, prev_gap);
    prev_gap = red.gap;
    EquilibriumReport eq = SolveNash(red.spec, {});
    ASSERT_TRUE(eq.converged);
    EXPECT_LE(EpsilonResidual(spec, eq.s1, eq.s2, 1).epsilon, 2 * red.gap + 1e-9);
    EXPECT_LE(EpsilonResidual(spec, eq.s1, eq.s2, 2).epsilon, 2 * red.gap + 1e-9);
  }
}

}  // namespace
}  // namespace dikernel
