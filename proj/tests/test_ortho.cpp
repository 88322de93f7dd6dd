#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "shs/ortho.hpp"

namespace {

using shs::cplx;
using shs::CMatrix;
using shs::CVector;
using shs::Status;

const CMatrix kA110 = CMatrix::diagonal({1.0, 1.0, 0.0});
const CMatrix kA1101 = CMatrix::diagonal({1.0, 1.0, 0.0, 1.0});

shs::WSet raw_wset(const CMatrix& c) {
  shs::WSet w;
  w.C = c;
  return w;
}

/// T = A^{+1/2} R U diag(sig) V* R* A^{1/2}: prescribed singular values of the
/// compressed transform, so the attaining subspace has known dimension.
CMatrix with_top_cluster(const shs::AContext& ctx, std::size_t k, std::mt19937_64& rng) {
  const std::size_t r = ctx.rank;
  const CMatrix u = oracle::unitary(r, rng), v = oracle::unitary(r, rng);
  std::vector<cplx> sig(r);
  for (std::size_t i = 0; i < r; ++i) sig[i] = i < k ? 1.5 : 0.2 + 0.1 * static_cast<double>(i);
  const CMatrix m = ctx.range_basis * u * CMatrix::diagonal(sig) * v.adjoint() * ctx.range_basis.adjoint();
  return ctx.A_half_pinv * m * ctx.A_half;
}

TEST(WSetTest, TrivialPoint) {
  const auto ctx = shs::make_context(CMatrix::identity(2));
  const auto w = shs::wset(ctx, CMatrix::diagonal({2.0, 1.0}), CMatrix::identity(2));
  ASSERT_EQ(w.C.rows(), 1u);
  EXPECT_NEAR(std::abs(w.C(0, 0) - 2.0), 0.0, 1e-12);
  EXPECT_NEAR(shs::nr_distance_to_origin(w), 2.0, 1e-12);
}

TEST(WSetTest, TruncatedWeightedExampleContainsHalfBetaAlpha) {
  const auto ctx = shs::make_context(kA1101);
  const CMatrix t = CMatrix::diagonal({2.0, 0.5, 1.0, 1.5});
  const CMatrix s = CMatrix::diagonal({1.0, 2.0, 1.0, 1.0});
  const auto w = shs::wset(ctx, t, s);
  EXPECT_GE(shs::support_gap(w, 2.0), -1e-8);
  EXPECT_LT(shs::support_gap(w, 2.1), 0.0);
  EXPECT_NEAR(shs::critical_epsilon(ctx, t, s), 0.5, 1e-9);
}

TEST(WSetTest, SampledAttainingValuesLieInsideSupportHull) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const auto w = oracle::weight(5, 4, rng);
    const auto ctx = shs::make_context(w.A);
    const CMatrix t = with_top_cluster(ctx, 2 + trial % 2, rng);
    const CMatrix s = oracle::a_bounded(w, rng);
    const auto ws = shs::wset(ctx, t, s);
    ASSERT_EQ(ws.C.rows(), static_cast<std::size_t>(2 + trial % 2));
    const CMatrix basis = shs::attain_basis(ctx, t);
    const double d = shs::nr_distance_to_origin(ws);
    for (int k = 0; k < 1000; ++k) {
      CVector y = basis * oracle::random_vector(basis.cols(), rng);
      const double ny = shs::norm2(y);
      for (auto& z : y) z /= ny;
      const CVector x = ctx.A_half_pinv * y;
      const cplx val = shs::inner_a(ctx, s * x, t * x);
      double gap = 1e300;
      for (const auto& h : ws.support) gap = std::min(gap, h.value - (std::polar(1.0, -h.theta) * val).real());
      EXPECT_GE(gap, -1e-9);
      EXPECT_GE(std::abs(val), d - 1e-9);
    }
  }
}

TEST(DistanceTest, KnownGeometries) {
  EXPECT_NEAR(shs::nr_distance_to_origin(raw_wset(CMatrix{{2.0}})), 2.0, 1e-12);
  EXPECT_NEAR(shs::nr_distance_to_origin(raw_wset(CMatrix{{0.0, 1.0}, {0.0, 0.0}})), 0.0, 1e-12);
  EXPECT_NEAR(shs::nr_distance_to_origin(raw_wset(CMatrix{{3.0, 1.0}, {0.0, 3.0}})), 2.5, 1e-10);
  // Disc of radius 1/2 about 1 + i: distance sqrt(2) - 1/2.
  EXPECT_NEAR(shs::nr_distance_to_origin(raw_wset(CMatrix{{cplx(1, 1), 1.0}, {0.0, cplx(1, 1)}})),
              std::sqrt(2.0) - 0.5, 1e-10);
}

TEST(DecideBjTest, TruncatedFirstExampleHolds) {
  const auto ctx = shs::make_context(kA110);
  for (double eps : {0.1, 0.3, 0.9}) {
    const CMatrix t = CMatrix::diagonal({2.0, 0.5, 1.0});
    const CMatrix s = CMatrix::diagonal({eps, 1.0, 1.0});
    EXPECT_EQ(shs::decide_bj(ctx, t, s, eps).status, Status::Holds) << eps;
    EXPECT_EQ(shs::decide_bj_direct(ctx, t, s, eps).status, Status::Holds) << eps;
    EXPECT_EQ(shs::decide_bj_alpha(ctx, t, s, eps).status, Status::Holds) << eps;
  }
}

TEST(DecideBjTest, DisjointSupportsAreOrthogonal) {
  const auto ctx = shs::make_context(CMatrix::identity(2));
  const CMatrix t = CMatrix::diagonal({1.0, 0.0}), s = CMatrix::diagonal({0.0, 1.0});
  EXPECT_EQ(shs::decide_bj(ctx, t, s, 0.0).status, Status::Holds);
  EXPECT_EQ(shs::decide_bj_direct(ctx, t, s, 0.0).status, Status::Holds);
  EXPECT_EQ(shs::decide_bj_alpha(ctx, t, s, 0.0).status, Status::Holds);
}

TEST(DecideBjTest, ParallelOperatorsFail) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = oracle::weight(3, 2 + trial % 2, rng);
    const auto ctx = shs::make_context(w.A);
    const CMatrix s = oracle::a_bounded(w, rng);
    for (double eps : {0.0, 0.5, 0.9}) {
      EXPECT_EQ(shs::decide_bj(ctx, 2.0 * s, s, eps).status, Status::Fails);
      EXPECT_EQ(shs::decide_bj_alpha(ctx, 2.0 * s, s, eps).status, Status::Fails);
    }
    const auto direct = shs::decide_bj_direct(ctx, 2.0 * s, s, 0.5);
    ASSERT_EQ(direct.status, Status::Fails);
    ASSERT_TRUE(direct.witness.has_value());
    // The violating direction is lambda < 0 and the definition fails there.
    const cplx lam = *direct.witness;
    EXPECT_NEAR(std::abs(std::arg(lam)), std::numbers::pi, 1e-3);
    const double nt = shs::op_seminorm(ctx, 2.0 * s), ns = shs::op_seminorm(ctx, s);
    const double lhs = std::pow(shs::op_seminorm(ctx, 2.0 * s + lam * s), 2);
    EXPECT_LT(lhs, nt * nt - 2.0 * 0.5 * nt * std::abs(lam) * ns);
  }
}

TEST(DecideBjTest, CriticalEpsilonOfWeightedExample) {
  const auto ctx = shs::make_context(kA1101);
  const CMatrix t = CMatrix::diagonal({2.0, 0.5, 1.0, 1.5});
  const CMatrix s = CMatrix::diagonal({1.0, 2.0, 1.0, 1.0});
  EXPECT_EQ(shs::decide_bj(ctx, t, s, 0.6).status, Status::Holds);
  EXPECT_EQ(shs::decide_bj_direct(ctx, t, s, 0.6).status, Status::Holds);
  EXPECT_EQ(shs::decide_bj(ctx, t, s, 0.3).status, Status::Fails);
  EXPECT_EQ(shs::decide_bj_direct(ctx, t, s, 0.3).status, Status::Fails);
  EXPECT_EQ(shs::decide_bj_alpha(ctx, t, s, 0.3).status, Status::Fails);
  const auto v = shs::decide_bj(ctx, t, s, 0.3);
  EXPECT_NEAR(v.margin, 0.3 * 4.0 - 2.0, 1e-9);
}

TEST(DecideBjTest, WitnessVectorRealizesTheNearestPoint) {
  std::mt19937_64 rng(49);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = oracle::weight(4, 2 + trial % 3, rng);
    const auto ctx = shs::make_context(w.A);
    const CMatrix t = oracle::a_bounded(w, rng), s = oracle::a_bounded(w, rng);
    const auto v = shs::decide_bj(ctx, t, s, 0.2);
    ASSERT_TRUE(v.witness.has_value());
    const CVector& x = v.witness_vector;
    EXPECT_NEAR(shs::seminorm_vec(ctx, x), 1.0, 1e-9);
    EXPECT_NEAR(shs::seminorm_vec(ctx, t * x), shs::op_seminorm(ctx, t), 1e-8);
    EXPECT_NEAR(std::abs(shs::inner_a(ctx, s * x, t * x) - *v.witness), 0.0, 1e-9);
    const double d = shs::nr_distance_to_origin(shs::wset(ctx, t, s));
    if (d > 0.0) {
      EXPECT_NEAR(std::abs(*v.witness), d, 1e-8);
    }
  }
}

TEST(DecideBjTest, IdentityAgainstRankOneProjectionHoldsAtEveryEpsilon) {
  const auto ctx = shs::make_context(CMatrix::identity(2));
  const CMatrix t = CMatrix::diagonal({1.0, 0.0});
  for (double eps : {0.1, 0.5, 0.9}) {
    EXPECT_EQ(shs::decide_bj(ctx, CMatrix::identity(2), t, eps).status, Status::Holds);
    const CVector x0{std::sqrt(eps / 2.0), std::sqrt(1.0 - eps / 2.0)};
    EXPECT_NEAR(std::abs(shs::vdot(x0, t * x0) - eps / 2.0), 0.0, 1e-12);
  }
}

TEST(DecideBjTest, ZeroSeminormShortCircuits) {
  const auto ctx = shs::make_context(kA110);
  const CMatrix kernel_only = CMatrix::diagonal({0.0, 0.0, 3.0});
  const CMatrix t = CMatrix::diagonal({2.0, 0.5, 1.0});
  EXPECT_EQ(shs::decide_bj(ctx, kernel_only, t, 0.2).status, Status::Holds);
  EXPECT_EQ(shs::decide_bj(ctx, t, kernel_only, 0.2).status, Status::Holds);
  EXPECT_EQ(shs::decide_bj_direct(ctx, t, kernel_only, 0.2).status, Status::Holds);
  EXPECT_EQ(shs::decide_wbj_alpha(ctx, t, kernel_only, 0.2).status, Status::Holds);
}

TEST(DecideBjTest, EpsilonDomainEnforced) {
  const auto ctx = shs::make_context(CMatrix::identity(2));
  for (double eps : {-0.1, 1.0, 1.5, std::nan("")}) {
    try {
      shs::decide_bj(ctx, CMatrix::identity(2), CMatrix::identity(2), eps);
      ADD_FAILURE() << eps;
    } catch (const shs::Error& e) {
      EXPECT_EQ(e.code(), shs::Errc::BadEpsilon);
    }
  }
}

TEST(DecideBjTest, MethodsAgreeOnRandomInstances) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ue(0.0, 0.95);
  int holds = 0, fails = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto w = oracle::weight(n, 1 + trial % n, rng);
    const auto ctx = shs::make_context(w.A);
    const CMatrix t = trial % 3 == 0 ? with_top_cluster(ctx, std::min<std::size_t>(2, ctx.rank), rng)
                                     : oracle::a_bounded(w, rng);
    const CMatrix s = oracle::a_bounded(w, rng);
    const double eps = ue(rng);
    const auto a = shs::decide_bj(ctx, t, s, eps);
    const auto b = shs::decide_bj_direct(ctx, t, s, eps);
    const auto c = shs::decide_bj_alpha(ctx, t, s, eps);
    if (a.status == Status::Inconclusive) continue;
    EXPECT_EQ(a.status, b.status) << "trial " << trial << " margin " << a.margin << " / " << b.margin;
    EXPECT_EQ(a.status, c.status) << "trial " << trial << " margin " << a.margin << " / " << c.margin;
    // With 0 inside W the distance clamps at 0 while the angle margin keeps going.
    if (a.status == Status::Fails) {
      EXPECT_NEAR(a.margin, c.margin, 1e-8);
    }
    (a.status == Status::Holds ? holds : fails)++;
  }
  EXPECT_GT(holds, 5);
  EXPECT_GT(fails, 5);
}

TEST(DecideWbjTest, SecondExampleHolds) {
  const auto ctx = shs::make_context(kA110);
  for (double eps : {0.1, 0.3, 0.9}) {
    const CMatrix t = CMatrix::diagonal({2.0, 0.5, 1.0});
    const CMatrix s = CMatrix::diagonal({eps, 1.0, 1.0});
    EXPECT_EQ(shs::decide_wbj_direct(ctx, t, s, eps).status, Status::Holds) << eps;
    EXPECT_EQ(shs::decide_wbj_alpha(ctx, t, s, eps).status, Status::Holds) << eps;
  }
}

TEST(DecideWbjTest, ClosingExampleShiftedPairFailsAtLargeLambda) {
  const auto ctx = shs::make_context(CMatrix::identity(2));
  const CMatrix t{{-1.0, 1.0}, {0.0, -2.0}};
  const CMatrix s{{1e-3, 0.0}, {0.0, 0.0}};
  const CMatrix tp = t + CMatrix::identity(2);
  const double eps = 0.01;

  const double w_big = oracle::nr_2x2(tp + 1000.0 * s);
  const double w_tp = oracle::nr_2x2(tp);
  EXPECT_NEAR(w_big, std::sqrt(5.0) / 2.0, 1e-9);
  EXPECT_NEAR(w_tp, (1.0 + std::sqrt(2.0)) / 2.0, 1e-9);
  EXPECT_LT(w_big * w_big, w_tp * w_tp - 2.0 * eps * w_tp * oracle::nr_2x2(1000.0 * s));

  const auto v = shs::decide_wbj_direct(ctx, tp, s, eps);
  EXPECT_EQ(v.status, Status::Fails);
  EXPECT_EQ(shs::decide_wbj_alpha(ctx, tp, s, eps).status, Status::Fails);
}

TEST(DecideWbjTest, ClosingExampleUnshiftedPairAlsoViolatesTheDefinition) {
  // w(T) = (3 + sqrt 2)/2 is attained away from e1, and the definition fails for
  // every sampled lambda > 0 (checked with the closed-form ellipse radius).
  const CMatrix t{{-1.0, 1.0}, {0.0, -2.0}};
  const CMatrix s{{1e-3, 0.0}, {0.0, 0.0}};
  const double eps = 0.01;
  const double wt = oracle::nr_2x2(t);
  EXPECT_NEAR(wt, (3.0 + std::sqrt(2.0)) / 2.0, 1e-9);
  for (double lam : {0.1, 1.0, 10.0, 1000.0}) {
    const double lhs = std::pow(oracle::nr_2x2(t + lam * s), 2);
    const double rhs = wt * wt - 2.0 * eps * wt * lam * 1e-3;
    EXPECT_LT(lhs, rhs) << lam;
  }
  const auto ctx = shs::make_context(CMatrix::identity(2));
  EXPECT_EQ(shs::decide_wbj_direct(ctx, t, s, eps).status, Status::Fails);
  EXPECT_EQ(shs::decide_wbj_alpha(ctx, t, s, eps).status, Status::Fails);
}

TEST(DecideWbjTest, SelfPairFailsAtZeroEpsilon) {
  std::mt19937_64 rng(44);
  const auto ctx = shs::make_context(CMatrix::identity(3));
  const CMatrix t = oracle::gaussian(3, 3, rng);
  EXPECT_EQ(shs::decide_wbj_direct(ctx, t, t, 0.0).status, Status::Fails);
  EXPECT_EQ(shs::decide_wbj_alpha(ctx, t, t, 0.0).status, Status::Fails);
  EXPECT_EQ(shs::decide_wbj_direct(ctx, 2.0 * t, t, 0.5).status, Status::Fails);
}

TEST(DecideWbjTest, AlphaAgreesWithDirectOnSmallRandomInstances) {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> ue(0.0, 0.95);
  int compared = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const auto w = oracle::weight(n, n, rng);
    const auto ctx = shs::make_context(w.A);
    const CMatrix t = oracle::a_bounded(w, rng), s = oracle::a_bounded(w, rng);
    const double eps = ue(rng);
    const auto a = shs::decide_wbj_alpha(ctx, t, s, eps);
    const auto d = shs::decide_wbj_direct(ctx, t, s, eps);
    if (a.status == Status::Inconclusive || std::abs(a.margin) < 1e-4) continue;
    ++compared;
    EXPECT_EQ(a.status, d.status) << "trial " << trial << " margins " << a.margin << " / " << d.margin;
  }
  EXPECT_GT(compared, 20);
}

TEST(ShiftTest, PositiveInstancesAgree) {
  const auto ctx = shs::make_context(kA110);
  const auto [a, b] = shs::shift_equivalence_check(ctx, CMatrix::diagonal({2.0, 0.5, 1.0}),
                                                   CMatrix::diagonal({0.3, 1.0, 1.0}), 0.3);
  EXPECT_EQ(a.status, b.status);

  const auto [z, zi] =
      shs::shift_equivalence_check(ctx, CMatrix(3, 3), CMatrix::diagonal({0.3, 1.0, 1.0}), 0.3);
  EXPECT_EQ(z.status, Status::Holds);
  EXPECT_EQ(zi.status, Status::Holds);
}

TEST(ShiftTest, ZeroOperatorIsDegenerate) {
  // w_A(0) = 0 makes (0, S) orthogonal vacuously, while (I, S) is decided on its own.
  const auto ctx = shs::make_context(CMatrix::identity(2));
  const auto [z, zi] = shs::shift_equivalence_check(ctx, CMatrix(2, 2), CMatrix::identity(2), 0.3);
  EXPECT_EQ(z.status, Status::Holds);
  EXPECT_EQ(zi.status, Status::Fails);
}

TEST(ShiftTest, NonPositiveRejected) {
  const auto ctx = shs::make_context(CMatrix::identity(2));
  try {
    shs::shift_equivalence_check(ctx, CMatrix{{-1.0, 1.0}, {0.0, -2.0}}, CMatrix::diagonal({1e-3, 0.0}),
                                 0.01);
    ADD_FAILURE();
  } catch (const shs::Error& e) {
    EXPECT_EQ(e.code(), shs::Errc::NotAPositive);
  }
}

TEST(OrthoProperties, HomogeneityAndProjectionInvariance) {
  std::mt19937_64 rng(46);
  std::uniform_real_distribution<double> ue(0.0, 0.95);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const auto w = oracle::weight(n, 1 + trial % n, rng);
    const auto ctx = shs::make_context(w.A);
    const CMatrix t = oracle::a_bounded(w, rng), s = oracle::a_bounded(w, rng);
    const double eps = ue(rng);
    const auto base = shs::decide_bj(ctx, t, s, eps);
    if (base.status == Status::Inconclusive || std::abs(base.margin) < 1e-6) continue;
    const cplx a(0.0, -3.0), b(0.25, 0.1);
    EXPECT_EQ(shs::decide_bj(ctx, a * t, b * s, eps).status, base.status);
    EXPECT_EQ(shs::decide_bj(ctx, t, ctx.P_A * s, eps).status, base.status);
    EXPECT_EQ(shs::decide_bj(ctx, ctx.P_A * t, ctx.P_A * s, eps).status, base.status);
    EXPECT_EQ(shs::decide_bj(ctx, shs::sharp_adjoint(ctx, t), shs::sharp_adjoint(ctx, s), eps).status,
              base.status);
  }
}

TEST(OrthoProperties, SufficientConditions) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const auto w = oracle::weight(n, 1 + trial % n, rng);
    const auto ctx = shs::make_context(w.A);
    const CMatrix t = oracle::a_bounded(w, rng), s = oracle::a_bounded(w, rng);
    const double nt = shs::op_seminorm(ctx, t), ns = shs::op_seminorm(ctx, s);

    // Any attaining x0 certifies orthogonality at eps = |<Tx0, Sx0>_A| / (||T|| ||S||).
    const CVector x0 = ctx.A_half_pinv * shs::attain_basis(ctx, t).column(0);
    const double e1 = std::abs(shs::inner_a(ctx, t * x0, s * x0)) / (nt * ns);
    if (e1 < 1.0) {
      EXPECT_NE(shs::decide_bj(ctx, t, s, e1).status, Status::Fails);
    }
    const double e2 = shs::seminorm_vec(ctx, s * x0) / ns;
    if (e2 < 1.0) {
      EXPECT_NE(shs::decide_bj(ctx, t, s, e2).status, Status::Fails);
    }

    // w_A(T# S) < ||S|| ||T|| certifies orthogonality at the ratio.
    const double e3 = shs::num_radius(ctx, shs::sharp_adjoint(ctx, t) * s) / (nt * ns);
    if (e3 < 1.0) {
      EXPECT_NE(shs::decide_bj(ctx, t, s, e3).status, Status::Fails);
    }

    // w_A(T) < ||T|| makes T orthogonal to I at the ratio.
    const double e4 = shs::num_radius(ctx, t) / nt;
    if (e4 < 1.0) {
      EXPECT_NE(shs::decide_bj(ctx, t, CMatrix::identity(n), e4).status, Status::Fails);
    }

    // Orthogonality of the sharp adjoints passes to T P_A and S P_A.
    const double eps = 0.5;
    if (shs::decide_bj(ctx, shs::sharp_adjoint(ctx, t), shs::sharp_adjoint(ctx, s), eps).status ==
        Status::Holds) {
      EXPECT_EQ(shs::decide_bj(ctx, t * ctx.P_A, s * ctx.P_A, eps).status, Status::Holds);
    }
  }
}

TEST(OrthoProperties, ScalarMultiplesNeverOrthogonal) {
  std::mt19937_64 rng(48);
  for (int trial = 0; trial < 20; ++trial) {
    const auto w = oracle::weight(3, 1 + trial % 3, rng);
    const auto ctx = shs::make_context(w.A);
    const CMatrix t = oracle::a_bounded(w, rng);
    const cplx c(std::cos(trial), std::sin(trial) * 2.0);
    for (double eps : {0.0, 0.3, 0.9}) EXPECT_EQ(shs::decide_bj(ctx, t, c * t, eps).status, Status::Fails);
  }
}

}  // namespace
