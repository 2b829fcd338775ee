#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rtor/analytic_models.hpp"
#include "rtor/errors.hpp"

using namespace rtor;

namespace {

std::vector<double> real_parts(const Spectrum& s) {
  std::vector<double> v;
  for (const auto& it : s.items)
    for (int m = 0; m < it.multiplicity; ++m) v.push_back(it.value.real());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Circle, SpectrumAtMinusOne) {
  const auto v = real_parts(circle_spectrum_truncated(circle_bundle(cplx{-1.0, 0.0}), 2));
  const std::vector<double> expect{-1.5, -0.5, 0.5, 1.5, 2.5};
  ASSERT_EQ(v.size(), expect.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], expect[i], 1e-14);
}

TEST(Circle, SpectrumOnUnitaryArc) {
  const auto v = real_parts(circle_spectrum_truncated(circle_bundle(std::polar(1.0, kTwoPi * 0.3)), 1));
  const std::vector<double> expect{-0.7, 0.3, 1.3};
  ASSERT_EQ(v.size(), expect.size());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(v[i], expect[i], 1e-14);
}

TEST(Circle, TrivialHolonomyRejected) {
  try {
    circle_bundle(cplx{1.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AssumptionII);
  }
}

TEST(Circle, ClosedFormAtMinusOne) {
  const CircleClosedForm c = circle_closed_form(circle_bundle(cplx{-1.0, 0.0}));
  EXPECT_NEAR(std::abs(c.eta.asymmetry), 0.0, 1e-15);
  EXPECT_NEAR(c.rs_torsion, 2.0, 1e-13);
  EXPECT_NEAR(std::abs(c.graded_det - 2.0), 0.0, 1e-13);
}

TEST(Circle, AsymmetryOnUnitaryArc) {
  for (int i = 1; i <= 9; ++i) {
    const double a = 0.1 * i;
    const CircleClosedForm c = circle_closed_form(circle_bundle(std::polar(1.0, kTwoPi * a)));
    EXPECT_NEAR(std::abs(c.eta.asymmetry - (1.0 - 2.0 * a)), 0.0, 1e-12);
    EXPECT_NEAR(c.rs_torsion, 2.0 * std::sin(kPi * a), 1e-12);
  }
}

TEST(Circle, GradedDetIsOneMinusZ) {
  for (cplx z : {cplx{2.0, 0.0}, cplx{0.5, 0.5}, std::polar(1.2, 1.0), std::polar(0.85, -2.0)}) {
    const CircleClosedForm c = circle_closed_form(circle_bundle(z));
    EXPECT_LT(std::abs(c.graded_det - (1.0 - z)), 1e-12) << z;
  }
}

TEST(Circle, TruncationConverges) {
  const auto rows = truncation_convergence(circle_bundle(std::polar(1.2, kTwoPi * 0.3)), {10, 100, 1000, 10000});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_LT(rows[1].error, rows[0].error);
  EXPECT_LT(rows.back().error, 1e-6);
}

TEST(Arg, Pairing) {
  EXPECT_NEAR(arg_pairing(circle_representation(std::polar(1.0, 0.7)), {Rational{1, 1}}), 0.0, 1e-15);
  EXPECT_NEAR(arg_pairing(circle_representation(cplx{2.0, 0.0}), {Rational{1, 1}}), -0.5 * std::log(2.0), 1e-15);
  EXPECT_NEAR(arg_pairing(lens_character(5, 2), {Rational{0, 1}}), 0.0, 0.0);
  EXPECT_THROW(arg_pairing(circle_representation(cplx{2.0, 0.0}), {}), Error);
}

TEST(Arg, ClassRealPartReduced) {
  const ArgClass c = arg_class(circle_representation(std::polar(3.0, -0.5)));
  ASSERT_EQ(c.values.size(), 1u);
  EXPECT_GE(c.values[0].real(), 0.0);
  EXPECT_LT(c.values[0].real(), 1.0);
  EXPECT_NEAR(std::abs(std::exp(cplx{0, kTwoPi} * c.values[0]) - std::polar(3.0, -0.5)), 0.0, 1e-14);
}

TEST(CauchyRiemann, Holomorphic) {
  const GridSample g = sample_grid([](cplx z) { return z * z; }, cplx{0.2, 0.3}, 0.01, 9, 9);
  EXPECT_LT(cr_residual(g).max_norm, 1e-12);
}

TEST(CauchyRiemann, Conjugate) {
  const GridSample g = sample_grid([](cplx z) { return std::conj(z); }, cplx{0.2, 0.3}, 0.01, 9, 9);
  EXPECT_NEAR(cr_residual(g).max_norm, 1.0, 1e-10);
}

TEST(CauchyRiemann, ObservedOrder) {
  const auto orders = observed_orders({1.0, 0.25, 0.0625});
  ASSERT_EQ(orders.size(), 2u);
  EXPECT_NEAR(orders[0], 2.0, 1e-14);
}

TEST(Sweep, AnnulusRowCount) {
  const SweepTable t = sweep_circle(annulus_grid(0.8, 1.25, 21, 21), 2);
  EXPECT_EQ(t.points.size(), 441u);
  const SweepSummary s = summarize(t);
  EXPECT_EQ(s.computed + s.flagged, 441u);
  EXPECT_LT(s.max_log_ratio_gap, 1e-8);
}

TEST(Sweep, GridThroughOneIsFlagged) {
  const SweepTable t = sweep_circle({cplx{1.0, 0.0}, cplx{2.0, 0.0}});
  ASSERT_EQ(t.points.size(), 2u);
  EXPECT_FALSE(t.points[0].admissible);
  EXPECT_FALSE(t.points[0].flags.empty());
  EXPECT_TRUE(t.points[1].admissible);
}

TEST(Sweep, UnitaryArcModulusEqualsRs) {
  for (const auto& p : sweep_circle(unitary_arc({0.1, 0.3, 0.5, 0.7, 0.9})).points) {
    ASSERT_TRUE(p.admissible);
    EXPECT_NEAR(std::abs(p.t), p.t_rs, 1e-8);
  }
}

TEST(Sweep, JobsDoNotChangeOutput) {
  const auto grid = annulus_grid(0.8, 1.25, 5, 7);
  EXPECT_EQ(to_csv(sweep_circle(grid, 1)), to_csv(sweep_circle(grid, 4)));
}
