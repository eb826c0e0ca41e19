#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bmac/errors.hpp"
#include "bmac/transmit_function.hpp"

namespace bmac {
namespace {

using std::numbers::pi;

std::vector<TransmitFunction> bounded_smooth() {
  return {TransmitFunction::tanh(1.0), TransmitFunction::tanh(0.3),
          TransmitFunction::gudermannian(1.0), TransmitFunction::gudermannian(2.5),
          TransmitFunction::rational(1.0), TransmitFunction::rational(0.7)};
}

const std::vector<double> kProbe = {-1e300, -1e6, -40.0, -3.0, -0.5, -1e-9, 0.0,
                                    1e-9,   0.25, 1.0,   7.5,  50.0, 1e6,   1e300};

TEST(TransmitFunction, ClosedForms) {
  EXPECT_DOUBLE_EQ(TransmitFunction::tanh(2.0).eval(0.3), std::tanh(0.6));
  for (double x : {-4.0, -0.3, 0.0, 0.9, 3.0})
    EXPECT_NEAR(TransmitFunction::gudermannian(1.5).eval(x),
                (2.0 / pi) * std::atan(std::sinh(1.5 * x)), 1e-15);
  EXPECT_DOUBLE_EQ(TransmitFunction::rational(2.0).eval(1.5), 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(TransmitFunction::rational(2.0).eval(-1.5), -3.0 / 4.0);
  EXPECT_DOUBLE_EQ(TransmitFunction::signed_power(0.25).eval(16.0), 2.0);
  EXPECT_DOUBLE_EQ(TransmitFunction::signed_power(0.25).eval(-16.0), -2.0);
  EXPECT_DOUBLE_EQ(TransmitFunction::linear(0.5).eval(3.0), 1.5);
}

TEST(TransmitFunction, BoundedKindsStayWithinOne) {
  for (const auto& f : bounded_smooth()) {
    ASSERT_EQ(f.bound(), 1.0);
    for (double x : kProbe) EXPECT_LE(std::abs(f.eval(x)), 1.0) << describe(f) << " x=" << x;
    EXPECT_NEAR(f.eval(1e300), 1.0, 1e-15) << describe(f);
  }
  EXPECT_FALSE(TransmitFunction::linear(1.0).bound().has_value());
  EXPECT_FALSE(TransmitFunction::signed_power(0.3).bound().has_value());
}

TEST(TransmitFunction, OddAndStrictlyIncreasing) {
  auto all = bounded_smooth();
  all.push_back(TransmitFunction::signed_power(0.4));
  all.push_back(TransmitFunction::linear(2.0));
  for (const auto& f : all) {
    EXPECT_TRUE(f.strictly_increasing());
    for (double x : {0.1, 0.8, 2.0, 5.0}) EXPECT_DOUBLE_EQ(f.eval(-x), -f.eval(x)) << describe(f);
    for (double x = -5.0; x < 5.0; x += 0.01) EXPECT_LT(f.eval(x), f.eval(x + 0.01)) << describe(f);
  }
}

TEST(TransmitFunction, DerivativeMatchesFiniteDifference) {
  auto all = bounded_smooth();
  all.push_back(TransmitFunction::linear(3.0));
  for (const auto& f : all) {
    ASSERT_TRUE(f.differentiable());
    for (double x : {-2.5, -0.6, 0.3, 1.1, 4.0}) {
      const double h = 1e-6;
      const double fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
      EXPECT_NEAR(f.derivative(x), fd, 1e-8) << describe(f) << " x=" << x;
    }
  }
}

TEST(TransmitFunction, QuantizerCells) {
  // M = 3 levels on x_max = 1.5 gives step 1 and levels {-1, 0, 1}.
  const auto q = TransmitFunction::uniform_quantizer(1.5, 3);
  EXPECT_DOUBLE_EQ(q.step(), 1.0);
  EXPECT_EQ(q.saturation_index(), 1);
  EXPECT_EQ(q.eval(0.0), 0.0);
  EXPECT_EQ(q.eval(0.4999999), 0.0);
  EXPECT_EQ(q.eval(0.5), 1.0);
  EXPECT_EQ(q.eval(-0.5), 0.0);
  EXPECT_EQ(q.eval(-0.5000001), -1.0);
  EXPECT_EQ(q.eval(1e9), 1.0);
  EXPECT_EQ(q.eval(-1e9), -1.0);
  EXPECT_EQ(q.bound(), 1.0);
  EXPECT_EQ(q.kinks(), (std::vector<double>{-0.5, 0.5}));
  EXPECT_FALSE(q.strictly_increasing());
  EXPECT_FALSE(q.differentiable());
  EXPECT_THROW(q.derivative(0.2), UnsupportedKindError);

  const auto q5 = TransmitFunction::uniform_quantizer(2.0, 5);
  EXPECT_EQ(q5.kinks().size(), 4u);
  for (double x : kProbe) EXPECT_LE(std::abs(q5.eval(x)), *q5.bound());
}

TEST(TransmitFunction, SignedPowerHasNoDerivative) {
  EXPECT_THROW(TransmitFunction::signed_power(0.3).derivative(1.0), UnsupportedKindError);
  EXPECT_EQ(TransmitFunction::signed_power(0.3).kinks(), std::vector<double>{0.0});
}

TEST(TransmitFunction, RejectsInvalidParameters) {
  EXPECT_THROW(TransmitFunction::tanh(0.0), PreconditionError);
  EXPECT_THROW(TransmitFunction::gudermannian(-1.0), PreconditionError);
  EXPECT_THROW(TransmitFunction::rational(std::nan("")), PreconditionError);
  EXPECT_THROW(TransmitFunction::signed_power(0.5), PreconditionError);
  EXPECT_THROW(TransmitFunction::signed_power(0.0), PreconditionError);
  EXPECT_THROW(TransmitFunction::uniform_quantizer(1.0, 4), PreconditionError);
  EXPECT_THROW(TransmitFunction::uniform_quantizer(1.0, 1), PreconditionError);
  EXPECT_THROW(TransmitFunction::uniform_quantizer(0.0, 3), PreconditionError);
  EXPECT_THROW(TransmitFunction::linear(0.0), PreconditionError);
}

TEST(TransmitFunction, OmegaReplacement) {
  const auto f = TransmitFunction::tanh(1.0).with_omega(0.25);
  EXPECT_EQ(f.omega(), 0.25);
  EXPECT_TRUE(f.has_omega());
  const auto linear = TransmitFunction::linear(2.0);
  EXPECT_FALSE(linear.has_omega());
  EXPECT_EQ(linear.with_omega(9.0), linear);
  EXPECT_THROW(TransmitFunction::rational(1.0).with_omega(-2.0), PreconditionError);
}

TEST(TransmitFunction, KindNamesRoundTrip) {
  for (auto kind : {TransmitKind::tanh, TransmitKind::gudermannian, TransmitKind::rational,
                    TransmitKind::signed_power, TransmitKind::uniform_quantizer,
                    TransmitKind::linear})
    EXPECT_EQ(parse_transmit_kind(to_string(kind)), kind);
  EXPECT_FALSE(parse_transmit_kind("sigmoid").has_value());
}

}  // namespace
}  // namespace bmac
