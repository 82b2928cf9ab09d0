#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <fracvar/error.hpp>
#include <fracvar/special.hpp>

#include "oracles.hpp"

namespace fv = fracvar;

TEST(Gamma, KnownValues) {
  EXPECT_EQ(fv::gamma(1.0), 1.0);
  EXPECT_EQ(fv::gamma(5.0), 24.0);
  EXPECT_NEAR(fv::gamma(0.5), 1.7724538509055160, 1e-15);
  // 4.5 = 3.5 * 2.5 * 1.5 * 0.5 * sqrt(pi)
  const double oracle = 3.5 * 2.5 * 1.5 * 0.5 * std::sqrt(std::numbers::pi);
  EXPECT_NEAR(fv::gamma(4.5), oracle, 1e-13 * oracle);
  EXPECT_NEAR(fv::gamma(4.5), 11.631728396567449, 1e-13 * oracle);
}

TEST(Gamma, RecurrenceOnHalfToTwenty) {
  for (double x = 0.5; x <= 20.0; x += 0.0625) {
    const double lhs = fv::gamma(x + 1.0);
    EXPECT_LE(std::abs(lhs - x * fv::gamma(x)), 1e-12 * lhs) << "x=" << x;
  }
}

TEST(Gamma, MatchesStdTgammaOverRange) {
  for (double x = 0.01; x < 170.0; x *= 1.07) {
    const double ref = std::tgamma(x);
    EXPECT_NEAR(fv::gamma(x), ref, 1e-12 * ref) << "x=" << x;
  }
  for (double x : {-0.5, -1.5, -2.25, -7.75}) {
    EXPECT_NEAR(fv::gamma(x), std::tgamma(x), 1e-12 * std::abs(std::tgamma(x))) << "x=" << x;
  }
}

TEST(Gamma, PolesAndOverflow) {
  EXPECT_THROW(fv::gamma(0.0), fv::DomainError);
  EXPECT_THROW(fv::gamma(-3.0), fv::DomainError);
  EXPECT_THROW(fv::gamma(172.0), fv::OverflowError);
  EXPECT_EQ(fv::reciprocal_gamma(-2.0), 0.0);
  EXPECT_EQ(fv::reciprocal_gamma(200.0), 0.0);
  EXPECT_NEAR(fv::reciprocal_gamma(0.5), 1.0 / std::sqrt(std::numbers::pi), 1e-15);
  EXPECT_NEAR(fv::log_gamma(100.0), std::lgamma(100.0), 1e-12 * std::lgamma(100.0));
}

TEST(Erfc, KnownValues) {
  EXPECT_EQ(fv::erfc(0.0), 1.0);
  EXPECT_LT(fv::erfc(10.0), 1e-40);
  EXPECT_GT(fv::erfc(10.0), 0.0);
  EXPECT_NEAR(fv::erfc(1.0), 0.15729920705028513, 1e-15);
}

TEST(Erfc, AgreesWithQuadratureOfDefinition) {
  for (double x : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const long double integral =
        oracle::simpson([](long double s) { return std::exp(-s * s); }, 0.0L, x, 1e-18L);
    const double ref = static_cast<double>(1.0L - 2.0L / std::sqrt(std::numbers::pi_v<long double>) *
                                                      integral);
    EXPECT_NEAR(fv::erfc(x), ref, 1e-13) << "x=" << x;
  }
}

TEST(Erfc, TenSignificantDigitsAndSymmetry) {
  for (double x = -10.0; x <= 10.0; x += 0.01) {
    const double ref = std::erfc(x);
    EXPECT_NEAR(fv::erfc(x), ref, 1e-10 * ref) << "x=" << x;
    EXPECT_NEAR(fv::erfc(-x), 2.0 - fv::erfc(x), 1e-15) << "x=" << x;
  }
}

TEST(MittagLeffler, ExponentialCase) {
  EXPECT_NEAR(fv::mittag_leffler({1.0, 1.0}, 1.0), 2.718281828459045, 1e-15);
  for (double z = -5.0; z <= 5.0; z += 0.05) {
    EXPECT_LE(std::abs(fv::mittag_leffler({1.0, 1.0}, z) - std::exp(z)),
              1e-12 * std::exp(std::abs(z)))
        << "z=" << z;
  }
}

TEST(MittagLeffler, ZeroArgumentIsReciprocalGamma) {
  EXPECT_EQ(fv::mittag_leffler({0.7, 1.0}, 0.0), 1.0);
  for (double beta : {0.3, 0.5, 1.5, 2.0, 3.7}) {
    EXPECT_EQ(fv::mittag_leffler({0.5, beta}, 0.0), fv::reciprocal_gamma(beta));
  }
}

TEST(MittagLeffler, HalfOrderMatchesScaledErfc) {
  EXPECT_NEAR(fv::mittag_leffler({0.5, 1.0}, -1.0), 0.4275835761558070, 1e-14);
  EXPECT_NEAR(fv::mittag_leffler({0.5, 1.0}, -1.0), std::exp(1.0) * fv::erfc(1.0), 1e-14);
  for (double x = 0.0; x <= 5.0; x += 0.01) {
    const double ref = static_cast<double>(oracle::scaled_erfc(x));
    EXPECT_LE(std::abs(fv::mittag_leffler({0.5, 1.0}, -x) - ref), 1e-10) << "x=" << x;
  }
}

TEST(MittagLeffler, OtherClosedForms) {
  for (double x = -3.0; x <= 3.0; x += 0.25) {
    EXPECT_NEAR(fv::mittag_leffler({2.0, 1.0}, -x * x), std::cos(x), 1e-13);
    if (x != 0.0) {
      EXPECT_NEAR(fv::mittag_leffler({1.0, 2.0}, x), std::expm1(x) / x, 1e-13);
    }
  }
}

TEST(MittagLeffler, AgreesWithLongDoubleSeries) {
  for (double a : {0.3, 0.5, 0.95}) {
    for (double b : {1.0, 2.0}) {
      for (double z : {-2.0, -0.5, 0.7}) {
        const double ref = static_cast<double>(oracle::ml_series(a, b, z));
        EXPECT_NEAR(fv::mittag_leffler({a, b}, z), ref, 1e-13 * std::max(1.0, std::abs(ref)));
      }
    }
  }
}

TEST(MittagLeffler, TabulatedSeriesMatchesDirect) {
  const fv::MittagLefflerSeries ml({0.5, 1.0});
  for (double z = -4.0; z <= 2.0; z += 0.1) {
    EXPECT_NEAR(ml(z), fv::mittag_leffler({0.5, 1.0}, z), 1e-14 * std::max(1.0, std::abs(ml(z))));
  }
}

TEST(MittagLeffler, Errors) {
  EXPECT_THROW(fv::mittag_leffler({0.0, 1.0}, 1.0), fv::InvalidArgument);
  EXPECT_THROW(fv::mittag_leffler({0.5, -1.0}, 1.0), fv::InvalidArgument);
  EXPECT_THROW(fv::mittag_leffler({0.5, 1.0}, 31.0), fv::NonConvergenceError);
  fv::SeriesBudget tiny;
  tiny.max_terms = 5;
  EXPECT_THROW(fv::mittag_leffler({1.0, 1.0}, 3.0, tiny), fv::NonConvergenceError);
  EXPECT_THROW(fv::mittag_leffler({1.0, 1.0}, NAN), fv::DomainError);
}
