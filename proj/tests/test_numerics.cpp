#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "sfg/numerics.hpp"

using namespace sfg;
using namespace sfg::numerics;

TEST_CASE("1-D quadrature: polynomials and Gaussians") {
  const double cubic = integrate_adaptive<double>(
      [](double x) { return x * x * x + x * x; }, 0.0, 1.0, 1e-12);
  CHECK(cubic == doctest::Approx(7.0 / 12.0).epsilon(1e-13));

  const double gauss = integrate_adaptive<double>(
      [](double x) { return std::exp(-x * x); }, -10.0, 10.0, 1e-12);
  CHECK(gauss == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("1-D quadrature: narrow feature found via breakpoints") {
  const double w = 1e-3;
  const double spike = integrate_adaptive<double>(
      [&](double x) { return std::exp(-(x / w) * (x / w)); }, -10.0, 10.0,
      1e-14, {-4.0 * w, 0.0, 4.0 * w});
  CHECK(spike == doctest::Approx(w * std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("1-D quadrature: oscillatory integrand") {
  const double osc = integrate_adaptive<double>(
      [](double x) { return std::sin(40.0 * x); }, 0.0, 1.0, 1e-12);
  CHECK(osc == doctest::Approx((1.0 - std::cos(40.0)) / 40.0).epsilon(1e-11));
}

TEST_CASE("complex quadrature") {
  const complexd val = integrate_adaptive<complexd>(
      [](double x) { return std::polar(1.0, 3.0 * x) * std::exp(-x * x); },
      -9.0, 9.0, 1e-12);
  // integral of e^{3ix} e^{-x^2} = sqrt(pi) e^{-9/4}
  CHECK(val.real() ==
        doctest::Approx(std::sqrt(M_PI) * std::exp(-2.25)).epsilon(1e-10));
  CHECK(val.imag() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("2-D quadrature: separable Gaussian and tilted Gaussian") {
  const double sep = integrate2d_adaptive<double>(
      [](double x, double y) { return std::exp(-x * x - y * y); }, -8.0, 8.0,
      -8.0, 8.0, 1e-10);
  CHECK(sep == doctest::Approx(M_PI).epsilon(1e-10));

  // correlated form with known determinant
  const double tilted = integrate2d_adaptive<double>(
      [](double x, double y) {
        return std::exp(-(2.0 * x * x + 2.0 * y * y + 2.0 * x * y));
      },
      -8.0, 8.0, -8.0, 8.0, 1e-10);
  CHECK(tilted == doctest::Approx(2.0 * M_PI / std::sqrt(12.0)).epsilon(1e-9));
}

TEST_CASE("2-D quadrature: narrow ridge with breakpoints") {
  const double w = 0.01;
  const double ridge = integrate2d_adaptive<double>(
      [&](double x, double y) {
        return std::exp(-(x / w) * (x / w) - y * y);
      },
      -5.0, 5.0, -5.0, 5.0, 1e-13, {-3.0 * w, 0.0, 3.0 * w}, {0.0});
  CHECK(ridge == doctest::Approx(w * M_PI).epsilon(1e-8));
}

TEST_CASE("golden section maximization") {
  const double x1 = golden_section_max(
      [](double x) { return -(x - 2.0) * (x - 2.0); }, 0.0, 5.0, 1e-12);
  CHECK(x1 == doctest::Approx(2.0).epsilon(1e-9));

  // smooth maxima are localizable to about sqrt(machine eps)
  const double x2 = golden_section_max([](double x) { return std::sin(x); },
                                       0.0, 3.0, 1e-12);
  CHECK(x2 == doctest::Approx(M_PI / 2.0).epsilon(1e-6));
}

TEST_CASE("compensated summation beats naive accumulation") {
  KahanSum acc;
  double naive = 0.0;
  const double big = 1e14;
  acc.add(big);
  naive += big;
  for (int i = 0; i < 1000; ++i) {
    acc.add(1e-3);  // far below one ulp of the running sum
    naive += 1e-3;
  }
  acc.add(-big);
  naive -= big;
  CHECK(acc.value() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(naive - 1.0) > 0.5);  // the plain sum drops all of it
}
