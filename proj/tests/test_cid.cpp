#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cra/cid.hpp"
#include "cra/stats.hpp"
#include "oracles.hpp"

using namespace cra;
using Catch::Approx;

namespace {

// Reference setting: P_p = 1 W, lambda_p = 0.003, alpha = 4, d = 1.
const CidContext kRef{1.0, 0.003, 4.0, 1.0};

// Frozen from a 30-digit root solve of the defining equation and direct
// evaluation of the formulas (independent of this code).
constexpr double kR1 = 3.23764359460015808;
constexpr double kT = 8.99110457794913543e-4;
constexpr double kXmin = 4.00011419080850752e-3;
constexpr double kXmax = 4.07865668016157271e-2;
constexpr double kCdfAt001 = 0.549355173760656865;
constexpr double kPdfAt001 = 28.6534535133037246;

}  // namespace

TEST_CASE("solve_r1 reference values", "[cid][r1]") {
  CHECK(solve_r1(0.01, 1.0, 0.0, 4.0) == Approx(std::pow(100.0, 0.25)).epsilon(1e-12));
  const double r1 = solve_r1(0.01, 1.0, 0.003, 4.0);
  CHECK(r1 == Approx(kR1).epsilon(1e-11));
  CHECK(r1 == Approx(oracle::r1_alpha4(0.01, 1.0, 0.003)).epsilon(1e-9));
  const double g = std::pow(r1, -4.0) + compute_T(r1, 1.0, 0.003, 4.0) - 0.01;
  CHECK(std::fabs(g) < 1e-10 * 0.01);
}

TEST_CASE("solve_r1 rejects bad inputs", "[cid][r1]") {
  CHECK_THROWS_AS(solve_r1(0.0, 1.0, 0.003, 4.0), std::domain_error);
  CHECK_THROWS_AS(solve_r1(-1.0, 1.0, 0.003, 4.0), std::domain_error);
  CHECK_THROWS_AS(solve_r1(0.01, 0.0, 0.003, 4.0), std::domain_error);
  CHECK_THROWS_AS(solve_r1(0.01, 1.0, 0.003, 2.0), std::domain_error);
}

TEST_CASE("solve_r1 is strictly decreasing in m", "[cid][r1][property]") {
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const double m = 1e-4 * std::pow(10.0, 3.0 * i / 99.0);
    const double r = solve_r1(m, 1.0, 0.003, 4.0);
    CHECK(r < previous);
    previous = r;
  }
}

TEST_CASE("solve_r1 handles other exponents", "[cid][r1]") {
  for (double alpha : {2.5, 3.0, 3.5, 5.0}) {
    const double r = solve_r1(0.004, 0.2, 0.002, alpha);
    const double g = 0.2 * std::pow(r, -alpha) + compute_T(r, 0.2, 0.002, alpha) - 0.004;
    CHECK(std::fabs(g) < 1e-10 * 0.004);
  }
}

TEST_CASE("compute_T matches the annulus integral", "[cid][T]") {
  CHECK(compute_T(3.0, 1.0, 0.0, 4.0) == 0.0);
  CHECK(compute_T(kR1, 1.0, 0.003, 4.0) == Approx(kT).epsilon(1e-12));
  CHECK(compute_T(kR1, 1.0, 0.003, 4.0) == Approx(oracle::residual_annulus(kR1, 1.0, 0.003, 4.0)).epsilon(1e-6));
  CHECK(compute_T(2.0, 0.5, 0.001, 3.0) == Approx(oracle::residual_annulus(2.0, 0.5, 0.001, 3.0)).epsilon(1e-6));
  // Nearest term plus mean residual gives back the measurement.
  CHECK(std::pow(kR1, -4.0) + kT == Approx(0.01).epsilon(1e-10));
}

TEST_CASE("support bounds", "[cid][support]") {
  const CidModel model = make_cid_model(0.01, kRef);
  CHECK(model.x_min == Approx(kXmin).epsilon(1e-11));
  CHECK(model.x_max == Approx(kXmax).epsilon(1e-11));
  CHECK(model.x_min < model.m);
  CHECK(model.m < model.x_max);
  CHECK_FALSE(model.near_field());

  const CidModel collocated = make_cid_model(0.01, {1.0, 0.003, 4.0, 0.0});
  CHECK(collocated.x_min == Approx(0.01).epsilon(1e-10));
  CHECK(collocated.x_max == Approx(0.01).epsilon(1e-10));

  CidModel touching = model;
  touching.d = touching.r1_hat;
  const auto [lo, hi] = support_bounds(touching);
  CHECK(std::isinf(hi));
  CHECK(lo > touching.t_resid);
}

TEST_CASE("cdf reference values", "[cid][cdf]") {
  const CidModel model = make_cid_model(0.01, kRef);
  CHECK(cdf_eval(model, model.x_min) == 0.0);
  CHECK(cdf_eval(model, model.x_max) == 1.0);
  CHECK(cdf_eval(model, 0.0) == 0.0);
  CHECK(cdf_eval(model, 1.0) == 1.0);
  CHECK(cdf_eval(model, 0.01) == Approx(kCdfAt001).epsilon(1e-11));
  const double mc = oracle::cdf_by_angles(model.r1_hat, 1.0, 1.0, 4.0, model.t_resid, 0.01, 1000000, 17);
  CHECK(std::fabs(cdf_eval(model, 0.01) - mc) < 0.002);
}

TEST_CASE("cdf is monotone with limits 0 and 1", "[cid][cdf][property]") {
  for (double lambda_p : {0.0, 0.001, 0.003, 0.01}) {
    for (double m : {0.002, 0.004, 0.01, 0.05}) {
      const CidModel model = make_cid_model(m, {1.0, lambda_p, 4.0, 1.0});
      CidDiagnostics diag;
      double previous = 0.0;
      const double hi = std::isfinite(model.x_max) ? model.x_max : 10.0 * model.m;
      for (int k = 0; k <= 2000; ++k) {
        const double x = model.x_min + (hi - model.x_min) * k / 2000.0;
        const double f = cdf_eval(model, x, &diag);
        REQUIRE(f >= previous);
        REQUIRE(f >= 0.0);
        REQUIRE(f <= 1.0);
        previous = f;
      }
      CHECK(diag.clamped == 0);
      CHECK(cdf_eval(model, model.x_min * (1.0 + 1e-12)) < 1e-4);
      if (std::isfinite(model.x_max)) CHECK(cdf_eval(model, model.x_max * (1.0 - 1e-12)) > 1.0 - 1e-4);
    }
  }
}

TEST_CASE("cdf counts arccos excursions beyond the slop", "[cid][cdf]") {
  CidModel model = make_cid_model(0.01, kRef);
  const double true_min = model.x_min;
  model.x_min = model.t_resid + 0.5 * (true_min - model.t_resid);
  CidDiagnostics diag;
  CHECK(cdf_eval(model, 0.5 * (model.x_min + true_min), &diag) == 0.0);
  CHECK(diag.clamped == 1);
}

TEST_CASE("cdf at the measurement exceeds one half on the reference grid", "[cid][cdf][property]") {
  for (double lambda_p : {0.001, 0.003})
    for (double m : {0.002, 0.003, 0.004, 0.006, 0.008, 0.01, 0.015, 0.02}) {
      const CidModel model = make_cid_model(m, {1.0, lambda_p, 4.0, 1.0});
      CHECK(cdf_eval(model, m) > 0.5);
    }
}

TEST_CASE("pdf reference value and domain", "[cid][pdf]") {
  const CidModel model = make_cid_model(0.01, kRef);
  CHECK(pdf_eval(model, 0.01) == Approx(kPdfAt001).epsilon(1e-10));
  // Loose finite difference with step 1e-4 lands near 28.4-28.7.
  const double fd = (cdf_eval(model, 0.01 + 5e-5) - cdf_eval(model, 0.01 - 5e-5)) / 1e-4;
  CHECK(fd == Approx(kPdfAt001).epsilon(0.01));
  CHECK_THROWS_AS(pdf_eval(model, model.x_min), std::domain_error);
  CHECK_THROWS_AS(pdf_eval(model, model.x_max), std::domain_error);
  CHECK_THROWS_AS(pdf_eval(model, 0.0), std::domain_error);
  // Inverse-square-root growth at both ends.
  const double w = model.x_max - model.x_min;
  CHECK(pdf_eval(model, model.x_min + 1e-9 * w) > 10.0 * pdf_eval(model, model.x_min + 1e-3 * w));
  CHECK(pdf_eval(model, model.x_max - 1e-9 * w) > 10.0 * pdf_eval(model, model.x_max - 1e-3 * w));
  CHECK(cdf_eval(model, model.x_max) - cdf_eval(model, model.x_min) == 1.0);
}

TEST_CASE("pdf equals the central difference of cdf", "[cid][pdf][property]") {
  for (double m : {0.004, 0.01, 0.03}) {
    for (double lambda_p : {0.001, 0.003}) {
      const CidModel model = make_cid_model(m, {1.0, lambda_p, 4.0, 1.0});
      const double w = model.x_max - model.x_min;
      const double h = 1e-6 * w;
      for (int k = 1; k <= 50; ++k) {
        const double x = model.x_min + w * k / 51.0;
        const double fd = (cdf_eval(model, x + h) - cdf_eval(model, x - h)) / (2.0 * h);
        CHECK(pdf_eval(model, x) == Approx(fd).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("sample_cid maps angles through the law of cosines", "[cid][sample]") {
  const CidModel model = make_cid_model(0.01, kRef);
  CHECK(cid_value_at_angle(model, std::numbers::pi / 2.0) == Approx(8.48382943272589e-3).epsilon(1e-10));
  CHECK(cid_value_at_angle(model, std::numbers::pi) == Approx(model.x_min).epsilon(1e-14));
  CHECK(cid_value_at_angle(model, 0.0) == Approx(model.x_max).epsilon(1e-14));
  for (double theta : {0.3, 1.1, 2.0, 2.9})
    CHECK(cid_value_at_angle(model, theta) ==
          Approx(oracle::st_interference(model.r1_hat, 1.0, theta, 1.0, 4.0, model.t_resid)).epsilon(1e-12));
}

TEST_CASE("sample_cid follows cdf_eval", "[cid][sample][property]") {
  for (double m : {0.004, 0.01}) {
    const CidModel model = make_cid_model(m, kRef);
    Rng rng(31);
    std::vector<double> xs;
    for (int i = 0; i < 100000; ++i) {
      const double x = sample_cid(model, rng);
      REQUIRE(x >= model.x_min);
      REQUIRE(x <= model.x_max);
      xs.push_back(x);
    }
    CHECK(ks_statistic(xs, [&](double x) { return cdf_eval(model, x); }) < 0.01);
  }
}

TEST_CASE("moments by quadrature", "[cid][moments]") {
  // Frozen from 30-digit quadrature in theta.
  const CidMoments a = moments(make_cid_model(0.004, kRef));
  const CidMoments b = moments(make_cid_model(0.008, kRef));
  const CidMoments c = moments(make_cid_model(0.01, kRef));
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  REQUIRE(c.converged);
  CHECK(a.variance == Approx(9.15438979418267e-6).epsilon(1e-8));
  CHECK(a.skewness == Approx(0.785415607908050).epsilon(1e-8));
  CHECK(b.variance == Approx(7.25300520191581e-5).epsilon(1e-8));
  CHECK(b.skewness == Approx(0.952957687410950).epsilon(1e-8));
  CHECK(c.mean == Approx(0.0143665249288097).epsilon(1e-10));
  CHECK(c.variance == Approx(1.43023402839990e-4).epsilon(1e-8));
  CHECK(c.skewness == Approx(1.01434803097319).epsilon(1e-8));
  CHECK(a.skewness < b.skewness);
  CHECK(a.variance < b.variance);

  // Right tail across the figure regime.
  for (double m : {0.002, 0.004, 0.006})
    CHECK(moments(make_cid_model(m, kRef)).skewness > 0.0);
}

TEST_CASE("moments degenerate and divergent cases", "[cid][moments]") {
  const CidMoments tiny = moments(make_cid_model(0.01, {1.0, 0.003, 4.0, 1e-4}));
  REQUIRE(tiny.converged);
  CHECK(tiny.variance < 1e-12);
  CHECK(tiny.mean == Approx(0.01).epsilon(1e-6));

  const CidMoments point = moments(make_cid_model(0.01, {1.0, 0.003, 4.0, 0.0}));
  CHECK(point.converged);
  CHECK(point.variance == 0.0);

  CidModel touching = make_cid_model(0.01, kRef);
  touching.d = touching.r1_hat;
  std::tie(touching.x_min, touching.x_max) = support_bounds(touching);
  CHECK_FALSE(moments(touching).converged);
}
