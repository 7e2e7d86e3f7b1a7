#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gwf/gaussian.hpp"
#include "gwf/measurement_model.hpp"
#include "gwf/theory.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace gwf;
using namespace gwf::theory;

namespace {

// extended-precision re-evaluation of the closed forms, guarding the
// double-precision path against cancellation
struct LongConstants {
  long double epsilon, delta2, c, h;
};

LongConstants constants_oracle(long double d1) {
  const long double kappa = d1 / (1.0L - d1);
  const long double eps =
      sqrtl((2.0L + d1) * (1.0L - sqrtl(1.0L - kappa)) + d1 * d1 / 8.0L);
  LongConstants out;
  out.epsilon = eps;
  out.delta2 = sqrtl(2.0L) * (2.0L + eps) * d1 / sqrtl((1.0L - eps) * (2.0L - eps));
  out.c = (2.0L + eps) * (1.0L + eps) * (1.0L + d1);
  out.h = (1.0L - out.delta2) * (1.0L - eps) * (2.0L - eps);
  return out;
}

}  // namespace

TEST_CASE("constants: exact values at zero") {
  const auto c = constants_from_delta1(0.0);
  CHECK(c.epsilon == 0.0);
  CHECK(c.delta2 == 0.0);
  CHECK(c.c == 2.0);
  CHECK(c.h == 2.0);
}

TEST_CASE("constants: delta2 reaches one at the critical constant") {
  const auto c = constants_from_delta1(0.214);
  CHECK(c.delta2 == doctest::Approx(1.0).epsilon(0.01));
  CHECK(constants_from_delta1(0.213).delta2 < 1.0);
  CHECK(constants_from_delta1(0.215).delta2 > 1.0);
}

TEST_CASE("constants: extended-precision cross-check on 50 grid points") {
  for (int i = 0; i < 50; ++i) {
    const double d1 = 0.214 * double(i) / 49.0;
    const auto got = constants_from_delta1(d1);
    const auto want = constants_oracle((long double)d1);
    CHECK(std::abs(got.epsilon - double(want.epsilon)) <= 1e-12 * std::max(1.0, double(want.epsilon)));
    CHECK(std::abs(got.delta2 - double(want.delta2)) <= 1e-12 * std::max(1.0, double(want.delta2)));
    CHECK(std::abs(got.c - double(want.c)) <= 1e-12 * double(want.c));
    CHECK(std::abs(got.h - double(want.h)) <= 1e-12 * std::max(1.0, std::abs(double(want.h))));
  }
}

TEST_CASE("constants: domain errors") {
  CHECK_THROWS_AS(constants_from_delta1(-0.1), std::domain_error);
  CHECK_THROWS_AS(constants_from_delta1(1.0), std::domain_error);
  CHECK_THROWS_AS(constants_from_delta1(0.6), std::domain_error);  // kappa > 1
}

TEST_CASE("regularity_feasible: corner cases") {
  const auto at_zero = constants_from_delta1(0.0);
  // LHS = 1/4 + 4/4 = 1.25 <= 2 and alpha' beta' = 16 > 4
  CHECK(regularity_feasible(at_zero, 4.0, 4.0));
  // products at or below 4 never qualify
  CHECK_FALSE(regularity_feasible(at_zero, 2.0, 2.0));
  CHECK_FALSE(regularity_feasible(at_zero, 1.0, 3.9));

  // at the critical delta1, h is small/negative and huge constants settle it
  const auto at_crit = constants_from_delta1(0.214);
  const bool expected = (1.0 + 0.214) / 1e6 +
                            at_crit.c * at_crit.c / ((1.0 - 0.214) * 1e6) <=
                        at_crit.h;
  CHECK(regularity_feasible(at_crit, 1e6, 1e6) == expected);
}

TEST_CASE("figure1_curves: monotone shapes over the valid range") {
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(0.214 * double(i) / 99.0);
  const auto rows = figure1_curves(grid);
  REQUIRE(rows.size() == 100);
  CHECK(rows.front().epsilon == 0.0);
  CHECK(rows.front().c == 2.0);
  CHECK(rows.back().delta2 == doctest::Approx(1.0).epsilon(0.01));
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].epsilon >= rows[i - 1].epsilon);
    CHECK(rows[i].delta2 >= rows[i - 1].delta2);
    CHECK(rows[i].c >= rows[i - 1].c);
    CHECK(rows[i].h <= rows[i - 1].h);
  }
  CHECK_THROWS_AS(figure1_curves(std::vector<double>{0.3}), std::domain_error);
}

TEST_CASE("estimate_ric_rank1: degenerate and hand-checked samples") {
  // all-zero vectors map everything to zero, so every sample is |0 - 1| = 1
  MeasurementEnsemble zeros(Mat::Zero(4, 6), Mat::Zero(4, 6));
  const auto zero_est = estimate_ric_rank1(zeros, 10, 3);
  CHECK(zero_est.delta_hat == doctest::Approx(1.0));
  for (double s : zero_est.samples) CHECK(s == doctest::Approx(1.0));

  // single-probe value against a straight-loop evaluation
  auto ens = gauss::gen_gaussian_ensemble(5, 20, 331);
  const auto est = estimate_ric_rank1(ens, 1, 7);
  REQUIRE(est.samples.size() == 1);
  {
    Rng rng(derive_seed(7, 0x52491Cu, 0));
    Vec rho(5);
    for (Index k = 0; k < 5; ++k) rho[k] = rng.complex_normal(1.0 / std::sqrt(2.0));
    rho /= rho.norm();
    double acc = 0;
    for (Index m = 0; m < 20; ++m) {
      Complex fi = 0, fj = 0;
      for (Index k = 0; k < 5; ++k) {
        fi += std::conj(ens.left(k, m)) * rho[k];
        fj += std::conj(ens.right(k, m)) * rho[k];
      }
      acc += std::norm(fi * std::conj(fj));
    }
    CHECK(est.samples[0] == doctest::Approx(std::abs(acc / 20.0 - 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("estimate_ric_rank1: monotone in trials, refuses phase retrieval") {
  auto ens = gauss::gen_gaussian_ensemble(8, 128, 337);
  const auto small = estimate_ric_rank1(ens, 20, 11);
  const auto large = estimate_ric_rank1(ens, 60, 11);
  CHECK(large.delta_hat >= small.delta_hat);
  // seed-prefix property: the first 20 samples agree
  for (int i = 0; i < 20; ++i)
    CHECK(small.samples[size_t(i)] == large.samples[size_t(i)]);

  MeasurementEnsemble pr(ens.left, ens.left, /*phase_retrieval=*/true);
  CHECK_THROWS_AS(estimate_ric_rank1(pr, 5, 1), std::invalid_argument);
}

TEST_CASE("estimate_ric_rank1: decays with oversampling") {
  const int n = 16;
  double means[3] = {0, 0, 0};
  const int factors[3] = {8, 16, 32};
  for (int f = 0; f < 3; ++f) {
    for (int e = 0; e < 3; ++e) {
      auto ens = gauss::gen_gaussian_ensemble(
          n, factors[f] * n, derive_seed(347, std::uint64_t(f), std::uint64_t(e)));
      means[f] += estimate_ric_rank1(ens, 60, 13).delta_hat / 3.0;
    }
  }
  CHECK(means[1] < means[0]);
  CHECK(means[2] < means[1]);
}

TEST_CASE("spectral_expectation_check: concentration and averaging") {
  // single ensemble at heavy oversampling concentrates
  const double one = spectral_expectation_check(8, 512 * 8, 1, 101);
  CHECK(one < 0.2);
  // averaging over ensembles tightens the estimate
  const double few = spectral_expectation_check(8, 64 * 8, 1, 103);
  const double more = spectral_expectation_check(8, 64 * 8, 16, 103);
  const double most = spectral_expectation_check(8, 64 * 8, 64, 103);
  CHECK(more < few);
  CHECK(most < more);
}

TEST_CASE("spectral_expectation_check: phase-retrieval bias stays near one") {
  const double cross = spectral_expectation_check(8, 512 * 8, 1, 107, false);
  const double culprit = spectral_expectation_check(8, 512 * 8, 1, 107, true);
  CHECK(culprit == doctest::Approx(1.0).epsilon(0.2));
  CHECK(culprit - cross > 0.5);
}
