#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gwf/gaussian.hpp"
#include "gwf/measurement_model.hpp"
#include "gwf/solver.hpp"
#include "test_support.hpp"

using namespace gwf;
using test::linear_fit_r2;
using test::random_signal;
using test::random_unit;

namespace {

double objective_oracle(const MeasurementEnsemble& ens, const Vec& data, const Vec& rho) {
  double acc = 0;
  for (Index m = 0; m < ens.m_count(); ++m) {
    Complex fi = 0, fj = 0;
    for (Index k = 0; k < ens.n(); ++k) {
      fi += std::conj(ens.left(k, m)) * rho[k];
      fj += std::conj(ens.right(k, m)) * rho[k];
    }
    acc += std::norm(fi * std::conj(fj) - data[m]);
  }
  return acc / (2.0 * double(ens.m_count()));
}

Vec rotate(const Vec& v, double phi) { return Complex(std::cos(phi), std::sin(phi)) * v; }

}  // namespace

TEST_CASE("objective: zero at all global solutions, oracle elsewhere") {
  Rng rng(71);
  auto ens = gauss::gen_gaussian_ensemble(3, 5, 41);
  const Vec rho_t = random_signal(rng, 3);
  const Vec data = forward_correlate(ens, rho_t);
  CHECK(objective(ens, data, rho_t) <= 1e-20);
  for (int i = 1; i < 4; ++i)
    CHECK(objective(ens, data, rotate(rho_t, 0.7 * i)) <= 1e-20);

  const Vec other = random_signal(rng, 3);
  const double got = objective(ens, data, other);
  const double want = objective_oracle(ens, data, other);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("objective equals lifted residual") {
  Rng rng(73);
  auto ens = gauss::gen_gaussian_ensemble(5, 11, 43);
  const Vec rho_t = random_signal(rng, 5);
  const Vec data = forward_correlate(ens, rho_t);
  const Vec rho = random_signal(rng, 5);
  const double via_lift =
      (lifted_apply(ens, rho * rho.adjoint()) - data).squaredNorm() / (2.0 * 11);
  CHECK(objective(ens, data, rho) == doctest::Approx(via_lift).epsilon(1e-12));
}

TEST_CASE("gradient: vanishes at the truth") {
  Rng rng(79);
  auto ens = gauss::gen_gaussian_ensemble(4, 9, 47);
  const Vec rho_t = random_signal(rng, 4);
  const Vec data = forward_correlate(ens, rho_t);
  CHECK(gradient(ens, data, rho_t).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("gradient: central finite differences across 10 seeded instances") {
  for (int trial = 0; trial < 10; ++trial) {
    Rng rng(900 + std::uint64_t(trial));
    const Index n = 2 + Index(rng.raw() % 7);   // <= 8
    const Index m = 2 + Index(rng.raw() % 15);  // <= 16
    auto ens = gauss::gen_gaussian_ensemble(int(n), int(m), 7000 + std::uint64_t(trial));
    const Vec rho_t = random_signal(rng, n);
    const Vec data = forward_correlate(ens, rho_t);
    const Vec rho = random_signal(rng, n);
    const Vec g = gradient(ens, data, rho);
    const double h = 1e-6;
    const double scale = g.cwiseAbs().maxCoeff();
    for (Index k = 0; k < n; ++k) {
      for (int part = 0; part < 2; ++part) {
        Vec plus = rho, minus = rho;
        const Complex delta = part == 0 ? Complex(h, 0) : Complex(0, h);
        plus[k] += delta;
        minus[k] -= delta;
        const double fd =
            (objective(ens, data, plus) - objective(ens, data, minus)) / (2.0 * h);
        const double analytic = part == 0 ? 2.0 * g[k].real() : 2.0 * g[k].imag();
        CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(std::abs(analytic), 1e-4 * scale));
      }
    }
  }
}

TEST_CASE("gradient: lifted-domain recomputation") {
  Rng rng(83);
  auto ens = gauss::gen_gaussian_ensemble(4, 8, 53);
  const Vec rho_t = random_signal(rng, 4);
  const Vec data = forward_correlate(ens, rho_t);
  const Vec rho = random_signal(rng, 4);
  const Vec g = gradient(ens, data, rho);
  const Vec mismatch = forward_correlate(ens, rho) - data;
  const Vec via_lift =
      project_symmetric(lifted_adjoint(ens, mismatch)) * rho / double(ens.m_count());
  CHECK((g - via_lift).norm() <= 1e-12 * via_lift.norm());
}

TEST_CASE("gradient: phase equivariance") {
  Rng rng(89);
  auto ens = gauss::gen_gaussian_ensemble(5, 12, 59);
  const Vec data = forward_correlate(ens, random_signal(rng, 5));
  const Vec rho = random_signal(rng, 5);
  const Vec g = gradient(ens, data, rho);
  for (double phi : {0.3, 1.9, 4.4}) {
    const Vec rotated_grad = gradient(ens, data, rotate(rho, phi));
    CHECK((rotated_grad - rotate(g, phi)).norm() <= 1e-12 * g.norm());
  }
}

TEST_CASE("gradient: reduces to the classical phase-retrieval update") {
  Rng rng(97);
  const int n = 4, m = 10;
  auto base = gauss::gen_gaussian_ensemble(n, m, 61);
  MeasurementEnsemble ens(base.left, base.left, /*phase_retrieval=*/true);
  const Vec rho_t = random_signal(rng, n);
  Vec data(m);
  for (Index i = 0; i < m; ++i) data[i] = std::norm(ens.left.col(i).dot(rho_t));
  const Vec rho = random_signal(rng, n);

  Vec classic = Vec::Zero(n);
  for (Index i = 0; i < m; ++i) {
    const Complex inner = ens.left.col(i).dot(rho);  // <L^m, rho>
    classic += (std::norm(inner) - data[i].real()) * inner * ens.left.col(i);
  }
  classic /= double(m);
  const Vec g = gradient(ens, data, rho);
  CHECK((g - classic).norm() <= 1e-12 * classic.norm());
}

TEST_CASE("spectral_init: diagonal ensemble") {
  const int n = 4;
  Mat basis = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) basis(i, i) = 1.0;
  MeasurementEnsemble ens(basis, basis, true);
  Rng rng(101);
  const Vec rho_t = random_signal(rng, n);
  const Vec data = forward_correlate(ens, rho_t);  // |rho_k|^2 entries

  Index peak = 0;
  for (Index k = 1; k < n; ++k)
    if (std::abs(rho_t[k]) > std::abs(rho_t[peak])) peak = k;
  const auto init = spectral_init(ens, data);
  CHECK(init.lambda0 ==
        doctest::Approx(std::norm(rho_t[peak]) / double(n)).epsilon(1e-12));
  CHECK(std::abs(init.rho0[peak]) ==
        doctest::Approx(std::abs(rho_t[peak]) / std::sqrt(double(n))).epsilon(1e-12));
  for (Index k = 0; k < n; ++k)
    if (k != peak) CHECK(std::abs(init.rho0[k]) <= 1e-12);
}

TEST_CASE("spectral_init: equals symmetrized backprojection estimate") {
  Rng rng(103);
  auto ens = gauss::gen_gaussian_ensemble(6, 24, 67);
  const Vec data = forward_correlate(ens, random_signal(rng, 6));
  const Mat xhat = project_symmetric(lifted_adjoint(ens, data)) / 24.0;
  const auto top = project_rank1_psd(xhat);
  const auto init = spectral_init(ens, data);
  CHECK(init.lambda0 == doctest::Approx(top.eigenvalue).epsilon(1e-12));
  CHECK((init.rho0 - std::sqrt(top.eigenvalue) * top.eigenvector).norm() <= 1e-12);
}

TEST_CASE("spectral_init: accuracy improves with oversampling") {
  const int n = 64;
  double mean_err[3] = {0, 0, 0};
  const int factors[3] = {4, 6, 8};
  for (int f = 0; f < 3; ++f) {
    for (int s = 0; s < 20; ++s) {
      auto ens = gauss::gen_gaussian_ensemble(n, factors[f] * n,
                                              derive_seed(2029, std::uint64_t(f), std::uint64_t(s)));
      const Vec rho_t = gauss::gen_signal({gauss::SignalKind::RandomGaussian, n, 0},
                                          derive_seed(2047, std::uint64_t(f), std::uint64_t(s)));
      const Vec data = forward_correlate(ens, rho_t);
      const auto init = spectral_init(ens, data);
      mean_err[f] += dist(init.rho0, rho_t) / rho_t.norm() / 20.0;
    }
    CHECK(mean_err[f] < 1.0);
  }
  CHECK(mean_err[1] < mean_err[0]);
  CHECK(mean_err[2] < mean_err[1]);
}

TEST_CASE("dist and lifted distance") {
  Rng rng(107);
  const Vec rho = random_signal(rng, 6);
  // the a + b - 2|<a,b>| form cancels to roundoff, so sqrt leaves ~1e-8 * |rho|
  CHECK(dist(rho, rho) <= 1e-7 * rho.norm());
  for (int i = 0; i < 8; ++i) CHECK(dist(rotate(rho, 0.7 * i), rho) <= 1e-6 * rho.norm());

  Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
  e1[0] = 1.0;
  e2[1] = 1.0;
  CHECK(dist(e1, e2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(lifted_dist_sq(e1, e2) == doctest::Approx(2.0));

  const Vec a = random_signal(rng, 3), b = random_signal(rng, 3);
  const double dense = (a * a.adjoint() - b * b.adjoint()).squaredNorm();
  CHECK(lifted_dist_sq(a, b) == doctest::Approx(dense).epsilon(1e-12));
  CHECK(lifted_dist_sq(a, a) <= 1e-12);

  // squared-distance identity, as computed
  const double lhs = dist_sq(a, b) + 2.0 * std::abs(a.dot(b));
  const double rhs = a.squaredNorm() + b.squaredNorm();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-15));

  CHECK_THROWS_AS(dist(a, random_signal(rng, 4)), DimensionError);
}

TEST_CASE("lifted-error decomposition") {
  Rng rng(109);
  for (int i = 0; i < 20; ++i) {
    const Vec rho = random_signal(rng, 5);
    const Vec rho_t = random_unit(rng, 5);
    const Vec aligned = phase_align(rho_t, rho);  // closest solution to rho
    const Vec err = rho - aligned;
    const Mat lhs = rho * rho.adjoint() - aligned * aligned.adjoint();
    const Mat rhs = err * err.adjoint() + err * aligned.adjoint() + aligned * err.adjoint();
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm()));
  }
}

TEST_CASE("lifted/signal distance sandwich on the solution neighborhood") {
  Rng rng(113);
  for (double eps : {0.1, 0.3, 0.5}) {
    const double lo = std::sqrt((1.0 - eps) * (2.0 - eps));
    const double hi = 2.0 + eps;
    for (int i = 0; i < 1000; ++i) {
      const Vec rho_t = random_unit(rng, 4);
      Vec w = random_signal(rng, 4);
      w *= eps * rng.uniform01() / w.norm();
      const Vec rho = rotate(rho_t + w, 2.0 * std::numbers::pi * rng.uniform01());
      const double d = dist(rho, rho_t);
      const double lifted = std::sqrt(std::max(0.0, lifted_dist_sq(rho, rho_t)));
      CHECK(lifted >= lo * d - 1e-9);
      CHECK(lifted <= hi * d + 1e-9);
    }
  }
}

TEST_CASE("step_size: schedules") {
  CHECK(step_size(2500, RampStep{33000.0, 0.2}) == doctest::Approx(0.073).epsilon(0.01));
  CHECK(step_size(2500, RampStep{33000.0, 0.2}) > 0.0725);
  CHECK(step_size(2500, RampStep{33000.0, 0.2}) < 0.0735);
  CHECK(step_size(4'000'000, RampStep{33000.0, 0.2}) == doctest::Approx(0.2));
  for (std::int64_t k : {std::int64_t(1), std::int64_t(10), std::int64_t(999)})
    CHECK(step_size(k, FixedStep{0.1}) == 0.1);
  CHECK_THROWS_AS(step_size(0, FixedStep{0.1}), ConfigError);
}

TEST_CASE("solve: fixed point at the truth") {
  Rng rng(127);
  auto ens = gauss::gen_gaussian_ensemble(6, 18, 71);
  const Vec rho_t = random_signal(rng, 6);
  const Vec data = forward_correlate(ens, rho_t);
  SolverConfig config;
  config.max_iters = 50;
  config.schedule = FixedStep{0.1};
  SolveOptions options;
  options.truth = &rho_t;
  options.init_override = &rho_t;
  const SolverTrace trace = solve(ens, data, config, options);
  CHECK((trace.final_estimate - rho_t).norm() <= 1e-12 * rho_t.norm());
  for (const auto& rec : trace.iterations) CHECK(rec.objective <= 1e-18);
}

TEST_CASE("solve: geometric decay with a fixed step") {
  auto ens = gauss::gen_gaussian_ensemble(32, 160, 73);
  const Vec rho_t = gauss::gen_signal({gauss::SignalKind::RandomGaussian, 32, 0}, 79);
  const Vec data = forward_correlate(ens, rho_t);
  SolverConfig config;
  config.max_iters = 600;
  config.schedule = FixedStep{0.05};
  config.record_every = 10;
  SolveOptions options;
  options.truth = &rho_t;
  const SolverTrace trace = solve(ens, data, config, options);

  std::vector<double> ks, logd;
  for (const auto& rec : trace.iterations) {
    if (rec.k >= 300 && rec.dist_to_truth && *rec.dist_to_truth > 0) {
      ks.push_back(double(rec.k));
      logd.push_back(std::log(*rec.dist_to_truth * *rec.dist_to_truth));
    }
  }
  CHECK(ks.size() >= 10);
  CHECK(linear_fit_r2(ks, logd) > 0.99);
  CHECK(trace.iterations.back().objective < trace.iterations.front().objective);
}

TEST_CASE("solve: trace bookkeeping") {
  auto ens = gauss::gen_gaussian_ensemble(8, 24, 83);
  Rng rng(131);
  const Vec rho_t = random_signal(rng, 8);
  const Vec data = forward_correlate(ens, rho_t);
  SolverConfig config;
  config.max_iters = 40;
  config.schedule = RampStep{100.0, 0.5};
  config.record_every = 7;
  SolveOptions options;
  options.truth = &rho_t;
  const SolverTrace trace = solve(ens, data, config, options);

  CHECK(trace.iterations.front().k == 0);
  CHECK(trace.iterations.front().flops == flops_spectral_init(8, 24));
  CHECK(trace.iterations.back().k == 40);
  for (size_t i = 1; i < trace.iterations.size(); ++i) {
    CHECK(trace.iterations[i].flops > trace.iterations[i - 1].flops);
    CHECK(trace.iterations[i].objective >= 0.0);
    CHECK(std::isfinite(trace.iterations[i].objective));
  }
  const std::uint64_t expected =
      flops_spectral_init(8, 24) + 40ULL * flops_per_gwf_iter(8, 24);
  CHECK(trace.iterations.back().flops == expected);
}

TEST_CASE("solve: stop_tol cuts the run short") {
  auto ens = gauss::gen_gaussian_ensemble(8, 64, 89);
  Rng rng(137);
  const Vec rho_t = random_signal(rng, 8);
  const Vec data = forward_correlate(ens, rho_t);
  SolverConfig config;
  config.max_iters = 5000;
  config.schedule = FixedStep{0.2};
  config.stop_tol = 1e-9;
  config.record_every = 100;
  const SolverTrace trace = solve(ens, data, config);
  CHECK(trace.iterations.back().k < 5000);
}

TEST_CASE("solve: divergence carries the finite trace") {
  auto ens = gauss::gen_gaussian_ensemble(6, 12, 97);
  Rng rng(139);
  const Vec rho_t = random_signal(rng, 6);
  const Vec data = forward_correlate(ens, rho_t);
  SolverConfig config;
  config.max_iters = 500;
  config.schedule = FixedStep{1.0};  // far beyond the stable range
  config.normalize_by_init = false;  // makes the blow-up immediate
  bool thrown = false;
  try {
    solve(ens, data, config);
  } catch (const DivergenceError& e) {
    thrown = true;
    CHECK_FALSE(e.trace.iterations.empty());
    for (const auto& rec : e.trace.iterations) CHECK(std::isfinite(rec.objective));
  }
  CHECK(thrown);
}

TEST_CASE("solve: config validation") {
  SolverConfig config;
  config.max_iters = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config.max_iters = 10;
  config.schedule = RampStep{33000.0, 1.5};
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config.schedule = RampStep{-1.0, 0.2};
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config.schedule = FixedStep{0.1};
  config.stop_tol = -1.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
}
