#include "gwf/theory.hpp"

#include "gwf/gaussian.hpp"
#include "gwf/measurement_model.hpp"
#include "gwf/random.hpp"

#include <cmath>
#include <stdexcept>

namespace gwf::theory {

RecoveryConstants constants_from_delta1(double delta1) {
  if (!(delta1 >= 0.0) || delta1 >= 1.0)
    throw std::domain_error("constants_from_delta1: delta1 must lie in [0, 1), got " +
                            std::to_string(delta1));
  const double kappa = delta1 / (1.0 - delta1);
  if (kappa > 1.0)
    throw std::domain_error("constants_from_delta1: delta1/(1-delta1) exceeds 1 at delta1 = " +
                            std::to_string(delta1) + "; epsilon is undefined");
  RecoveryConstants out;
  out.delta1 = delta1;
  const double eps_sq =
      (2.0 + delta1) * (1.0 - std::sqrt(1.0 - kappa)) + delta1 * delta1 / 8.0;
  out.epsilon = std::sqrt(eps_sq);
  const double eps = out.epsilon;
  out.delta2 = std::sqrt(2.0) * (2.0 + eps) * delta1 / std::sqrt((1.0 - eps) * (2.0 - eps));
  out.c = (2.0 + eps) * (1.0 + eps) * (1.0 + delta1);
  out.h = (1.0 - out.delta2) * (1.0 - eps) * (2.0 - eps);
  return out;
}

bool regularity_feasible(const RecoveryConstants& constants, double alpha_prime,
                         double beta_prime) {
  if (alpha_prime <= 0.0 || beta_prime <= 0.0)
    throw std::domain_error("regularity_feasible: alpha', beta' must be positive");
  if (alpha_prime * beta_prime <= 4.0) return false;
  const double lhs = (1.0 + constants.delta1) / alpha_prime +
                     constants.c * constants.c /
                         ((1.0 - constants.delta1) * beta_prime);
  return lhs <= constants.h;
}

std::vector<RecoveryConstants> figure1_curves(std::span<const double> delta1_grid) {
  std::vector<RecoveryConstants> rows;
  rows.reserve(delta1_grid.size());
  for (double d : delta1_grid) {
    if (d < 0.0 || d > 0.214)
      throw std::domain_error("figure1_curves: grid point " + std::to_string(d) +
                              " outside [0, 0.214]");
    rows.push_back(constants_from_delta1(d));
  }
  return rows;
}

RicEstimate estimate_ric_rank1(const MeasurementEnsemble& ensemble, int trials,
                               std::uint64_t seed) {
  if (trials < 1) throw ConfigError("estimate_ric_rank1: trials must be >= 1");
  if (ensemble.phase_retrieval)
    throw std::invalid_argument(
        "estimate_ric_rank1: ensemble is flagged phase-retrieval; the rank-1 PSD "
        "near-isometry does not hold for auto-correlated measurements");
  const Index n = ensemble.n();
  const double m = double(ensemble.m_count());
  RicEstimate out;
  out.samples.reserve(size_t(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, 0x52491Cu, std::uint64_t(t)));
    Vec rho(n);
    for (Index k = 0; k < n; ++k) rho[k] = rng.complex_normal(1.0 / std::sqrt(2.0));
    const double norm = rho.norm();
    if (norm > 0.0) rho /= norm;
    const double lifted_norm_sq = 1.0;  // |rho rho^H|_F^2 = |rho|^4
    const double mapped = forward_correlate(ensemble, rho).squaredNorm();
    const double sample = std::abs(mapped / (m * lifted_norm_sq) - 1.0);
    out.samples.push_back(sample);
    if (sample > out.delta_hat) out.delta_hat = sample;
  }
  return out;
}

double spectral_expectation_check(int n, int m, int ensembles, std::uint64_t seed,
                                  bool phase_retrieval) {
  if (n < 1 || m < 1 || ensembles < 1)
    throw ConfigError("spectral_expectation_check: counts must be >= 1");
  Rng truth_rng(derive_seed(seed, 0x7271u));
  Vec rho_t(n);
  for (Index k = 0; k < n; ++k) rho_t[k] = truth_rng.complex_normal(1.0 / std::sqrt(2.0));
  rho_t /= rho_t.norm();
  const Mat truth_lifted = rho_t * rho_t.adjoint();

  Mat mean = Mat::Zero(n, n);
  for (int e = 0; e < ensembles; ++e) {
    MeasurementEnsemble ens = gauss::gen_gaussian_ensemble(n, m, derive_seed(seed, 0xE52u, e));
    if (phase_retrieval) ens = MeasurementEnsemble(ens.left, ens.left, true);
    const Vec d = forward_correlate(ens, rho_t);  // = F(rho_t rho_t^H)
    mean += lifted_adjoint(ens, d) / double(m);
  }
  mean /= double(ensembles);

  // spectral norm via the largest singular value
  Eigen::JacobiSVD<Mat> svd(mean - truth_lifted);
  return svd.singularValues()[0];
}

}  // namespace gwf::theory
