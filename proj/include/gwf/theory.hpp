#ifndef GWF_THEORY_HPP
#define GWF_THEORY_HPP

#include "gwf/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gwf::theory {

/// Closed-form constants of the exact-recovery condition as functions of the
/// rank-1 PSD restricted isometry constant delta1:
///   epsilon^2 = (2 + d1)(1 - sqrt(1 - d1/(1 - d1))) + d1^2/8
///   delta2    = sqrt(2) (2 + eps) d1 / sqrt((1 - eps)(2 - eps))
///   c         = (2 + eps)(1 + eps)(1 + d1)
///   h         = (1 - delta2)(1 - eps)(2 - eps)
struct RecoveryConstants {
  double delta1 = 0.0;
  double epsilon = 0.0;
  double delta2 = 0.0;
  double c = 2.0;
  double h = 2.0;
};

/// Valid for 0 <= delta1 < 1 with delta1/(1 - delta1) <= 1 (i.e. delta1 <= 1/2);
/// throws std::domain_error outside.
RecoveryConstants constants_from_delta1(double delta1);

/// Whether fixed regularity constants alpha', beta' are admissible:
/// (1 + d1)/alpha' + c^2/((1 - d1) beta') <= h and alpha' beta' > 4.
bool regularity_feasible(const RecoveryConstants& constants, double alpha_prime,
                         double beta_prime);

/// Evaluate the constants over a grid of delta1 values in [0, 0.214].
std::vector<RecoveryConstants> figure1_curves(std::span<const double> delta1_grid);

struct RicEstimate {
  double delta_hat = 0.0;        // max over probes; a lower bound on the RIC
  std::vector<double> samples;   // per-probe |  |F(rr^H)|^2 / (M |rr^H|_F^2) - 1 |
};

/// Sample-based lower bound on the rank-1 PSD restricted isometry constant of
/// the 1/sqrt(M)-normalized lifted map: draws `trials` complex-Gaussian unit
/// probes (probe t depends only on (seed, t), so estimates are monotone in
/// `trials` for a fixed seed) and maximizes the isometry defect. Refuses
/// ensembles flagged as phase-retrieval: auto-correlation backprojections
/// carry an identity bias that breaks the near-isometry this bound measures.
RicEstimate estimate_ric_rank1(const MeasurementEnsemble& ensemble, int trials,
                               std::uint64_t seed);

/// Spectral-norm deviation | mean_e Y_e - rho_t rho_t^H | of the normalized
/// backprojected lifted truth Y = (1/M) F^H F(rho_t rho_t^H), averaged over
/// `ensembles` independently drawn Gaussian ensembles with a fixed seeded
/// unit rho_t. With cross-correlation pairs the deviation decays with M and
/// the ensemble count; with phase-retrieval pairs (left == right) it
/// approaches 1, the norm of the identity bias.
double spectral_expectation_check(int n, int m, int ensembles, std::uint64_t seed,
                                  bool phase_retrieval = false);

}  // namespace gwf::theory

#endif  // GWF_THEORY_HPP
