#ifndef GWF_LRMR_HPP
#define GWF_LRMR_HPP

#include "gwf/solver.hpp"
#include "gwf/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gwf::lrmr {

enum class UzawaVariant { TraceReg, Rank1, PsdOnly };

std::string variant_name(UzawaVariant v);

struct UzawaConfig {
  UzawaVariant variant = UzawaVariant::Rank1;
  double lambda = 0.0;      // trace-regularization weight (TraceReg only)
  double step = 0.0;        // dual step mu_k; 0 selects the default 1/M
  std::int64_t max_iters = 110;
  std::int64_t record_every = 1;

  void validate() const;
};

/// Spectral shrinkage on a Hermitian matrix: each eigenvalue lambda is
/// replaced by sign(lambda) * max(|lambda| - tau, 0). Non-Hermitian input is
/// symmetrized first.
Mat svt_shrink(const Mat& x, double tau);

struct UzawaState {
  Mat x;
  Vec nu;
};

/// One primal/dual sweep:
///   X'  = Proj_variant(P_S(F^H(nu)))       (TraceReg: P_+ after shrinkage
///                                            with tau = mu*lambda; Rank1:
///                                            rank-1 cut after P_+; PsdOnly:
///                                            P_+ alone)
///   nu' = nu + mu (d - F(X')).
/// Backprojections of cross-correlated data are not Hermitian, so every
/// variant symmetrizes before the spectral projections.
UzawaState uzawa_step(const MeasurementEnsemble& ensemble, const Vec& data,
                      const UzawaState& state, const UzawaConfig& config);

struct LiftedRecord {
  std::int64_t k = 0;
  double lifted_mse = 0.0;   // |X_k - truth truth^H|_F^2 (0 when no truth)
  double signal_mse = 0.0;   // error of the best rank-1 signal extraction
  double residual = 0.0;     // |F(X_k) - d|^2
  std::uint64_t flops = 0;
};

struct LiftedTrace {
  std::vector<LiftedRecord> iterations;
  Mat final_matrix;
};

std::uint64_t flops_per_uzawa_iter(Index n, Index m);

/// |F|_2^2, the largest eigenvalue of F F^H, by power iteration. The dual
/// ascent is stable for steps below 2 over this value; for near-isometric
/// ensembles it is close to M, recovering the 1/M default.
double lifted_op_norm_sq(const MeasurementEnsemble& ensemble, int iters = 40);

struct UzawaOptions {
  const Vec* truth = nullptr;
  /// Custom signal-domain error for the trace, evaluated on the rank-1
  /// extraction sqrt(lambda0) v0 of each iterate; defaults to squared dist
  /// to `truth`.
  std::function<double(const Vec&)> signal_error_fn;
};

/// Full Uzawa run. The dual variable warm-starts at nu_0 = d/M (one 1/M-step
/// dual update from X = 0), so the first recorded matrix iterate of the
/// Rank1 variant coincides with the GWF spectral-method estimate
/// lambda_0 rho_0 rho_0^H.
LiftedTrace uzawa_solve(const MeasurementEnsemble& ensemble, const Vec& data,
                        const UzawaConfig& config, const UzawaOptions& options = {});

}  // namespace gwf::lrmr

#endif  // GWF_LRMR_HPP
