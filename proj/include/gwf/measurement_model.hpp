#ifndef GWF_MEASUREMENT_MODEL_HPP
#define GWF_MEASUREMENT_MODEL_HPP

#include "gwf/types.hpp"

namespace gwf {

/// Cross-correlation measurement map: values[m] = (L_i^m)^H rho * conj((L_j^m)^H rho).
/// For a phase-retrieval ensemble (left == right) this reduces to squared
/// magnitudes of linear measurements.
Vec forward_correlate(const MeasurementEnsemble& ensemble, const Vec& rho);

/// Linear lifted map C^{NxN} -> C^M: output[m] = (L_i^m)^H X L_j^m.
/// Evaluated as (X * right) contracted against left, per-m results are
/// independent so no cross-m accumulation order is involved.
Vec lifted_apply(const MeasurementEnsemble& ensemble, const Mat& x);

/// Adjoint of lifted_apply (backprojection): sum_m y[m] L_i^m (L_j^m)^H,
/// evaluated as a scaled matrix product. Deterministic for a fixed build.
Mat lifted_adjoint(const MeasurementEnsemble& ensemble, const Vec& y);

/// Frobenius-nearest Hermitian matrix, (X + X^H)/2.
Mat project_symmetric(const Mat& x);

/// Projection onto the PSD cone: Hermitian eigendecomposition with negative
/// eigenvalues clamped to zero. Input is symmetrized first when it deviates
/// from Hermitian by more than `hermitian_tol` in max-abs norm.
Mat project_psd(const Mat& x, double hermitian_tol = 1e-10);

struct Rank1Projection {
  double eigenvalue = 0.0;  // leading eigenvalue clamped at 0
  Vec eigenvector;          // unit norm, largest-magnitude entry real-positive
  bool degenerate = false;  // all-zero input
};

/// Leading eigenpair of a Hermitian matrix; lambda0 * v0 v0^H is the nearest
/// rank-1 PSD matrix in Frobenius norm. Dense decomposition up to
/// `dense_threshold`, shifted power iteration (tol 1e-10, <= 5000 sweeps)
/// above it. The eigenvector phase is fixed by rotating the largest-magnitude
/// component (lowest index on ties) to the positive real axis.
Rank1Projection project_rank1_psd(const Mat& x, Index dense_threshold = 2048);

/// True when max |X - X^H| entry is below tol.
bool is_hermitian(const Mat& x, double tol = 1e-14);

/// True when the smallest eigenvalue of the Hermitian part exceeds -tol.
bool is_psd(const Mat& x, double tol = 1e-12);

}  // namespace gwf

#endif  // GWF_MEASUREMENT_MODEL_HPP
