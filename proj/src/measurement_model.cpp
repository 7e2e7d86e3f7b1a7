#include "gwf/measurement_model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace gwf {

Vec forward_correlate(const MeasurementEnsemble& ensemble, const Vec& rho) {
  require_signal_dim(ensemble, rho, "forward_correlate");
  const Vec fi = ensemble.left.adjoint() * rho;
  const Vec fj = ensemble.right.adjoint() * rho;
  return fi.cwiseProduct(fj.conjugate());
}

Vec lifted_apply(const MeasurementEnsemble& ensemble, const Mat& x) {
  require_lifted_dim(ensemble, x, "lifted_apply");
  const Mat t = x * ensemble.right;  // column m = X L_j^m
  Vec out(ensemble.m_count());
  for (Index m = 0; m < ensemble.m_count(); ++m)
    out[m] = ensemble.left.col(m).dot(t.col(m));  // Eigen dot conjugates the left factor
  return out;
}

Mat lifted_adjoint(const MeasurementEnsemble& ensemble, const Vec& y) {
  require_data_dim(ensemble, y, "lifted_adjoint");
  // evaluated as (L_i diag(y)) L_j^H; the blocked product is deterministic
  // for a given build, which is what trace reproducibility needs
  Mat scaled = ensemble.left * y.asDiagonal();
  Mat out(ensemble.n(), ensemble.n());
  out.noalias() = scaled * ensemble.right.adjoint();
  return out;
}

Mat project_symmetric(const Mat& x) {
  if (x.rows() != x.cols())
    throw DimensionError("project_symmetric: input must be square, got " +
                         std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
  return 0.5 * (x + x.adjoint());
}

bool is_hermitian(const Mat& x, double tol) {
  if (x.rows() != x.cols()) return false;
  return (x - x.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_psd(const Mat& x, double tol) {
  if (!is_hermitian(x, 1e-10)) return false;
  Eigen::SelfAdjointEigenSolver<Mat> eig(project_symmetric(x), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -tol;
}

Mat project_psd(const Mat& x, double hermitian_tol) {
  if (x.rows() != x.cols())
    throw DimensionError("project_psd: input must be square");
  const Mat h = is_hermitian(x, hermitian_tol) ? Mat(0.5 * (x + x.adjoint())) : project_symmetric(x);
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  if (eig.info() != Eigen::Success)
    throw Error("project_psd: eigendecomposition failed, |X|_F = " +
                std::to_string(h.norm()) + ", max |entry| = " +
                std::to_string(h.cwiseAbs().maxCoeff()));
  const RealVec clamped = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().adjoint();
}

namespace {

// Rotate v so its largest-magnitude entry (lowest index on ties) is
// real-positive.
void fix_phase(Vec& v) {
  Index best = 0;
  double best_mag = -1.0;
  for (Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  if (best_mag <= 0.0) return;
  const Complex pivot = v[best];
  v *= std::conj(pivot) / std::abs(pivot);
  v[best] = Complex(std::abs(v[best]), 0.0);  // kill residual imaginary dust
}

// Shifted power iteration for the leading (largest) eigenvalue of a Hermitian
// matrix. The Frobenius-norm shift makes the target eigenvalue dominant in
// magnitude regardless of the spectrum's sign pattern.
Rank1Projection power_leading(const Mat& h) {
  const Index n = h.rows();
  const double shift = h.norm();
  // deterministic non-degenerate start: decaying ramp with an imaginary tilt
  Vec v(n);
  for (Index k = 0; k < n; ++k) v[k] = Complex(1.0 / double(k + 1), 0.5 / double(k + 2));
  v.normalize();
  double lambda = 0.0;
  const int max_iters = 5000;
  const double tol = 1e-10;
  for (int it = 0; it < max_iters; ++it) {
    Vec w = h * v + shift * v;
    const double norm = w.norm();
    if (norm == 0.0) break;
    w /= norm;
    const Vec hv = h * w;
    lambda = std::real(w.dot(hv));
    const double resid = (hv - lambda * w).norm();
    v = std::move(w);
    if (resid <= tol * std::max(1.0, shift)) break;
  }
  Rank1Projection out;
  out.eigenvalue = lambda;
  out.eigenvector = std::move(v);
  return out;
}

}  // namespace

Rank1Projection project_rank1_psd(const Mat& x, Index dense_threshold) {
  if (x.rows() != x.cols())
    throw DimensionError("project_rank1_psd: input must be square");
  const Index n = x.rows();
  if (x.cwiseAbs().maxCoeff() == 0.0) {
    Rank1Projection out;
    out.eigenvalue = 0.0;
    out.eigenvector = Vec::Zero(n);
    out.eigenvector[0] = 1.0;
    out.degenerate = true;
    return out;
  }
  Rank1Projection out;
  if (n <= dense_threshold) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(x);
    if (eig.info() != Eigen::Success)
      throw Error("project_rank1_psd: eigendecomposition failed");
    out.eigenvalue = eig.eigenvalues()[n - 1];  // ascending order
    out.eigenvector = eig.eigenvectors().col(n - 1);
  } else {
    out = power_leading(x);
  }
  if (out.eigenvalue < 0.0) out.eigenvalue = 0.0;
  fix_phase(out.eigenvector);
  return out;
}

}  // namespace gwf
