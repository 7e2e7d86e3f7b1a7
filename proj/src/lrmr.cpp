#include "gwf/lrmr.hpp"

#include "gwf/measurement_model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace gwf::lrmr {

std::string variant_name(UzawaVariant v) {
  switch (v) {
    case UzawaVariant::TraceReg: return "uzawa_trace";
    case UzawaVariant::Rank1: return "uzawa_rank1";
    case UzawaVariant::PsdOnly: return "uzawa_psd";
  }
  return "uzawa_unknown";
}

void UzawaConfig::validate() const {
  if (lambda < 0.0) throw ConfigError("UzawaConfig: lambda must be >= 0");
  if (step < 0.0) throw ConfigError("UzawaConfig: step must be >= 0 (0 = 1/M default)");
  if (max_iters < 1) throw ConfigError("UzawaConfig: max_iters must be >= 1");
  if (record_every < 1) throw ConfigError("UzawaConfig: record_every must be >= 1");
}

Mat svt_shrink(const Mat& x, double tau) {
  if (x.rows() != x.cols()) throw DimensionError("svt_shrink: input must be square");
  if (tau < 0.0) throw ConfigError("svt_shrink: tau must be >= 0");
  const Mat h = project_symmetric(x);
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  if (eig.info() != Eigen::Success) throw Error("svt_shrink: eigendecomposition failed");
  RealVec vals = eig.eigenvalues();
  for (Index i = 0; i < vals.size(); ++i) {
    const double mag = std::max(std::abs(vals[i]) - tau, 0.0);
    vals[i] = vals[i] < 0.0 ? -mag : mag;
  }
  return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint();
}

namespace {

struct ProjectedIterate {
  Mat x;
  double lambda0 = 0.0;  // leading eigenvalue (clamped at 0)
  Vec v0;                // leading eigenvector
};

// All three variants act on the spectrum of the symmetrized backprojection,
// so a single eigendecomposition serves the projection and the rank-1
// signal extraction.
ProjectedIterate project_variant(const Mat& back, const UzawaConfig& config, double tau) {
  const Mat h = project_symmetric(back);
  Eigen::SelfAdjointEigenSolver<Mat> eig(h);
  if (eig.info() != Eigen::Success) throw Error("uzawa_step: eigendecomposition failed");
  const RealVec& vals = eig.eigenvalues();  // ascending
  const Index n = vals.size();

  RealVec projected;
  switch (config.variant) {
    case UzawaVariant::TraceReg: {
      // shrink, then clamp to the PSD cone
      projected = ((vals.array().abs() - tau).max(0.0) * vals.array().sign()).max(0.0);
      break;
    }
    case UzawaVariant::PsdOnly: {
      projected = vals.cwiseMax(0.0);
      break;
    }
    case UzawaVariant::Rank1: {
      projected = RealVec::Zero(n);
      projected[n - 1] = std::max(vals[n - 1], 0.0);
      break;
    }
  }

  ProjectedIterate out;
  if (config.variant == UzawaVariant::Rank1) {
    out.x = projected[n - 1] * eig.eigenvectors().col(n - 1) *
            eig.eigenvectors().col(n - 1).adjoint();
  } else {
    out.x = eig.eigenvectors() * projected.asDiagonal() * eig.eigenvectors().adjoint();
  }
  // leading eigenpair of X' (spectrum maps used above are order-preserving)
  out.lambda0 = projected[n - 1];
  out.v0 = eig.eigenvectors().col(n - 1);
  return out;
}

}  // namespace

UzawaState uzawa_step(const MeasurementEnsemble& ensemble, const Vec& data,
                      const UzawaState& state, const UzawaConfig& config) {
  config.validate();
  require_data_dim(ensemble, data, "uzawa_step");
  if (state.nu.size() != ensemble.m_count())
    throw DimensionError("uzawa_step: dual variable length mismatch");
  const double mu = config.step > 0.0 ? config.step : 1.0 / double(ensemble.m_count());
  const Mat back = lifted_adjoint(ensemble, state.nu);
  ProjectedIterate proj = project_variant(back, config, mu * config.lambda);
  UzawaState next;
  next.nu = state.nu + mu * (data - lifted_apply(ensemble, proj.x));
  next.x = std::move(proj.x);
  return next;
}

std::uint64_t flops_per_uzawa_iter(Index n, Index m) {
  // backprojection + eigendecomposition + forward apply, same documented
  // constants as the GWF spectral initialization
  return flops_spectral_init(n, m);
}

double lifted_op_norm_sq(const MeasurementEnsemble& ensemble, int iters) {
  // power iteration on F F^H over the measurement space
  Vec v = Vec::Ones(ensemble.m_count());
  v /= v.norm();
  double norm_sq = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec w = lifted_apply(ensemble, lifted_adjoint(ensemble, v));
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    norm_sq = n;  // Rayleigh estimate of the top eigenvalue of F F^H
    v = w / n;
  }
  return norm_sq;
}

LiftedTrace uzawa_solve(const MeasurementEnsemble& ensemble, const Vec& data,
                        const UzawaConfig& config, const UzawaOptions& options) {
  config.validate();
  require_data_dim(ensemble, data, "uzawa_solve");
  if (options.truth) require_signal_dim(ensemble, *options.truth, "uzawa_solve(truth)");

  const Index n = ensemble.n();
  const Index m = ensemble.m_count();
  const double mu = config.step > 0.0 ? config.step : 1.0 / double(m);
  const std::uint64_t iter_flops = flops_per_uzawa_iter(n, m);

  Mat truth_lifted;
  if (options.truth) truth_lifted = (*options.truth) * options.truth->adjoint();

  LiftedTrace trace;
  std::uint64_t flops = 0;

  // warm start: dual variable set to the backprojection-normalized data, so
  // the first matrix iterate of the Rank1 variant reproduces the spectral-
  // method estimate whatever the dual step is
  Vec nu = data / double(m);
  Mat x = Mat::Zero(n, n);

  for (std::int64_t k = 1; k <= config.max_iters; ++k) {
    const Mat back = lifted_adjoint(ensemble, nu);
    ProjectedIterate proj = project_variant(back, config, mu * config.lambda);
    x = std::move(proj.x);
    const Vec synth = lifted_apply(ensemble, x);
    nu += mu * (data - synth);
    flops += iter_flops;

    const double residual = (synth - data).squaredNorm();
    if (!std::isfinite(residual) || !x.allFinite())
      throw DivergenceError("uzawa_solve: iterate became non-finite at k=" + std::to_string(k),
                            SolverTrace{});

    if (k % config.record_every == 0 || k == config.max_iters) {
      LiftedRecord rec;
      rec.k = k;
      rec.flops = flops;
      rec.residual = residual;
      if (options.truth) rec.lifted_mse = (x - truth_lifted).squaredNorm();
      const Vec extracted = std::sqrt(proj.lambda0) * proj.v0;
      if (options.signal_error_fn) {
        rec.signal_mse = options.signal_error_fn(extracted);
      } else if (options.truth) {
        rec.signal_mse = dist_sq(extracted, *options.truth);
      }
      trace.iterations.push_back(std::move(rec));
    }
  }

  trace.final_matrix = std::move(x);
  return trace;
}

}  // namespace gwf::lrmr
