#include "gwf/solver.hpp"

#include "gwf/measurement_model.hpp"

#include <cmath>

namespace gwf {

double step_size(std::int64_t k, const StepSchedule& schedule) {
  if (k < 1) throw ConfigError("step_size: iteration index must be >= 1");
  if (const auto* fixed = std::get_if<FixedStep>(&schedule)) return fixed->mu;
  const auto& ramp = std::get<RampStep>(schedule);
  return std::min(1.0 - std::exp(-double(k) / ramp.tau0), ramp.mu_max);
}

void SolverConfig::validate() const {
  if (max_iters < 1) throw ConfigError("SolverConfig: max_iters must be >= 1");
  if (record_every < 1) throw ConfigError("SolverConfig: record_every must be >= 1");
  if (stop_tol < 0.0) throw ConfigError("SolverConfig: stop_tol must be >= 0");
  if (const auto* fixed = std::get_if<FixedStep>(&schedule)) {
    if (fixed->mu <= 0.0) throw ConfigError("SolverConfig: fixed step mu must be > 0");
  } else {
    const auto& ramp = std::get<RampStep>(schedule);
    if (ramp.tau0 <= 0.0) throw ConfigError("SolverConfig: ramp tau0 must be > 0");
    if (ramp.mu_max <= 0.0 || ramp.mu_max > 1.0)
      throw ConfigError("SolverConfig: ramp mu_max must lie in (0, 1]");
  }
}

namespace {

struct GradientParts {
  Vec gradient;
  double objective = 0.0;
};

// Shared evaluation: the linear terms a = L_i^H rho, b = L_j^H rho feed the
// residual e = a .* conj(b) - d, the objective |e|^2/2M and the gradient
// (L_j (conj(e) .* a) + L_i (e .* b)) / 2M.
GradientParts eval(const MeasurementEnsemble& ensemble, const Vec& data, const Vec& rho) {
  const double m = double(ensemble.m_count());
  const Vec a = ensemble.left.adjoint() * rho;
  const Vec b = ensemble.right.adjoint() * rho;
  const Vec e = a.cwiseProduct(b.conjugate()) - data;
  GradientParts parts;
  parts.objective = e.squaredNorm() / (2.0 * m);
  parts.gradient =
      (ensemble.right * e.conjugate().cwiseProduct(a) + ensemble.left * e.cwiseProduct(b)) /
      (2.0 * m);
  return parts;
}

}  // namespace

double objective(const MeasurementEnsemble& ensemble, const Vec& data, const Vec& rho) {
  require_signal_dim(ensemble, rho, "objective");
  require_data_dim(ensemble, data, "objective");
  const Vec e = forward_correlate(ensemble, rho) - data;
  return e.squaredNorm() / (2.0 * double(ensemble.m_count()));
}

Vec gradient(const MeasurementEnsemble& ensemble, const Vec& data, const Vec& rho) {
  require_signal_dim(ensemble, rho, "gradient");
  require_data_dim(ensemble, data, "gradient");
  return eval(ensemble, data, rho).gradient;
}

SpectralInit spectral_init(const MeasurementEnsemble& ensemble, const Vec& data) {
  require_data_dim(ensemble, data, "spectral_init");
  const Mat xhat =
      project_symmetric(lifted_adjoint(ensemble, data)) / double(ensemble.m_count());
  const Rank1Projection top = project_rank1_psd(xhat);
  if (top.degenerate || top.eigenvalue <= 0.0)
    throw InitializationError(
        "spectral_init: leading eigenvalue of the spectral matrix is not positive (" +
        std::to_string(top.eigenvalue) + "); backprojection carries no dominant component");
  SpectralInit init;
  init.lambda0 = top.eigenvalue;
  init.rho0 = std::sqrt(top.eigenvalue) * top.eigenvector;
  return init;
}

double dist_sq(const Vec& rho, const Vec& rho_t) {
  if (rho.size() != rho_t.size())
    throw DimensionError("dist: length mismatch, " + std::to_string(rho.size()) + " vs " +
                         std::to_string(rho_t.size()));
  return rho.squaredNorm() + rho_t.squaredNorm() - 2.0 * std::abs(rho.dot(rho_t));
}

double dist(const Vec& rho, const Vec& rho_t) {
  return std::sqrt(std::max(0.0, dist_sq(rho, rho_t)));
}

double lifted_dist_sq(const Vec& rho, const Vec& rho_t) {
  if (rho.size() != rho_t.size())
    throw DimensionError("lifted_dist_sq: length mismatch");
  const double n1 = rho.squaredNorm();
  const double n2 = rho_t.squaredNorm();
  const double ip = std::abs(rho.dot(rho_t));
  return n1 * n1 + n2 * n2 - 2.0 * ip * ip;
}

Vec phase_align(const Vec& rho, const Vec& rho_t) {
  if (rho.size() != rho_t.size())
    throw DimensionError("phase_align: length mismatch");
  const Complex ip = rho_t.dot(rho);  // <rho_t, rho> = rho_t^H rho
  const double mag = std::abs(ip);
  if (mag == 0.0) return rho;
  return (std::conj(ip) / mag) * rho;
}

std::uint64_t flops_per_gwf_iter(Index n, Index m) {
  return 8ULL * std::uint64_t(m) * std::uint64_t(n);
}

std::uint64_t flops_spectral_init(Index n, Index m) {
  const auto un = std::uint64_t(n);
  const auto um = std::uint64_t(m);
  return 8ULL * um * un * un + 14ULL * un * un * un;
}

SolverTrace solve(const MeasurementEnsemble& ensemble, const Vec& data,
                  const SolverConfig& config, const SolveOptions& options) {
  config.validate();
  require_data_dim(ensemble, data, "solve");
  if (options.truth) require_signal_dim(ensemble, *options.truth, "solve(truth)");

  SolverTrace trace;
  std::uint64_t flops = 0;

  if (options.init_override) {
    require_signal_dim(ensemble, *options.init_override, "solve(init_override)");
    trace.init_estimate = *options.init_override;
    trace.init_eigenvalue = options.init_override->squaredNorm();
  } else {
    const SpectralInit init = spectral_init(ensemble, data);
    trace.init_estimate = init.rho0;
    trace.init_eigenvalue = init.lambda0;
    flops += flops_spectral_init(ensemble.n(), ensemble.m_count());
  }

  const double scale = config.normalize_by_init
                           ? std::max(trace.init_estimate.squaredNorm(), 1e-300)
                           : 1.0;
  const std::uint64_t iter_flops = flops_per_gwf_iter(ensemble.n(), ensemble.m_count());

  Vec rho = trace.init_estimate;
  const double truth_norm = options.truth ? options.truth->norm() : 0.0;

  auto record = [&](std::int64_t k, double obj, double mu) {
    TraceRecord rec;
    rec.k = k;
    rec.objective = obj;
    rec.step = mu;
    rec.flops = flops;
    if (options.truth) rec.dist_to_truth = dist(rho, *options.truth);
    if (options.relative_error_fn) {
      rec.relative_error = options.relative_error_fn(rho);
    } else if (options.truth && truth_norm > 0.0) {
      rec.relative_error = *rec.dist_to_truth / truth_norm;
    }
    trace.iterations.push_back(rec);
    if (options.observer) options.observer(trace.iterations.back(), rho);
  };

  Vec last_finite = rho;
  GradientParts parts = eval(ensemble, data, rho);
  record(0, parts.objective, 0.0);

  for (std::int64_t k = 1; k <= config.max_iters; ++k) {
    const double prev_obj = parts.objective;
    const double mu = step_size(k, config.schedule);
    rho.noalias() -= (mu / scale) * parts.gradient;
    flops += iter_flops;

    parts = eval(ensemble, data, rho);
    if (!std::isfinite(parts.objective) || !rho.allFinite()) {
      trace.final_estimate = last_finite;  // trace keeps only finite records
      throw DivergenceError("solve: iterate became non-finite at k=" + std::to_string(k),
                            std::move(trace));
    }
    last_finite = rho;

    const bool last = (k == config.max_iters);
    bool stop = false;
    if (config.stop_tol > 0.0 && prev_obj > 0.0) {
      const double rel_change = std::abs(prev_obj - parts.objective) / prev_obj;
      stop = rel_change < config.stop_tol;
    }
    if (k % config.record_every == 0 || last || stop) record(k, parts.objective, mu);
    if (stop) break;
  }

  trace.final_estimate = std::move(rho);
  return trace;
}

}  // namespace gwf
