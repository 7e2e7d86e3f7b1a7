#ifndef GWF_SOLVER_HPP
#define GWF_SOLVER_HPP

#include "gwf/types.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace gwf {

// ---------------------------------------------------------------------------
// Step schedules
// ---------------------------------------------------------------------------

struct FixedStep {
  double mu;
};

/// Gradually increasing step mu_k = min(1 - exp(-k/tau0), mu_max). The growth
/// keeps early updates small while the iterates are still inaccurate.
struct RampStep {
  double tau0;
  double mu_max;
};

using StepSchedule = std::variant<FixedStep, RampStep>;

/// Step size for iteration k >= 1.
double step_size(std::int64_t k, const StepSchedule& schedule);

// ---------------------------------------------------------------------------
// Config / trace
// ---------------------------------------------------------------------------

struct SolverConfig {
  std::int64_t max_iters = 2500;
  StepSchedule schedule = RampStep{33000.0, 0.2};
  bool normalize_by_init = true;  // divide steps by |rho_0|^2
  double stop_tol = 0.0;          // relative objective change; 0 = run max_iters
  std::int64_t record_every = 1;

  void validate() const;
};

struct TraceRecord {
  std::int64_t k = 0;
  double objective = 0.0;
  double step = 0.0;
  std::uint64_t flops = 0;  // cumulative, includes initialization
  std::optional<double> dist_to_truth;
  std::optional<double> relative_error;
};

struct SolverTrace {
  std::vector<TraceRecord> iterations;
  Vec final_estimate;
  Vec init_estimate;
  double init_eigenvalue = 0.0;
};

/// Thrown when an iterate turns non-finite; carries the trace up to the last
/// finite record.
struct DivergenceError : Error {
  DivergenceError(const std::string& what, SolverTrace trace_)
      : Error(what), trace(std::move(trace_)) {}
  SolverTrace trace;
};

// ---------------------------------------------------------------------------
// Objective, gradient, initialization, metrics
// ---------------------------------------------------------------------------

/// J(rho) = (1/2M) sum_m |(L_i^m)^H rho rho^H L_j^m - d_m|^2.
double objective(const MeasurementEnsemble& ensemble, const Vec& data, const Vec& rho);

/// Wirtinger gradient of `objective`,
///   (1/2M) sum_m [conj(e_m) L_j^m (L_i^m)^H + e_m L_i^m (L_j^m)^H] rho,
/// with e_m the synthesized-vs-measured mismatch. Evaluated in factored form
/// (two adjoint products, two forward products), O(MN) per call.
Vec gradient(const MeasurementEnsemble& ensemble, const Vec& data, const Vec& rho);

struct SpectralInit {
  double lambda0 = 0.0;
  Vec rho0;
};

/// Spectral initialization: leading eigenpair (lambda0, v0) of the
/// symmetrized backprojection (1/M) P_S(F^H(d)), returned as
/// rho0 = sqrt(lambda0) v0. A non-positive leading eigenvalue means the
/// near-isometry regime the estimate relies on does not hold; that is
/// reported as an InitializationError.
SpectralInit spectral_init(const MeasurementEnsemble& ensemble, const Vec& data);

/// Squared distance to the nearest phase-rotated copy of rho_t:
/// |rho|^2 + |rho_t|^2 - 2 |<rho, rho_t>|.
double dist_sq(const Vec& rho, const Vec& rho_t);

/// sqrt of dist_sq (clamped at zero against roundoff).
double dist(const Vec& rho, const Vec& rho_t);

/// |rho rho^H - rho_t rho_t^H|_F^2 via the rank-1 reduction
/// |rho|^4 + |rho_t|^4 - 2 |<rho, rho_t>|^2.
double lifted_dist_sq(const Vec& rho, const Vec& rho_t);

/// Phase-align rho to rho_t: returns exp(i Phi) rho with
/// exp(i Phi) = <rho_t, rho> / |<rho, rho_t>| (identity when the inner
/// product vanishes).
Vec phase_align(const Vec& rho, const Vec& rho_t);

// ---------------------------------------------------------------------------
// Solver
// ---------------------------------------------------------------------------

// Documented flop-accounting constants shared with the lifted baselines:
// one gradient iteration costs 8*M*N, the spectral initialization
// 8*M*N^2 + 14*N^3 (backprojection + dense eigendecomposition), and one
// lifted-domain iteration the same as an initialization.
std::uint64_t flops_per_gwf_iter(Index n, Index m);
std::uint64_t flops_spectral_init(Index n, Index m);

struct SolveOptions {
  const Vec* truth = nullptr;          // enables dist / relative-error columns
  const Vec* init_override = nullptr;  // bypass spectral_init (testing)
  /// Custom relative-error metric recorded instead of dist/|truth|
  /// (e.g. magnitude-image error for real reflectivities).
  std::function<double(const Vec&)> relative_error_fn;
  /// Invoked with each recorded iterate (after the trace entry is appended).
  std::function<void(const TraceRecord&, const Vec&)> observer;
};

/// Run spectral initialization followed by steepest-descent updates
/// rho_{k+1} = rho_k - (mu_{k+1}/s) grad J(rho_k), s = |rho_0|^2 when
/// normalize_by_init. Records a trace entry at k = 0, every `record_every`
/// iterations and at the final iterate.
SolverTrace solve(const MeasurementEnsemble& ensemble, const Vec& data,
                  const SolverConfig& config, const SolveOptions& options = {});

}  // namespace gwf

#endif  // GWF_SOLVER_HPP
