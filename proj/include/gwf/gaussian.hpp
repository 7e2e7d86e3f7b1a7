#ifndef GWF_GAUSSIAN_HPP
#define GWF_GAUSSIAN_HPP

#include "gwf/solver.hpp"
#include "gwf/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gwf::gauss {

/// 2M independent length-n vectors with i.i.d. CN(0,1) entries (real and
/// imaginary parts N(0, 1/2) each). Draw order is fixed: pair-major, left
/// vector before right, entry index ascending, real part before imaginary.
MeasurementEnsemble gen_gaussian_ensemble(int n, int m, std::uint64_t seed);

enum class SignalKind { RandomLowPass, RandomGaussian };

std::string signal_kind_name(SignalKind kind);
SignalKind signal_kind_from_name(const std::string& name);

struct SignalModel {
  SignalKind kind = SignalKind::RandomLowPass;
  int n = 0;
  int band = 0;  // low-pass band width P; 0 selects the default n/8

  int effective_band() const { return band > 0 ? band : n / 8; }
  void validate() const;
};

/// Random test signals built from Fourier modes:
///   low-pass: rho_l = sum_{p=-P/2+1}^{P/2} (X_p + i Y_p) e^{2 pi i (p-1)(l-1)/n}
///   gaussian: same sum over p = -n/2+1 .. n/2 scaled by 1/sqrt(8)
/// with one i.i.d. N(0,1) coefficient pair drawn per frequency index p in
/// ascending order. The scalings match the two models' expected power.
Vec gen_signal(const SignalModel& model, std::uint64_t seed);

struct PhaseTransitionRow {
  double oversampling = 0.0;  // M/N
  int trials = 0;
  int success_strict = 0;    // relative error <= 1e-5
  int success_moderate = 0;  // relative error <= 1e-3
};

struct PhaseTransitionResult {
  int n = 0;
  SignalKind kind = SignalKind::RandomLowPass;
  std::int64_t iters = 0;
  std::uint64_t seed = 0;
  std::vector<PhaseTransitionRow> rows;
};

inline constexpr double kStrictThreshold = 1e-5;
inline constexpr double kModerateThreshold = 1e-3;

/// Empirical recovery-probability sweep: for each oversampling factor and
/// trial, draw a fresh ensemble and signal (seeds derived from
/// (seed, grid index, trial index)), run GWF with the ramp schedule
/// (tau0 = 33000, mu_max = 0.2) for `iters` iterations and count both
/// success thresholds on dist/|rho_t|. Solver failures count as
/// unsuccessful trials. `threads` shards trials; results are identical for
/// any thread count.
PhaseTransitionResult run_phase_transition(int n, std::span<const double> oversampling_grid,
                                           int trials, std::int64_t iters, std::uint64_t seed,
                                           SignalKind kind, int threads = 1);

}  // namespace gwf::gauss

#endif  // GWF_GAUSSIAN_HPP
