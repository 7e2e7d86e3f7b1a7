#include "gwf/gaussian.hpp"

#include "gwf/measurement_model.hpp"
#include "gwf/random.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace gwf::gauss {

MeasurementEnsemble gen_gaussian_ensemble(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw ConfigError("gen_gaussian_ensemble: n, m must be >= 1");
  Rng rng(seed);
  const double sigma = 1.0 / std::sqrt(2.0);
  Mat left(n, m), right(n, m);
  for (int col = 0; col < m; ++col) {
    for (int k = 0; k < n; ++k) left(k, col) = rng.complex_normal(sigma);
    for (int k = 0; k < n; ++k) right(k, col) = rng.complex_normal(sigma);
  }
  return MeasurementEnsemble(std::move(left), std::move(right));
}

std::string signal_kind_name(SignalKind kind) {
  return kind == SignalKind::RandomLowPass ? "lowpass" : "gaussian";
}

SignalKind signal_kind_from_name(const std::string& name) {
  if (name == "lowpass") return SignalKind::RandomLowPass;
  if (name == "gaussian") return SignalKind::RandomGaussian;
  throw ConfigError("unknown signal model '" + name + "' (expected lowpass|gaussian)");
}

void SignalModel::validate() const {
  if (n < 1) throw ConfigError("SignalModel: n must be >= 1");
  if (kind == SignalKind::RandomLowPass && effective_band() > n)
    throw ConfigError("SignalModel: band P must not exceed n");
  if (kind == SignalKind::RandomLowPass && effective_band() < 1)
    throw ConfigError("SignalModel: band P must be >= 1 (n too small for default n/8)");
}

Vec gen_signal(const SignalModel& model, std::uint64_t seed) {
  model.validate();
  const int n = model.n;
  const bool lowpass = model.kind == SignalKind::RandomLowPass;
  const int band = lowpass ? model.effective_band() : n;
  const double amp = lowpass ? 1.0 : 1.0 / std::sqrt(8.0);

  Rng rng(seed);
  const int p_lo = -band / 2 + 1;
  const int p_hi = band / 2;
  std::vector<Complex> coeff;
  coeff.reserve(size_t(p_hi - p_lo + 1));
  for (int p = p_lo; p <= p_hi; ++p) coeff.push_back(amp * rng.complex_normal(1.0));

  Vec rho = Vec::Zero(n);
  const double w = 2.0 * std::numbers::pi / double(n);
  for (int l = 0; l < n; ++l) {
    Complex acc = 0.0;
    int idx = 0;
    for (int p = p_lo; p <= p_hi; ++p, ++idx) {
      const double phase = w * double(p - 1) * double(l);
      acc += coeff[size_t(idx)] * Complex(std::cos(phase), std::sin(phase));
    }
    rho[l] = acc;
  }
  return rho;
}

PhaseTransitionResult run_phase_transition(int n, std::span<const double> oversampling_grid,
                                           int trials, std::int64_t iters, std::uint64_t seed,
                                           SignalKind kind, int threads) {
  if (n < 1) throw ConfigError("run_phase_transition: n must be >= 1");
  if (trials < 1) throw ConfigError("run_phase_transition: trials must be >= 1");
  if (iters < 1) throw ConfigError("run_phase_transition: iters must be >= 1");
  for (double g : oversampling_grid)
    if (!(g >= 1.0 / double(n)))
      throw ConfigError("run_phase_transition: oversampling factors must give M >= 1");
  if (threads < 1) threads = 1;

  PhaseTransitionResult result;
  result.n = n;
  result.kind = kind;
  result.iters = iters;
  result.seed = seed;

  SolverConfig config;
  config.max_iters = iters;
  config.schedule = RampStep{33000.0, 0.2};
  config.normalize_by_init = true;
  config.stop_tol = 0.0;
  config.record_every = iters;  // trace kept minimal; only the endpoint matters

  for (size_t g = 0; g < oversampling_grid.size(); ++g) {
    const double oversampling = oversampling_grid[g];
    const int m = std::max(1, int(std::llround(oversampling * double(n))));

    // 0 = fail, 1 = moderate only, 2 = strict (implies moderate)
    std::vector<int> outcome(size_t(trials), 0);
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
        const std::uint64_t ens_seed = derive_seed(seed, 0xE45u, g, std::uint64_t(t));
        const std::uint64_t sig_seed = derive_seed(seed, 0x516u, g, std::uint64_t(t));
        try {
          const MeasurementEnsemble ensemble = gen_gaussian_ensemble(n, m, ens_seed);
          const Vec rho_t = gen_signal(SignalModel{kind, n, 0}, sig_seed);
          const Vec data = forward_correlate(ensemble, rho_t);
          SolveOptions options;
          options.truth = &rho_t;
          const SolverTrace trace = solve(ensemble, data, config, options);
          const double rel = dist(trace.final_estimate, rho_t) / rho_t.norm();
          if (rel <= kStrictThreshold)
            outcome[size_t(t)] = 2;
          else if (rel <= kModerateThreshold)
            outcome[size_t(t)] = 1;
        } catch (const Error&) {
          outcome[size_t(t)] = 0;  // solver failure counts as an unsuccessful trial
        }
      }
    };

    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    PhaseTransitionRow row;
    row.oversampling = oversampling;
    row.trials = trials;
    for (int t = 0; t < trials; ++t) {
      if (outcome[size_t(t)] >= 1) ++row.success_moderate;
      if (outcome[size_t(t)] == 2) ++row.success_strict;
    }
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace gwf::gauss
