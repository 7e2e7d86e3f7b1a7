#ifndef GWF_RADAR_HPP
#define GWF_RADAR_HPP

#include "gwf/lrmr.hpp"
#include "gwf/solver.hpp"
#include "gwf/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gwf::radar {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct GeometryConfig {
  double extent_m = 144.0;   // scene side length
  double pixel_m = 12.0;     // pixel spacing
  int nx = 0;                // 0 derives round(extent/pixel)
  int ny = 0;
  int receiver_count = 12;
  double receiver_radius_m = 10000.0;
  double receiver_height_m = 500.0;
  Eigen::Vector3d transmitter_m = {11500.0, 11500.0, 500.0};
  double center_freq_hz = 1.9e9;
  double bandwidth_hz = 10e6;
  int freq_samples = 32;
};

/// Flat scene grid (z = 0) with receivers equally spaced on a circle and a
/// single fixed transmitter. Angular frequencies sample
/// [2 pi f_c - pi B, 2 pi f_c + pi B] uniformly, endpoints included.
struct SceneGeometry {
  int nx = 0;
  int ny = 0;
  double pixel_m = 0.0;
  std::vector<Eigen::Vector3d> pixels;     // row-major: index = iy*nx + ix
  std::vector<Eigen::Vector3d> receivers;  // S positions
  Eigen::Vector3d transmitter;
  std::vector<double> omegas;              // M' angular frequencies (rad/s)

  Index n() const { return Index(pixels.size()); }
  int pair_count() const {
    const int s = int(receivers.size());
    return s * (s - 1) / 2;
  }
};

SceneGeometry make_geometry(const GeometryConfig& config);

// ---------------------------------------------------------------------------
// Phantoms
// ---------------------------------------------------------------------------

/// Scene content in grid-fraction coordinates so one spec rasterizes onto any
/// grid size: a point lands on the pixel containing (x_frac, y_frac), a
/// rectangle covers all pixels whose fractional center lies inside.
struct PhantomSpec {
  struct Point {
    double x_frac, y_frac;
    double amplitude;
  };
  struct Rect {
    double x0_frac, y0_frac, x1_frac, y1_frac;
    double amplitude;
  };
  std::vector<Point> points;
  std::vector<Rect> rects;

  /// The repository's versioned default scene: three point targets and two
  /// extended rectangular targets, amplitudes in [0.5, 1].
  static PhantomSpec default_scene();

  /// Deterministic random scene with the same composition; amplitudes drawn
  /// uniformly from [0.5, 1].
  static PhantomSpec random_scene(std::uint64_t seed, int points = 3, int rects = 2);
};

struct Phantom {
  int nx = 0;
  int ny = 0;
  RealVec reflectivity;  // row-major, nonnegative

  Vec as_signal() const { return reflectivity.cast<Complex>(); }
};

Phantom make_phantom(const PhantomSpec& spec, const SceneGeometry& geometry);

// ---------------------------------------------------------------------------
// Measurement vectors and data simulation
// ---------------------------------------------------------------------------

/// Full-physics propagation kernel for data simulation: entry k is
/// exp(-i w (|x_k - a_r| + |x_k - a_t|)/c0) with a flat transmit spectrum and
/// unit antenna gains. The received linear measurement is the plain dot
/// product of this vector with the reflectivity.
Vec full_measurement_vector(const SceneGeometry& geometry, int receiver_index,
                            int freq_index);

/// Reconstruction kernel: entry k is
/// exp(+i w (|x_k - a_r| - a_t_hat . x_k)/c0), i.e. the far-field kernel with
/// the transmitter range replaced by its look direction. The sign is chosen
/// so the adjoint product L^H rho carries the propagation phase; the
/// transmitter-range phase common to a receiver pair cancels in each
/// cross-correlation.
Vec approx_measurement_vector(const SceneGeometry& geometry, int receiver_index,
                              int freq_index);

/// Linear measurements f_i(w) of a (possibly complex) reflectivity under the
/// full model, indexed (receiver, frequency).
Mat linear_measurements(const SceneGeometry& geometry, const Vec& reflectivity);

/// Cross-correlate full-model measurements over all receiver pairs i < j and
/// all frequencies (pair-major, frequencies ascending within a pair) and
/// return that data together with the approximate-vector ensemble used for
/// inversion. M = M' * S(S-1)/2.
std::pair<MeasurementEnsemble, Vec> simulate_interferometric_data(
    const SceneGeometry& geometry, const Phantom& phantom);

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

/// Relative magnitude-image error: || |rho| - phantom || / ||phantom||,
/// evaluated after rotating rho onto the phantom's phase. Reconstructions of
/// a real scene are complex up to an unobservable global phase; comparing
/// magnitudes makes the metric well defined.
double image_relative_error(const Vec& rho, const Phantom& phantom);

struct ImagingResult {
  SolverTrace trace;
  RealVec image;        // |final estimate|, row-major
  double relative_error = 0.0;
  Index n = 0;
  Index m = 0;
};

/// Simulate, run GWF, return the magnitude image and a trace whose
/// relative-error column uses image_relative_error.
ImagingResult run_imaging_experiment(const SceneGeometry& geometry, const Phantom& phantom,
                                     const SolverConfig& config);

struct ComparisonSeries {
  std::string method;
  std::vector<std::uint64_t> flops;
  std::vector<double> lifted_mse;  // |X - truth|_F^2 / |truth|_F^2
  std::vector<double> signal_mse;  // squared image_relative_error
};

struct ComparisonResult {
  std::vector<ComparisonSeries> series;  // gwf first, then the Uzawa variants
};

struct ComparisonConfig {
  std::int64_t gwf_iters = 8000;
  std::int64_t uzawa_iters = 110;
  std::vector<lrmr::UzawaVariant> variants = {lrmr::UzawaVariant::TraceReg,
                                              lrmr::UzawaVariant::Rank1,
                                              lrmr::UzawaVariant::PsdOnly};
  /// Trace-regularization weight as a multiple of |d|_1 / M; the experiments
  /// default to 1e-2. With sweep_lambda, {1e-3, 1e-2, 1e-1} are all run and
  /// the best final signal error is reported for the TraceReg variant.
  double lambda_scale = 1e-2;
  bool sweep_lambda = false;
  std::int64_t record_every = 10;
};

/// Flop-matched GWF vs lifted-baseline comparison on identical simulated
/// data. All methods start from the same backprojection-derived state.
ComparisonResult run_comparison(const SceneGeometry& geometry, const Phantom& phantom,
                                const ComparisonConfig& config);

// Presets for the two experiment scales.
GeometryConfig small_scene_config();  // 12x12 pixels, S = 12, N = 144
GeometryConfig paper_scene_config();  // 31x31 pixels, S = 16, N = 961

}  // namespace gwf::radar

#endif  // GWF_RADAR_HPP
