#ifndef GWF_TYPES_HPP
#define GWF_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gwf {

inline constexpr const char* kVersion = "0.1.0";

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;   // complex signal / measurement vector
using Mat = Eigen::MatrixXcd;   // lifted (N x N) matrix
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Malformed on-disk container. `offset` is the byte offset of the first
// offending field.
struct FormatError : Error {
  FormatError(const std::string& what, std::uint64_t offset_)
      : Error(what + " (offset " + std::to_string(offset_) + ")"), offset(offset_) {}
  std::uint64_t offset = 0;
};

struct ConfigError : Error {
  using Error::Error;
};

struct InitializationError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Measurement ensemble
// ---------------------------------------------------------------------------

/// M pairs of length-N sampling vectors stored column-wise: column m of
/// `left` is the first vector of pair m, column m of `right` the second.
/// `phase_retrieval` marks ensembles deliberately built with identical
/// left/right vectors (auto-correlation measurements); routines whose
/// guarantees require cross-correlations refuse such ensembles.
struct MeasurementEnsemble {
  Mat left;
  Mat right;
  bool phase_retrieval = false;

  MeasurementEnsemble() = default;
  MeasurementEnsemble(Mat l, Mat r, bool pr = false)
      : left(std::move(l)), right(std::move(r)), phase_retrieval(pr) {
    if (left.rows() != right.rows() || left.cols() != right.cols())
      throw DimensionError("ensemble left/right shapes differ: " +
                           std::to_string(left.rows()) + "x" + std::to_string(left.cols()) +
                           " vs " + std::to_string(right.rows()) + "x" +
                           std::to_string(right.cols()));
    if (left.rows() < 1 || left.cols() < 1)
      throw DimensionError("ensemble requires N >= 1 and M >= 1");
  }

  Index n() const { return left.rows(); }
  Index m_count() const { return left.cols(); }
};

inline void require_signal_dim(const MeasurementEnsemble& ensemble, const Vec& rho,
                               const char* who) {
  if (rho.size() != ensemble.n())
    throw DimensionError(std::string(who) + ": signal length mismatch, expected N=" +
                         std::to_string(ensemble.n()) + ", got " + std::to_string(rho.size()));
}

inline void require_data_dim(const MeasurementEnsemble& ensemble, const Vec& data,
                             const char* who) {
  if (data.size() != ensemble.m_count())
    throw DimensionError(std::string(who) + ": data length mismatch, expected M=" +
                         std::to_string(ensemble.m_count()) + ", got " +
                         std::to_string(data.size()));
}

inline void require_lifted_dim(const MeasurementEnsemble& ensemble, const Mat& x,
                               const char* who) {
  if (x.rows() != ensemble.n() || x.cols() != ensemble.n())
    throw DimensionError(std::string(who) + ": lifted matrix must be " +
                         std::to_string(ensemble.n()) + "x" + std::to_string(ensemble.n()) +
                         ", got " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
}

}  // namespace gwf

#endif  // GWF_TYPES_HPP
