#ifndef GWF_IO_HPP
#define GWF_IO_HPP

#include "gwf/lrmr.hpp"
#include "gwf/solver.hpp"
#include "gwf/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace gwf::io {

// Little-endian binary containers. Layouts:
//   "IFN1": u64 N, u64 M, then M blocks of 2N complex doubles
//           (left vector re/im interleaved, then right vector)
//   "IFD1": u64 M, M complex doubles
//   "IFS1": u64 N, N complex doubles
//   "IFM1": u64 N, N^2 complex doubles, row-major
void write_ensemble(const std::filesystem::path& path, const MeasurementEnsemble& ensemble);
MeasurementEnsemble read_ensemble(const std::filesystem::path& path);

void write_data(const std::filesystem::path& path, const Vec& data);
Vec read_data(const std::filesystem::path& path);

void write_signal(const std::filesystem::path& path, const Vec& signal);
Vec read_signal(const std::filesystem::path& path);

void write_matrix(const std::filesystem::path& path, const Mat& matrix);
Mat read_matrix(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double (to_chars), so CSV bytes are
/// reproducible and parse back exactly.
std::string format_double(double value);

/// index,re,im rows for a complex sequence.
void write_complex_csv(const std::filesystem::path& path, const Vec& values);

/// k,objective,step,flops,dist,rel_err (empty cells for absent optionals).
void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace);

/// k,lifted_mse,signal_mse,residual,flops.
void write_lifted_trace_csv(const std::filesystem::path& path, const lrmr::LiftedTrace& trace);

/// Arbitrary table with a header row; cells already formatted.
void write_table_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::string>& rows);

/// Row-major real matrix as CSV (one row per line).
void write_image_csv(const std::filesystem::path& path, const RealVec& image, int nx, int ny);

/// Binary 8-bit PGM (P5), row-major, values scaled so the maximum maps
/// to 255 (all-zero images stay zero).
void write_image_pgm(const std::filesystem::path& path, const RealVec& image, int nx, int ny);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace gwf::io

#endif  // GWF_IO_HPP
