#include "gwf/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <system_error>

namespace gwf::io {

namespace {

class BinaryWriter {
 public:
  explicit BinaryWriter(const std::filesystem::path& path)
      : path_(path), stream_(path, std::ios::binary | std::ios::trunc) {
    if (!stream_) throw IoError("cannot open '" + path.string() + "' for writing");
  }

  void magic(const char tag[4]) { stream_.write(tag, 4); }

  void u64(std::uint64_t v) { stream_.write(reinterpret_cast<const char*>(&v), 8); }

  void complex(const Complex& z) {
    const double re = z.real(), im = z.imag();
    stream_.write(reinterpret_cast<const char*>(&re), 8);
    stream_.write(reinterpret_cast<const char*>(&im), 8);
  }

  void complex_block(const Complex* data, std::size_t count) {
    stream_.write(reinterpret_cast<const char*>(data),
                  std::streamsize(count * sizeof(Complex)));
  }

  void finish() {
    stream_.flush();
    if (!stream_) throw IoError("write to '" + path_.string() + "' failed");
  }

 private:
  std::filesystem::path path_;
  std::ofstream stream_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::filesystem::path& path)
      : path_(path), stream_(path, std::ios::binary) {
    if (!stream_) throw IoError("cannot open '" + path.string() + "' for reading");
  }

  void expect_magic(const char tag[4]) {
    char buf[4] = {};
    read_raw(buf, 4, "magic");
    if (std::memcmp(buf, tag, 4) != 0)
      throw FormatError("bad magic in '" + path_.string() + "', expected '" +
                            std::string(tag, 4) + "'",
                        offset_ - 4);
  }

  std::uint64_t u64(const char* field) {
    std::uint64_t v = 0;
    read_raw(reinterpret_cast<char*>(&v), 8, field);
    return v;
  }

  void complex_block(Complex* out, std::size_t count, const char* field) {
    read_raw(reinterpret_cast<char*>(out), count * sizeof(Complex), field);
  }

  void expect_eof() {
    char c;
    if (stream_.read(&c, 1))
      throw FormatError("trailing bytes in '" + path_.string() + "'", offset_);
  }

 private:
  void read_raw(char* out, std::size_t bytes, const char* field) {
    stream_.read(out, std::streamsize(bytes));
    if (std::size_t(stream_.gcount()) != bytes)
      throw FormatError("truncated '" + path_.string() + "' while reading " + field, offset_);
    offset_ += bytes;
  }

  std::filesystem::path path_;
  std::ifstream stream_;
  std::uint64_t offset_ = 0;
};

constexpr std::uint64_t kMaxReasonableDim = 1ULL << 32;

void check_dim(std::uint64_t v, const char* what, const std::filesystem::path& path,
               std::uint64_t offset) {
  if (v < 1 || v > kMaxReasonableDim)
    throw FormatError(std::string("implausible ") + what + " = " + std::to_string(v) + " in '" +
                          path.string() + "'",
                      offset);
}

}  // namespace

void write_ensemble(const std::filesystem::path& path, const MeasurementEnsemble& ensemble) {
  BinaryWriter w(path);
  w.magic("IFN1");
  w.u64(std::uint64_t(ensemble.n()));
  w.u64(std::uint64_t(ensemble.m_count()));
  for (Index m = 0; m < ensemble.m_count(); ++m) {
    w.complex_block(ensemble.left.col(m).data(), std::size_t(ensemble.n()));
    w.complex_block(ensemble.right.col(m).data(), std::size_t(ensemble.n()));
  }
  w.finish();
}

MeasurementEnsemble read_ensemble(const std::filesystem::path& path) {
  BinaryReader r(path);
  r.expect_magic("IFN1");
  const std::uint64_t n = r.u64("N");
  check_dim(n, "N", path, 4);
  const std::uint64_t m = r.u64("M");
  check_dim(m, "M", path, 12);
  const Index rows = Index(n), cols = Index(m);
  Mat left(rows, cols), right(rows, cols);
  for (std::uint64_t col = 0; col < m; ++col) {
    r.complex_block(left.col(Index(col)).data(), n, "left vector");
    r.complex_block(right.col(Index(col)).data(), n, "right vector");
  }
  r.expect_eof();
  MeasurementEnsemble ensemble(std::move(left), std::move(right));
  if (!ensemble.left.allFinite() || !ensemble.right.allFinite())
    throw FormatError("non-finite entries in '" + path.string() + "'", 20);
  return ensemble;
}

void write_data(const std::filesystem::path& path, const Vec& data) {
  BinaryWriter w(path);
  w.magic("IFD1");
  w.u64(std::uint64_t(data.size()));
  w.complex_block(data.data(), std::size_t(data.size()));
  w.finish();
}

Vec read_data(const std::filesystem::path& path) {
  BinaryReader r(path);
  r.expect_magic("IFD1");
  const std::uint64_t m = r.u64("M");
  check_dim(m, "M", path, 4);
  Vec data(static_cast<Index>(m));
  r.complex_block(data.data(), m, "measurements");
  r.expect_eof();
  if (!data.allFinite()) throw FormatError("non-finite entries in '" + path.string() + "'", 12);
  return data;
}

void write_signal(const std::filesystem::path& path, const Vec& signal) {
  BinaryWriter w(path);
  w.magic("IFS1");
  w.u64(std::uint64_t(signal.size()));
  w.complex_block(signal.data(), std::size_t(signal.size()));
  w.finish();
}

Vec read_signal(const std::filesystem::path& path) {
  BinaryReader r(path);
  r.expect_magic("IFS1");
  const std::uint64_t n = r.u64("N");
  check_dim(n, "N", path, 4);
  Vec signal(static_cast<Index>(n));
  r.complex_block(signal.data(), n, "signal");
  r.expect_eof();
  return signal;
}

void write_matrix(const std::filesystem::path& path, const Mat& matrix) {
  if (matrix.rows() != matrix.cols())
    throw DimensionError("write_matrix: matrix must be square");
  BinaryWriter w(path);
  w.magic("IFM1");
  w.u64(std::uint64_t(matrix.rows()));
  // row-major on disk
  for (Index r = 0; r < matrix.rows(); ++r)
    for (Index c = 0; c < matrix.cols(); ++c) w.complex(matrix(r, c));
  w.finish();
}

Mat read_matrix(const std::filesystem::path& path) {
  BinaryReader r(path);
  r.expect_magic("IFM1");
  const std::uint64_t n = r.u64("N");
  check_dim(n, "N", path, 4);
  const Index dim = Index(n);
  Mat matrix(dim, dim);
  std::vector<Complex> row(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    r.complex_block(row.data(), n, "matrix row");
    for (std::uint64_t j = 0; j < n; ++j) matrix(Index(i), Index(j)) = row[j];
  }
  r.expect_eof();
  return matrix;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_text(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);  // binary: fixed newlines
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

void write_complex_csv(const std::filesystem::path& path, const Vec& values) {
  std::ofstream out = open_text(path);
  out << "index,re,im\n";
  for (Index i = 0; i < values.size(); ++i)
    out << i << ',' << format_double(values[i].real()) << ','
        << format_double(values[i].imag()) << '\n';
  if (!out.flush()) throw IoError("write to '" + path.string() + "' failed");
}

void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace) {
  std::ofstream out = open_text(path);
  out << "k,objective,step,flops,dist,rel_err\n";
  for (const auto& rec : trace.iterations) {
    out << rec.k << ',' << format_double(rec.objective) << ',' << format_double(rec.step)
        << ',' << rec.flops << ',';
    if (rec.dist_to_truth) out << format_double(*rec.dist_to_truth);
    out << ',';
    if (rec.relative_error) out << format_double(*rec.relative_error);
    out << '\n';
  }
  if (!out.flush()) throw IoError("write to '" + path.string() + "' failed");
}

void write_lifted_trace_csv(const std::filesystem::path& path,
                            const lrmr::LiftedTrace& trace) {
  std::ofstream out = open_text(path);
  out << "k,lifted_mse,signal_mse,residual,flops\n";
  for (const auto& rec : trace.iterations)
    out << rec.k << ',' << format_double(rec.lifted_mse) << ','
        << format_double(rec.signal_mse) << ',' << format_double(rec.residual) << ','
        << rec.flops << '\n';
  if (!out.flush()) throw IoError("write to '" + path.string() + "' failed");
}

void write_table_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<std::string>& rows) {
  std::ofstream out = open_text(path);
  out << header << '\n';
  for (const auto& row : rows) out << row << '\n';
  if (!out.flush()) throw IoError("write to '" + path.string() + "' failed");
}

void write_image_csv(const std::filesystem::path& path, const RealVec& image, int nx, int ny) {
  if (image.size() != Index(nx) * Index(ny))
    throw DimensionError("write_image_csv: image size mismatch");
  std::ofstream out = open_text(path);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      if (ix) out << ',';
      out << format_double(image[Index(iy) * nx + ix]);
    }
    out << '\n';
  }
  if (!out.flush()) throw IoError("write to '" + path.string() + "' failed");
}

void write_image_pgm(const std::filesystem::path& path, const RealVec& image, int nx, int ny) {
  if (image.size() != Index(nx) * Index(ny))
    throw DimensionError("write_image_pgm: image size mismatch");
  std::ofstream out = open_text(path);
  out << "P5\n" << nx << ' ' << ny << "\n255\n";
  const double peak = image.size() ? image.maxCoeff() : 0.0;
  const double scale = peak > 0.0 ? 255.0 / peak : 0.0;
  std::string bytes(std::size_t(image.size()), '\0');
  for (Index i = 0; i < image.size(); ++i) {
    const double v = std::max(0.0, image[i]) * scale;
    bytes[std::size_t(i)] = char(static_cast<unsigned char>(std::min(255.0, v) + 0.5));
  }
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out.flush()) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

void write_text_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out = open_text(tmp);
    out << content;
    if (!out.flush()) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("atomic rename to '" + path.string() + "' failed: " + ec.message());
}

}  // namespace gwf::io
