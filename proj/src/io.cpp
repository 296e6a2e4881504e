#include "gradrom/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <system_error>

namespace gradrom {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'G', 'R', 'D', 'M'};
constexpr std::uint32_t kVersion = 1;

// Writes through a temp file in the same directory so a crash or a full disk
// never leaves a half-written artifact behind.
class AtomicFile {
 public:
  explicit AtomicFile(const fs::path& path) : target_(path), temp_(path) {
    temp_ += ".tmp";
    stream_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!stream_) throw IoError("cannot open for writing: " + temp_.string());
  }
  std::ofstream& stream() { return stream_; }
  void commit() {
    stream_.flush();
    if (!stream_) throw IoError("write failed: " + temp_.string());
    stream_.close();
    std::error_code ec;
    fs::rename(temp_, target_, ec);
    if (ec) throw IoError("rename failed for " + target_.string() + ": " + ec.message());
    committed_ = true;
  }
  ~AtomicFile() {
    if (!committed_) {
      stream_.close();
      std::error_code ec;
      fs::remove(temp_, ec);
    }
  }

 private:
  fs::path target_, temp_;
  std::ofstream stream_;
  bool committed_ = false;
};

void put_u32(std::ofstream& s, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  s.write(reinterpret_cast<char*>(b), 4);
}

void put_u64(std::ofstream& s, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  s.write(reinterpret_cast<char*>(b), 8);
}

std::uint32_t get_u32(std::ifstream& s, const fs::path& path, std::size_t offset) {
  unsigned char b[4];
  if (!s.read(reinterpret_cast<char*>(b), 4))
    throw IoError(path.string() + ": truncated header at offset " + std::to_string(offset));
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::ifstream& s, const fs::path& path, std::size_t offset) {
  unsigned char b[8];
  if (!s.read(reinterpret_cast<char*>(b), 8))
    throw IoError(path.string() + ": truncated header at offset " + std::to_string(offset));
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

}  // namespace

void write_matrix(const fs::path& path, const Matrix& m) {
  AtomicFile file(path);
  auto& s = file.stream();
  s.write(kMagic, 4);
  put_u32(s, kVersion);
  put_u64(s, static_cast<std::uint64_t>(m.rows()));
  put_u64(s, static_cast<std::uint64_t>(m.cols()));
  // Eigen matrices are column-major; doubles are little-endian on every
  // platform this builds for.
  s.write(reinterpret_cast<const char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * m.size()));
  file.commit();
}

Matrix read_matrix(const fs::path& path) {
  std::ifstream s(path, std::ios::binary);
  if (!s) throw IoError("cannot open: " + path.string());
  char magic[4];
  if (!s.read(magic, 4)) throw IoError(path.string() + ": truncated magic at offset 0");
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw IoError(path.string() + ": bad magic at offset 0");
  const std::uint32_t version = get_u32(s, path, 4);
  if (version != kVersion)
    throw IoError(path.string() + ": unsupported version at offset 4");
  const std::uint64_t rows = get_u64(s, path, 8);
  const std::uint64_t cols = get_u64(s, path, 16);
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  const std::streamsize bytes = static_cast<std::streamsize>(sizeof(double) * rows * cols);
  if (!s.read(reinterpret_cast<char*>(m.data()), bytes))
    throw IoError(path.string() + ": truncated payload at offset 24, expected " +
                  std::to_string(bytes) + " bytes");
  return m;
}

void write_vector(const fs::path& path, const Vector& v) {
  Matrix m(v.size(), 1);
  m.col(0) = v;
  write_matrix(path, m);
}

Vector read_vector(const fs::path& path) {
  const Matrix m = read_matrix(path);
  if (m.cols() != 1) throw IoError(path.string() + ": expected a single-column matrix");
  return m.col(0);
}

void write_energy_csv(const fs::path& path, const std::vector<double>& times,
                      const std::vector<double>& values) {
  if (times.size() != values.size()) throw IoError("energy csv: length mismatch");
  AtomicFile file(path);
  auto& s = file.stream();
  s << "t,energy\n";
  for (std::size_t i = 0; i < times.size(); ++i)
    s << fmt17(times[i]) << ',' << fmt17(values[i]) << '\n';
  file.commit();
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw IoError("csv: header/column count mismatch");
  std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (const auto& c : columns)
    if (c.size() != rows) throw IoError("csv: ragged columns");
  AtomicFile file(path);
  auto& s = file.stream();
  for (std::size_t j = 0; j < header.size(); ++j) s << (j ? "," : "") << header[j];
  s << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j)
      s << (j ? "," : "") << fmt17(columns[j][i]);
    s << '\n';
  }
  file.commit();
}

void write_vtk_fields(const fs::path& path, const DGSpace& space, const Vector& u,
                      const Vector& v) {
  if (u.size() != space.dim() || v.size() != space.dim())
    throw IoError("vtk: coefficient length mismatch");
  const Mesh& mesh = space.mesh();
  const Index ne = mesh.n_elements();

  AtomicFile file(path);
  auto& s = file.stream();
  s << "# vtk DataFile Version 3.0\n";
  s << "gradrom fields\n";
  s << "ASCII\n";
  s << "DATASET UNSTRUCTURED_GRID\n";
  s << "POINTS " << 3 * ne << " double\n";
  for (Index e = 0; e < ne; ++e)
    for (int c = 0; c < 3; ++c) {
      const Vector2 p = mesh.triangle_vertex(e, c);
      s << fmt17(p.x()) << ' ' << fmt17(p.y()) << " 0\n";
    }
  s << "CELLS " << ne << ' ' << 4 * ne << '\n';
  for (Index e = 0; e < ne; ++e)
    s << "3 " << 3 * e << ' ' << 3 * e + 1 << ' ' << 3 * e + 2 << '\n';
  s << "CELL_TYPES " << ne << '\n';
  for (Index e = 0; e < ne; ++e) s << "5\n";

  // nodal basis: the first three local dofs sit at the triangle corners
  auto corner_value = [&](const Vector& w, Index e, int c) { return w[space.dof(e, c)]; };
  s << "POINT_DATA " << 3 * ne << '\n';
  s << "SCALARS u double 1\nLOOKUP_TABLE default\n";
  for (Index e = 0; e < ne; ++e)
    for (int c = 0; c < 3; ++c) s << fmt17(corner_value(u, e, c)) << '\n';
  s << "SCALARS v double 1\nLOOKUP_TABLE default\n";
  for (Index e = 0; e < ne; ++e)
    for (int c = 0; c < 3; ++c) s << fmt17(corner_value(v, e, c)) << '\n';
  file.commit();
}

void write_text(const fs::path& path, const std::string& text) {
  AtomicFile file(path);
  file.stream() << text;
  file.commit();
}

}  // namespace gradrom
