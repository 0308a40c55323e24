#include "pfc/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "pfc/errors.hpp"

namespace pfc {

namespace {

constexpr std::array<char, 4> kMagic{'P', 'F', 'C', 'F'};

class Writer {
 public:
  void bytes(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
  }
  const std::vector<char>& data() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  explicit Reader(std::vector<char> buf) : buf_(std::move(buf)) {}
  void need(std::size_t n, const char* what) const {
    if (buf_.size() - pos_ < n) throw SnapshotError(std::string("snapshot truncated in ") + what);
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64(const char* what) {
    need(8, what);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }
  const char* take(std::size_t n, const char* what) {
    need(n, what);
    const char* p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  std::vector<char> buf_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_snapshot(const std::filesystem::path& path, const LatticeSpec& lattice, const FourierField& field) {
  lattice.validate();
  const IndexGrid grid(lattice);
  if (field.size() != grid.size()) throw SnapshotError("field size does not match the lattice");

  Writer w;
  w.bytes(kMagic.data(), kMagic.size());
  w.u32(kSnapshotVersion);
  w.u32(static_cast<std::uint32_t>(lattice.dimension));
  w.u32(static_cast<std::uint32_t>(lattice.physical_dimension));
  for (int m : lattice.modes) w.u32(static_cast<std::uint32_t>(m));
  for (Eigen::Index i = 0; i < lattice.basis.rows(); ++i)
    for (Eigen::Index j = 0; j < lattice.basis.cols(); ++j) w.f64(lattice.basis(i, j));
  for (Eigen::Index i = 0; i < lattice.projection.rows(); ++i)
    for (Eigen::Index j = 0; j < lattice.projection.cols(); ++j) w.f64(lattice.projection(i, j));
  for (Eigen::Index i = 0; i < field.size(); ++i) {
    w.f64(field(i).real());
    w.f64(field(i).imag());
  }

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw SnapshotError("cannot open " + tmp.string() + " for writing");
    os.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
    if (!os) throw SnapshotError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw SnapshotError("cannot open snapshot " + path.string());
  Reader r(std::vector<char>(std::istreambuf_iterator<char>(is), {}));

  if (std::memcmp(r.take(4, "header"), kMagic.data(), 4) != 0) throw SnapshotError("corrupt header: bad magic");
  const std::uint32_t version = r.u32("header");
  if (version != kSnapshotVersion) throw SnapshotError("unsupported snapshot version " + std::to_string(version));
  const std::uint32_t n = r.u32("header");
  const std::uint32_t d = r.u32("header");
  if (n == 0 || n > 16 || d == 0 || d > n) throw SnapshotError("corrupt header: bad dimensions");

  Snapshot snap;
  LatticeSpec& spec = snap.lattice;
  spec.dimension = static_cast<int>(n);
  spec.physical_dimension = static_cast<int>(d);
  for (std::uint32_t j = 0; j < n; ++j) {
    const std::uint32_t m = r.u32("header");
    if (m == 0 || m % 2 != 0 || m > (1u << 20)) throw SnapshotError("corrupt header: bad mode count");
    spec.modes.push_back(static_cast<int>(m));
  }
  spec.basis.resize(n, n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) spec.basis(i, j) = r.f64("basis");
  spec.projection.resize(d, n);
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t j = 0; j < n; ++j) spec.projection(i, j) = r.f64("projection");
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw SnapshotError(std::string("corrupt header: ") + e.what());
  }

  std::size_t size = 1;
  for (int m : spec.modes) size *= static_cast<std::size_t>(m) + 1;
  if (r.remaining() != size * 16)
    throw SnapshotError(r.remaining() < size * 16 ? "snapshot truncated in amplitudes" : "trailing bytes in snapshot");
  snap.field.resize(static_cast<Eigen::Index>(size));
  for (std::size_t i = 0; i < size; ++i) {
    const double re = r.f64("amplitudes");
    const double im = r.f64("amplitudes");
    snap.field(static_cast<Eigen::Index>(i)) = Complex(re, im);
  }
  return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path, const LatticeSpec& expected) {
  Snapshot snap = read_snapshot(path);
  if (snap.lattice.dimension != expected.dimension || snap.lattice.physical_dimension != expected.physical_dimension ||
      snap.lattice.modes != expected.modes)
    throw SnapshotError("snapshot shape does not match the configured lattice");
  return snap;
}

}  // namespace pfc
