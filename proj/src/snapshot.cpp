#include "pe/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <vector>

#include "pe/errors.hpp"

namespace pe {

namespace {

constexpr char kMagic[4] = {'P', 'E', 'S', 'N'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 4 + 4 * 4 + 4 * 8;
// Largest payload accepted on read (values per component).
constexpr std::uint64_t kMaxPoints = std::uint64_t{1} << 28;

template <class T>
void put(std::vector<unsigned char>& buf, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

template <class T>
T get(const unsigned char* p) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(const Field& v, double t, const std::string& path) {
  const Field p = transform(v, Repr::physical);
  const Grid& g = p.grid();
  std::vector<unsigned char> buf;
  buf.reserve(kHeaderBytes + 2 * g.size() * sizeof(double));
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(buf, kVersion);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nx()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.ny()));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.nz()));
  put<double>(buf, g.lx());
  put<double>(buf, g.ly());
  put<double>(buf, g.h());
  put<double>(buf, t);
  // in-memory layout already is x-major, then y, then z
  for (std::size_t c = 0; c < 2; ++c)
    for (const cplx& value : p.comp(c)) put<double>(buf, value.real());

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw FormatError("not a PESN file");
  if (buf.size() < 8) throw FormatError("truncated file");
  const auto version = get<std::uint32_t>(buf.data() + 4);
  if (version != kVersion) throw FormatError("unsupported version " + std::to_string(version));
  if (buf.size() < kHeaderBytes) throw FormatError("truncated file");

  const auto nx = get<std::uint32_t>(buf.data() + 8);
  const auto ny = get<std::uint32_t>(buf.data() + 12);
  const auto nz = get<std::uint32_t>(buf.data() + 16);
  const double lx = get<double>(buf.data() + 20);
  const double ly = get<double>(buf.data() + 28);
  const double h = get<double>(buf.data() + 36);
  const double t = get<double>(buf.data() + 44);

  const std::uint64_t points =
      std::uint64_t{nx} * std::uint64_t{ny} * (std::uint64_t{nz} + 1);
  if (nx == 0 || ny == 0 || nz == 0 || points > kMaxPoints || nx > (1u << 20) || ny > (1u << 20) ||
      nz > (1u << 20))
    throw FormatError("dimension overflow");
  const std::uint64_t expected = kHeaderBytes + 2 * points * sizeof(double);
  if (buf.size() < expected) throw FormatError("truncated file");
  if (buf.size() > expected) throw FormatError("trailing bytes after payload");

  GridPtr grid;
  try {
    grid = Grid::create(static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(nz), lx, ly, h);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid grid in snapshot: ") + e.what());
  }
  Snapshot snap{Field(grid, Repr::physical), t};
  const unsigned char* p = buf.data() + kHeaderBytes;
  for (std::size_t c = 0; c < 2; ++c)
    for (cplx& value : snap.velocity.comp(c)) {
      value = cplx(get<double>(p), 0.0);
      p += sizeof(double);
    }
  return snap;
}

}  // namespace pe
