#include "msdd/io/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace msdd::io {

namespace {

constexpr char kMagic[4] = {'M', 'S', 'W', '1'};
constexpr std::size_t kHeader = 4 + 1 + 3 * 4 + 8;

void put_u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& b, double x) {
  const auto v = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

Index payload_count(const DomainPtr& d) {
  const Index vec = RealVectorField(d, Basis::MaxwellVector).size();
  return 2 * vec + 2 * d->layout(Basis::DirichletScalar, 0).size();
}

void check_header(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 5) throw CorruptionError("snapshot truncated inside the header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("not a snapshot file (bad magic)");
  if (bytes[4] != kSnapshotVersion) {
    throw FormatError("unsupported snapshot version " + std::to_string(bytes[4]));
  }
  if (bytes.size() < kHeader) throw CorruptionError("snapshot truncated inside the header");
}

std::vector<std::uint8_t> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const State& s) {
  const BoxDomain& d = s.psi.domain();
  std::vector<std::uint8_t> b;
  b.reserve(kHeader + 8 * static_cast<std::size_t>(payload_count(s.domain_ptr())));
  b.insert(b.end(), kMagic, kMagic + 4);
  b.push_back(kSnapshotVersion);
  for (int a = 0; a < 3; ++a) put_u32(b, static_cast<std::uint32_t>(d.modes(a)));
  put_f64(b, s.t);
  for (const RealVectorField* v : {&s.A, &s.Pi}) {
    for (int c = 0; c < 3; ++c) {
      for (Index i = 0; i < (*v)[c].size(); ++i) put_f64(b, (*v)[c](i));
    }
  }
  for (Index i = 0; i < s.psi.coeffs().size(); ++i) put_f64(b, s.psi.coeffs()(i).real());
  for (Index i = 0; i < s.psi.coeffs().size(); ++i) put_f64(b, s.psi.coeffs()(i).imag());
  return b;
}

State decode_snapshot(const std::vector<std::uint8_t>& bytes, const DomainPtr& domain) {
  check_header(bytes);
  for (int a = 0; a < 3; ++a) {
    const std::uint32_t n = get_u32(bytes.data() + 5 + 4 * a);
    if (static_cast<int>(n) != domain->modes(a)) {
      throw DimensionError("snapshot grid axis " + std::to_string(a) + " has " + std::to_string(n) +
                           " modes, configuration has " + std::to_string(domain->modes(a)));
    }
  }
  const std::size_t need = kHeader + 8 * static_cast<std::size_t>(payload_count(domain));
  if (bytes.size() < need) throw CorruptionError("snapshot truncated: payload is shorter than the grid requires");
  if (bytes.size() > need) throw CorruptionError("snapshot has trailing bytes after the payload");
  State s(domain);
  s.t = get_f64(bytes.data() + 17);
  const std::uint8_t* p = bytes.data() + kHeader;
  for (RealVectorField* v : {&s.A, &s.Pi}) {
    for (int c = 0; c < 3; ++c) {
      for (Index i = 0; i < (*v)[c].size(); ++i, p += 8) (*v)[c](i) = get_f64(p);
    }
  }
  auto& psi = s.psi.coeffs();
  for (Index i = 0; i < psi.size(); ++i, p += 8) psi(i).real(get_f64(p));
  for (Index i = 0; i < psi.size(); ++i, p += 8) psi(i).imag(get_f64(p));
  return s;
}

void save_snapshot(const std::string& path, const State& s) {
  const auto b = encode_snapshot(s);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
  if (!out) throw FormatError("write to '" + path + "' failed");
}

State load_snapshot(const std::string& path, const DomainPtr& domain) { return decode_snapshot(read_all(path), domain); }

std::array<int, 3> snapshot_dims(const std::string& path) {
  const auto b = read_all(path);
  check_header(b);
  return {static_cast<int>(get_u32(b.data() + 5)), static_cast<int>(get_u32(b.data() + 9)),
          static_cast<int>(get_u32(b.data() + 13))};
}

}  // namespace msdd::io
