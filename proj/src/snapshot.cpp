#include "hvp/snapshot.hpp"

#include <bit>
#include <cstring>
#include <json.hpp>

#include "hvp/io.hpp"

namespace hvp {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void put(std::string& out, double v) {
  unsigned char b[8];
  std::memcpy(b, &v, 8);
  if constexpr (std::endian::native == std::endian::big)
    for (int i = 0; i < 4; ++i) std::swap(b[i], b[7 - i]);
  out.append(reinterpret_cast<const char*>(b), 8);
}

double get(const char* p) {
  unsigned char b[8];
  std::memcpy(b, p, 8);
  if constexpr (std::endian::native == std::endian::big)
    for (int i = 0; i < 4; ++i) std::swap(b[i], b[7 - i]);
  double v;
  std::memcpy(&v, b, 8);
  return v;
}

}  // namespace

std::string encode(const Snapshot& s) {
  nlohmann::json h;
  h["format"] = "hvp-snapshot";
  h["version"] = kSnapshotVersion;
  h["endianness"] = "little";
  h["kind"] = s.kind;
  h["components"] = s.components;
  h["phase_d"] = s.phase_d;
  h["time"] = s.time;
  h["n"] = s.lattice.n;
  h["lo"] = s.lattice.lo;
  h["hi"] = s.lattice.hi;
  std::string out = h.dump() + "\n";
  out.reserve(out.size() + 8 * s.data.size());
  for (double v : s.data) put(out, v);
  return out;
}

Snapshot decode(const std::string& bytes) {
  const auto nl = bytes.find('\n');
  if (nl == std::string::npos) throw Error(ErrorKind::ParseError, "snapshot header missing");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(bytes.substr(0, nl));
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("snapshot header: ") + e.what());
  }
  if (h.value("format", "") != "hvp-snapshot") throw Error(ErrorKind::ParseError, "not a snapshot");
  if (h.value("version", 0) != kSnapshotVersion) throw Error(ErrorKind::ParseError, "unsupported snapshot version");
  if (h.value("endianness", "") != "little") throw Error(ErrorKind::ParseError, "unsupported endianness");
  Snapshot s;
  s.kind = h.at("kind").get<std::string>();
  s.components = h.at("components").get<int>();
  s.phase_d = h.value("phase_d", 0);
  s.time = h.value("time", 0.0);
  s.lattice = make_lattice(h.at("n").get<std::vector<int>>(), h.at("lo").get<std::vector<double>>(),
                           h.at("hi").get<std::vector<double>>());
  const std::size_t per = s.kind == "complex" ? 2 : 1;
  const std::size_t count = per * static_cast<std::size_t>(s.components) * s.lattice.size();
  if (bytes.size() - nl - 1 != 8 * count) throw Error(ErrorKind::ParseError, "snapshot payload size mismatch");
  s.data.resize(count);
  const char* p = bytes.data() + nl + 1;
  for (std::size_t i = 0; i < count; ++i) s.data[i] = get(p + 8 * i);
  return s;
}

void write_snapshot(const std::string& path, const Snapshot& s) { atomic_write(path, encode(s)); }

Snapshot read_snapshot(const std::string& path) { return decode(read_file(path)); }

Snapshot to_snapshot(const WaveField& f, int phase_d, double time) {
  Snapshot s{"complex", 1, phase_d, time, f.lattice, {}};
  s.data.reserve(2 * f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    s.data.push_back(f[i].real());
    s.data.push_back(f[i].imag());
  }
  return s;
}

Snapshot to_snapshot(const RealField& f, int phase_d, double time) {
  Snapshot s{"real", 1, phase_d, time, f.lattice, {}};
  s.data.assign(f.values.data(), f.values.data() + f.size());
  return s;
}

Snapshot to_snapshot(const SpatialVectorField& f, double time) {
  Snapshot s{"real", f.components(), 0, time, f.lattice, {}};
  for (const auto& c : f.comp) s.data.insert(s.data.end(), c.data(), c.data() + c.size());
  return s;
}

Snapshot to_snapshot(const SpatialComplexVectorField& f, double time) {
  Snapshot s{"complex", f.components(), 0, time, f.lattice, {}};
  for (const auto& c : f.comp)
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      s.data.push_back(c[i].real());
      s.data.push_back(c[i].imag());
    }
  return s;
}

WaveField wave_field(const Snapshot& s) {
  if (s.kind != "complex" || s.components != 1) throw Error(ErrorKind::ParseError, "snapshot is not a scalar complex field");
  WaveField f(s.lattice);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = cplx(s.data[2 * i], s.data[2 * i + 1]);
  return f;
}

RealField real_field(const Snapshot& s) {
  if (s.kind != "real" || s.components != 1) throw Error(ErrorKind::ParseError, "snapshot is not a scalar real field");
  RealField f(s.lattice);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = s.data[i];
  return f;
}

PhaseGrid phase_grid(const Snapshot& s) {
  const int d = s.phase_d;
  if (d < 1 || s.lattice.dim() != 2 * d) throw Error(ErrorKind::ParseError, "snapshot is not on a phase grid");
  const auto& l = s.lattice;
  auto cut = [&](int from) {
    return make_lattice(std::vector<int>(l.n.begin() + from, l.n.begin() + from + d),
                        std::vector<double>(l.lo.begin() + from, l.lo.begin() + from + d),
                        std::vector<double>(l.hi.begin() + from, l.hi.begin() + from + d));
  };
  return make_grid(cut(0), cut(d));
}

}  // namespace hvp
