#include "lfpp/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace lfpp {

static_assert(std::endian::native == std::endian::little,
              "snapshot IO assumes a little-endian host");

namespace {

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("snapshot: truncated file");
  return v;
}

}  // namespace

void write_snapshot(const std::string& path, const GridField& field) {
  field.spec.validate();
  field.check_finite();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path);
  os.write("LFP1", 4);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(field.spec.nx));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(field.spec.ny));
  put<double>(os, field.spec.spacing);
  put<double>(os, field.spec.origin.real());
  put<double>(os, field.spec.origin.imag());
  put<std::uint8_t>(os, static_cast<std::uint8_t>(field.kind));
  put<double>(os, field.kind_param);
  os.write(reinterpret_cast<const char*>(field.values.data()),
           static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!os) {
    os.close();
    std::remove(path.c_str());
    throw std::runtime_error("snapshot: write failed for " + path);
  }
}

GridField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "LFP1", 4) != 0)
    throw std::runtime_error("snapshot: bad magic in " + path);
  GridSpec spec;
  spec.nx = static_cast<int>(get<std::uint32_t>(is));
  spec.ny = static_cast<int>(get<std::uint32_t>(is));
  spec.spacing = get<double>(is);
  const double ox = get<double>(is);
  const double oy = get<double>(is);
  spec.origin = complex(ox, oy);
  spec.validate();
  const auto kind = static_cast<FieldKind>(get<std::uint8_t>(is));
  const double kind_param = get<double>(is);
  GridField field(spec);
  field.kind = kind;
  field.kind_param = kind_param;
  field.provenance = std::string("snapshot:") + field_kind_name(kind);
  is.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(field.values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("snapshot: truncated values in " + path);
  field.check_finite();
  return field;
}

}  // namespace lfpp
