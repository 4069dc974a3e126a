#include "bft/weight_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace bft {

namespace {

constexpr int kMaxLayers = 64;
constexpr int kMaxChannels = 1 << 24;

const char* magic_for(WeightKind kind) {
  switch (kind) {
    case WeightKind::Butterfly: return "BFTW1";
    case WeightKind::Circulant: return "BFTC1";
    case WeightKind::LowRank:   return "BFTL1";
    case WeightKind::Fastfood:  return "BFTF1";
  }
  throw std::logic_error("unknown weight kind");
}

void write_u32(std::ostream& out, uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void write_u64(std::ostream& out, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

uint32_t read_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw std::runtime_error("weight file truncated: " + path);
  }
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
  return v;
}

uint64_t read_u64(std::istream& in, const std::string& path) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    throw std::runtime_error("weight file truncated: " + path);
  }
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

// Value count implied by the header; loads reject any other length.
int64_t expected_values(const WeightFile& f) {
  switch (f.kind) {
    case WeightKind::Butterfly: {
      ButterflySpec spec(f.n, f.aux);
      return spec.weight_count();
    }
    case WeightKind::Circulant:
      return f.n;
    case WeightKind::LowRank:
      if (f.aux.size() != 1 || f.aux[0] < 1) {
        throw std::runtime_error("low-rank weight file needs aux = {rank}");
      }
      return 2 * static_cast<int64_t>(f.n) * f.aux[0];
    case WeightKind::Fastfood:
      return 4 * static_cast<int64_t>(f.n);
  }
  throw std::logic_error("unknown weight kind");
}

void write_sidecar(const std::string& path, const WeightFile& f) {
  nlohmann::json j;
  j["magic"] = magic_for(f.kind);
  j["kind"] = weight_kind_name(f.kind);
  j["n"] = f.n;
  j["m"] = f.aux.size();
  if (f.kind == WeightKind::Butterfly) {
    j["radices"] = f.aux;
  } else {
    j["aux"] = f.aux;
  }
  j["scalar_width"] = f.scalar_width;
  j["value_count"] = f.values.size();
  std::ofstream out(path + ".json");
  out << j.dump(2) << "\n";
}

}  // namespace

const char* weight_kind_name(WeightKind kind) {
  switch (kind) {
    case WeightKind::Butterfly: return "butterfly";
    case WeightKind::Circulant: return "circulant";
    case WeightKind::LowRank:   return "lowrank";
    case WeightKind::Fastfood:  return "fastfood";
  }
  return "unknown";
}

void save_weight_file(const std::string& path, const WeightFile& file) {
  if (file.scalar_width != 32 && file.scalar_width != 64) {
    throw std::invalid_argument("scalar width must be 32 or 64, got " +
                                std::to_string(file.scalar_width));
  }
  if (static_cast<int64_t>(file.values.size()) != expected_values(file)) {
    throw std::invalid_argument(
        "weight file value count " + std::to_string(file.values.size()) +
        " does not match header (expected " +
        std::to_string(expected_values(file)) + ")");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out.write(magic_for(file.kind), 5);
  write_u32(out, static_cast<uint32_t>(file.n));
  write_u32(out, static_cast<uint32_t>(file.aux.size()));
  for (int a : file.aux) write_u32(out, static_cast<uint32_t>(a));
  write_u32(out, static_cast<uint32_t>(file.scalar_width));
  for (double v : file.values) {
    if (file.scalar_width == 64) {
      write_u64(out, std::bit_cast<uint64_t>(v));
    } else {
      write_u32(out, std::bit_cast<uint32_t>(static_cast<float>(v)));
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
  out.close();
  write_sidecar(path, file);
}

WeightFile load_weight_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open weight file: " + path);
  char magic[5];
  if (!in.read(magic, 5)) {
    throw std::runtime_error("weight file truncated: " + path);
  }
  WeightFile f;
  std::string m(magic, 5);
  if (m == "BFTW1") f.kind = WeightKind::Butterfly;
  else if (m == "BFTC1") f.kind = WeightKind::Circulant;
  else if (m == "BFTL1") f.kind = WeightKind::LowRank;
  else if (m == "BFTF1") f.kind = WeightKind::Fastfood;
  else throw std::runtime_error("bad magic in weight file: " + path);

  f.n = static_cast<int>(read_u32(in, path));
  uint32_t m_count = read_u32(in, path);
  if (f.n < 1 || f.n > kMaxChannels || m_count > kMaxLayers) {
    throw std::runtime_error("implausible weight header in " + path);
  }
  f.aux.resize(m_count);
  for (uint32_t i = 0; i < m_count; ++i) {
    f.aux[i] = static_cast<int>(read_u32(in, path));
  }
  f.scalar_width = static_cast<int>(read_u32(in, path));
  if (f.scalar_width != 32 && f.scalar_width != 64) {
    throw std::runtime_error("bad scalar width in weight file: " + path);
  }
  int64_t count;
  try {
    count = expected_values(f);
  } catch (const std::exception& e) {
    throw std::runtime_error("inconsistent weight header in " + path + ": " +
                             e.what());
  }
  f.values.resize(count);
  for (int64_t i = 0; i < count; ++i) {
    if (f.scalar_width == 64) {
      f.values[i] = std::bit_cast<double>(read_u64(in, path));
    } else {
      f.values[i] = std::bit_cast<float>(read_u32(in, path));
    }
  }
  if (in.peek() != std::ifstream::traits_type::eof()) {
    throw std::runtime_error("trailing bytes in weight file: " + path);
  }
  return f;
}

void save_butterfly_weights(const std::string& path,
                            const ButterflyWeights& wts, int scalar_width) {
  WeightFile f;
  f.kind = WeightKind::Butterfly;
  f.n = wts.spec.n;
  f.aux = wts.spec.radices;
  f.scalar_width = scalar_width;
  f.values = wts.values;
  save_weight_file(path, f);
}

ButterflyWeights load_butterfly_weights(const std::string& path) {
  WeightFile f = load_weight_file(path);
  if (f.kind != WeightKind::Butterfly) {
    throw std::runtime_error("expected butterfly weights in " + path +
                             ", found " + weight_kind_name(f.kind));
  }
  return ButterflyWeights(ButterflySpec(f.n, f.aux), std::move(f.values));
}

}  // namespace bft
