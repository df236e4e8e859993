#include "dipstop/nn/serialize.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace dipstop::nn {

namespace {
void check_stream(std::istream& is, const char* what) {
  if (!is) throw std::runtime_error(std::string("checkpoint read failed: ") + what);
}
}  // namespace

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void write_string(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void write_floats(std::ostream& os, const std::vector<float>& v) {
  write_u64(os, static_cast<std::uint64_t>(v.size()));
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(float)));
}

std::uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  check_stream(is, "u32");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  check_stream(is, "u64");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::string read_string(std::istream& is) {
  const std::uint32_t len = read_u32(is);
  if (len > (1u << 20)) throw std::runtime_error("checkpoint read failed: string too long");
  std::string s(len, '\0');
  is.read(s.data(), static_cast<std::streamsize>(len));
  check_stream(is, "string");
  return s;
}

std::vector<float> read_floats(std::istream& is) {
  const std::uint64_t n = read_u64(is);
  if (n > (1ull << 32)) throw std::runtime_error("checkpoint read failed: blob too large");
  std::vector<float> v(static_cast<std::size_t>(n));
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(n * sizeof(float)));
  check_stream(is, "floats");
  return v;
}

ParamBlobs export_params(const std::vector<ParamRef>& params) {
  ParamBlobs blobs;
  for (const auto& p : params) {
    if (!blobs.emplace(p.name, *p.value).second)
      throw std::logic_error("duplicate parameter name: " + p.name);
  }
  return blobs;
}

void import_params(const ParamBlobs& blobs, const std::vector<ParamRef>& params) {
  if (blobs.size() != params.size())
    throw std::runtime_error("parameter set mismatch: expected " +
                             std::to_string(params.size()) + " blobs, found " +
                             std::to_string(blobs.size()));
  for (const auto& p : params) {
    const auto it = blobs.find(p.name);
    if (it == blobs.end())
      throw std::runtime_error("missing parameter blob: " + p.name);
    if (it->second.size() != p.value->size())
      throw std::runtime_error("parameter size mismatch for " + p.name);
    *p.value = it->second;
  }
}

void write_blobs(std::ostream& os, const ParamBlobs& blobs) {
  write_u32(os, static_cast<std::uint32_t>(blobs.size()));
  for (const auto& [name, data] : blobs) {
    write_string(os, name);
    write_floats(os, data);
  }
}

ParamBlobs read_blobs(std::istream& is) {
  const std::uint32_t count = read_u32(is);
  ParamBlobs blobs;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = read_string(is);
    blobs[name] = read_floats(is);
  }
  return blobs;
}

}  // namespace dipstop::nn
