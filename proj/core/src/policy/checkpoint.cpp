#include "ast/policy/checkpoint.hpp"

#include "ast/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace ast::policy {
namespace {

constexpr std::array<std::uint8_t, 8> kMagic = {'A', 'S', 'T', 'P', 'O', 'L', 'C', 'Y'};
constexpr std::size_t kHeaderSize = 48;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(const std::vector<std::uint8_t>& in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[offset + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t offset) {
  return static_cast<std::uint32_t>(get_le(in, offset, 4));
}

}  // namespace

std::vector<std::uint8_t> serialize(const PolicyCheckpoint& ck) {
  ck.params.validate();
  const auto& s = ck.params.shape;
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.reserve(kHeaderSize + 8 * static_cast<std::size_t>(ck.params.theta.size()));
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(s.architecture));
  put_u32(out, static_cast<std::uint32_t>(ck.encoding));
  put_u32(out, static_cast<std::uint32_t>(s.input_dim));
  put_u32(out, static_cast<std::uint32_t>(s.hidden_dim));
  put_u32(out, static_cast<std::uint32_t>(s.hidden_layers));
  put_u32(out, static_cast<std::uint32_t>(s.output_dim));
  put_u32(out, 0);
  put_u64(out, static_cast<std::uint64_t>(ck.params.theta.size()));
  for (Eigen::Index i = 0; i < ck.params.theta.size(); ++i) put_u64(out, std::bit_cast<std::uint64_t>(ck.params.theta[i]));
  return out;
}

PolicyCheckpoint deserialize(const std::vector<std::uint8_t>& in) {
  if (in.size() < kHeaderSize || !std::equal(kMagic.begin(), kMagic.end(), in.begin()))
    throw InvalidInput("policy checkpoint: bad magic");
  const std::uint32_t version = get_u32(in, 8);
  if (version != kCheckpointVersion)
    throw InvalidInput("policy checkpoint: unsupported version " + std::to_string(version));
  PolicyCheckpoint ck;
  auto& s = ck.params.shape;
  const std::uint32_t arch = get_u32(in, 12);
  if (arch > 1) throw InvalidInput("policy checkpoint: unknown architecture");
  s.architecture = static_cast<Architecture>(arch);
  const std::uint32_t enc = get_u32(in, 16);
  if (enc > 2) throw InvalidInput("policy checkpoint: unknown input encoding");
  ck.encoding = static_cast<InputEncoding>(enc);
  s.input_dim = static_cast<int>(get_u32(in, 20));
  s.hidden_dim = static_cast<int>(get_u32(in, 24));
  s.hidden_layers = static_cast<int>(get_u32(in, 28));
  s.output_dim = static_cast<int>(get_u32(in, 32));
  const std::uint64_t n = get_le(in, 40, 8);
  if (in.size() != kHeaderSize + 8 * n) throw InvalidInput("policy checkpoint: truncated parameter array");
  ck.params.theta.resize(static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i)
    ck.params.theta[static_cast<Eigen::Index>(i)] = std::bit_cast<double>(get_le(in, kHeaderSize + 8 * i, 8));
  ck.params.validate();
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const PolicyCheckpoint& checkpoint) {
  const auto bytes = serialize(checkpoint);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write policy checkpoint " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing policy checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

PolicyCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open policy checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace ast::policy
