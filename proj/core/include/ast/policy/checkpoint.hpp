#pragma once

#include "ast/policy/policy.hpp"
#include "ast/policy/policy_input.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace ast::policy {

/// On-disk policy. Binary layout, all integers and doubles little-endian:
///
///   offset  size  field
///   0       8     magic "ASTPOLCY"
///   8       4     format version (1)
///   12      4     architecture (0 = LSTM, 1 = MLP)
///   16      4     input encoding
///   20      4     input_dim
///   24      4     hidden_dim
///   28      4     hidden_layers
///   32      4     output_dim
///   36      4     reserved (0)
///   40      8     parameter count n
///   48      8n    theta as IEEE-754 binary64
struct PolicyCheckpoint {
  PolicyParams params;
  InputEncoding encoding = InputEncoding::kPreviousAction;

  friend bool operator==(const PolicyCheckpoint&, const PolicyCheckpoint&) = default;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> serialize(const PolicyCheckpoint& checkpoint);
PolicyCheckpoint deserialize(const std::vector<std::uint8_t>& bytes);

/// Writes to a temporary sibling then renames, so a crash never leaves a
/// truncated checkpoint behind.
void save_checkpoint(const std::filesystem::path& path, const PolicyCheckpoint& checkpoint);
PolicyCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace ast::policy
