#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "specdec/dist.hpp"

namespace specdec {

enum class DecodeMode { kStochastic, kGreedy };

struct DecodeConfig {
  int gamma = 5;
  DecodeMode mode = DecodeMode::kGreedy;
  int max_new_tokens = 128;
  std::optional<TokenId> eos_token;
  std::uint64_t seed = 0;
};

// One draft/verify round. tokens_emitted is what verification produced
// (accepted_count + 1); the session may still truncate the tail of the last
// block when it crosses max_new_tokens.
struct BlockRecord {
  int start_position = 0;  // index of the block's first token in the output
  int accepted_count = 0;
  int tokens_emitted = 0;
  WeightVector weight_used = WeightVector::uniform(1);
};

struct RunRecords {
  DecodeConfig config;
  std::vector<BlockRecord> blocks;

  int total_accepted() const {
    int n = 0;
    for (const BlockRecord& b : blocks) n += b.accepted_count;
    return n;
  }
  int total_emitted() const {
    int n = 0;
    for (const BlockRecord& b : blocks) n += b.tokens_emitted;
    return n;
  }
};

struct DecodeResult {
  std::vector<TokenId> tokens;  // new tokens only, truncation applied
  RunRecords records;
};

}  // namespace specdec
