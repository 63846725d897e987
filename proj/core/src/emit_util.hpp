#pragma once

// Internal helper shared by the linear, ensembled and tree decode loops.

#include "specdec/records.hpp"

namespace specdec::detail {

// Append verified tokens to the running output/context, honoring EOS and
// max_new_tokens. Returns true when the session should stop.
template <typename ContextT>
bool append_emitted(const std::vector<TokenId>& emitted, const DecodeConfig& cfg,
                    std::vector<TokenId>& out, ContextT& run) {
  for (TokenId y : emitted) {
    out.push_back(y);
    run.append(y);
    if (cfg.eos_token && y == *cfg.eos_token) return true;
    if (static_cast<int>(out.size()) >= cfg.max_new_tokens) return true;
  }
  return false;
}

}  // namespace specdec::detail
