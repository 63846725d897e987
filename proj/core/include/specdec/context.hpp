#pragma once

#include <vector>

#include "specdec/dist.hpp"

namespace specdec {

// Tag on a run of prompt tokens. VISUAL segments are the ones context
// transforms act on; generated tokens are always plain text.
enum class SegmentTag { kText, kVisual, kSystem };

struct Segment {
  SegmentTag tag = SegmentTag::kText;
  std::vector<TokenId> tokens;
};

// Decoding context: an immutable tagged prompt plus the tokens generated so
// far. Models condition on the flattened token sequence; transforms rewrite
// segments but never touch `generated`.
struct Context {
  std::vector<Segment> segments;
  std::vector<TokenId> generated;

  void append(TokenId y) { generated.push_back(y); }

  // All segment tokens in order, followed by the generated tokens.
  std::vector<TokenId> flatten() const {
    std::vector<TokenId> out;
    std::size_t n = generated.size();
    for (const Segment& s : segments) n += s.tokens.size();
    out.reserve(n);
    for (const Segment& s : segments) {
      out.insert(out.end(), s.tokens.begin(), s.tokens.end());
    }
    out.insert(out.end(), generated.begin(), generated.end());
    return out;
  }
};

// Convenience for building single-segment prompts in tests and tools.
inline Context text_prompt(std::vector<TokenId> tokens) {
  Context ctx;
  ctx.segments.push_back({SegmentTag::kText, std::move(tokens)});
  return ctx;
}

}  // namespace specdec
