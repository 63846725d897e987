#include "specdec/transform.hpp"

#include <algorithm>
#include <map>

#include "specdec/errors.hpp"

namespace specdec {
namespace {

// Top `len` tokens of the segment by frequency (ties to earlier first
// occurrence), emitted in first-occurrence order; the deterministic stand-in
// for a caption.
std::vector<TokenId> summarize(const std::vector<TokenId>& tokens, int len) {
  std::vector<TokenId> distinct;          // in first-occurrence order
  std::map<TokenId, int> freq;
  for (TokenId t : tokens) {
    if (freq[t]++ == 0) distinct.push_back(t);
  }
  std::vector<TokenId> ranked = distinct;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](TokenId a, TokenId b) { return freq[a] > freq[b]; });
  if (static_cast<int>(ranked.size()) > len) {
    ranked.resize(static_cast<std::size_t>(len));
  }
  std::vector<TokenId> out;
  for (TokenId t : distinct) {
    if (std::find(ranked.begin(), ranked.end(), t) != ranked.end()) {
      out.push_back(t);
    }
  }
  return out;
}

std::vector<TokenId> pool(const std::vector<TokenId>& tokens, int stride) {
  std::vector<TokenId> out;
  for (std::size_t i = 0; i < tokens.size(); i += static_cast<std::size_t>(stride)) {
    out.push_back(tokens[i]);
  }
  return out;
}

}  // namespace

ContextTransform make_transform(TransformKind kind, const TransformParams& params) {
  switch (kind) {
    case TransformKind::kIdentity:
      return [](const Context& ctx) { return ctx; };
    case TransformKind::kDropVisual: {
      const TokenId sep = params.separator;
      if (sep < 0) throw BadParams("make_transform: separator must be >= 0");
      return [sep](const Context& ctx) {
        Context out = ctx;
        for (Segment& s : out.segments) {
          if (s.tag == SegmentTag::kVisual) {
            s.tag = SegmentTag::kText;
            s.tokens = {sep};
          }
        }
        return out;
      };
    }
    case TransformKind::kSummarizeVisual: {
      const int len = params.summary_len;
      if (len < 1) throw BadParams("make_transform: summary_len must be >= 1");
      return [len](const Context& ctx) {
        Context out = ctx;
        for (Segment& s : out.segments) {
          if (s.tag == SegmentTag::kVisual) {
            s.tag = SegmentTag::kText;
            s.tokens = summarize(s.tokens, len);
          }
        }
        return out;
      };
    }
    case TransformKind::kPoolVisual: {
      const int stride = params.pool_stride;
      if (stride < 2) throw BadParams("make_transform: pool_stride must be >= 2");
      return [stride](const Context& ctx) {
        Context out = ctx;
        for (Segment& s : out.segments) {
          if (s.tag == SegmentTag::kVisual) {
            s.tokens = pool(s.tokens, stride);
          }
        }
        return out;
      };
    }
  }
  throw BadParams("make_transform: unknown kind");
}

TransformKind transform_kind_from_string(const std::string& name) {
  if (name == "identity") return TransformKind::kIdentity;
  if (name == "drop_visual") return TransformKind::kDropVisual;
  if (name == "summarize_visual") return TransformKind::kSummarizeVisual;
  if (name == "pool_visual") return TransformKind::kPoolVisual;
  throw BadParams("unknown transform kind: " + name);
}

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::kIdentity: return "identity";
    case TransformKind::kDropVisual: return "drop_visual";
    case TransformKind::kSummarizeVisual: return "summarize_visual";
    case TransformKind::kPoolVisual: return "pool_visual";
  }
  return "unknown";
}

}  // namespace specdec
