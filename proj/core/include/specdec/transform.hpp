#pragma once

#include <functional>
#include <memory>
#include <string>

#include "specdec/context.hpp"
#include "specdec/model.hpp"

namespace specdec {

// The four drafting-view analogs. Each rewrites VISUAL segments only;
// TEXT/SYSTEM segments and generated tokens pass through untouched.
enum class TransformKind {
  kIdentity,         // full context, unchanged
  kDropVisual,       // each VISUAL segment becomes one separator token
  kSummarizeVisual,  // each VISUAL segment becomes its most frequent tokens
  kPoolVisual,       // each VISUAL segment keeps every s-th token
};

struct TransformParams {
  TokenId separator = 0;  // drop_visual replacement token
  int summary_len = 1;    // summarize_visual: tokens kept per segment
  int pool_stride = 2;    // pool_visual: keep indices 0, s, 2s, ...
};

using ContextTransform = std::function<Context(const Context&)>;

ContextTransform make_transform(TransformKind kind, const TransformParams& params = {});

TransformKind transform_kind_from_string(const std::string& name);
std::string to_string(TransformKind kind);

// One drafting method: a model paired with the context view it drafts from.
struct DraftSource {
  std::string name;
  std::shared_ptr<const SequenceModel> model;
  ContextTransform transform;

  Distribution next_distribution(const Context& ctx) const {
    return model->next_distribution(transform(ctx));
  }
};

}  // namespace specdec
