#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "specdec/tabed.hpp"

namespace specdec {

// Drafting distributions conditioned on one root-to-node path.
struct PathDists {
  Distribution ensembled;
  std::vector<Distribution> per_source;  // one row per source; never empty
};

// Closure handed to build_tree: path tokens in, distributions out. The base
// context is baked into the closure.
using PathDrafter = std::function<PathDists(const std::vector<TokenId>& path)>;

struct TreeNode {
  TokenId token = -1;  // token on the edge into this node; -1 at the root
  int depth = 0;
  int parent = -1;
  std::vector<int> children;  // node indices, in descending-probability order
  // Drafting distributions at this node's path; present iff the node was
  // expanded (depth < tree depth), and the source a child's token was ranked
  // from. Kept on the parent so siblings share one copy.
  std::optional<Distribution> child_dist;
  std::vector<Distribution> child_source_dists;
};

// Full width-d token tree of drafted continuations to depth gamma.
// nodes[0] is the root (the context itself); every non-root node's token is
// one of the top-d tokens of its parent's drafting distribution.
struct TokenTree {
  int width = 1;
  int depth = 0;
  std::vector<TreeNode> nodes;

  // Edge tokens from the root down to `node` (excluding the root itself).
  std::vector<TokenId> path_tokens(int node) const;
};

// Breadth-first expansion: each node at depth < gamma gets the top `width`
// tokens of the drafting distribution at its path as children.
TokenTree build_tree(const PathDrafter& draft, int width, int gamma);

// Drafter over a single source's transformed view of ctx.
PathDrafter single_source_drafter(const DraftSource& source, const Context& ctx);

// Drafter over the weighted ensemble with block-fixed weights w.
PathDrafter ensemble_drafter(const std::vector<DraftSource>& sources,
                             const Context& ctx, const WeightVector& w);

// Greedy-chain walk over the tree: follow the target's argmax as long as a
// matching child exists. extra_token is the argmax at the first miss, or
// the bonus argmax when the walk reaches full depth. target_dists covers
// every accepted position plus the miss/bonus position.
struct TreeVerifyResult {
  std::vector<TokenId> accepted_path;
  int accepted_count = 0;
  TokenId extra_token = 0;
  std::vector<Distribution> target_dists;
};

TreeVerifyResult verify_tree_greedy(const SequenceModel& target, const Context& ctx,
                                    const TokenTree& tree);

// History entries for the realized positions of a verified tree block: the
// accepted path plus the miss position; the bonus position (full-depth walk)
// has no drafting distributions and is skipped — same rule as the linear
// update_history.
void update_history_from_tree(HistoryCache& cache, const TokenTree& tree,
                              const TreeVerifyResult& tvr, int block_start_position);

struct TreeSessionOptions {
  int width = 2;
  // Engaged: adaptive ensemble weights via the linear-style history cache.
  // Disengaged: single-source drafting (sources must then have exactly one
  // element).
  std::optional<TabedOptions> tabed;
};

// Greedy decode loop with tree-drafted blocks. Rejects non-greedy configs:
// tree verification is defined for the greedy regime only.
DecodeResult tree_session(const SequenceModel& target,
                          const std::vector<DraftSource>& sources, const Context& ctx,
                          const DecodeConfig& cfg, const TreeSessionOptions& opts);

}  // namespace specdec
