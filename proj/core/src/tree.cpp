#include "specdec/tree.hpp"

#include <algorithm>
#include <string>

#include "emit_util.hpp"
#include "specdec/errors.hpp"

namespace specdec {

std::vector<TokenId> TokenTree::path_tokens(int node) const {
  std::vector<TokenId> path;
  for (int i = node; i > 0; i = nodes[static_cast<std::size_t>(i)].parent) {
    path.push_back(nodes[static_cast<std::size_t>(i)].token);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

TokenTree build_tree(const PathDrafter& draft, int width, int gamma) {
  if (gamma < 1) throw BadParams("build_tree: gamma must be >= 1");
  if (width < 1) throw WidthOutOfRange("build_tree: width must be >= 1");

  TokenTree tree;
  tree.width = width;
  tree.depth = gamma;
  tree.nodes.push_back(TreeNode{});

  std::vector<int> frontier{0};
  for (int depth = 0; depth < gamma; ++depth) {
    std::vector<int> next;
    for (int idx : frontier) {
      PathDists dists = draft(tree.path_tokens(idx));
      if (width > dists.ensembled.vocab_size()) {
        throw WidthOutOfRange("build_tree: width " + std::to_string(width) +
                              " exceeds vocab " +
                              std::to_string(dists.ensembled.vocab_size()));
      }
      const std::vector<TokenId> kids = top_d(dists.ensembled, width);
      tree.nodes[static_cast<std::size_t>(idx)].child_dist = std::move(dists.ensembled);
      tree.nodes[static_cast<std::size_t>(idx)].child_source_dists =
          std::move(dists.per_source);
      for (TokenId y : kids) {
        const int child_idx = static_cast<int>(tree.nodes.size());
        TreeNode child;
        child.token = y;
        child.depth = depth + 1;
        child.parent = idx;
        tree.nodes.push_back(std::move(child));
        tree.nodes[static_cast<std::size_t>(idx)].children.push_back(child_idx);
        next.push_back(child_idx);
      }
    }
    frontier = std::move(next);
  }
  return tree;
}

PathDrafter single_source_drafter(const DraftSource& source, const Context& ctx) {
  Context view = source.transform(ctx);
  auto model = source.model;
  return [view, model](const std::vector<TokenId>& path) {
    Context extended = view;
    for (TokenId y : path) extended.append(y);
    Distribution q = model->next_distribution(extended);
    std::vector<Distribution> per_source{q};
    return PathDists{std::move(q), std::move(per_source)};
  };
}

PathDrafter ensemble_drafter(const std::vector<DraftSource>& sources,
                             const Context& ctx, const WeightVector& w) {
  if (sources.empty()) throw BadParams("ensemble_drafter: no sources");
  if (static_cast<int>(sources.size()) != w.m()) {
    throw DimensionMismatch("ensemble_drafter: " + std::to_string(sources.size()) +
                            " sources vs " + std::to_string(w.m()) + " weights");
  }
  std::vector<Context> views;
  views.reserve(sources.size());
  std::vector<std::shared_ptr<const SequenceModel>> models;
  models.reserve(sources.size());
  for (const DraftSource& s : sources) {
    views.push_back(s.transform(ctx));
    models.push_back(s.model);
  }
  return [views, models, w](const std::vector<TokenId>& path) {
    std::vector<Distribution> qs;
    qs.reserve(models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
      Context extended = views[i];
      for (TokenId y : path) extended.append(y);
      qs.push_back(models[i]->next_distribution(extended));
    }
    Distribution mixed = weighted_average(qs, w);
    return PathDists{std::move(mixed), std::move(qs)};
  };
}

TreeVerifyResult verify_tree_greedy(const SequenceModel& target, const Context& ctx,
                                    const TokenTree& tree) {
  TreeVerifyResult out;
  Context run = ctx;
  int node = 0;
  for (;;) {
    Distribution p = target.next_distribution(run);
    const TokenId best = p.argmax();
    out.target_dists.push_back(std::move(p));
    const TreeNode& cur = tree.nodes[static_cast<std::size_t>(node)];
    int descend = -1;
    for (int child : cur.children) {
      if (tree.nodes[static_cast<std::size_t>(child)].token == best) {
        descend = child;
        break;
      }
    }
    if (descend < 0) {
      // First miss (or bonus position when the node has no children at all).
      out.extra_token = best;
      return out;
    }
    out.accepted_path.push_back(best);
    out.accepted_count += 1;
    run.append(best);
    node = descend;
  }
}

void update_history_from_tree(HistoryCache& cache, const TokenTree& tree,
                              const TreeVerifyResult& tvr, int block_start_position) {
  if (tvr.accepted_count > tree.depth ||
      static_cast<int>(tvr.accepted_path.size()) != tvr.accepted_count ||
      static_cast<int>(tvr.target_dists.size()) != tvr.accepted_count + 1) {
    throw InconsistentPair("update_history_from_tree: result does not fit the tree");
  }
  int node = 0;
  // Realized positions: the accepted path, plus the miss position when the
  // walk stopped short of full depth. Each position's source distributions
  // live on the node the walk was standing at.
  for (int t = 0; t <= tvr.accepted_count; ++t) {
    const bool miss_position = t == tvr.accepted_count;
    if (miss_position && tvr.accepted_count == tree.depth) break;  // bonus: no q
    const TreeNode& cur = tree.nodes[static_cast<std::size_t>(node)];
    const TokenId realized =
        miss_position ? tvr.extra_token : tvr.accepted_path[static_cast<std::size_t>(t)];
    cache.push(HistoryEntry{block_start_position + t,
                            tvr.target_dists[static_cast<std::size_t>(t)],
                            cur.child_source_dists, realized});
    if (miss_position) break;
    int descend = -1;
    for (int child : cur.children) {
      if (tree.nodes[static_cast<std::size_t>(child)].token ==
          tvr.accepted_path[static_cast<std::size_t>(t)]) {
        descend = child;
        break;
      }
    }
    if (descend < 0) {
      throw InconsistentPair("update_history_from_tree: accepted path leaves the tree");
    }
    node = descend;
  }
}

DecodeResult tree_session(const SequenceModel& target,
                          const std::vector<DraftSource>& sources, const Context& ctx,
                          const DecodeConfig& cfg, const TreeSessionOptions& opts) {
  if (cfg.mode != DecodeMode::kGreedy) {
    throw BadParams("tree_session: tree verification is greedy-only");
  }
  if (cfg.gamma < 1) throw BadParams("tree_session: gamma must be >= 1");
  if (cfg.max_new_tokens < 1) throw BadParams("tree_session: max_new_tokens must be >= 1");
  if (sources.empty()) throw BadParams("tree_session: no sources");
  if (!opts.tabed && sources.size() != 1) {
    throw BadParams("tree_session: multiple sources need the ensemble options set");
  }

  DecodeResult result;
  result.records.config = cfg;
  Context run = ctx;
  const int m = static_cast<int>(sources.size());
  HistoryCache cache(m, opts.tabed ? opts.tabed->window : kWindowAll);

  bool done = false;
  while (!done) {
    const int start = static_cast<int>(result.tokens.size());
    WeightVector w = opts.tabed
                         ? select_weight(cache, opts.tabed->policy, opts.tabed->criterion)
                         : WeightVector::uniform(1);
    PathDrafter drafter = m == 1 && !opts.tabed
                              ? single_source_drafter(sources.front(), run)
                              : ensemble_drafter(sources, run, w);
    TokenTree tree = build_tree(drafter, opts.width, cfg.gamma);
    TreeVerifyResult tvr = verify_tree_greedy(target, run, tree);
    update_history_from_tree(cache, tree, tvr, start);

    std::vector<TokenId> emitted = tvr.accepted_path;
    emitted.push_back(tvr.extra_token);
    done = detail::append_emitted(emitted, cfg, result.tokens, run);
    result.records.blocks.push_back(
        {start, tvr.accepted_count, static_cast<int>(emitted.size()), w});
  }
  return result;
}

}  // namespace specdec
