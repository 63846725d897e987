#include <algorithm>
#include <memory>
#include <set>

#include "doctest.h"
#include "specdec/errors.hpp"
#include "specdec/oracle.hpp"
#include "specdec/session.hpp"
#include "specdec/tree.hpp"
#include "util.hpp"

using namespace specdec;

namespace {

DraftSource identity_source(std::shared_ptr<const SequenceModel> model,
                            const std::string& name = "src") {
  return DraftSource{name, std::move(model), make_transform(TransformKind::kIdentity)};
}

}  // namespace

TEST_CASE("width-1 tree is the greedy draft chain") {
  auto model = std::make_shared<testutil::CycleModel>(5);
  auto src = identity_source(model);
  auto ctx = text_prompt({0});
  auto tree = build_tree(single_source_drafter(src, ctx), 1, 3);

  CHECK(tree.width == 1);
  CHECK(tree.depth == 3);
  REQUIRE(tree.nodes.size() == 4);  // root plus one node per depth

  Rng rng(1);
  auto block = draft_block(src, ctx, 3, DecodeMode::kGreedy, rng);
  std::vector<TokenId> chain;
  int node = 0;
  while (!tree.nodes[node].children.empty()) {
    node = tree.nodes[node].children[0];
    chain.push_back(tree.nodes[node].token);
  }
  CHECK(chain == block.tokens);
  CHECK(tree.path_tokens(node) == chain);
}

TEST_CASE("tree nodes hold ranked distinct children") {
  Rng setup(3);
  auto model = std::make_shared<testutil::ConstModel>(
      testutil::random_distribution(setup, 6));
  auto src = identity_source(model);
  auto tree = build_tree(single_source_drafter(src, text_prompt({0})), 3, 2);

  CHECK(tree.nodes.size() <= 1 + 3 + 9);
  for (const auto& node : tree.nodes) {
    if (node.depth < tree.depth) {
      REQUIRE(node.child_dist.has_value());
      REQUIRE(node.children.size() == 3);
      std::set<TokenId> seen;
      double prev = 2.0;
      for (int child_idx : node.children) {
        const auto& child = tree.nodes[child_idx];
        CHECK(child.parent >= 0);
        CHECK(tree.nodes[child.parent].depth == node.depth);
        CHECK(seen.insert(child.token).second);
        double mass = (*node.child_dist)[child.token];
        CHECK(mass <= prev + 1e-15);
        prev = mass;
      }
    } else {
      CHECK(node.children.empty());
    }
  }
}

TEST_CASE("vocabulary-wide tree enumerates every sequence") {
  auto model = std::make_shared<testutil::ConstModel>(Distribution::uniform(3));
  auto src = identity_source(model);
  auto tree = build_tree(single_source_drafter(src, text_prompt({0})), 3, 2);
  REQUIRE(tree.nodes.size() == 1 + 3 + 9);
  std::set<std::vector<TokenId>> leaves;
  for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i) {
    if (tree.nodes[i].depth == 2) leaves.insert(tree.path_tokens(i));
  }
  CHECK(leaves.size() == 9);
}

TEST_CASE("tree width is validated against the vocabulary") {
  auto model = std::make_shared<testutil::ConstModel>(Distribution::uniform(3));
  auto src = identity_source(model);
  auto drafter = single_source_drafter(src, text_prompt({0}));
  CHECK_THROWS_AS(build_tree(drafter, 0, 2), WidthOutOfRange);
  CHECK_THROWS_AS(build_tree(drafter, 4, 2), WidthOutOfRange);
  CHECK_THROWS_AS(build_tree(drafter, 2, 0), BadParams);
}

TEST_CASE("width-1 tree verification equals linear greedy verification") {
  Rng setup(7);
  auto target = std::make_shared<KgramModel>(
      train_kgram(testutil::random_corpus(setup, 6, 4, 40), 1, 0.1, 6));
  auto drafter_model = std::make_shared<KgramModel>(
      train_kgram(testutil::random_corpus(setup, 6, 4, 40), 1, 0.1, 6));
  auto src = identity_source(drafter_model);

  for (auto prompt : {std::vector<TokenId>{0}, std::vector<TokenId>{1, 2},
                      std::vector<TokenId>{5, 5}}) {
    auto ctx = text_prompt(prompt);
    auto tree = build_tree(single_source_drafter(src, ctx), 1, 4);
    auto tvr = verify_tree_greedy(*target, ctx, tree);

    Rng rng(0);
    auto block = draft_block(src, ctx, 4, DecodeMode::kGreedy, rng);
    auto vr = verify_greedy(*target, ctx, block);

    CHECK(tvr.accepted_count == vr.accepted_count);
    std::vector<TokenId> emitted = tvr.accepted_path;
    emitted.push_back(tvr.extra_token);
    CHECK(emitted == vr.emitted_tokens);
    REQUIRE(tvr.target_dists.size() == vr.target_dists.size());
  }
}

TEST_CASE("full-width tree accepts the whole walk") {
  auto target = std::make_shared<testutil::CycleModel>(3);
  auto src = identity_source(std::make_shared<testutil::ConstModel>(
      Distribution::uniform(3)));
  auto ctx = text_prompt({0});
  auto tree = build_tree(single_source_drafter(src, ctx), 3, 2);
  auto tvr = verify_tree_greedy(*target, ctx, tree);
  CHECK(tvr.accepted_count == 2);
  CHECK(tvr.accepted_path == std::vector<TokenId>{1, 2});
  CHECK(tvr.extra_token == 0);  // bonus continues the cycle
  REQUIRE(tvr.target_dists.size() == 3);
}

TEST_CASE("constructed miss stops the walk at depth one") {
  auto target = std::make_shared<testutil::CycleModel>(4);
  // Drafter never ranks the cycle's second step: mass only on tokens 1 and 3.
  class SkewModel : public SequenceModel {
   public:
    int vocab_size() const override { return 4; }
    Distribution next_distribution(const Context& ctx) const override {
      if (ctx.flatten().size() <= 1) return Distribution({0.0, 1.0, 0.0, 0.0});
      return Distribution({0.0, 0.6, 0.0, 0.4});
    }
  };
  auto src = identity_source(std::make_shared<SkewModel>());
  auto ctx = text_prompt({0});
  auto tree = build_tree(single_source_drafter(src, ctx), 2, 3);
  auto tvr = verify_tree_greedy(*target, ctx, tree);
  CHECK(tvr.accepted_count == 1);
  CHECK(tvr.accepted_path == std::vector<TokenId>{1});
  CHECK(tvr.extra_token == 2);  // the target's argmax at the miss
}

TEST_CASE("acceptance is monotone in tree width") {
  Rng setup(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto target = std::make_shared<KgramModel>(train_kgram(
        testutil::random_corpus(setup, 5, 3, 30), 1, 0.1, 5));
    auto drafter_model = std::make_shared<KgramModel>(train_kgram(
        testutil::random_corpus(setup, 5, 3, 30), 1, 0.1, 5));
    auto src = identity_source(drafter_model);
    auto ctx = text_prompt({static_cast<TokenId>(trial % 5)});
    int prev = -1;
    for (int width = 1; width <= 4; ++width) {
      auto tree = build_tree(single_source_drafter(src, ctx), width, 3);
      auto tvr = verify_tree_greedy(*target, ctx, tree);
      CHECK(tvr.accepted_count >= prev);
      prev = tvr.accepted_count;
    }
  }
}

TEST_CASE("width-1 tree session equals the linear session") {
  Rng setup(13);
  auto target = std::make_shared<KgramModel>(
      train_kgram(testutil::random_corpus(setup, 6, 4, 50), 2, 0.05, 6));
  auto other = std::make_shared<KgramModel>(
      train_kgram(testutil::random_corpus(setup, 6, 4, 50), 2, 0.05, 6));

  DecodeConfig cfg;
  cfg.gamma = 4;
  cfg.mode = DecodeMode::kGreedy;
  cfg.max_new_tokens = 40;

  SUBCASE("single source") {
    std::vector<DraftSource> sources{identity_source(other, "b")};
    TreeSessionOptions opts;
    opts.width = 1;
    auto via_tree = tree_session(*target, sources, text_prompt({2}), cfg, opts);
    auto linear = decode_session(*target, sources[0], text_prompt({2}), cfg);
    CHECK(via_tree.tokens == linear.tokens);
    REQUIRE(via_tree.records.blocks.size() == linear.records.blocks.size());
    for (std::size_t i = 0; i < linear.records.blocks.size(); ++i) {
      CHECK(via_tree.records.blocks[i].accepted_count ==
            linear.records.blocks[i].accepted_count);
    }
  }

  SUBCASE("adaptive ensemble") {
    std::vector<DraftSource> sources{identity_source(target, "a"),
                                     identity_source(other, "b")};
    TreeSessionOptions opts;
    opts.width = 1;
    opts.tabed = TabedOptions{};
    auto via_tree = tree_session(*target, sources, text_prompt({2}), cfg, opts);
    auto linear = tabed_session(*target, sources, text_prompt({2}), cfg, TabedOptions{});
    CHECK(via_tree.tokens == linear.tokens);
    REQUIRE(via_tree.records.blocks.size() == linear.records.blocks.size());
    for (std::size_t i = 0; i < linear.records.blocks.size(); ++i) {
      CHECK(via_tree.records.blocks[i].accepted_count ==
            linear.records.blocks[i].accepted_count);
      for (int s = 0; s < 2; ++s) {
        CHECK(via_tree.records.blocks[i].weight_used[s] ==
              doctest::Approx(linear.records.blocks[i].weight_used[s]));
      }
    }
  }
}

TEST_CASE("tree sessions are greedy only and check source arity") {
  auto target = std::make_shared<testutil::CycleModel>(4);
  std::vector<DraftSource> sources{identity_source(target)};
  DecodeConfig cfg;
  cfg.mode = DecodeMode::kStochastic;
  CHECK_THROWS_AS(tree_session(*target, sources, text_prompt({0}), cfg, {}), BadParams);

  DecodeConfig greedy;
  greedy.mode = DecodeMode::kGreedy;
  std::vector<DraftSource> two{identity_source(target, "a"),
                               identity_source(target, "b")};
  TreeSessionOptions no_tabed;
  CHECK_THROWS_AS(tree_session(*target, two, text_prompt({0}), greedy, no_tabed),
                  BadParams);
  CHECK_THROWS_AS(
      tree_session(*target, {}, text_prompt({0}), greedy, TreeSessionOptions{}),
      BadParams);
}

TEST_CASE("tree history updates mirror the linear rule") {
  auto model = std::make_shared<testutil::CycleModel>(4);
  auto src = identity_source(model);
  auto ctx = text_prompt({0});

  SUBCASE("full-depth walk skips the bonus position") {
    auto tree = build_tree(single_source_drafter(src, ctx), 2, 3);
    auto tvr = verify_tree_greedy(*model, ctx, tree);
    REQUIRE(tvr.accepted_count == 3);
    HistoryCache cache(1);
    update_history_from_tree(cache, tree, tvr, 0);
    CHECK(cache.size() == 3);
    for (std::size_t i = 0; i < cache.size(); ++i) {
      CHECK(cache.entries()[i].position == static_cast<int>(i));
      CHECK(cache.entries()[i].realized_token == tvr.accepted_path[i]);
    }
  }

  SUBCASE("miss position is recorded with its drafting distributions") {
    auto wrong = identity_source(
        std::make_shared<testutil::ConstModel>(Distribution::point_mass(3, 4)), "w");
    auto tree = build_tree(single_source_drafter(wrong, ctx), 1, 3);
    auto tvr = verify_tree_greedy(*model, ctx, tree);
    REQUIRE(tvr.accepted_count == 0);
    HistoryCache cache(1);
    update_history_from_tree(cache, tree, tvr, 0);
    CHECK(cache.size() == 1);
    CHECK(cache.entries()[0].realized_token == tvr.extra_token);
  }

  SUBCASE("width-1 tree produces the same cache as the linear update") {
    Rng setup(17);
    auto target = std::make_shared<KgramModel>(train_kgram(
        testutil::random_corpus(setup, 5, 3, 40), 1, 0.1, 5));
    auto dm = std::make_shared<KgramModel>(train_kgram(
        testutil::random_corpus(setup, 5, 3, 40), 1, 0.1, 5));
    auto dsrc = identity_source(dm);
    auto prompt = text_prompt({1});

    auto tree = build_tree(single_source_drafter(dsrc, prompt), 1, 3);
    auto tvr = verify_tree_greedy(*target, prompt, tree);
    HistoryCache via_tree(1);
    update_history_from_tree(via_tree, tree, tvr, 0);

    Rng rng(0);
    auto block = draft_block(dsrc, prompt, 3, DecodeMode::kGreedy, rng);
    auto vr = verify_greedy(*target, prompt, block);
    HistoryCache linear(1);
    update_history(linear, block, vr, 0);

    REQUIRE(via_tree.size() == linear.size());
    for (std::size_t i = 0; i < linear.size(); ++i) {
      const auto& a = via_tree.entries()[i];
      const auto& b = linear.entries()[i];
      CHECK(a.position == b.position);
      CHECK(a.realized_token == b.realized_token);
      for (int t = 0; t < 5; ++t) {
        CHECK(a.target_dist[t] == b.target_dist[t]);
        CHECK(a.source_dists[0][t] == b.source_dists[0][t]);
      }
    }
  }
}
