#include <cmath>

#include "doctest.h"
#include "specdec/errors.hpp"
#include "specdec/metrics.hpp"
#include "specdec/rng.hpp"

using namespace specdec;

namespace {

RunRecords records_with(std::initializer_list<int> accepted, int gamma = 5) {
  RunRecords run;
  run.config.gamma = gamma;
  std::size_t start = 0;
  for (int a : accepted) {
    BlockRecord blk;
    blk.start_position = start;
    blk.accepted_count = a;
    blk.tokens_emitted = static_cast<std::size_t>(a) + 1;
    run.blocks.push_back(blk);
    start += blk.tokens_emitted;
  }
  return run;
}

}  // namespace

TEST_CASE("block efficiency is the mean emitted-per-block") {
  CHECK(block_efficiency(records_with({5, 5, 5})) == doctest::Approx(6.0));
  CHECK(block_efficiency(records_with({0, 0})) == doctest::Approx(1.0));
  CHECK(block_efficiency(records_with({2, 4, 0})) == doctest::Approx(3.0));
  CHECK_THROWS_AS(block_efficiency(records_with({})), EmptyRun);
}

TEST_CASE("pooled block efficiency weighs blocks, not runs") {
  std::vector<RunRecords> runs;
  runs.push_back(records_with({5, 5, 5, 5}));
  runs.push_back(records_with({0}));
  // 4 blocks of 6 plus 1 block of 1 over 5 blocks.
  CHECK(block_efficiency(runs) == doctest::Approx(5.0));
  CHECK_THROWS_AS(block_efficiency(std::vector<RunRecords>{}), EmptyRun);
  std::vector<RunRecords> only_empty;
  only_empty.push_back(records_with({}));
  CHECK_THROWS_AS(block_efficiency(only_empty), EmptyRun);
}

TEST_CASE("latency presets carry the published cost ratios") {
  CHECK(LatencyModel::preset("7B", "68M").ratio == doctest::Approx(0.063));
  CHECK(LatencyModel::preset("7B", "160M").ratio == doctest::Approx(0.206));
  CHECK(LatencyModel::preset("13B", "68M").ratio == doctest::Approx(0.042));
  CHECK(LatencyModel::preset("13B", "160M").ratio == doctest::Approx(0.137));
  CHECK_THROWS_AS(LatencyModel::preset("70B", "68M"), BadParams);
  CHECK_THROWS_AS(LatencyModel::from_ratio(0.0), BadParams);
  CHECK_THROWS_AS(LatencyModel::from_ratio(-0.5), BadParams);
}

TEST_CASE("latency assumptions are flags, not inputs to the formula") {
  auto a = LatencyModel::from_ratio(0.1);
  auto b = LatencyModel::from_ratio(0.1);
  b.constant_in_block_length = false;
  b.constant_in_seq_length = false;
  b.constant_in_batch_size = false;
  CHECK(expected_speedup(3.0, 5, a) == doctest::Approx(expected_speedup(3.0, 5, b)));
}

TEST_CASE("expected speedup frozen values") {
  CHECK(expected_speedup(2.29, 5, LatencyModel::from_ratio(0.063)) ==
        doctest::Approx(1.74).epsilon(0.005));
  CHECK(expected_speedup(1.0, 5, LatencyModel::from_ratio(0.2)) ==
        doctest::Approx(0.5));
  // Vanishing draft cost makes the speedup approach the block efficiency.
  CHECK(expected_speedup(4.0, 5, LatencyModel::from_ratio(1e-12)) ==
        doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("expected speedup validates its domain") {
  auto lat = LatencyModel::from_ratio(0.1);
  CHECK_THROWS_AS(expected_speedup(0.99, 5, lat), DomainError);
  CHECK_THROWS_AS(expected_speedup(6.01, 5, lat), DomainError);
  CHECK_NOTHROW(expected_speedup(6.0, 5, lat));
  CHECK_NOTHROW(expected_speedup(1.0, 5, lat));
  CHECK_THROWS_AS(expected_speedup(1.0, 0, lat), BadParams);
}

TEST_CASE("expected speedup is monotone in its arguments") {
  Rng rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    int gamma = 1 + static_cast<int>(rng.next_u64() % 8);
    double tau = 1.0 + rng.next_unit() * gamma;
    double ratio = 0.01 + rng.next_unit();
    auto lat = LatencyModel::from_ratio(ratio);

    double base = expected_speedup(tau, gamma, lat);
    double more_tau = std::min(tau + 0.1, gamma + 1.0);
    if (more_tau > tau) {
      CHECK(expected_speedup(more_tau, gamma, lat) > base);
    }
    CHECK(expected_speedup(tau, gamma, LatencyModel::from_ratio(ratio + 0.05)) < base);
    // Larger gamma at the same tau and ratio only adds drafting cost.
    CHECK(expected_speedup(tau, gamma + 1, lat) < base);
  }
}
